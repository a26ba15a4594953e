//! A second, deliberately naive implementation of the rewriting system, used
//! to cross-check the library. It shares no code with the crate.

#![allow(dead_code)]

pub mod mock;

use std::collections::{HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum T {
    Z,
    S(Box<T>),
    Add(Box<T>, Box<T>),
    Mul(Box<T>, Box<T>),
}

pub fn parse(s: &str) -> T {
    fn go(b: &[u8], i: &mut usize) -> T {
        let word: String = b[*i..].iter().take_while(|c| c.is_ascii_alphabetic()).map(|&c| c as char).collect();
        *i += word.len();
        if word == "z" {
            return T::Z;
        }
        assert_eq!(b[*i], b'(');
        *i += 1;
        let a = go(b, i);
        let t = if word == "s" {
            T::S(Box::new(a))
        } else {
            assert_eq!(b[*i], b',');
            *i += 1;
            let c = go(b, i);
            match word.as_str() {
                "add" => T::Add(Box::new(a), Box::new(c)),
                "mul" => T::Mul(Box::new(a), Box::new(c)),
                w => panic!("bad head {w}"),
            }
        };
        assert_eq!(b[*i], b')');
        *i += 1;
        t
    }
    let mut i = 0;
    let t = go(s.as_bytes(), &mut i);
    assert_eq!(i, s.len());
    t
}

pub fn show(t: &T) -> String {
    match t {
        T::Z => "z".into(),
        T::S(a) => format!("s({})", show(a)),
        T::Add(a, b) => format!("add({},{})", show(a), show(b)),
        T::Mul(a, b) => format!("mul({},{})", show(a), show(b)),
    }
}

pub fn size(t: &T) -> usize {
    match t {
        T::Z => 1,
        T::S(a) => 1 + size(a),
        T::Add(a, b) | T::Mul(a, b) => 1 + size(a) + size(b),
    }
}

pub fn value(t: &T) -> u64 {
    match t {
        T::Z => 0,
        T::S(a) => 1 + value(a),
        T::Add(a, b) => value(a) + value(b),
        T::Mul(a, b) => value(a) * value(b),
    }
}

pub fn numeral(n: u64) -> T {
    (0..n).fold(T::Z, |t, _| T::S(Box::new(t)))
}

/// Rule ids 1..=7 as documented in the README.
fn rewrite_here(rule: u8, t: &T, root: bool) -> Option<T> {
    let b = |t: &T| Box::new(t.clone());
    match (rule, t) {
        (1, T::Add(x, y)) if **x == T::Z => Some((**y).clone()),
        (2, T::Add(x, y)) => match &**x {
            T::S(p) => Some(T::S(Box::new(T::Add(p.clone(), y.clone())))),
            _ => None,
        },
        (3, T::Mul(x, _)) if **x == T::Z => Some(T::Z),
        (4, T::Mul(x, y)) => match &**x {
            T::S(p) => Some(T::Add(y.clone(), Box::new(T::Mul(p.clone(), y.clone())))),
            _ => None,
        },
        (5, T::Add(x, y)) if x != y => Some(T::Add(b(y), b(x))),
        (6, T::Mul(x, y)) if x != y => Some(T::Mul(b(y), b(x))),
        (7, t) if root => Some(T::Add(Box::new(T::Z), b(t))),
        _ => None,
    }
}

/// Every term one rewrite away from `t`.
pub fn step(t: &T, rules: &[u8]) -> Vec<T> {
    fn go(t: &T, rules: &[u8], root: bool, out: &mut Vec<T>) {
        for &r in rules {
            if let Some(n) = rewrite_here(r, t, root) {
                out.push(n);
            }
        }
        match t {
            T::Z => {}
            T::S(a) => {
                let mut inner = Vec::new();
                go(a, rules, false, &mut inner);
                out.extend(inner.into_iter().map(|n| T::S(Box::new(n))));
            }
            T::Add(a, c) | T::Mul(a, c) => {
                let wrap = |l: T, r: T| match t {
                    T::Add(..) => T::Add(Box::new(l), Box::new(r)),
                    _ => T::Mul(Box::new(l), Box::new(r)),
                };
                let mut left = Vec::new();
                go(a, rules, false, &mut left);
                out.extend(left.into_iter().map(|n| wrap(n, (**c).clone())));
                let mut right = Vec::new();
                go(c, rules, false, &mut right);
                out.extend(right.into_iter().map(|n| wrap((**a).clone(), n)));
            }
        }
    }
    let mut out = Vec::new();
    go(t, rules, true, &mut out);
    out
}

/// Fewest rewrites from `from` to `target`, by plain breadth-first search.
pub fn bfs_distance(from: &T, target: &T, rules: &[u8]) -> Option<usize> {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([(from.clone(), 0)]);
    while let Some((t, d)) = queue.pop_front() {
        if &t == target {
            return Some(d);
        }
        for n in step(&t, rules) {
            if seen.insert(n.clone()) {
                queue.push_back((n, d + 1));
            }
        }
    }
    None
}

/// All terms reachable from `from`, capped at `limit` terms.
pub fn reachable(from: &T, rules: &[u8], limit: usize) -> Vec<T> {
    let mut seen = HashSet::from([from.clone()]);
    let mut order = vec![from.clone()];
    let mut i = 0;
    while i < order.len() && order.len() < limit {
        for n in step(&order[i], rules) {
            if order.len() < limit && seen.insert(n.clone()) {
                order.push(n);
            }
        }
        i += 1;
    }
    order
}

/// Every term with exactly `n` nodes.
pub fn terms_of_size(n: usize) -> Vec<T> {
    match n {
        0 => vec![],
        1 => vec![T::Z],
        _ => {
            let mut out: Vec<T> = terms_of_size(n - 1).into_iter().map(|t| T::S(Box::new(t))).collect();
            for left in 1..n - 1 {
                for a in terms_of_size(left) {
                    for b in terms_of_size(n - 1 - left) {
                        out.push(T::Add(Box::new(a.clone()), Box::new(b.clone())));
                        out.push(T::Mul(Box::new(a.clone()), Box::new(b)));
                    }
                }
            }
            out
        }
    }
}
