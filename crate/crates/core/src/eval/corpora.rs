//! Theorem families for benchmark experiments.
//!
//! Each builder filters generated theorems by exact remaining steps, so the
//! normalization constant of the combined scorer is known up front.

use std::ops::RangeInclusive;

use crate::env::{gen_corpus, Corpus, Rule, RuleSet, Term, Theorem};
use crate::predictor::ExactOracle;

/// Proof lengths kept in [`adversarial_corpus`]; its `N_max`.
pub const ADVERSARIAL_STEPS: RangeInclusive<usize> = 3..=6;
/// Longest multiplication proof kept in [`mixed_corpus`]; its `N_max`.
pub const MIXED_MAX_STEPS: usize = 64;
/// Proof lengths kept in [`history_corpus`].
pub const HISTORY_STEPS: RangeInclusive<usize> = 6..=8;

fn filtered(rules: &RuleSet, count: usize, max_size: usize, seed: u64, prefix: &str, keep: impl Fn(&Theorem, usize) -> bool) -> Corpus {
    let oracle = ExactOracle::new(crate::env::Environment::new(rules.clone()));
    let mut out = Vec::with_capacity(count);
    let mut round = 0;
    while out.len() < count {
        for th in gen_corpus(count * 4, max_size, seed.wrapping_add(round)) {
            if out.len() == count {
                break;
            }
            if let Ok(d) = oracle.distance(&th.goal()) {
                if keep(&th, d) {
                    out.push(Theorem { id: format!("{prefix}{:04}", out.len()), ..th });
                }
            }
        }
        round += 1;
    }
    Corpus::new(rules.clone(), out)
}

/// Short random theorems under the Peano rules plus zero padding.
/// A size-growing heuristic keeps padding, so log-probability alone burns
/// the budget on ever larger terms.
pub fn adversarial_corpus(count: usize, seed: u64) -> Corpus {
    let rules = RuleSet::peano().with(Rule::ZeroPad);
    filtered(&rules, count, 9, seed, "a", |_, d| ADVERSARIAL_STEPS.contains(&d))
}

/// Random theorems mixed with every `mul(a, b)` over small numerals whose
/// proof takes at most [`MIXED_MAX_STEPS`] steps. Long multiplications leave
/// little slack in a tight budget, which is where noisy estimates cost most.
pub fn mixed_corpus(random: usize, seed: u64) -> Corpus {
    let rules = RuleSet::peano();
    let oracle = ExactOracle::new(crate::env::Environment::new(rules.clone()));
    let mut theorems: Vec<Theorem> = gen_corpus(random, 9, seed)
        .into_iter()
        .enumerate()
        .map(|(i, th)| Theorem { id: format!("r{i:04}"), ..th })
        .collect();
    for a in 0..=14u64 {
        for b in 0..=14u64 {
            let th = Theorem {
                id: format!("m{a:02}x{b:02}"),
                lhs: Term::mul(Term::numeral(a), Term::numeral(b)),
                rhs: Term::numeral(a * b),
            };
            if oracle.distance(&th.goal()).is_ok_and(|d| d <= MIXED_MAX_STEPS) {
                theorems.push(th);
            }
        }
    }
    Corpus::new(rules, theorems)
}

/// Peano theorems of size at least 5 whose proofs take 6 to 8 steps.
/// With the total length nearly fixed, the number of tactics already applied
/// says a lot about the number left.
pub fn history_corpus(count: usize, seed: u64) -> Corpus {
    filtered(&RuleSet::peano(), count, 11, seed, "h", |th, d| th.lhs.size() >= 5 && HISTORY_STEPS.contains(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_respect_their_filters() {
        let c = adversarial_corpus(20, 1);
        assert_eq!(c.theorems.len(), 20);
        assert!(c.rules.contains(Rule::ZeroPad));
        let oracle = ExactOracle::new(c.env());
        for th in &c.theorems {
            assert!(ADVERSARIAL_STEPS.contains(&oracle.distance(&th.goal()).unwrap()));
        }
        let h = history_corpus(10, 1);
        assert_eq!(h.theorems[3].id, "h0003");

        let m = mixed_corpus(5, 1);
        assert_eq!(m.theorems.iter().filter(|t| t.id.starts_with('r')).count(), 5);
        assert!(m.theorems.iter().any(|t| t.id == "m07x07"));
        assert_eq!(adversarial_corpus(20, 1).theorems, c.theorems);
    }
}
