mod common;

use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;

use progress_prover::env::{gen_corpus, Environment, Goal, ProofState, RuleSet, Tactic, TacticOutcome, Term, Theorem};
use progress_prover::predictor::ExactOracle;
use progress_prover::search::{
    best_first_search, extract_proof_tree, select_shortest, ScorerConfig, SearchConfig, SearchLimits, SearchMode,
};
use progress_prover::tacticgen::{generate, GenConfig, Heuristic};

fn theorem(lhs: &str, rhs: &str) -> Theorem {
    Theorem { id: "t".into(), lhs: lhs.parse().unwrap(), rhs: rhs.parse().unwrap() }
}

fn cfg(k: usize, heuristic: Heuristic, budget: usize) -> SearchConfig<f64> {
    SearchConfig {
        gen: GenConfig::new(k, 0.7, heuristic),
        limits: SearchLimits::expansions(budget),
        ..SearchConfig::default()
    }
}

#[test]
fn two_step_example() {
    let mut c = cfg(4, Heuristic::Uniform, 100);
    c.gen.temperature = 1.0;
    let r = best_first_search(&Environment::default(), &theorem("add(s(z),s(z))", "s(s(z))"), &c, None).unwrap();
    assert!(r.proved);
    let tactics: Vec<String> = r.proofs[0].tactics().iter().map(Tactic::to_string).collect();
    assert_eq!(tactics, vec!["R2@[]", "R1@[0]"]);
}

#[test]
fn zero_budget_expands_nothing() {
    let r = best_first_search(&Environment::default(), &theorem("add(s(z),s(z))", "s(s(z))"), &cfg(4, Heuristic::Uniform, 0), None)
        .unwrap();
    assert!(!r.proved);
    assert_eq!(r.expansions, 0);
    assert_eq!(extract_proof_tree(&r).no_goals_leaves().count(), 0);
}

#[test]
fn combined_needs_a_predictor() {
    let c = SearchConfig { scorer: ScorerConfig::combined(0.2, 10.0), ..cfg(4, Heuristic::Uniform, 10) };
    assert!(best_first_search(&Environment::default(), &theorem("add(z,z)", "z"), &c, None).is_err());
}

#[test]
fn alpha_zero_replays_logp_search() {
    let env = Environment::new("R1,R2,R3,R4,R5".parse().unwrap());
    let oracle = ExactOracle::new(env.clone());
    for th in gen_corpus(40, 9, 3) {
        let logp = cfg(32, Heuristic::Adversarial, 60);
        let combined = SearchConfig { scorer: ScorerConfig::combined(0.0, 12.0), ..logp.clone() };
        let a = best_first_search(&env, &th, &logp, None).unwrap();
        let b = best_first_search(&env, &th, &combined, Some(&oracle)).unwrap();
        assert_eq!(a.expanded_fingerprints(), b.expanded_fingerprints(), "{}", th.lhs);
        assert_eq!(a.proofs.len(), b.proofs.len());
        for (p, q) in a.proofs.iter().zip(&b.proofs) {
            assert_eq!(p.tactics(), q.tactics());
        }
    }
}

#[test]
fn tree_of_a_branch_free_proof() {
    let r = best_first_search(&Environment::default(), &theorem("add(s(z),s(z))", "s(s(z))"), &cfg(4, Heuristic::Uniform, 10), None)
        .unwrap();
    let tree = extract_proof_tree(&r);
    assert_eq!(tree.nodes.len(), 3);
    assert_eq!(tree.no_goals_leaves().count(), 1);
    let dump = tree.to_string();
    assert!(dump.contains("node 2 parent=1 depth=2 P=0 nhat=- fp=s(s(z))|s(s(z)) status=no_goals"), "{dump}");
}

/// Multiplicative commutativity opens a 2-step proof next to the 3-step ones.
#[test]
fn tree_marks_the_shallower_of_two_proofs() {
    let env = Environment::new("R1,R2,R3,R4,R6".parse().unwrap());
    let c = SearchConfig { mode: SearchMode::Exhaustive, ..cfg(32, Heuristic::Uniform, 50) };
    let r = best_first_search(&env, &theorem("mul(s(z),z)", "z"), &c, None).unwrap();
    let tree = extract_proof_tree(&r);
    let depths: HashSet<usize> = tree.no_goals_leaves().map(|n| n.depth).collect();
    assert!(depths.contains(&2) && depths.contains(&3), "{depths:?}");
    let shortest = tree.shortest_leaf.unwrap();
    assert_eq!(tree.nodes[shortest].depth, 2);
    assert_eq!(select_shortest(&r.proofs).len(), 2);
}

#[test]
fn perfect_oracle_walks_branch_free_proofs_directly() {
    let env = Environment::default();
    let oracle = ExactOracle::new(env.clone());
    for (a, b) in [(1, 1), (3, 2), (6, 0), (9, 4)] {
        let th = Theorem {
            id: format!("{a}+{b}"),
            lhs: Term::add(Term::numeral(a), Term::numeral(b)),
            rhs: Term::numeral(a + b),
        };
        let n = a as usize + 1;
        let c = SearchConfig { scorer: ScorerConfig::combined(1.0, 20.0), ..cfg(32, Heuristic::Uniform, n) };
        let r = best_first_search(&env, &th, &c, Some(&oracle)).unwrap();
        assert!(r.proved);
        assert_eq!(r.expansions, n);
    }
}

#[test]
fn shortest_proof_matches_reference_search() {
    let env = Environment::new("R1,R2,R3,R4,R5".parse().unwrap());
    let ids = [1, 2, 3, 4, 5];
    let c = SearchConfig { mode: SearchMode::Exhaustive, ..cfg(32, Heuristic::Uniform, 3000) };
    for th in gen_corpus(60, 7, 9).into_iter().filter(|t| t.lhs.size() <= 7) {
        let r = best_first_search(&env, &th, &c, None).unwrap();
        let expected = common::bfs_distance(&common::parse(&th.lhs.to_string()), &common::parse(&th.rhs.to_string()), &ids)
            .unwrap();
        assert!(r.frontier_exhausted, "{}", th.lhs);
        assert_eq!(select_shortest(&r.proofs).len(), expected, "{}", th.lhs);
    }
}

fn rules() -> impl Strategy<Value = RuleSet> {
    prop::sample::select(vec!["R1,R2,R3,R4", "R1,R2,R3,R4,R5", "R1,R2,R3,R4,R6", "R1,R2,R3,R4,R5,R6,R7"])
        .prop_map(|s| s.parse().unwrap())
}

fn heuristic() -> impl Strategy<Value = Heuristic> {
    prop::sample::select(vec![Heuristic::Uniform, Heuristic::SizeGreedy, Heuristic::Adversarial])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_invariants(seed in any::<u64>(), rules in rules(), h in heuristic(), k in 1usize..8, exhaustive in any::<bool>()) {
        let env = Environment::new(rules);
        let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::FirstProof };
        let c = SearchConfig { mode, ..cfg(k, h, 40) };
        for th in gen_corpus(3, 9, seed) {
            let r = best_first_search(&env, &th, &c, None).unwrap();
            prop_assert_eq!(r.proved, !r.proofs.is_empty());
            prop_assert!(r.expansions <= 40);
            let fps = r.expanded_fingerprints();
            prop_assert_eq!(fps.iter().collect::<HashSet<_>>().len(), fps.len());
            for p in &r.proofs {
                prop_assert!(p.verify(&env).is_ok());
            }
            for n in &r.trace.nodes {
                if let Some(parent) = n.parent {
                    let up = &r.trace.nodes[parent];
                    prop_assert_eq!(n.state.depth, up.state.depth + 1);
                    prop_assert!(n.trajectory_logp <= up.trajectory_logp);
                }
            }
        }
    }

    #[test]
    fn disjoint_rewrites_commute(seed in any::<u64>()) {
        let env = Environment::new("R1,R2,R3,R4,R5,R6".parse().unwrap());
        for th in gen_corpus(4, 11, seed) {
            let goal = th.goal();
            let tactics = env.enumerate_applicable(&goal);
            for a in &tactics {
                for b in tactics.iter().filter(|b| a.position.is_disjoint(&b.position)) {
                    let ab = env.rewrite(&Goal::new(env.rewrite(&goal, a).unwrap(), th.rhs.clone()), b).unwrap();
                    let ba = env.rewrite(&Goal::new(env.rewrite(&goal, b).unwrap(), th.rhs.clone()), a).unwrap();
                    prop_assert_eq!(ab, ba);
                }
            }
        }
    }

    #[test]
    fn replay_reaches_proved(seed in any::<u64>()) {
        let env = Environment::default();
        let c = cfg(32, Heuristic::SizeGreedy, 200);
        for th in gen_corpus(3, 9, seed) {
            let r = best_first_search(&env, &th, &c, None).unwrap();
            for p in &r.proofs {
                let mut state = Arc::new(ProofState::<f64>::root(th.goal()));
                for (i, t) in p.tactics().iter().enumerate() {
                    match env.apply_tactic(&state, t) {
                        TacticOutcome::NewState(next) => state = Arc::new(next),
                        TacticOutcome::Proved => prop_assert_eq!(i + 1, p.len()),
                        TacticOutcome::Failed(why) => prop_assert!(false, "step {} failed: {:?}", i, why),
                    }
                }
            }
        }
    }

    #[test]
    fn cooler_temperature_widens_gaps(seed in any::<u64>(), tau in 0.05f64..5.0) {
        let env = Environment::default();
        for th in gen_corpus(3, 11, seed) {
            let goal = th.goal();
            let warm = generate(&env, &goal, &GenConfig::new(64, tau, Heuristic::SizeGreedy));
            let cool = generate(&env, &goal, &GenConfig::new(64, tau / 2.0, Heuristic::SizeGreedy));
            let logp = |cands: &[progress_prover::tacticgen::ScoredTactic<f64>], t: &Tactic| {
                cands.iter().find(|c| &c.tactic == t).unwrap().logp
            };
            for a in &warm {
                for b in &warm {
                    if a.logp > b.logp + 1e-12 {
                        let gap_warm = a.logp - b.logp;
                        let gap_cool = logp(&cool, &a.tactic) - logp(&cool, &b.tactic);
                        prop_assert!(gap_cool > gap_warm);
                    }
                }
            }
        }
    }

    #[test]
    fn hot_limit_is_uniform(seed in any::<u64>()) {
        let env = Environment::default();
        for th in gen_corpus(3, 11, seed) {
            let cands = generate(&env, &th.goal(), &GenConfig::new(64, 1e6, Heuristic::Adversarial));
            let hi = cands.iter().map(|c| c.logp).fold(f64::MIN, f64::max);
            let lo = cands.iter().map(|c| c.logp).fold(f64::MAX, f64::min);
            prop_assert!(hi - lo < 1e-4);
        }
    }
}
