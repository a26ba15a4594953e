//! The proving environment: terms, rewrite rules, proof states, corpora.

pub mod corpus;
pub mod rules;
pub mod state;
pub mod term;

pub use corpus::{gen_corpus, load_corpus, write_corpus, Corpus, CorpusReport, Theorem};
pub use rules::{Rule, RuleSet};
pub use state::{Environment, FailReason, Goal, ProofState, Tactic, TacticOutcome};
pub use term::{Position, Term};
