//! Best-first proof search with pluggable frontier scoring.

pub mod engine;
mod mine;
pub mod scorer;
pub mod trajectory;
pub mod tree;

pub use engine::{
    best_first_search, NodeStatus, SearchConfig, SearchLimits, SearchMode, SearchNode, SearchResult,
    SearchTrace,
};
pub use mine::{mine, MineOutput};
pub use scorer::{normalized_steps, score, ScoreMode, ScorerConfig};
pub use trajectory::{
    read_trajectories, select_shortest, write_trajectories, ProofStep, ProofTrajectory, TrajectoryRecord,
};
pub use tree::{extract_proof_tree, ProofTree, TreeNode};
