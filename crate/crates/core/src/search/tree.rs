//! The explored search tree and its line-oriented dump.
//!
//! ```text
//! tree t1 nodes=3 proofs=1
//! node 0 parent=- depth=0 P=0 nhat=- fp=add(s(z),s(z))|s(s(z)) status=expanded
//! node 1 parent=0 depth=1 P=0 nhat=- fp=s(add(z,s(z)))|s(s(z)) status=expanded
//! node 2 parent=1 depth=2 P=0 nhat=- fp=s(s(z))|s(s(z)) status=no_goals
//! shortest 2
//! ```

use std::fmt::{self, Write as _};

use super::engine::{NodeStatus, SearchResult};
use super::trajectory::select_shortest;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode<F: Scalar = f64> {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub trajectory_logp: F,
    pub predicted_steps: Option<F>,
    pub fingerprint: String,
    pub status: NodeStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofTree<F: Scalar = f64> {
    pub theorem_id: String,
    pub nodes: Vec<TreeNode<F>>,
    /// The `no_goals` leaf of the shortest proof.
    pub shortest_leaf: Option<usize>,
}

impl<F: Scalar> ProofTree<F> {
    pub fn no_goals_leaves(&self) -> impl Iterator<Item = &TreeNode<F>> {
        self.nodes.iter().filter(|n| n.status == NodeStatus::NoGoals)
    }
}

pub fn extract_proof_tree<F: Scalar>(result: &SearchResult<F>) -> ProofTree<F> {
    let nodes = result
        .trace
        .nodes
        .iter()
        .enumerate()
        .map(|(id, n)| TreeNode {
            id,
            parent: n.parent,
            depth: n.state.depth,
            trajectory_logp: n.trajectory_logp,
            predicted_steps: n.predicted_steps,
            fingerprint: n.state.fingerprint(),
            status: n.status,
        })
        .collect();
    let shortest_leaf =
        if result.proofs.is_empty() { None } else { select_shortest(&result.proofs).leaf_node };
    ProofTree { theorem_id: result.theorem_id.clone(), nodes, shortest_leaf }
}

impl<F: Scalar> fmt::Display for ProofTree<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "tree {} nodes={} proofs={}",
            self.theorem_id,
            self.nodes.len(),
            self.no_goals_leaves().count()
        )?;
        let mut line = String::new();
        for n in &self.nodes {
            line.clear();
            write!(line, "node {} parent=", n.id)?;
            match n.parent {
                Some(p) => write!(line, "{p}")?,
                None => line.push('-'),
            }
            write!(line, " depth={} P={} nhat=", n.depth, n.trajectory_logp)?;
            match n.predicted_steps {
                Some(v) => write!(line, "{v}")?,
                None => line.push('-'),
            }
            write!(line, " fp={} status={}", n.fingerprint, n.status)?;
            writeln!(f, "{line}")?;
        }
        match self.shortest_leaf {
            Some(id) => writeln!(f, "shortest {id}"),
            None => writeln!(f, "shortest -"),
        }
    }
}
