//! Model checkers over regular tree models and an independent oracle.
//!
//! [`mc_pctlpm`] labels a history-enriched product of the model, one bit per
//! past subformula. [`mc_ctlspm`] and [`mc_ctlsf`] are history-free and
//! decide path quantifiers by reachability in a product with a DFA (or the
//! guard automaton). [`oracle_eval`] recomputes root verdicts by bounded
//! approximation and must agree whenever its fuel covers the bound.

mod future;
mod oracle;
mod pctl;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use future::{mc_ctlsf, mc_ctlspm, FutureChecker};
pub use oracle::{oracle_bound, oracle_eval};
pub use pctl::{mc_pctlpm, EnrichedModel, EnrichedNode, PastChecker};

/// Verdict of one enriched node: model node id, history bits (one character
/// per past subformula, in subformula order) and the truth value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McNode {
    pub node: usize,
    pub history: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McResult {
    pub root: bool,
    pub nodes: Vec<McNode>,
}

impl McResult {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// Verdict per model node id; `None` when histories disagree.
    pub fn at_node(&self, id: usize) -> Option<bool> {
        let mut it = self.nodes.iter().filter(|n| n.node == id).map(|n| n.holds);
        let first = it.next()?;
        it.all(|h| h == first).then_some(first)
    }
}
