//! Finite pointed graphs standing for their (infinite, leafless) unfoldings.
//!
//! Duplicate entries in a successor list denote distinct children with
//! identical subtrees; counting modalities count list entries.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Valuation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelNode {
    pub id: usize,
    pub label: BTreeSet<String>,
    pub succ: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularTreeModel {
    pub root: usize,
    pub nodes: Vec<ModelNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Leafless(usize),
    Dangling { from: usize, to: usize },
    DuplicateId(usize),
    MissingRoot(usize),
    Unreachable(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Leafless(n) => write!(f, "node {n} has no successor"),
            Violation::Dangling { from, to } => write!(f, "edge {from} -> {to} names no node"),
            Violation::DuplicateId(n) => write!(f, "node id {n} declared twice"),
            Violation::MissingRoot(n) => write!(f, "root {n} is not a node"),
            Violation::Unreachable(n) => write!(f, "node {n} is unreachable from the root"),
        }
    }
}

/// Check the model invariants; the error lists every violation.
pub fn validate_model(m: &RegularTreeModel) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut index = HashMap::new();
    for (i, n) in m.nodes.iter().enumerate() {
        if index.insert(n.id, i).is_some() {
            out.push(Violation::DuplicateId(n.id));
        }
    }
    for n in &m.nodes {
        if n.succ.is_empty() {
            out.push(Violation::Leafless(n.id));
        }
        for &t in &n.succ {
            if !index.contains_key(&t) {
                out.push(Violation::Dangling { from: n.id, to: t });
            }
        }
    }
    match index.get(&m.root) {
        None => out.push(Violation::MissingRoot(m.root)),
        Some(&r) => {
            let mut seen = vec![false; m.nodes.len()];
            let mut queue = VecDeque::from([r]);
            seen[r] = true;
            while let Some(i) = queue.pop_front() {
                for t in &m.nodes[i].succ {
                    if let Some(&j) = index.get(t) {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            for (i, n) in m.nodes.iter().enumerate() {
                if !seen[i] {
                    out.push(Violation::Unreachable(n.id));
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Dense, validated view of a model: nodes are `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub labels: Vec<Valuation>,
    pub succ: Vec<Vec<usize>>,
    pub root: usize,
    pub ids: Vec<usize>,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl RegularTreeModel {
    pub fn graph(&self) -> Result<Graph> {
        validate_model(self).map_err(|v| {
            Error::InvalidModel(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
        })?;
        let index: HashMap<usize, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        Ok(Graph {
            labels: self.nodes.iter().map(|n| n.label.clone()).collect(),
            succ: self.nodes.iter().map(|n| n.succ.iter().map(|t| index[t]).collect()).collect(),
            root: index[&self.root],
            ids: self.nodes.iter().map(|n| n.id).collect(),
        })
    }

    /// Build a model from dense data; node `i` gets id `i`.
    pub fn from_parts(root: usize, labels: Vec<Vec<&str>>, succ: Vec<Vec<usize>>) -> Self {
        let nodes = labels
            .into_iter()
            .zip(succ)
            .enumerate()
            .map(|(id, (l, s))| ModelNode {
                id,
                label: l.into_iter().map(str::to_string).collect(),
                succ: s,
            })
            .collect();
        RegularTreeModel { root, nodes }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("model serialises")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Ok(serde_json::from_value(v.clone())?)
    }

    /// Remove node `id` and redirect edges into it to their source, keeping
    /// the model leafless. Used by counterexample shrinking.
    pub fn without_node(&self, id: usize) -> Option<Self> {
        if id == self.root {
            return None;
        }
        let nodes: Vec<ModelNode> = self
            .nodes
            .iter()
            .filter(|n| n.id != id)
            .map(|n| {
                let succ: Vec<usize> =
                    n.succ.iter().map(|&t| if t == id { n.id } else { t }).collect();
                ModelNode { id: n.id, label: n.label.clone(), succ }
            })
            .collect();
        let m = RegularTreeModel { root: self.root, nodes };
        validate_model(&m).ok().map(|_| m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub label: Valuation,
    pub children: Vec<usize>,
    pub origin: usize,
    pub depth: usize,
}

/// Finite prefix of an unfolding. Node 0 is the root; nodes at `depth`
/// have no children listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTree {
    pub nodes: Vec<TreeNode>,
    pub depth: usize,
}

impl ExplicitTree {
    /// Canonical nested form, used to compare prefixes.
    pub fn shape(&self, node: usize, max_depth: usize) -> String {
        let n = &self.nodes[node];
        let labels: Vec<&str> = n.label.iter().map(String::as_str).collect();
        let mut s = format!("{}{{{}}}", n.origin, labels.join(","));
        if n.depth < max_depth && !n.children.is_empty() {
            let kids: Vec<String> = n.children.iter().map(|&c| self.shape(c, max_depth)).collect();
            s.push_str(&format!("[{}]", kids.join(" ")));
        }
        s
    }
}

/// Breadth-first prefix of the unfolding of `m` up to `depth`.
pub fn unfold(m: &RegularTreeModel, depth: usize) -> Result<ExplicitTree> {
    let g = m.graph()?;
    let mut nodes = vec![TreeNode {
        label: g.labels[g.root].clone(),
        children: Vec::new(),
        origin: g.ids[g.root],
        depth: 0,
    }];
    let mut origin_index = vec![g.root];
    let mut frontier = VecDeque::from([0usize]);
    while let Some(i) = frontier.pop_front() {
        if nodes[i].depth == depth {
            continue;
        }
        let o = origin_index[i];
        for &c in &g.succ[o] {
            let id = nodes.len();
            nodes.push(TreeNode {
                label: g.labels[c].clone(),
                children: Vec::new(),
                origin: g.ids[c],
                depth: nodes[i].depth + 1,
            });
            origin_index.push(c);
            nodes[i].children.push(id);
            frontier.push_back(id);
        }
    }
    Ok(ExplicitTree { nodes, depth })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelConfig {
    pub max_nodes: usize,
    pub max_branch: usize,
    pub ap: Vec<String>,
}

/// Seeded random model; every node is reachable from the root and has
/// between 1 and `max_branch` successor entries.
pub fn random_model(seed: u64, cfg: &ModelConfig) -> RegularTreeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model_with(&mut rng, cfg)
}

pub fn random_model_with(rng: &mut impl rand::Rng, cfg: &ModelConfig) -> RegularTreeModel {
    let max_nodes = cfg.max_nodes.max(1);
    let max_branch = cfg.max_branch.max(1);
    let n = rng.random_range(1..=max_nodes);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&j| succ[j].len() < max_branch).collect();
        let p = open[rng.random_range(0..open.len())];
        succ[p].push(i);
    }
    for s in succ.iter_mut() {
        let lo = s.len().max(1);
        let want = rng.random_range(lo..=max_branch.max(lo));
        while s.len() < want {
            s.push(rng.random_range(0..n));
        }
    }
    let labels = (0..n)
        .map(|_| cfg.ap.iter().filter(|_| rng.random_bool(0.5)).cloned().collect())
        .collect::<Vec<BTreeSet<String>>>();
    RegularTreeModel {
        root: 0,
        nodes: (0..n)
            .map(|id| ModelNode { id, label: labels[id].clone(), succ: succ[id].clone() })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, b: usize) -> ModelConfig {
        ModelConfig { max_nodes: n, max_branch: b, ap: vec!["p".into(), "q".into()] }
    }

    #[test]
    fn validation() {
        let ok = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        assert_eq!(validate_model(&ok), Ok(()));
        let leafless = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![]]);
        assert_eq!(validate_model(&leafless), Err(vec![Violation::Leafless(0)]));
        let dangling = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![3]]);
        assert_eq!(validate_model(&dangling), Err(vec![Violation::Dangling { from: 0, to: 3 }]));
        let unreachable = RegularTreeModel::from_parts(0, vec![vec![], vec![]], vec![vec![0], vec![1]]);
        assert_eq!(validate_model(&unreachable), Err(vec![Violation::Unreachable(1)]));
    }

    #[test]
    fn unfold_examples() {
        let loop1 = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        let t = unfold(&loop1, 2).unwrap();
        assert_eq!(t.nodes.len(), 3);
        assert!(t.nodes.iter().all(|n| n.label.contains("p")));

        let alt = RegularTreeModel::from_parts(0, vec![vec!["p"], vec![]], vec![vec![1], vec![0]]);
        let t = unfold(&alt, 3).unwrap();
        let labels: Vec<bool> = t.nodes.iter().map(|n| n.label.contains("p")).collect();
        assert_eq!(labels, vec![true, false, true, false]);

        let fork = RegularTreeModel::from_parts(
            0,
            vec![vec![], vec!["p"], vec!["q"]],
            vec![vec![1, 2], vec![1], vec![2]],
        );
        let t = unfold(&fork, 1).unwrap();
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.nodes[0].children, vec![1, 2]);
    }

    #[test]
    fn random_models_are_valid_and_reproducible() {
        for seed in 0..200 {
            let m = random_model(seed, &cfg(6, 3));
            assert_eq!(validate_model(&m), Ok(()));
            assert_eq!(m, random_model(seed, &cfg(6, 3)));
            assert!(m.nodes.iter().all(|n| n.succ.len() <= 3));
        }
        let single = random_model(5, &cfg(1, 2));
        assert_eq!(single.nodes.len(), 1);
        assert!(single.nodes[0].succ.iter().all(|&t| t == 0));
    }

    #[test]
    fn json_round_trip() {
        let m = random_model(3, &cfg(4, 2));
        assert_eq!(RegularTreeModel::from_json(&m.to_json()).unwrap(), m);
    }
}
