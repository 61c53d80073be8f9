use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{in_fragment, Fragment, PathFormula, StateFormula, StateRef};
use crate::model::{Graph, RegularTreeModel};

use super::{McNode, McResult};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnrichedNode {
    /// Dense index into the model graph.
    pub node: usize,
    pub bits: Vec<bool>,
}

/// Reachable part of the product of a model with history bits. Successor
/// lists follow the model's successor entries one to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedModel {
    pub graph: Graph,
    /// The past subformula tracked by each bit.
    pub past: Vec<StateRef>,
    pub nodes: Vec<EnrichedNode>,
    pub succ: Vec<Vec<usize>>,
    pub root: usize,
}

impl EnrichedModel {
    pub fn new(graph: Graph) -> Self {
        let nodes = (0..graph.len()).map(|v| EnrichedNode { node: v, bits: vec![] }).collect();
        let succ = graph.succ.clone();
        let root = graph.root;
        EnrichedModel { graph, past: vec![], nodes, succ, root }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Add a bit for `phi`. `at_root` is its value at the root and `step`
    /// gives it at a child from (parent, parent bit, child). Returns the map
    /// from new to old node indices.
    fn refine(
        &mut self,
        phi: StateRef,
        at_root: bool,
        step: impl Fn(usize, bool, usize) -> bool,
    ) -> Vec<usize> {
        let mut index: HashMap<(usize, bool), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut origin = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut queue = vec![(self.root, at_root)];
        index.insert((self.root, at_root), 0);
        let mut head = 0;
        while head < queue.len() {
            let (old, bit) = queue[head];
            let mut bits = self.nodes[old].bits.clone();
            bits.push(bit);
            nodes.push(EnrichedNode { node: self.nodes[old].node, bits });
            origin.push(old);
            let mut row = Vec::with_capacity(self.succ[old].len());
            for &child in &self.succ[old] {
                let key = (child, step(old, bit, child));
                let id = *index.entry(key).or_insert_with(|| {
                    queue.push(key);
                    queue.len() - 1
                });
                row.push(id);
            }
            succ.push(row);
            head += 1;
        }
        self.past.push(phi);
        self.nodes = nodes;
        self.succ = succ;
        self.root = 0;
        origin
    }

    fn history(&self, i: usize) -> String {
        self.nodes[i].bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Labelling checker for PastCTL±. Past subformulas are resolved by
/// refining the enriched model; every stored labelling is kept aligned with
/// the current refinement.
pub struct PastChecker {
    pub model: EnrichedModel,
    /// Keyed by node identity; the formula is kept alive next to its value.
    memo: HashMap<*const StateFormula, (StateRef, Vec<bool>)>,
}

impl PastChecker {
    pub fn new(graph: Graph) -> Self {
        PastChecker { model: EnrichedModel::new(graph), memo: HashMap::new() }
    }

    /// Labelling of `phi` over the current enriched nodes.
    pub fn label(&mut self, phi: &StateRef) -> Result<Vec<bool>> {
        self.ensure(phi)?;
        Ok(self.get(phi).clone())
    }

    fn get(&self, phi: &StateRef) -> &Vec<bool> {
        &self.memo[&Arc::as_ptr(phi)].1
    }

    fn ensure(&mut self, phi: &StateRef) -> Result<()> {
        if self.memo.contains_key(&Arc::as_ptr(phi)) {
            return Ok(());
        }
        use StateFormula as S;
        let m = &self.model;
        let n = m.len();
        let value: Vec<bool> = match &**phi {
            S::True => vec![true; n],
            S::False => vec![false; n],
            S::Atom(p) => m.nodes.iter().map(|e| m.graph.labels[e.node].contains(p)).collect(),
            S::Not(a) => {
                self.ensure(a)?;
                self.get(a).iter().map(|b| !b).collect()
            }
            S::And(a, b) | S::Or(a, b) => {
                self.ensure(a)?;
                self.ensure(b)?;
                let conj = matches!(&**phi, S::And(..));
                let (x, y) = (self.get(a), self.get(b));
                (0..x.len()).map(|i| if conj { x[i] && y[i] } else { x[i] || y[i] }).collect()
            }
            S::Count(k, a) | S::CoCount(k, a) => {
                self.ensure(a)?;
                let x = self.get(a);
                let k = *k as usize;
                let m = &self.model;
                let counting = matches!(&**phi, S::Count(..));
                (0..m.len())
                    .map(|i| {
                        let sat = m.succ[i].iter().filter(|&&j| x[j]).count();
                        if counting {
                            sat >= k
                        } else {
                            m.succ[i].len() - sat < k
                        }
                    })
                    .collect()
            }
            S::Exists(p) | S::Forall(p) => return self.quantifier(phi, p),
            _ => return Err(Error::WrongFragment(format!("{phi} is not PastCTL±"))),
        };
        self.memo.insert(Arc::as_ptr(phi), (phi.clone(), value));
        Ok(())
    }

    fn quantifier(&mut self, phi: &StateRef, p: &PathFormula) -> Result<()> {
        use PathFormula as P;
        let universal = matches!(&**phi, StateFormula::Forall(_));
        let state = |x: &PathFormula| match x {
            P::State(s) => Ok(s.clone()),
            _ => Err(Error::WrongFragment(format!("{phi} is not PastCTL±"))),
        };
        let value = match (universal, p) {
            (_, P::Next(a)) => {
                let a = state(a)?;
                self.ensure(&a)?;
                let x = self.get(&a);
                let m = &self.model;
                (0..m.len())
                    .map(|i| if universal { m.succ[i].iter().all(|&j| x[j]) } else { m.succ[i].iter().any(|&j| x[j]) })
                    .collect()
            }
            (false, P::Until(a, b)) => {
                let (a, b) = (state(a)?, state(b)?);
                self.ensure(&a)?;
                self.ensure(&b)?;
                exists_until(&self.model.succ, self.get(&a), self.get(&b))
            }
            (true, P::Release(a, b)) => {
                let (a, b) = (state(a)?, state(b)?);
                self.ensure(&a)?;
                self.ensure(&b)?;
                let na: Vec<bool> = self.get(&a).iter().map(|v| !v).collect();
                let nb: Vec<bool> = self.get(&b).iter().map(|v| !v).collect();
                exists_until(&self.model.succ, &na, &nb).into_iter().map(|v| !v).collect()
            }
            (false, P::Yesterday(a)) | (true, P::WeakYesterday(a)) => {
                let a = state(a)?;
                self.ensure(&a)?;
                let x = self.get(&a).clone();
                let origin = self.model.refine(phi.clone(), universal, |parent, _, _| x[parent]);
                self.reindex(&origin);
                self.model.nodes.iter().map(|e| *e.bits.last().unwrap()).collect()
            }
            (false, P::Since(a, b)) => {
                let (a, b) = (state(a)?, state(b)?);
                self.ensure(&a)?;
                self.ensure(&b)?;
                let (x, y) = (self.get(&a).clone(), self.get(&b).clone());
                let root = self.model.root;
                let origin = self.model.refine(phi.clone(), y[root], |_, bit, child| y[child] || (x[child] && bit));
                self.reindex(&origin);
                self.model.nodes.iter().map(|e| *e.bits.last().unwrap()).collect()
            }
            _ => return Err(Error::WrongFragment(format!("{phi} is not PastCTL±"))),
        };
        self.memo.insert(Arc::as_ptr(phi), (phi.clone(), value));
        Ok(())
    }

    fn reindex(&mut self, origin: &[usize]) {
        for (_, v) in self.memo.values_mut() {
            *v = origin.iter().map(|&o| v[o]).collect();
        }
    }
}

/// Least fixpoint of `b ∨ (a ∧ EX Z)` by backward propagation.
pub(crate) fn exists_until(succ: &[Vec<usize>], a: &[bool], b: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut out = b.to_vec();
    let mut queue: Vec<usize> = (0..n).filter(|&v| b[v]).collect();
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if !out[v] && a[v] {
                out[v] = true;
                queue.push(v);
            }
        }
    }
    out
}

/// Check a PastCTL± formula. Verdicts are reported per enriched node; the
/// root verdict is that of the root's unique history.
pub fn mc_pctlpm(m: &RegularTreeModel, phi: &StateRef) -> Result<McResult> {
    if !in_fragment(phi, Fragment::PastCTLpm) {
        return Err(Error::WrongFragment(format!("{phi} is not PastCTL±")));
    }
    let mut c = PastChecker::new(m.graph()?);
    let value = c.label(phi)?;
    let e = &c.model;
    let nodes = (0..e.len())
        .map(|i| McNode { node: e.graph.ids[e.nodes[i].node], history: e.history(i), holds: value[i] })
        .collect();
    Ok(McResult { root: value[e.root], nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_state;

    fn check(m: &RegularTreeModel, s: &str) -> McResult {
        mc_pctlpm(m, &parse_state(s).unwrap()).unwrap()
    }

    #[test]
    fn eventually_on_self_loop() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        assert!(check(&m, "E (true U p)").root);
    }

    #[test]
    fn counting() {
        let m = RegularTreeModel::from_parts(0, vec![vec![], vec!["p"], vec![]], vec![vec![1, 1, 2], vec![1], vec![2]]);
        assert!(check(&m, "D2 p").root);
        assert!(!check(&m, "D3 p").root);
        assert!(check(&m, "C2 p").root);
        assert!(!check(&m, "C1 p").root);
    }

    #[test]
    fn yesterday_fails_at_root() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        let r = check(&m, "E Y p");
        assert!(!r.root);
        // The self-loop splits into the root history and the rest.
        assert_eq!(r.nodes.len(), 2);
        assert!(r.nodes.iter().any(|n| n.holds));
        assert!(check(&m, "A wY false").root);
        assert_eq!(r.at_node(0), None);
    }

    #[test]
    fn since_tracks_history() {
        // r → a → b (loop), q only at the root.
        let m = RegularTreeModel::from_parts(0, vec![vec!["q"], vec!["p"], vec![]], vec![vec![1], vec![2], vec![2]]);
        let r = check(&m, "E X E X E (p S q)");
        assert!(!r.root);
        let r = check(&m, "E X E (p S q)");
        assert!(r.root);
        let r = check(&m, "A (false R (A X E (true S q)))");
        assert!(r.root);
    }

    #[test]
    fn release_and_negation_are_dual() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"], vec!["q"]], vec![vec![0, 1], vec![0]]);
        let a = check(&m, "A (q R p)");
        let b = check(&m, "!E (!q U !p)");
        assert_eq!(a, b);
        assert!(!a.root);
    }

    #[test]
    fn json_shape() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        let v = check(&m, "p").to_json();
        assert_eq!(v["root"], true);
        assert_eq!(v["nodes"][0]["history"], "");
    }

    #[test]
    fn wrong_fragment() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"]], vec![vec![0]]);
        assert!(mc_pctlpm(&m, &parse_state("E G p").unwrap()).is_err());
    }
}
