use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{Graph, RegularTreeModel};

use super::automaton::{ComponentKind, TreeAutomaton};
use super::formula::{AtomKind, TreeAtom};
use super::hesitant::structural_report;

/// Model nodes enriched with a root flag and one history bit per state
/// named by an `(⇑, q)` atom (the value of q at the parent).
struct Enriched {
    model: Vec<usize>,
    root: Vec<bool>,
    succ: Vec<Vec<usize>>,
    vals: Vec<Option<Vec<bool>>>,
    up: HashMap<usize, Vec<bool>>,
}

impl Enriched {
    fn new(g: &Graph, states: usize) -> Self {
        let mut ids = HashMap::new();
        let mut model = vec![g.root];
        let mut root = vec![true];
        ids.insert((g.root, true), 0);
        let mut succ: Vec<Vec<usize>> = vec![];
        let mut i = 0;
        while i < model.len() {
            let mut out = Vec::with_capacity(g.succ[model[i]].len());
            for &v in &g.succ[model[i]] {
                let id = *ids.entry((v, false)).or_insert_with(|| {
                    model.push(v);
                    root.push(false);
                    model.len() - 1
                });
                out.push(id);
            }
            succ.push(out);
            i += 1;
        }
        Enriched { model, root, succ, vals: vec![None; states], up: HashMap::new() }
    }

    fn len(&self) -> usize {
        self.model.len()
    }

    /// Split every node by a vector of new bits. `next(o, b)` gives the bits
    /// of the successors of old node `o` carrying bits `b`; the root carries
    /// zero. Returns the bits of each new node.
    fn refine(&mut self, next: &mut dyn FnMut(&Self, usize, u64) -> u64) -> Vec<u64> {
        let mut ids: HashMap<(usize, u64), usize> = HashMap::new();
        let mut origin = vec![0usize];
        let mut bits = vec![0u64];
        ids.insert((0, 0), 0);
        let mut succ = vec![];
        let mut i = 0;
        while i < origin.len() {
            let (o, b) = (origin[i], bits[i]);
            let nb = next(self, o, b);
            let mut out = Vec::with_capacity(self.succ[o].len());
            for &t in &self.succ[o] {
                let id = *ids.entry((t, nb)).or_insert_with(|| {
                    origin.push(t);
                    bits.push(nb);
                    origin.len() - 1
                });
                out.push(id);
            }
            succ.push(out);
            i += 1;
        }
        let lift = |v: &Vec<bool>| origin.iter().map(|&o| v[o]).collect::<Vec<bool>>();
        for v in self.vals.iter_mut().flatten() {
            *v = lift(v);
        }
        for v in self.up.values_mut() {
            *v = lift(v);
        }
        self.model = origin.iter().map(|&o| self.model[o]).collect();
        self.root = origin.iter().map(|&o| self.root[o]).collect();
        self.succ = succ;
        bits
    }

    fn atom(&self, t: &TreeAtom, x: usize) -> bool {
        let val = |s: usize, y: usize| self.vals[s].as_ref().expect("lower state evaluated")[y];
        match t.kind {
            AtomKind::Dia => self.succ[x].iter().filter(|&&y| val(t.state, y)).count() >= t.k as usize,
            AtomKind::Box => self.succ[x].iter().filter(|&&y| !val(t.state, y)).count() < t.k as usize,
            AtomKind::Up => self.up.get(&t.state).is_some_and(|v| v[x]),
        }
    }
}

/// Values of every state at every enriched node, and the initial verdict.
pub struct Evaluation {
    pub accepted: bool,
    /// Model node (dense index) of each enriched node.
    pub model: Vec<usize>,
    pub root: Vec<bool>,
    pub values: Vec<Vec<bool>>,
}

/// Solve the acceptance game of a hesitant, polarised automaton on the
/// unfolding of `g`, component by component.
pub fn evaluate(a: &TreeAutomaton, g: &Graph) -> Result<Evaluation> {
    let mut up_refs = BTreeSet::new();
    for row in &a.delta {
        for entry in row {
            for f in entry {
                f.for_each_atom(&mut |t| {
                    if t.kind == AtomKind::Up {
                        up_refs.insert(t.state);
                    }
                });
            }
        }
    }
    let mut e = Enriched::new(g, a.len());
    let letter: Vec<usize> = g.labels.iter().map(|l| a.letter_of(l)).collect();
    for c in &a.partition {
        let states = &c.states;
        match c.kind {
            ComponentKind::Upward => {
                if states.len() > 63 {
                    return Err(Error::NotTwoWayLinear("upward component too large".into()));
                }
                let pos: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();
                let local_vals = |e: &Enriched, o: usize, b: u64| -> u64 {
                    let mut out = 0u64;
                    for (i, &q) in states.iter().enumerate() {
                        let f = a.transition(q, letter[e.model[o]], e.root[o]);
                        let v = f.eval(&mut |t| match pos.get(&t.state) {
                            Some(&p) if t.kind == AtomKind::Up => !e.root[o] && b >> p & 1 == 1,
                            _ => e.atom(t, o),
                        });
                        if v {
                            out |= 1 << i;
                        }
                    }
                    out
                };
                let bits = e.refine(&mut |e, o, b| if e.root[o] { local_vals(e, o, 0) } else { local_vals(e, o, b) });
                // Recompute the values at the refined nodes from their own bits.
                let n = e.len();
                let mut cur = vec![vec![false; n]; states.len()];
                let mut ups = vec![vec![false; n]; states.len()];
                for x in 0..n {
                    let b = if e.root[x] { 0 } else { bits[x] };
                    for (i, _) in states.iter().enumerate() {
                        ups[i][x] = b >> i & 1 == 1;
                    }
                }
                for (i, &q) in states.iter().enumerate() {
                    e.up.insert(q, ups[i].clone());
                }
                for x in 0..n {
                    let b = if e.root[x] { 0 } else { bits[x] };
                    let v = local_vals(&e, x, b);
                    for (i, _) in states.iter().enumerate() {
                        cur[i][x] = v >> i & 1 == 1;
                    }
                }
                for (i, &q) in states.iter().enumerate() {
                    e.vals[q] = Some(std::mem::take(&mut cur[i]));
                }
            }
            kind => {
                let n = e.len();
                let start = kind == ComponentKind::Universal;
                for &q in states {
                    e.vals[q] = Some(vec![start; n]);
                }
                loop {
                    let mut changed = false;
                    for &q in states {
                        for x in 0..n {
                            let f = a.transition(q, letter[e.model[x]], e.root[x]);
                            let v = f.eval(&mut |t| e.atom(t, x));
                            let slot = &mut e.vals[q].as_mut().unwrap()[x];
                            if v != *slot {
                                *slot = v;
                                changed = true;
                            }
                        }
                    }
                    if !changed || kind == ComponentKind::Transient {
                        break;
                    }
                }
                let new: Vec<usize> = states.iter().copied().filter(|q| up_refs.contains(q)).collect();
                if !new.is_empty() {
                    let bits = e.refine(&mut |e, o, _| {
                        new.iter()
                            .enumerate()
                            .filter(|(_, &q)| e.vals[q].as_ref().unwrap()[o])
                            .map(|(i, _)| 1u64 << i)
                            .sum()
                    });
                    for (i, &q) in new.iter().enumerate() {
                        e.up.insert(q, bits.iter().map(|b| b >> i & 1 == 1).collect());
                    }
                }
            }
        }
    }
    let values: Vec<Vec<bool>> = e.vals.into_iter().map(|v| v.unwrap_or_default()).collect();
    let accepted = values.get(a.initial).and_then(|v| v.first().copied()).unwrap_or(false);
    Ok(Evaluation { accepted, model: e.model, root: e.root, values })
}

/// Does the one-way automaton accept the unfolding of `m`?
pub fn accepts(a: &TreeAutomaton, m: &RegularTreeModel) -> Result<bool> {
    if a.two_way {
        return Err(Error::TwoWayUnsupported);
    }
    check_polarised_hesitant(a)?;
    Ok(evaluate(a, &m.graph()?)?.accepted)
}

/// For a one-way automaton: the model nodes whose subtree is accepted.
pub fn accepting_nodes(a: &TreeAutomaton, m: &RegularTreeModel) -> Result<Vec<bool>> {
    if a.two_way {
        return Err(Error::TwoWayUnsupported);
    }
    check_polarised_hesitant(a)?;
    let g = m.graph()?;
    let ev = evaluate(a, &g)?;
    let mut out = vec![false; g.len()];
    let mut set = vec![false; g.len()];
    for (x, &v) in ev.model.iter().enumerate() {
        if !set[v] || !ev.root[x] {
            out[v] = ev.values[a.initial][x];
            set[v] = true;
        }
    }
    Ok(out)
}

fn check_polarised_hesitant(a: &TreeAutomaton) -> Result<()> {
    let r = structural_report(a);
    if !r.hesitant || !r.polarised {
        let why = super::hesitant::validate_hesitant(a)
            .violations
            .iter()
            .map(|v| v.to_string())
            .chain((!r.polarised).then(|| "not polarised".to_string()))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::NotPolarisedHesitant(why));
    }
    Ok(())
}

/// Does the two-way linear automaton accept the unfolding of `m`?
pub fn accepts_two_way(a: &TreeAutomaton, m: &RegularTreeModel) -> Result<bool> {
    let r = structural_report(a);
    if !(r.hesitant && r.polarised && r.linear && r.two_way) {
        return Err(Error::NotTwoWayLinear(format!("{r:?}")));
    }
    Ok(evaluate(a, &m.graph()?)?.accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::automaton::Component;
    use crate::tree::fixtures::{example_a, example_a_prime};
    use crate::tree::formula::TransitionFormula as TF;

    /// An ∅-path of length 2k with {a}-children at even positions and, if
    /// `with_b`, a {b}-child at the end.
    fn l_model(k: usize, with_b: bool) -> RegularTreeModel {
        let len = 2 * k + 1;
        let a_node = len;
        let b_node = len + 1;
        let mut labels: Vec<Vec<&str>> = vec![vec![]; len];
        labels.push(vec!["a"]);
        let mut succ: Vec<Vec<usize>> = (0..len)
            .map(|i| {
                let mut s = if i + 1 < len { vec![i + 1] } else { vec![] };
                if i % 2 == 0 {
                    s.push(a_node);
                }
                s
            })
            .collect();
        succ.push(vec![a_node]);
        if with_b {
            labels.push(vec!["b"]);
            succ.push(vec![b_node]);
            succ[len - 1].push(b_node);
        }
        RegularTreeModel::from_parts(0, labels, succ)
    }

    #[test]
    fn example_a_language() {
        let a = example_a();
        for k in 0..3 {
            assert!(accepts(&a, &l_model(k, true)).unwrap(), "k={k}");
            assert!(!accepts(&a, &l_model(k, false)).unwrap(), "k={k}");
        }
        let (a2, _) = example_a_prime();
        for k in 0..3 {
            assert!(accepts(&a2, &l_model(k, true)).unwrap());
            assert!(!accepts(&a2, &l_model(k, false)).unwrap());
        }
    }

    fn constant(f: TF) -> TreeAutomaton {
        let mut a = TreeAutomaton::new(["p".to_string()], false);
        let q = a.add_state("q", false);
        for s in 0..2 {
            a.set(q, s, f.clone());
        }
        a.partition = vec![Component { states: vec![q], kind: ComponentKind::Transient }];
        a
    }

    #[test]
    fn constants() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"], vec![]], vec![vec![1, 1], vec![0]]);
        assert!(accepts(&constant(TF::True), &m).unwrap());
        assert!(!accepts(&constant(TF::False), &m).unwrap());
    }

    #[test]
    fn counting_uses_multiplicity() {
        // q_I: (◇2, p) with p true on {p}.
        let mut a = TreeAutomaton::new(["p".to_string()], false);
        let qi = a.add_state("qI", false);
        let p = a.add_state("p", false);
        a.initial = qi;
        for s in 0..2 {
            a.set(qi, s, TF::Atom(TreeAtom::dia(2, p)));
            a.set(p, s, if s == 1 { TF::True } else { TF::False });
        }
        a.partition = vec![
            Component { states: vec![p], kind: ComponentKind::Transient },
            Component { states: vec![qi], kind: ComponentKind::Transient },
        ];
        let two = RegularTreeModel::from_parts(0, vec![vec![], vec!["p"]], vec![vec![1, 1], vec![1]]);
        let one = RegularTreeModel::from_parts(0, vec![vec![], vec!["p"]], vec![vec![1, 0], vec![1]]);
        assert!(accepts(&a, &two).unwrap());
        assert!(!accepts(&a, &one).unwrap());
    }

    #[test]
    fn not_polarised_rejected() {
        let mut a = example_a();
        a.accepting[0] = true;
        let m = l_model(0, true);
        assert!(matches!(accepts(&a, &m), Err(Error::NotPolarisedHesitant(_))));
    }
}
