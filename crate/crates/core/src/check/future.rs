use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::fragment::{cosafe_shape, safe_shape};
use crate::formula::rewrite::{negate_path_shallow, skeletonize_any, strengthen_next};
use crate::formula::{in_fragment, Fragment, GuardedExists, PathFormula, StateFormula, StateRef, Valuation};
use crate::model::{Graph, RegularTreeModel};
use crate::util::{can_reach, on_cycle};
use crate::word::{ltl_finite_to_dfa, Acceptance, Branching, WordAutomaton};

use super::{McNode, McResult};

/// History-free labelling checker for future formulas: counting, `E` over
/// co-safe bodies, `A` over safe bodies, `E^f` over arbitrary future bodies
/// and automaton-guarded existentials.
pub struct FutureChecker<'g> {
    g: &'g Graph,
    memo: HashMap<*const StateFormula, (StateRef, Arc<Vec<bool>>)>,
    dfas: HashMap<(PathFormula, BTreeSet<String>), Arc<WordAutomaton<Valuation>>>,
}

impl<'g> FutureChecker<'g> {
    pub fn new(g: &'g Graph) -> Self {
        FutureChecker { g, memo: HashMap::new(), dfas: HashMap::new() }
    }

    pub fn label(&mut self, phi: &StateRef) -> Result<Arc<Vec<bool>>> {
        if let Some((_, v)) = self.memo.get(&Arc::as_ptr(phi)) {
            return Ok(v.clone());
        }
        use StateFormula as S;
        let g = self.g;
        let n = g.len();
        let value: Vec<bool> = match &**phi {
            S::True => vec![true; n],
            S::False => vec![false; n],
            S::Atom(p) => g.labels.iter().map(|l| l.contains(p)).collect(),
            S::Not(a) => self.label(a)?.iter().map(|b| !b).collect(),
            S::And(a, b) => {
                let (x, y) = (self.label(a)?, self.label(b)?);
                (0..n).map(|i| x[i] && y[i]).collect()
            }
            S::Or(a, b) => {
                let (x, y) = (self.label(a)?, self.label(b)?);
                (0..n).map(|i| x[i] || y[i]).collect()
            }
            S::Count(k, a) => {
                let x = self.label(a)?;
                (0..n).map(|i| g.succ[i].iter().filter(|&&j| x[j]).count() >= *k as usize).collect()
            }
            S::CoCount(k, a) => {
                let x = self.label(a)?;
                (0..n).map(|i| g.succ[i].iter().filter(|&&j| !x[j]).count() < *k as usize).collect()
            }
            S::Exists(p) => {
                if p.has_past() || !cosafe_shape(p) {
                    return Err(Error::WrongFragment(format!("{phi}: E needs a co-safe future body")));
                }
                self.path_reach(&strengthen_next(p))?
            }
            S::Forall(p) => {
                if p.has_past() || !safe_shape(p) {
                    return Err(Error::WrongFragment(format!("{phi}: A needs a safe future body")));
                }
                let neg = negate_path_shallow(p)?;
                self.path_reach(&strengthen_next(&neg))?.into_iter().map(|b| !b).collect()
            }
            S::ExistsFin(p) => {
                if p.has_past() {
                    return Err(Error::WrongFragment(format!("{phi}: past under E^f")));
                }
                self.path_reach(p)?
            }
            S::Guarded(ge) => self.guarded(ge)?,
        };
        let value = Arc::new(value);
        self.memo.insert(Arc::as_ptr(phi), (phi.clone(), value.clone()));
        Ok(value)
    }

    /// Nodes from which some finite path satisfies `body` under finite-path
    /// semantics: reachability of an accepting state in the product with
    /// the skeleton DFA.
    fn path_reach(&mut self, body: &PathFormula) -> Result<Vec<bool>> {
        let sk = skeletonize_any(body);
        let mut extra: Vec<(String, Arc<Vec<bool>>)> = Vec::new();
        for (name, s) in &sk.binding {
            extra.push((name.clone(), self.label(s)?));
        }
        let ap: BTreeSet<String> = sk.ltl.atoms();
        let key = ((*sk.ltl).clone(), ap.clone());
        let dfa = match self.dfas.get(&key) {
            Some(d) => d.clone(),
            None => {
                let d = Arc::new(ltl_finite_to_dfa(&sk.ltl, &ap)?);
                self.dfas.insert(key, d.clone());
                d
            }
        };
        let g = self.g;
        let letter: Vec<usize> = (0..g.len())
            .map(|v| {
                let mut val: Valuation = g.labels[v].iter().filter(|p| ap.contains(*p)).cloned().collect();
                for (name, x) in &extra {
                    if x[v] && ap.contains(name) {
                        val.insert(name.clone());
                    }
                }
                dfa.letter_index(&val).expect("complete DFA alphabet")
            })
            .collect();
        // Product state (v, d): d is the DFA state before reading v.
        let k = dfa.len();
        let id = |v: usize, d: usize| v * k + d;
        let mut succ = vec![Vec::new(); g.len() * k];
        let mut target = vec![false; g.len() * k];
        for v in 0..g.len() {
            for d in 0..k {
                let d2 = dfa.delta[d][letter[v]][0];
                target[id(v, d)] = dfa.accepting[d2];
                succ[id(v, d)] = g.succ[v].iter().map(|&w| id(w, d2)).collect();
            }
        }
        let good = can_reach(&succ, &target);
        Ok((0..g.len()).map(|v| good[id(v, dfa.initial)]).collect())
    }

    fn guarded(&mut self, ge: &GuardedExists) -> Result<Vec<bool>> {
        let w = &ge.automaton;
        if w.branching == Branching::Universal {
            return Err(Error::WrongFragment("guarded E over a universal automaton".into()));
        }
        let mut guard: Vec<Arc<Vec<bool>>> = Vec::new();
        for l in &w.alphabet {
            guard.push(match ge.guards.get(&l.annot) {
                Some(s) => self.label(s)?,
                None if l.annot.is_empty() => Arc::new(vec![true; self.g.len()]),
                None => return Err(Error::InvalidAutomaton(format!("no guard for {:?}", l.annot))),
            });
        }
        let g = self.g;
        let k = w.len();
        let id = |v: usize, q: usize| v * k + q;
        let mut succ = vec![Vec::new(); g.len() * k];
        for v in 0..g.len() {
            let sigma: Valuation = g.labels[v].iter().filter(|p| ge.ap.contains(p)).cloned().collect();
            for (li, l) in w.alphabet.iter().enumerate() {
                if l.sigma != sigma || !guard[li][v] {
                    continue;
                }
                for q in 0..k {
                    for &t in &w.delta[q][li] {
                        succ[id(v, q)].extend(g.succ[v].iter().map(|&u| id(u, t)));
                    }
                }
            }
        }
        let good = match w.acceptance {
            Acceptance::Buchi => {
                let cyc = on_cycle(&succ, &vec![true; succ.len()]);
                let target: Vec<bool> = (0..succ.len()).map(|x| w.accepting[x % k] && cyc[x]).collect();
                can_reach(&succ, &target)
            }
            Acceptance::CoBuchi => {
                let keep: Vec<bool> = (0..succ.len()).map(|x| !w.accepting[x % k]).collect();
                can_reach(&succ, &on_cycle(&succ, &keep))
            }
            Acceptance::FiniteAccept => {
                return Err(Error::WrongKind("guarded E needs an ω-automaton".into()));
            }
        };
        Ok((0..g.len()).map(|v| good[id(v, w.initial)]).collect())
    }
}

fn result(g: &Graph, value: &[bool]) -> McResult {
    McResult {
        root: value[g.root],
        nodes: (0..g.len()).map(|v| McNode { node: g.ids[v], history: String::new(), holds: value[v] }).collect(),
    }
}

/// CTL*± together with automaton-guarded existentials.
pub(crate) fn ctlspm_shape(s: &StateRef) -> bool {
    shape_memo(s, &mut HashMap::new())
}

fn shape_memo(s: &StateRef, memo: &mut HashMap<*const StateFormula, bool>) -> bool {
    use StateFormula as S;
    if let Some(&b) = memo.get(&Arc::as_ptr(s)) {
        return b;
    }
    let ok = match &**s {
        S::True | S::False | S::Atom(_) => true,
        S::Not(a) | S::Count(_, a) | S::CoCount(_, a) => shape_memo(a, memo),
        S::And(a, b) | S::Or(a, b) => shape_memo(a, memo) && shape_memo(b, memo),
        S::Exists(p) | S::Forall(p) => {
            let shape = if matches!(&**s, S::Exists(_)) { cosafe_shape(p) } else { safe_shape(p) };
            let mut ok = shape && !p.has_past();
            p.for_each_state(&mut |x| ok &= shape_memo(x, memo));
            ok
        }
        S::Guarded(ge) => ge.guards.values().all(|x| shape_memo(x, memo)),
        S::ExistsFin(_) => false,
    };
    memo.insert(Arc::as_ptr(s), ok);
    ok
}

/// Check a CTL*± formula, possibly with automaton-guarded existentials.
pub fn mc_ctlspm(m: &RegularTreeModel, phi: &StateRef) -> Result<McResult> {
    if !ctlspm_shape(phi) {
        return Err(Error::WrongFragment(format!("{phi} is not CTL*±")));
    }
    let g = m.graph()?;
    let value = FutureChecker::new(&g).label(phi)?;
    Ok(result(&g, &value))
}

/// Check a CTL*f formula under finite-path semantics.
pub fn mc_ctlsf(m: &RegularTreeModel, phi: &StateRef) -> Result<McResult> {
    if !in_fragment(phi, Fragment::CTLStarF) {
        return Err(Error::WrongFragment(format!("{phi} is not CTL*f")));
    }
    let g = m.graph()?;
    let value = FutureChecker::new(&g).label(phi)?;
    Ok(result(&g, &value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_state;
    use crate::model::{random_model, ModelConfig};

    fn star(m: &RegularTreeModel, s: &str) -> McResult {
        mc_ctlspm(m, &parse_state(s).unwrap()).unwrap()
    }

    fn fin(m: &RegularTreeModel, s: &str) -> McResult {
        mc_ctlsf(m, &parse_state(s).unwrap()).unwrap()
    }

    #[test]
    fn until_reaches_q() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"], vec!["q"]], vec![vec![1], vec![1]]);
        assert!(star(&m, "E (p U q)").root);
        let m = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![0]]);
        assert!(star(&m, "!E (true U p)").root);
    }

    #[test]
    fn finite_next_and_weak_next() {
        let m = RegularTreeModel::from_parts(0, vec![vec![], vec!["p"], vec![]], vec![vec![1, 2], vec![2], vec![2]]);
        let r = fin(&m, "Ef X p");
        assert_eq!(r.nodes.iter().map(|n| n.holds).collect::<Vec<_>>(), vec![true, false, false]);
        assert!(fin(&m, "Ef wX p").nodes.iter().all(|n| n.holds));
        let r = fin(&m, "Ef p");
        assert_eq!(r.nodes.iter().map(|n| n.holds).collect::<Vec<_>>(), vec![false, true, false]);
    }

    /// Exhaustive oracle for `E^f X p`: some path of length ≤ 3 has p at
    /// its second position.
    #[test]
    fn finite_next_matches_enumeration() {
        let cfg = ModelConfig { max_nodes: 3, max_branch: 2, ap: vec!["p".into()] };
        for seed in 0..40 {
            let m = random_model(seed, &cfg);
            let g = m.graph().unwrap();
            let r = fin(&m, "Ef X p");
            for v in 0..g.len() {
                let want = g.succ[v].iter().any(|&w| g.labels[w].contains("p"));
                assert_eq!(r.nodes[v].holds, want);
            }
        }
    }

    #[test]
    fn release_under_forall() {
        let m = RegularTreeModel::from_parts(0, vec![vec!["p"], vec!["q"]], vec![vec![0, 1], vec![0]]);
        assert!(!star(&m, "A (q R p)").root);
        assert!(star(&m, "A (true R (p | q))").root);
    }

    #[test]
    fn past_rejected() {
        let m = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![0]]);
        assert!(mc_ctlspm(&m, &parse_state("E (p S q)").unwrap()).is_err());
        assert!(mc_ctlsf(&m, &parse_state("E (p U q)").unwrap()).is_err());
    }
}
