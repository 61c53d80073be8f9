use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::rewrite::skeletonize;
use crate::formula::{
    and, and_all, and_fold, count, in_fragment, not, not_fold, or, or_all, to_simple_form, tt, Fragment,
    GuardedExists, StateFormula, StateRef, Valuation,
};
use crate::tree::{
    dualize_tree, linearize_component, structural_report, visibility_check, AtomKind, Component, ComponentKind,
    DualityRegistry, Provenance, TransitionFormula as TF, TreeAtom, TreeAutomaton, Visibility,
};
use crate::word::{fragment_to_looping_word_automaton, is_looping, Polarity};

use super::past::label_formula;

/// Compile a CTL*± formula into a one-way hesitant automaton, following
/// the cases of its simple form. Negation builds the dual; `E` bodies run
/// the co-safe automaton of their skeleton along a guessed path while
/// sub-automata and their duals check the abstracted counting formulas.
/// Each `(formula, polarity)` pair gets one sub-automaton.
pub fn ctlspm_to_hta(phi: &StateRef) -> Result<(TreeAutomaton, DualityRegistry)> {
    if !in_fragment(phi, Fragment::CTLStarPm) {
        return Err(Error::WrongFragment(format!("{phi} is not CTL*±")));
    }
    let simple = to_simple_form(phi)?;
    let mut b = Builder { a: TreeAutomaton::new(phi.atoms(), false), reg: DualityRegistry::new(), memo: HashMap::new() };
    let q = b.build(&simple, false)?;
    b.a.initial = q;
    Ok((b.a, b.reg))
}

struct Builder {
    a: TreeAutomaton,
    reg: DualityRegistry,
    memo: HashMap<(StateRef, bool), usize>,
}

impl Builder {
    fn fresh(&mut self, accepting: bool) -> usize {
        let name = format!("q{}", self.a.len());
        self.a.add_state(name, accepting)
    }

    fn transient(&mut self, row: Vec<TF>) -> usize {
        let q = self.fresh(false);
        for (sigma, f) in row.into_iter().enumerate() {
            self.a.set(q, sigma, f);
        }
        self.a.partition.push(Component { states: vec![q], kind: ComponentKind::Transient });
        q
    }

    /// Initial state of the automaton for `s`, or of its dual when `neg`.
    fn build(&mut self, s: &StateRef, neg: bool) -> Result<usize> {
        use StateFormula as S;
        if let S::Not(x) = &**s {
            return self.build(x, !neg);
        }
        if let Some(&q) = self.memo.get(&(s.clone(), neg)) {
            return Ok(q);
        }
        let letters = self.a.letters();
        let constant = |b: bool| if b { TF::True } else { TF::False };
        let q = match &**s {
            S::True | S::False => self.transient(vec![constant(matches!(**s, S::True) != neg); letters]),
            S::Atom(p) => {
                let bit = self.a.ap.iter().position(|x| x == p).expect("atom in alphabet");
                self.transient((0..letters).map(|sigma| constant((sigma >> bit & 1 == 1) != neg)).collect())
            }
            S::And(x, y) | S::Or(x, y) => {
                let (qx, qy) = (self.build(x, neg)?, self.build(y, neg)?);
                let disjunctive = matches!(**s, S::Or(..)) != neg;
                let row = (0..letters)
                    .map(|sigma| {
                        let (fx, fy) = (self.a.transition(qx, sigma, false).clone(), self.a.transition(qy, sigma, false).clone());
                        if disjunctive {
                            fx.or(fy)
                        } else {
                            fx.and(fy)
                        }
                    })
                    .collect();
                self.transient(row)
            }
            S::Count(n, x) => {
                let qx = self.build(x, neg)?;
                let t = if neg { TreeAtom::boxed(*n, qx) } else { TreeAtom::dia(*n, qx) };
                self.transient(vec![TF::Atom(t); letters])
            }
            S::Exists(p) => self.exists(p, neg)?,
            _ => return Err(Error::NotSimpleForm(s.to_string())),
        };
        self.memo.insert((s.clone(), neg), q);
        Ok(q)
    }

    fn exists(&mut self, p: &crate::formula::PathFormula, neg: bool) -> Result<usize> {
        let sk = skeletonize(p)?;
        let ltl = sk.ltl.map_states(&mut |x| literals(x, false));
        // (fresh atom, grade, state of ψ_i, state of its dual), as seen under `neg`.
        let mut subs = Vec::new();
        for (name, f) in &sk.binding {
            let StateFormula::Count(n, psi) = &**f else {
                return Err(Error::NotSimpleForm(f.to_string()));
            };
            let (qp, qn) = (self.build(psi, neg)?, self.build(psi, !neg)?);
            let (pos, dual) = if neg { (qn, qp) } else { (qp, qn) };
            self.reg.insert(TreeAtom::dia(*n, pos), TreeAtom::boxed(*n, dual), Provenance::ByConstruction);
            subs.push((name.clone(), *n, qp, qn));
        }
        let ap2 = ltl.atoms();
        let nca = fragment_to_looping_word_automaton(&ltl, Polarity::CoSafe, &ap2)?.trim();
        let sink = is_looping(&nca);
        let letters = self.a.letters();
        if sink == Some(nca.initial) {
            let b = !neg;
            return Ok(self.transient(vec![if b { TF::True } else { TF::False }; letters]));
        }
        let mut map = vec![usize::MAX; nca.len()];
        for (j, slot) in map.iter_mut().enumerate() {
            if Some(j) != sink {
                *slot = self.fresh(neg);
            }
        }
        for j in (0..nca.len()).filter(|&j| Some(j) != sink) {
            for sigma in 0..letters {
                let base: Valuation = self.a.valuation(sigma).into_iter().filter(|x| ap2.contains(x)).collect();
                let mut clauses = Vec::new();
                for set in 0..1usize << subs.len() {
                    let mut val = base.clone();
                    let mut side = Vec::new();
                    for (i, (name, n, qp, qn)) in subs.iter().enumerate() {
                        if set >> i & 1 == 1 {
                            val.insert(name.clone());
                            side.push(TF::Atom(TreeAtom::dia(*n, *qp)));
                        } else {
                            side.push(TF::Atom(TreeAtom::boxed(*n, *qn)));
                        }
                    }
                    let l = nca.letter_index(&val).expect("valuation over the skeleton atoms");
                    for &t in &nca.delta[j][l] {
                        let step = if Some(t) == sink { TF::True } else { TF::Atom(TreeAtom::dia(1, map[t])) };
                        clauses.push(TF::conj(std::iter::once(step).chain(side.iter().cloned())));
                    }
                }
                let f = TF::disj(clauses);
                self.a.set(map[j], sigma, if neg { f.dual() } else { f });
            }
        }
        let states: Vec<usize> = map.iter().copied().filter(|&q| q != usize::MAX).collect();
        let kind = if neg { ComponentKind::Universal } else { ComponentKind::Existential };
        self.a.partition.push(Component { states, kind });
        Ok(map[nca.initial])
    }
}

/// Negation normal form of a propositional formula.
fn literals(s: &StateRef, neg: bool) -> StateRef {
    use StateFormula as S;
    match &**s {
        S::True | S::False => {
            if (matches!(**s, S::True)) != neg {
                tt()
            } else {
                not_fold(tt())
            }
        }
        S::Atom(_) => {
            if neg {
                not(s.clone())
            } else {
                s.clone()
            }
        }
        S::Not(a) => literals(a, !neg),
        S::And(a, b) if !neg => and(literals(a, false), literals(b, false)),
        S::And(a, b) => or(literals(a, true), literals(b, true)),
        S::Or(a, b) if !neg => or(literals(a, false), literals(b, false)),
        S::Or(a, b) => and(literals(a, true), literals(b, true)),
        _ => {
            if neg {
                not(s.clone())
            } else {
                s.clone()
            }
        }
    }
}

/// Result of [`hta_to_ctlspm`]. `unverified_visibility` is set when the
/// visibility check neither certified nor refuted the input.
#[derive(Clone, Debug)]
pub struct AutomatonGuardedFormula {
    pub formula: StateRef,
    pub unverified_visibility: bool,
}

/// CTL*± formula, with automaton-guarded existentials, equivalent to a
/// one-way polarised hesitant automaton. Existential states become guarded
/// existentials over their component's linearisation; universal states are
/// the negation of the same construction on the dual automaton.
pub fn hta_to_ctlspm(a: &TreeAutomaton, reg: &DualityRegistry) -> Result<AutomatonGuardedFormula> {
    let r = structural_report(a);
    if !(r.hesitant && r.polarised) || a.two_way {
        return Err(Error::NotPolarisedHesitant(format!("{r:?}")));
    }
    let unverified_visibility = match visibility_check(a, reg) {
        Visibility::Visible(_) => false,
        Visibility::Unknown { .. } => true,
        Visibility::Violated(w) => {
            let names = |c: &BTreeSet<TreeAtom>| c.iter().map(|t| t.render(&a.states)).collect::<Vec<_>>().join(" & ");
            return Err(Error::VisibilityViolated(format!(
                "component {}: {{{}}} vs {{{}}}",
                w.component,
                names(&w.left),
                names(&w.right)
            )));
        }
    };
    let dual = dualize_tree(a)?;
    let mut t = StarTranslator {
        sides: [a, &dual],
        memo: HashMap::new(),
        psi: (0..a.letters()).map(|s| label_formula(&a.ap, &a.valuation(s))).collect(),
    };
    let formula = t.state(a.initial, false)?;
    Ok(AutomatonGuardedFormula { formula, unverified_visibility })
}

struct StarTranslator<'a> {
    /// The automaton and its dual.
    sides: [&'a TreeAutomaton; 2],
    memo: HashMap<(usize, bool), StateRef>,
    psi: Vec<StateRef>,
}

impl StarTranslator<'_> {
    fn state(&mut self, q: usize, dual: bool) -> Result<StateRef> {
        if let Some(f) = self.memo.get(&(q, dual)) {
            return Ok(f.clone());
        }
        let a = self.sides[usize::from(dual)];
        let kind = a.partition[a.component_of()[q].expect("covered")].kind;
        let f = match kind {
            ComponentKind::Transient => {
                let mut parts = Vec::new();
                for sigma in 0..a.letters() {
                    let theta = self.theta(a.transition(q, sigma, false), dual)?;
                    parts.push(and_fold(self.psi[sigma].clone(), theta));
                }
                or_all(parts)
            }
            ComponentKind::Universal => not(self.state(q, !dual)?),
            ComponentKind::Existential => {
                let lin = linearize_component(a, q)?;
                let mut guards = BTreeMap::new();
                for l in &lin.automaton.alphabet {
                    if guards.contains_key(&l.annot) {
                        continue;
                    }
                    let mut parts = Vec::new();
                    for name in &l.annot {
                        parts.push(self.theta(&TF::Atom(lin.atoms[name]), dual)?);
                    }
                    guards.insert(l.annot.clone(), and_all(parts));
                }
                Arc::new(StateFormula::Guarded(Arc::new(GuardedExists {
                    ap: a.ap.clone(),
                    automaton: lin.automaton,
                    guards,
                })))
            }
            ComponentKind::Upward => return Err(Error::TwoWayUnsupported),
        };
        self.memo.insert((q, dual), f.clone());
        Ok(f)
    }

    fn theta(&mut self, t: &TF, dual: bool) -> Result<StateRef> {
        Ok(match t {
            TF::True => tt(),
            TF::False => not_fold(tt()),
            TF::And(xs) => {
                let mut parts = Vec::new();
                for x in xs {
                    parts.push(self.theta(x, dual)?);
                }
                and_all(parts)
            }
            TF::Or(xs) => {
                let mut parts = Vec::new();
                for x in xs {
                    parts.push(self.theta(x, dual)?);
                }
                or_all(parts)
            }
            TF::Atom(at) => {
                let f = self.state(at.state, dual)?;
                match at.kind {
                    AtomKind::Dia => count(at.k, f),
                    AtomKind::Box => not(count(at.k, not_fold(f))),
                    AtomKind::Up => return Err(Error::TwoWayUnsupported),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::mc_ctlspm;
    use crate::formula::parse_state;
    use crate::model::{random_model, ModelConfig};
    use crate::tree::{accepts, is_polarised, validate_hesitant};
    use crate::word::is_counter_free;

    fn s(x: &str) -> StateRef {
        parse_state(x).unwrap()
    }

    fn samples(n: u64) -> Vec<crate::model::RegularTreeModel> {
        let cfg = ModelConfig { max_nodes: 4, max_branch: 2, ap: vec!["p".into(), "q".into()] };
        (0..n).map(|seed| random_model(seed, &cfg)).collect()
    }

    #[test]
    fn until_component_matches_nca() {
        let phi = s("E (p U q)");
        let (a, reg) = ctlspm_to_hta(&phi).unwrap();
        assert!(reg.is_empty());
        let top = a.partition.last().unwrap();
        assert_eq!(top.kind, ComponentKind::Existential);
        let body = crate::formula::parse_path("p U q").unwrap();
        let ap: BTreeSet<String> = ["p".to_string(), "q".to_string()].into();
        let nca = fragment_to_looping_word_automaton(&body, Polarity::CoSafe, &ap).unwrap().trim();
        assert_eq!(top.states.len(), nca.len() - 1);
        for m in samples(100) {
            assert_eq!(accepts(&a, &m).unwrap(), mc_ctlspm(&m, &phi).unwrap().root, "{m:?}");
        }
    }

    #[test]
    fn count_gets_fresh_initial() {
        let (a, _) = ctlspm_to_hta(&s("D2 E X p")).unwrap();
        let q = a.initial;
        assert_eq!(a.partition.last().unwrap().states, vec![q]);
        match &a.delta[q][0][0] {
            TF::Atom(t) => assert_eq!((t.kind, t.k), (AtomKind::Dia, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negation_complements() {
        let phi = s("E (true U p)");
        let (a, _) = ctlspm_to_hta(&phi).unwrap();
        let (b, _) = ctlspm_to_hta(&not(phi)).unwrap();
        for m in samples(60) {
            assert_ne!(accepts(&a, &m).unwrap(), accepts(&b, &m).unwrap());
        }
    }

    #[test]
    fn nested_counting_is_certified() {
        for text in ["E (p U (q & E X p))", "A (p R E (true U q))", "E X (D2 p | !D1 q)"] {
            let phi = s(text);
            let (a, reg) = ctlspm_to_hta(&phi).unwrap();
            assert!(validate_hesitant(&a).ok() && is_polarised(&a), "{text}");
            assert!(visibility_check(&a, &reg).is_visible(), "{text}");
            for c in &a.partition {
                if c.kind != ComponentKind::Transient {
                    let lin = linearize_component(&a, c.states[0]).unwrap();
                    assert!(is_counter_free(&lin.automaton).unwrap().is_none(), "{text}");
                }
            }
        }
    }

    #[test]
    fn round_trip_on_samples() {
        for text in [
            "E (p U q)",
            "!E (true U p)",
            "A X (p | q)",
            "E ((p U q) & X p)",
            "E (p U (q & E X p))",
            "D2 (p & A (p R q))",
        ] {
            let phi = s(text);
            let (a, reg) = ctlspm_to_hta(&phi).unwrap();
            let back = hta_to_ctlspm(&a, &reg).unwrap();
            assert!(!back.unverified_visibility, "{text}");
            for m in samples(60) {
                let want = mc_ctlspm(&m, &phi).unwrap().root;
                assert_eq!(accepts(&a, &m).unwrap(), want, "{text} on {m:?}");
                assert_eq!(mc_ctlspm(&m, &back.formula).unwrap().root, want, "back({text}) on {m:?}");
            }
        }
    }

    #[test]
    fn box_guard_table() {
        let mut a = TreeAutomaton::new(["p".to_string()], false);
        let p = a.add_state("p", false);
        a.set(p, 0, TF::False);
        a.set(p, 1, TF::True);
        let q = a.add_state("q", false);
        a.set(q, 0, TF::Atom(TreeAtom::boxed(2, p)));
        a.set(q, 1, TF::Atom(TreeAtom::boxed(2, p)));
        a.partition = vec![
            Component { states: vec![p], kind: ComponentKind::Transient },
            Component { states: vec![q], kind: ComponentKind::Transient },
        ];
        a.initial = q;
        let f = hta_to_ctlspm(&a, &DualityRegistry::new()).unwrap().formula;
        let text = f.to_string();
        assert!(text.contains("!D2 !"), "{text}");
    }
}
