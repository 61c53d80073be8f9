use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::rewrite::subformula_closure;
use crate::formula::{
    and_all, and_fold, atom, count, exists, in_fragment, not, not_fold, or_fold, since, st, to_nnf, tt,
    until, yesterday, Fragment, PathFormula, StateFormula, StateRef, Valuation,
};
use crate::tree::{
    regroup, structural_report, AtomKind, Component, ComponentKind, TransitionFormula as TF, TreeAtom,
    TreeAutomaton,
};

/// Two-way linear automaton of a PastCTL± formula: one state per
/// subformula of its negation normal form, each in its own component.
pub fn pctlpm_to_hta(phi: &StateRef) -> Result<TreeAutomaton> {
    if !in_fragment(phi, Fragment::PastCTLpm) {
        return Err(Error::WrongFragment(format!("{phi} is not PastCTL±")));
    }
    let nnf = to_nnf(phi, Fragment::PastCTLpm)?;
    let closure = subformula_closure(&nnf)?;
    let index: HashMap<StateRef, usize> = closure.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut a = TreeAutomaton::new(nnf.atoms(), true);
    let mut kinds = Vec::new();
    for s in &closure {
        let kind = match &**s {
            StateFormula::Exists(p) if matches!(**p, PathFormula::Until(..)) => ComponentKind::Existential,
            StateFormula::Exists(p) if matches!(**p, PathFormula::Since(..)) => ComponentKind::Upward,
            StateFormula::Forall(p) if matches!(**p, PathFormula::Release(..)) => ComponentKind::Universal,
            _ => ComponentKind::Transient,
        };
        a.add_state(s.to_string(), kind == ComponentKind::Universal);
        kinds.push(kind);
    }
    for (q, s) in closure.iter().enumerate() {
        for sigma in 0..a.letters() {
            let val = a.valuation(sigma);
            for root in [false, true] {
                let f = delta(s, &val, root, &index)?;
                a.set_rooted(q, sigma, root, f);
            }
        }
        a.partition.push(Component { states: vec![q], kind: kinds[q] });
    }
    a.initial = index[&nnf];
    Ok(a)
}

fn delta(s: &StateRef, val: &Valuation, root: bool, index: &HashMap<StateRef, usize>) -> Result<TF> {
    use PathFormula as P;
    use StateFormula as S;
    let state = |p: &PathFormula| -> Result<(usize, StateRef)> {
        match p {
            P::State(x) => Ok((index[x], x.clone())),
            other => Err(Error::WrongFragment(format!("{other} under a PastCTL± quantifier"))),
        }
    };
    let own = index[s];
    let constant = |b: bool| if b { TF::True } else { TF::False };
    Ok(match &**s {
        S::True => TF::True,
        S::False => TF::False,
        S::Atom(p) => constant(val.contains(p)),
        S::Not(a) => match &**a {
            S::Atom(p) => constant(!val.contains(p)),
            _ => return Err(Error::NotInNnf(s.to_string())),
        },
        S::And(a, b) => delta(a, val, root, index)?.and(delta(b, val, root, index)?),
        S::Or(a, b) => delta(a, val, root, index)?.or(delta(b, val, root, index)?),
        S::Count(k, a) => TF::Atom(TreeAtom::dia(*k, index[a])),
        S::CoCount(k, a) => TF::Atom(TreeAtom::boxed(*k, index[a])),
        S::Exists(p) => match &**p {
            P::Next(a) => TF::Atom(TreeAtom::dia(1, state(a)?.0)),
            P::Yesterday(a) if root => TF::False,
            P::Yesterday(a) => TF::Atom(TreeAtom::up(state(a)?.0)),
            P::Until(a, b) => {
                let (a, b) = (state(a)?.1, state(b)?.1);
                delta(&b, val, root, index)?.or(delta(&a, val, root, index)?.and(TF::Atom(TreeAtom::dia(1, own))))
            }
            P::Since(a, b) => {
                let (a, b) = (state(a)?.1, state(b)?.1);
                delta(&b, val, root, index)?.or(delta(&a, val, root, index)?.and(TF::Atom(TreeAtom::up(own))))
            }
            _ => return Err(Error::WrongFragment(format!("{s} is not PastCTL±"))),
        },
        S::Forall(p) => match &**p {
            P::Next(a) => TF::Atom(TreeAtom::boxed(1, state(a)?.0)),
            P::WeakYesterday(a) if root => TF::True,
            P::WeakYesterday(a) => TF::Atom(TreeAtom::up(state(a)?.0)),
            P::Release(a, b) => {
                let (a, b) = (state(a)?.1, state(b)?.1);
                delta(&b, val, root, index)?.and(delta(&a, val, root, index)?.or(TF::Atom(TreeAtom::boxed(1, own))))
            }
            _ => return Err(Error::WrongFragment(format!("{s} is not PastCTL±"))),
        },
        _ => return Err(Error::WrongFragment(format!("{s} is not PastCTL±"))),
    })
}

/// PastCTL± formula equivalent to a linear hesitant polarised automaton
/// (two-way or not). States are translated lowest component first.
pub fn hta_to_pctlpm(a: &TreeAutomaton) -> Result<StateRef> {
    let r = structural_report(a);
    if !(r.linear && r.hesitant && r.polarised) {
        return Err(Error::NotTwoWayLinear(format!("{r:?}")));
    }
    let comp = a.component_of();
    let mut t = PastTranslator {
        a,
        kinds: (0..a.len()).map(|q| a.partition[comp[q].expect("covered")].kind).collect(),
        memo: vec![None; a.len()],
        psi: (0..a.letters()).map(|s| label_formula(&a.ap, &a.valuation(s))).collect(),
        has_parent: exists(yesterday(st(tt()))),
    };
    for c in &a.partition {
        t.state(c.states[0])?;
    }
    Ok(t.memo[a.initial].clone().expect("every state translated"))
}

/// `ψ_σ`: the conjunction of literals fixing the label to σ.
pub(crate) fn label_formula(ap: &[String], val: &Valuation) -> StateRef {
    and_all(ap.iter().map(|p| if val.contains(p) { atom(p) } else { not(atom(p)) }))
}

struct PastTranslator<'a> {
    a: &'a TreeAutomaton,
    kinds: Vec<ComponentKind>,
    memo: Vec<Option<StateRef>>,
    psi: Vec<StateRef>,
    /// `EY⊤`, shared so that checkers track it once.
    has_parent: StateRef,
}

impl PastTranslator<'_> {
    fn state(&mut self, q: usize) -> Result<StateRef> {
        if let Some(f) = &self.memo[q] {
            return Ok(f.clone());
        }
        let kind = self.kinds[q];
        let mut stay = [Vec::new(), Vec::new()];
        let mut leave = [Vec::new(), Vec::new()];
        for sigma in 0..self.a.letters() {
            for root in [false, true] {
                let nf = regroup(self.a, q, kind, sigma, root)?;
                let r = usize::from(root);
                let alpha = self.theta(&nf.alpha)?;
                let exit = self.theta(&nf.alpha_exit)?;
                stay[r].push(or_fold(not_fold(self.psi[sigma].clone()), alpha));
                leave[r].push(or_fold(not_fold(self.psi[sigma].clone()), exit));
            }
        }
        let split = |parts: &mut [Vec<StateRef>; 2], y: &StateRef| {
            let nonroot = and_all(std::mem::take(&mut parts[0]));
            let root = and_all(std::mem::take(&mut parts[1]));
            and_fold(or_fold(not_fold(y.clone()), nonroot), or_fold(y.clone(), root))
        };
        let beta = split(&mut stay, &self.has_parent);
        let beta_exit = split(&mut leave, &self.has_parent);
        let f = match kind {
            ComponentKind::Transient => beta_exit,
            ComponentKind::Existential => exists(until(st(beta), st(beta_exit))),
            ComponentKind::Universal => {
                let nb = not_fold(beta_exit);
                not(exists(until(st(nb.clone()), st(and_fold(not_fold(beta), nb)))))
            }
            ComponentKind::Upward => exists(since(st(beta), st(beta_exit))),
        };
        self.memo[q] = Some(f.clone());
        Ok(f)
    }

    fn theta(&mut self, t: &TF) -> Result<StateRef> {
        Ok(match t {
            TF::True => tt(),
            TF::False => not_fold(tt()),
            TF::And(xs) => {
                let mut acc = tt();
                for x in xs {
                    acc = and_fold(acc, self.theta(x)?);
                }
                acc
            }
            TF::Or(xs) => {
                let mut acc = not_fold(tt());
                for x in xs {
                    acc = or_fold(acc, self.theta(x)?);
                }
                acc
            }
            TF::Atom(at) => {
                let f = self.state(at.state)?;
                match at.kind {
                    AtomKind::Dia => count(at.k, f),
                    AtomKind::Box => not(count(at.k, not_fold(f))),
                    AtomKind::Up => exists(yesterday(st(f))),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::mc_pctlpm;
    use crate::formula::parse_state;
    use crate::model::{random_model, ModelConfig, RegularTreeModel};
    use crate::tree::{accepts_two_way, ROOT};

    fn s(x: &str) -> StateRef {
        parse_state(x).unwrap()
    }

    #[test]
    fn next_table_entry() {
        let a = pctlpm_to_hta(&s("E X p")).unwrap();
        assert_eq!(a.states, vec!["p", "E X p"]);
        let (p, ex) = (0, 1);
        for sigma in 0..2 {
            assert_eq!(a.delta[ex][sigma][0], TF::Atom(TreeAtom::dia(1, p)));
            assert_eq!(a.delta[p][sigma][0], if sigma == 1 { TF::True } else { TF::False });
        }
    }

    #[test]
    fn until_unfolds() {
        let a = pctlpm_to_hta(&s("E (p U q)")).unwrap();
        let eu = a.initial;
        let q = a.state_index("q").unwrap();
        let p = a.state_index("p").unwrap();
        let bit = |x: usize| 1usize << a.ap.iter().position(|n| n == &a.states[x]).unwrap();
        assert_eq!(a.delta[eu][bit(q)][0], TF::True);
        assert_eq!(a.delta[eu][bit(p)][0], TF::Atom(TreeAtom::dia(1, eu)));
        assert_eq!(a.delta[eu][0][0], TF::False);
        assert_eq!(a.partition.last().unwrap().kind, ComponentKind::Existential);
    }

    #[test]
    fn yesterday_at_root() {
        let a = pctlpm_to_hta(&s("E Y p")).unwrap();
        let q = a.initial;
        assert_eq!(a.delta[q][0][ROOT], TF::False);
        assert_eq!(a.delta[q][0][0], TF::Atom(TreeAtom::up(0)));
        let r = structural_report(&a);
        assert!(r.linear && r.hesitant && r.polarised && r.two_way);
    }

    #[test]
    fn release_states_are_final() {
        let a = pctlpm_to_hta(&s("!E (p U !q) & E (true S p)")).unwrap();
        for c in &a.partition {
            let q = c.states[0];
            assert_eq!(a.accepting[q], c.kind == ComponentKind::Universal, "{}", a.states[q]);
        }
        assert!(a.partition.iter().any(|c| c.kind == ComponentKind::Upward));
    }

    #[test]
    fn transient_true() {
        let mut a = TreeAutomaton::new(["p".to_string()], true);
        let q = a.add_state("q", false);
        for sigma in 0..2 {
            a.set(q, sigma, TF::True);
        }
        a.partition.push(Component { states: vec![q], kind: ComponentKind::Transient });
        let f = hta_to_pctlpm(&a).unwrap();
        let m = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![0]]);
        assert!(mc_pctlpm(&m, &f).unwrap().root);
    }

    /// Universal singleton staying on every child while p holds: A G p.
    #[test]
    fn universal_singleton() {
        let mut a = TreeAutomaton::new(["p".to_string()], false);
        let q = a.add_state("q", true);
        a.set(q, 0, TF::False);
        a.set(q, 1, TF::Atom(TreeAtom::boxed(1, q)));
        a.partition.push(Component { states: vec![q], kind: ComponentKind::Universal });
        let f = hta_to_pctlpm(&a).unwrap();
        let cfg = ModelConfig { max_nodes: 3, max_branch: 2, ap: vec!["p".into()] };
        for seed in 0..60 {
            let m = random_model(seed, &cfg);
            let g = m.graph().unwrap();
            let want = g.labels.iter().all(|l| l.contains("p"));
            assert_eq!(mc_pctlpm(&m, &f).unwrap().root, want, "{m:?}");
        }
    }

    #[test]
    fn round_trip_on_samples() {
        let cfg = ModelConfig { max_nodes: 4, max_branch: 2, ap: vec!["p".into(), "q".into()] };
        for text in [
            "E (true U p)",
            "E (p U q) & A X !q",
            "E X E (q S p)",
            "!E (true U (E Y p & !q))",
            "D2 (p | A wY q)",
            "E (p U E Y E Y q)",
        ] {
            let phi = s(text);
            let a = pctlpm_to_hta(&phi).unwrap();
            let back = hta_to_pctlpm(&a).unwrap();
            for seed in 0..40 {
                let m = random_model(seed, &cfg);
                let want = mc_pctlpm(&m, &phi).unwrap().root;
                assert_eq!(accepts_two_way(&a, &m).unwrap(), want, "{text} on {m:?}");
                assert_eq!(mc_pctlpm(&m, &back).unwrap().root, want, "f({text}) on {m:?}");
            }
        }
    }
}
