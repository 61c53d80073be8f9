use crate::error::{Error, Result};

use super::automaton::{ComponentKind, TreeAutomaton};
use super::formula::{TransitionFormula, TreeAtom, DEFAULT_CLAUSE_LIMIT};
use super::hesitant::structural_report;

/// `δ(q, σ, ρ) ≡ (own ∧ α) ∨ α′` with no atom on q in α or α′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// `(◇,q)`, `(□,q)` or `(⇑,q)`; none for transient states.
    pub own: Option<TreeAtom>,
    pub alpha: TransitionFormula,
    pub alpha_exit: TransitionFormula,
}

impl NormalForm {
    pub fn to_formula(&self) -> TransitionFormula {
        match self.own {
            None => self.alpha_exit.clone(),
            Some(o) => TransitionFormula::Atom(o).and(self.alpha.clone()).or(self.alpha_exit.clone()),
        }
    }
}

fn own_atom(kind: ComponentKind, q: usize) -> Option<TreeAtom> {
    match kind {
        ComponentKind::Transient => None,
        ComponentKind::Existential => Some(TreeAtom::dia(1, q)),
        ComponentKind::Universal => Some(TreeAtom::boxed(1, q)),
        ComponentKind::Upward => Some(TreeAtom::up(q)),
    }
}

fn require_linear(a: &TreeAutomaton) -> Result<()> {
    let r = structural_report(a);
    if !(r.linear && r.hesitant) {
        return Err(Error::NotLinearHesitant(format!("{r:?}")));
    }
    Ok(())
}

/// Regroup the DNF of one transition by the clauses that contain the own atom.
pub fn normal_form(a: &TreeAutomaton, q: usize, sigma: usize, root: bool) -> Result<NormalForm> {
    require_linear(a)?;
    let comp = a.component_of();
    regroup(a, q, a.partition[comp[q].expect("covered")].kind, sigma, root)
}

/// [`normal_form`] without the structural check.
pub(crate) fn regroup(a: &TreeAutomaton, q: usize, kind: ComponentKind, sigma: usize, root: bool) -> Result<NormalForm> {
    let f = a.transition(q, sigma, root);
    let Some(own) = own_atom(kind, q) else {
        return Ok(NormalForm { own: None, alpha: TransitionFormula::False, alpha_exit: f.clone() });
    };
    let mut with = Vec::new();
    let mut without = Vec::new();
    for mut clause in f.dnf(DEFAULT_CLAUSE_LIMIT)? {
        if clause.remove(&own) {
            with.push(clause);
        } else {
            without.push(clause);
        }
    }
    Ok(NormalForm {
        own: Some(own),
        alpha: TransitionFormula::from_dnf(&with),
        alpha_exit: TransitionFormula::from_dnf(&without),
    })
}

/// Rewrite every transition of a linear hesitant automaton into normal form.
pub fn normalize_linear_transitions(a: &TreeAutomaton) -> Result<TreeAutomaton> {
    require_linear(a)?;
    let comp = a.component_of();
    let mut out = a.clone();
    for q in 0..a.len() {
        let kind = a.partition[comp[q].expect("covered")].kind;
        for sigma in 0..a.letters() {
            for root in [false, true] {
                out.set_rooted(q, sigma, root, regroup(a, q, kind, sigma, root)?.to_formula());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::automaton::Component;
    use crate::tree::formula::TransitionFormula as TF;

    fn atom(t: TreeAtom) -> TF {
        TF::Atom(t)
    }

    fn linear(kind: ComponentKind, f: TF) -> TreeAutomaton {
        let mut a = TreeAutomaton::new(Vec::<String>::new(), false);
        let p = a.add_state("p", false);
        let r = a.add_state("r", false);
        let q = a.add_state("q", kind == ComponentKind::Universal);
        a.initial = q;
        a.set(p, 0, TF::True);
        a.set(r, 0, TF::True);
        a.set(q, 0, f);
        a.partition = vec![
            Component { states: vec![p], kind: ComponentKind::Transient },
            Component { states: vec![r], kind: ComponentKind::Transient },
            Component { states: vec![q], kind },
        ];
        a
    }

    #[test]
    fn existential_regrouping() {
        let (p, r, q) = (0, 1, 2);
        let f = atom(TreeAtom::dia(1, q))
            .and(atom(TreeAtom::dia(1, p)))
            .or(atom(TreeAtom::dia(1, q)).and(atom(TreeAtom::boxed(1, r))));
        let a = linear(ComponentKind::Existential, f);
        let nf = normal_form(&a, q, 0, false).unwrap();
        assert_eq!(nf.own, Some(TreeAtom::dia(1, q)));
        assert_eq!(nf.alpha, atom(TreeAtom::dia(1, p)).or(atom(TreeAtom::boxed(1, r))));
        assert_eq!(nf.alpha_exit, TF::False);
    }

    #[test]
    fn universal_degenerate() {
        let a = linear(ComponentKind::Universal, atom(TreeAtom::boxed(1, 2)));
        let nf = normal_form(&a, 2, 0, false).unwrap();
        assert_eq!((nf.alpha, nf.alpha_exit), (TF::True, TF::False));
    }

    #[test]
    fn transient_unchanged() {
        let a = linear(ComponentKind::Existential, TF::True);
        let nf = normal_form(&a, 0, 0, true).unwrap();
        assert_eq!(nf, NormalForm { own: None, alpha: TF::False, alpha_exit: TF::True });
        assert_eq!(normalize_linear_transitions(&a).unwrap().delta[0], a.delta[0]);
    }

    #[test]
    fn non_linear_rejected() {
        let a = crate::tree::fixtures::example_a();
        assert!(matches!(normalize_linear_transitions(&a), Err(Error::NotLinearHesitant(_))));
    }
}
