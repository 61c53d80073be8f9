use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{PathFormula, StateFormula, StateRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fragment {
    PastCTLStar,
    CTLStar,
    PastCTL,
    CTL,
    PastCTLpm,
    CTLpm,
    CTLStarPm,
    CTLStarF,
    LTL,
    PastLTL,
    PurePastLTL,
    SafeLTL,
    CoSafeLTL,
    SafePastLTL,
    CoSafePastLTL,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const TREE: [Fragment; 8] = [
    Fragment::PastCTLStar,
    Fragment::CTLStar,
    Fragment::PastCTL,
    Fragment::CTL,
    Fragment::PastCTLpm,
    Fragment::CTLpm,
    Fragment::CTLStarPm,
    Fragment::CTLStarF,
];

fn bit(f: Fragment) -> u16 {
    1 << (TREE.iter().position(|&g| g == f).expect("tree fragment") as u16)
}

const ALL: u16 = 0xff;

/// Syntactic classification of a state formula.
///
/// Tree fragments are decided by the grammars; a purely propositional state
/// formula additionally belongs to the LTL family.
pub fn classify_fragment(phi: &StateRef) -> BTreeSet<Fragment> {
    let mut memo = HashMap::new();
    let flags = state_flags(phi, &mut memo);
    let mut out: BTreeSet<Fragment> =
        TREE.iter().copied().filter(|&f| flags & bit(f) != 0).collect();
    if phi.is_propositional() {
        out.extend([Fragment::LTL, Fragment::PastLTL, Fragment::PurePastLTL]);
        if literal_nnf(phi) {
            out.extend([Fragment::SafeLTL, Fragment::CoSafeLTL]);
        }
    }
    out
}

pub fn in_fragment(phi: &StateRef, frag: Fragment) -> bool {
    let mut memo = HashMap::new();
    state_flags(phi, &mut memo) & bit(frag) != 0
}

/// Classification of a path formula into the LTL family. Embedded state
/// formulas must be propositional.
pub fn classify_path_fragment(psi: &PathFormula) -> BTreeSet<Fragment> {
    let mut out = BTreeSet::new();
    let mut propositional = true;
    let mut nnf_states = true;
    psi.for_each_state(&mut |s| {
        propositional &= s.is_propositional();
        nnf_states &= literal_nnf(s);
    });
    if !propositional {
        return out;
    }
    out.insert(Fragment::PastLTL);
    let past = psi.has_past();
    let future = psi.has_future();
    if !past {
        out.insert(Fragment::LTL);
        if nnf_states && cosafe_shape(psi) {
            out.insert(Fragment::CoSafeLTL);
        }
        if nnf_states && safe_shape(psi) {
            out.insert(Fragment::SafeLTL);
        }
    }
    if !future {
        out.insert(Fragment::PurePastLTL);
    }
    match psi {
        PathFormula::Until(a, b) if is_const(a, true) && !b.has_future() => {
            out.insert(Fragment::CoSafePastLTL);
        }
        PathFormula::Release(a, b) if is_const(a, false) && !b.has_future() => {
            out.insert(Fragment::SafePastLTL);
        }
        _ => {}
    }
    out
}

fn is_const(p: &PathFormula, value: bool) -> bool {
    match p {
        PathFormula::State(s) => {
            **s == if value { StateFormula::True } else { StateFormula::False }
        }
        _ => false,
    }
}

/// Negation only in front of atoms.
pub fn literal_nnf(s: &StateFormula) -> bool {
    match s {
        StateFormula::True | StateFormula::False | StateFormula::Atom(_) => true,
        StateFormula::Not(a) => matches!(**a, StateFormula::Atom(_)),
        StateFormula::And(a, b) | StateFormula::Or(a, b) => literal_nnf(a) && literal_nnf(b),
        _ => false,
    }
}

/// Built from embedded states with `∧`, `∨`, `X`, `wX`, `U`.
pub fn cosafe_shape(p: &PathFormula) -> bool {
    match p {
        PathFormula::State(_) => true,
        PathFormula::And(a, b) | PathFormula::Or(a, b) | PathFormula::Until(a, b) => {
            cosafe_shape(a) && cosafe_shape(b)
        }
        PathFormula::Next(a) | PathFormula::WeakNext(a) => cosafe_shape(a),
        _ => false,
    }
}

/// Built from embedded states with `∧`, `∨`, `X`, `wX`, `R`.
pub fn safe_shape(p: &PathFormula) -> bool {
    match p {
        PathFormula::State(_) => true,
        PathFormula::And(a, b) | PathFormula::Or(a, b) | PathFormula::Release(a, b) => {
            safe_shape(a) && safe_shape(b)
        }
        PathFormula::Next(a) | PathFormula::WeakNext(a) => safe_shape(a),
        _ => false,
    }
}

fn past_path(p: &PathFormula) -> bool {
    match p {
        PathFormula::State(_) => true,
        PathFormula::Not(a) | PathFormula::Yesterday(a) | PathFormula::WeakYesterday(a) => {
            past_path(a)
        }
        PathFormula::And(a, b) | PathFormula::Or(a, b) | PathFormula::Since(a, b) => {
            past_path(a) && past_path(b)
        }
        _ => false,
    }
}

fn pastctl_body(p: &PathFormula) -> bool {
    match p {
        PathFormula::Next(a) | PathFormula::WeakNext(a) => past_path(a),
        PathFormula::Until(a, b) | PathFormula::Release(a, b) => past_path(a) && past_path(b),
        other => past_path(other),
    }
}

fn is_state(p: &PathFormula) -> bool {
    matches!(p, PathFormula::State(_))
}

fn ctl_body(p: &PathFormula) -> bool {
    match p {
        PathFormula::Next(a) => is_state(a),
        PathFormula::Until(a, b) | PathFormula::Release(a, b) => is_state(a) && is_state(b),
        _ => false,
    }
}

fn pm_exists_body(p: &PathFormula, past: bool) -> bool {
    match p {
        PathFormula::Next(a) => is_state(a),
        PathFormula::Until(a, b) => is_state(a) && is_state(b),
        PathFormula::Yesterday(a) => past && is_state(a),
        PathFormula::Since(a, b) => past && is_state(a) && is_state(b),
        _ => false,
    }
}

fn pm_forall_body(p: &PathFormula, past: bool) -> bool {
    match p {
        PathFormula::Next(a) => is_state(a),
        PathFormula::Release(a, b) => is_state(a) && is_state(b),
        PathFormula::WeakYesterday(a) => past && is_state(a),
        _ => false,
    }
}

fn state_flags(s: &StateRef, memo: &mut HashMap<*const StateFormula, u16>) -> u16 {
    let key = std::sync::Arc::as_ptr(s);
    if let Some(&f) = memo.get(&key) {
        return f;
    }
    let flags = match &**s {
        StateFormula::True | StateFormula::False | StateFormula::Atom(_) => ALL,
        StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => {
            state_flags(a, memo)
        }
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            state_flags(a, memo) & state_flags(b, memo)
        }
        StateFormula::Exists(p) | StateFormula::Forall(p) => {
            let universal = matches!(&**s, StateFormula::Forall(_));
            let mut emb = ALL;
            p.for_each_state(&mut |x| emb &= state_flags(x, memo));
            let past = p.has_past();
            let mut f = 0;
            let mut set = |frag: Fragment, cond: bool| {
                if cond && emb & bit(frag) != 0 {
                    f |= bit(frag);
                }
            };
            set(Fragment::PastCTLStar, true);
            set(Fragment::CTLStar, !past);
            set(Fragment::PastCTL, pastctl_body(p));
            set(Fragment::CTL, ctl_body(p));
            if universal {
                set(Fragment::PastCTLpm, pm_forall_body(p, true));
                set(Fragment::CTLpm, pm_forall_body(p, false));
                set(Fragment::CTLStarPm, safe_shape(p));
            } else {
                set(Fragment::PastCTLpm, pm_exists_body(p, true));
                set(Fragment::CTLpm, pm_exists_body(p, false));
                set(Fragment::CTLStarPm, cosafe_shape(p));
            }
            f
        }
        StateFormula::ExistsFin(p) => {
            let mut emb = ALL;
            p.for_each_state(&mut |x| emb &= state_flags(x, memo));
            if !p.has_past() && emb & bit(Fragment::CTLStarF) != 0 {
                bit(Fragment::CTLStarF)
            } else {
                0
            }
        }
        StateFormula::Guarded(_) => 0,
    };
    memo.insert(key, flags);
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse_path, parse_state};

    fn frags(s: &str) -> BTreeSet<Fragment> {
        classify_fragment(&parse_state(s).unwrap())
    }

    #[test]
    fn ctl_example() {
        let f = frags("E (G p)");
        for g in [Fragment::CTL, Fragment::PastCTL, Fragment::CTLStar, Fragment::PastCTLStar] {
            assert!(f.contains(&g), "{g}");
        }
    }

    #[test]
    fn past_ctl_example() {
        let f = frags("E (F (p S q))");
        assert!(f.contains(&Fragment::PastCTL));
        assert!(!f.contains(&Fragment::CTL));
        assert!(!f.contains(&Fragment::CTLStar));
    }

    #[test]
    fn only_past_ctl_star() {
        let f = frags("A (F G (p S q))");
        let tree: BTreeSet<_> = f.into_iter().filter(|g| TREE.contains(g)).collect();
        assert_eq!(tree, BTreeSet::from([Fragment::PastCTLStar]));
    }

    #[test]
    fn polarised_fragments() {
        let f = frags("E (p U A X q) & A wY false & E (p S q)");
        assert!(f.contains(&Fragment::PastCTLpm));
        assert!(!f.contains(&Fragment::CTLpm));
        let g = frags("E ((p U q) & X r) | !A G (p | X q)");
        assert!(g.contains(&Fragment::CTLStarPm));
        assert!(!g.contains(&Fragment::CTL));
        assert!(!frags("E G p").contains(&Fragment::CTLStarPm));
        assert!(frags("Ef (p R q)").contains(&Fragment::CTLStarF));
        assert!(!frags("Ef (p R q)").contains(&Fragment::CTLStar));
    }

    #[test]
    fn ltl_family() {
        let f = classify_path_fragment(&parse_path("p U X q").unwrap());
        assert!(f.contains(&Fragment::CoSafeLTL) && f.contains(&Fragment::LTL));
        assert!(!f.contains(&Fragment::SafeLTL));
        let g = classify_path_fragment(&parse_path("G (p S q)").unwrap());
        assert!(g.contains(&Fragment::SafePastLTL) && !g.contains(&Fragment::LTL));
        let h = classify_path_fragment(&parse_path("!(p U q)").unwrap());
        assert!(!h.contains(&Fragment::CoSafeLTL));
        assert!(h.contains(&Fragment::LTL));
    }
}
