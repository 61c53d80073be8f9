//! Syntactic rewrites: negation normal form, closure, release elimination
//! under finite-path semantics, simple form and skeletons.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use super::ast::*;
use super::fragment::{in_fragment, Fragment};
use crate::error::{Error, Result};

/// `AỸ⊥`, true exactly at the root.
pub fn at_root() -> StateRef {
    forall(wyesterday(st(ff())))
}

/// Push negations to atoms. Supported targets: `PastCTLpm`, `CTLStarPm`.
pub fn to_nnf(phi: &StateRef, target: Fragment) -> Result<StateRef> {
    match target {
        Fragment::PastCTLpm | Fragment::CTLpm => {
            if !in_fragment(phi, target) {
                return Err(Error::UnsupportedFragment(format!("{phi} is not {target}")));
            }
            nnf_pm(phi, false)
        }
        Fragment::CTLStarPm => {
            if !in_fragment(phi, target) {
                return Err(Error::UnsupportedFragment(format!("{phi} is not {target}")));
            }
            nnf_star(phi, false)
        }
        other => Err(Error::UnsupportedFragment(format!("no normal form for {other}"))),
    }
}

fn nnf_bool(
    s: &StateRef,
    neg: bool,
    rec: &dyn Fn(&StateRef, bool) -> Result<StateRef>,
) -> Option<Result<StateRef>> {
    use StateFormula as S;
    let r = (|| -> Result<StateRef> {
        Ok(match &**s {
            S::True => if neg { ff() } else { tt() },
            S::False => if neg { tt() } else { ff() },
            S::Atom(_) => if neg { not(s.clone()) } else { s.clone() },
            S::Not(a) => rec(a, !neg)?,
            S::And(a, b) if neg => or(rec(a, true)?, rec(b, true)?),
            S::And(a, b) => and(rec(a, false)?, rec(b, false)?),
            S::Or(a, b) if neg => and(rec(a, true)?, rec(b, true)?),
            S::Or(a, b) => or(rec(a, false)?, rec(b, false)?),
            S::Count(n, a) if neg => cocount(*n, rec(a, true)?),
            S::Count(n, a) => count(*n, rec(a, false)?),
            S::CoCount(n, a) if neg => count(*n, rec(a, true)?),
            S::CoCount(n, a) => cocount(*n, rec(a, false)?),
            _ => return Err(Error::NotInNnf(String::new())),
        })
    })();
    match r {
        Err(Error::NotInNnf(_)) => None,
        other => Some(other),
    }
}

fn state_arg(p: &PathFormula) -> Result<&StateRef> {
    match p {
        PathFormula::State(s) => Ok(s),
        other => Err(Error::UnsupportedFragment(format!("{other} is not a state operand"))),
    }
}

fn nnf_pm(s: &StateRef, neg: bool) -> Result<StateRef> {
    if let Some(r) = nnf_bool(s, neg, &nnf_pm) {
        return r;
    }
    use PathFormula as P;
    let bad = || Error::UnsupportedFragment(format!("{s} is not PastCTLpm"));
    match &**s {
        StateFormula::Exists(p) => match &**p {
            P::Next(a) => {
                let a = nnf_pm(state_arg(a)?, neg)?;
                Ok(if neg { forall(next(st(a))) } else { exists(next(st(a))) })
            }
            P::Until(a, b) => {
                let (a, b) = (nnf_pm(state_arg(a)?, neg)?, nnf_pm(state_arg(b)?, neg)?);
                Ok(if neg { forall(release(st(a), st(b))) } else { exists(until(st(a), st(b))) })
            }
            P::Yesterday(a) => {
                let a = nnf_pm(state_arg(a)?, neg)?;
                Ok(if neg { forall(wyesterday(st(a))) } else { exists(yesterday(st(a))) })
            }
            P::Since(a, b) => {
                let (a, b) = (nnf_pm(state_arg(a)?, neg)?, nnf_pm(state_arg(b)?, neg)?);
                if neg {
                    // ¬E(a S b) = E(¬b S (¬b ∧ (AỸ⊥ ∨ ¬a)))
                    Ok(exists(since(st(b.clone()), st(and(b, or(at_root(), a))))))
                } else {
                    Ok(exists(since(st(a), st(b))))
                }
            }
            _ => Err(bad()),
        },
        StateFormula::Forall(p) => match &**p {
            P::Next(a) => {
                let a = nnf_pm(state_arg(a)?, neg)?;
                Ok(if neg { exists(next(st(a))) } else { forall(next(st(a))) })
            }
            P::Release(a, b) => {
                let (a, b) = (nnf_pm(state_arg(a)?, neg)?, nnf_pm(state_arg(b)?, neg)?);
                Ok(if neg { exists(until(st(a), st(b))) } else { forall(release(st(a), st(b))) })
            }
            P::WeakYesterday(a) => {
                let a = nnf_pm(state_arg(a)?, neg)?;
                Ok(if neg { exists(yesterday(st(a))) } else { forall(wyesterday(st(a))) })
            }
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn nnf_star(s: &StateRef, neg: bool) -> Result<StateRef> {
    if let Some(r) = nnf_bool(s, neg, &nnf_star) {
        return r;
    }
    match &**s {
        StateFormula::Exists(p) if neg => Ok(forall(dual_path(p)?)),
        StateFormula::Exists(p) => Ok(exists(nnf_path(p)?)),
        StateFormula::Forall(p) if neg => Ok(exists(dual_path(p)?)),
        StateFormula::Forall(p) => Ok(forall(nnf_path(p)?)),
        _ => Err(Error::UnsupportedFragment(format!("{s} is not CTLStarPm"))),
    }
}

fn nnf_path(p: &PathFormula) -> Result<PathRef> {
    use PathFormula as P;
    Ok(match p {
        P::State(s) => st(nnf_star(s, false)?),
        P::And(a, b) => pand(nnf_path(a)?, nnf_path(b)?),
        P::Or(a, b) => por(nnf_path(a)?, nnf_path(b)?),
        P::Next(a) => next(nnf_path(a)?),
        P::WeakNext(a) => wnext(nnf_path(a)?),
        P::Until(a, b) => until(nnf_path(a)?, nnf_path(b)?),
        P::Release(a, b) => release(nnf_path(a)?, nnf_path(b)?),
        other => return Err(Error::UnsupportedFragment(format!("{other} in CTLStarPm body"))),
    })
}

/// NNF of the negation of a future path formula under infinite-path
/// semantics: `∧↔∨`, `U↔R`, `X` self-dual.
pub fn dual_path(p: &PathFormula) -> Result<PathRef> {
    use PathFormula as P;
    Ok(match p {
        P::State(s) => st(nnf_star(s, true)?),
        P::And(a, b) => por(dual_path(a)?, dual_path(b)?),
        P::Or(a, b) => pand(dual_path(a)?, dual_path(b)?),
        P::Next(a) | P::WeakNext(a) => next(dual_path(a)?),
        P::Until(a, b) => release(dual_path(a)?, dual_path(b)?),
        P::Release(a, b) => until(dual_path(a)?, dual_path(b)?),
        other => return Err(Error::UnsupportedFragment(format!("cannot dualise {other}"))),
    })
}

/// Negation of a future path formula without normalising embedded states:
/// embedded states are wrapped in `¬`.
pub fn negate_path_shallow(p: &PathFormula) -> Result<PathRef> {
    use PathFormula as P;
    Ok(match p {
        P::State(s) => st(not_fold(s.clone())),
        P::And(a, b) => por(negate_path_shallow(a)?, negate_path_shallow(b)?),
        P::Or(a, b) => pand(negate_path_shallow(a)?, negate_path_shallow(b)?),
        P::Next(a) | P::WeakNext(a) => next(negate_path_shallow(a)?),
        P::Until(a, b) => release(negate_path_shallow(a)?, negate_path_shallow(b)?),
        P::Release(a, b) => until(negate_path_shallow(a)?, negate_path_shallow(b)?),
        P::Not(a) => a.clone(),
        other => return Err(Error::UnsupportedFragment(format!("cannot negate {other}"))),
    })
}

/// Closure of a PastCTLpm formula in NNF, each element after its proper
/// subformulas. Every entry includes the formula itself.
pub fn subformula_closure(phi: &StateRef) -> Result<Vec<StateRef>> {
    if !in_fragment(phi, Fragment::PastCTLpm) || !pm_nnf(phi) {
        return Err(Error::NotInNnf(phi.to_string()));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    visit_closure(phi, &mut seen, &mut out);
    Ok(out)
}

fn pm_nnf(s: &StateFormula) -> bool {
    match s {
        StateFormula::Not(a) => matches!(**a, StateFormula::Atom(_)),
        StateFormula::True | StateFormula::False | StateFormula::Atom(_) => true,
        StateFormula::And(a, b) | StateFormula::Or(a, b) => pm_nnf(a) && pm_nnf(b),
        StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => pm_nnf(a),
        StateFormula::Exists(p) | StateFormula::Forall(p) => {
            let mut ok = true;
            p.for_each_state(&mut |x| ok &= pm_nnf(x));
            ok
        }
        _ => false,
    }
}

fn visit_closure(s: &StateRef, seen: &mut HashSet<StateRef>, out: &mut Vec<StateRef>) {
    if seen.contains(s) {
        return;
    }
    match &**s {
        StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => {
            visit_closure(a, seen, out)
        }
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            visit_closure(a, seen, out);
            visit_closure(b, seen, out);
        }
        StateFormula::Exists(p) | StateFormula::Forall(p) => {
            p.for_each_state(&mut |x| visit_closure(x, seen, out));
        }
        _ => {}
    }
    seen.insert(s.clone());
    out.push(s.clone());
}

/// Replace every `φ R ψ` by `ψ U ((X̃⊥ ∨ φ) ∧ ψ)`, bottom-up. Nested finite
/// path quantifiers are rewritten too.
pub fn eliminate_release_finite(psi: &PathFormula) -> PathRef {
    use PathFormula as P;
    match psi {
        P::State(s) => st(eliminate_release_state(s)),
        P::Not(a) => pnot(eliminate_release_finite(a)),
        P::And(a, b) => pand(eliminate_release_finite(a), eliminate_release_finite(b)),
        P::Or(a, b) => por(eliminate_release_finite(a), eliminate_release_finite(b)),
        P::Next(a) => next(eliminate_release_finite(a)),
        P::WeakNext(a) => wnext(eliminate_release_finite(a)),
        P::Yesterday(a) => yesterday(eliminate_release_finite(a)),
        P::WeakYesterday(a) => wyesterday(eliminate_release_finite(a)),
        P::Until(a, b) => until(eliminate_release_finite(a), eliminate_release_finite(b)),
        P::Since(a, b) => since(eliminate_release_finite(a), eliminate_release_finite(b)),
        P::Release(a, b) => {
            let a = eliminate_release_finite(a);
            let b = eliminate_release_finite(b);
            until(b.clone(), pand(por(wnext(st(ff())), a), b))
        }
    }
}

/// Apply [`eliminate_release_finite`] inside every finite path quantifier.
pub fn eliminate_release_state(s: &StateRef) -> StateRef {
    use StateFormula as S;
    match &**s {
        S::True | S::False | S::Atom(_) | S::Guarded(_) => s.clone(),
        S::Not(a) => not(eliminate_release_state(a)),
        S::And(a, b) => and(eliminate_release_state(a), eliminate_release_state(b)),
        S::Or(a, b) => or(eliminate_release_state(a), eliminate_release_state(b)),
        S::Count(n, a) => count(*n, eliminate_release_state(a)),
        S::CoCount(n, a) => cocount(*n, eliminate_release_state(a)),
        S::ExistsFin(p) => exists_fin(eliminate_release_finite(p)),
        S::Exists(p) => exists(p.map_states(&mut |x| eliminate_release_state(x))),
        S::Forall(p) => forall(p.map_states(&mut |x| eliminate_release_state(x))),
    }
}

/// Simple form of a CTLStarPm formula.
///
/// Universal quantifiers become negated existentials and `C^k` becomes
/// `¬D^k¬`. An existential nested inside a path formula is unfolded one step,
/// `E γ ≡ ⋁ (now ∧ D^1 E next)`, so every maximal state subformula of a path
/// is a Boolean combination of atoms and `D^n` formulas. Top-level
/// existentials are kept.
pub fn to_simple_form(phi: &StateRef) -> Result<StateRef> {
    if !in_fragment(phi, Fragment::CTLStarPm) {
        return Err(Error::UnsupportedFragment(format!("{phi} is not CTLStarPm")));
    }
    simple(phi, false)
}

fn simple(s: &StateRef, in_path: bool) -> Result<StateRef> {
    use StateFormula as S;
    Ok(match &**s {
        S::True | S::False | S::Atom(_) => s.clone(),
        S::Not(a) => not(simple(a, in_path)?),
        S::And(a, b) => and(simple(a, in_path)?, simple(b, in_path)?),
        S::Or(a, b) => or(simple(a, in_path)?, simple(b, in_path)?),
        S::Count(n, a) => count(*n, simple(a, false)?),
        S::CoCount(n, a) => not(count(*n, not(simple(a, false)?))),
        S::Forall(p) => simple(&not(exists(negate_path_shallow(p)?)), in_path)?,
        S::Exists(p) => {
            let body = simple_path(p)?;
            if in_path {
                unfold_exists(&body)
            } else {
                exists(body)
            }
        }
        S::ExistsFin(_) | S::Guarded(_) => {
            return Err(Error::UnsupportedFragment(format!("{s} in simple form")))
        }
    })
}

fn simple_path(p: &PathFormula) -> Result<PathRef> {
    use PathFormula as P;
    Ok(match p {
        P::State(s) => st(simple(s, true)?),
        P::And(a, b) => pand(simple_path(a)?, simple_path(b)?),
        P::Or(a, b) => por(simple_path(a)?, simple_path(b)?),
        P::Next(a) | P::WeakNext(a) => next(simple_path(a)?),
        P::Until(a, b) => until(simple_path(a)?, simple_path(b)?),
        other => return Err(Error::UnsupportedFragment(format!("{other} is not co-safe"))),
    })
}

/// One-step unfolding of a co-safe body into `(now, next)` pairs.
pub fn unfold_step(p: &PathRef) -> Vec<(StateRef, Option<PathRef>)> {
    use PathFormula as P;
    fn join(a: Option<PathRef>, b: Option<PathRef>) -> Option<PathRef> {
        match (a, b) {
            (Some(x), Some(y)) => Some(pand(x, y)),
            (x, None) | (None, x) => x,
        }
    }
    match &**p {
        P::State(s) => vec![(s.clone(), None)],
        P::Next(a) | P::WeakNext(a) => vec![(tt(), Some(a.clone()))],
        P::Or(a, b) => {
            let mut v = unfold_step(a);
            v.extend(unfold_step(b));
            v
        }
        P::And(a, b) => {
            let (xs, ys) = (unfold_step(a), unfold_step(b));
            let mut v = Vec::new();
            for (n1, x1) in &xs {
                for (n2, x2) in &ys {
                    v.push((and_fold(n1.clone(), n2.clone()), join(x1.clone(), x2.clone())));
                }
            }
            v
        }
        P::Until(a, b) => {
            let mut v = unfold_step(b);
            for (n, x) in unfold_step(a) {
                v.push((n, join(x, Some(p.clone()))));
            }
            v
        }
        _ => vec![],
    }
}

fn unfold_exists(body: &PathRef) -> StateRef {
    or_all(unfold_step(body).into_iter().map(|(now, nx)| match nx {
        Some(n) => and_fold(now, count(1, exists(n))),
        None => now,
    }))
}

/// Result of replacing maximal non-propositional state subformulas by fresh
/// atoms `$a1, $a2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    pub ltl: PathRef,
    pub binding: Vec<(String, StateRef)>,
}

impl Skeleton {
    pub fn fresh_atoms(&self) -> Vec<String> {
        self.binding.iter().map(|(a, _)| a.clone()).collect()
    }
}

/// Skeleton of an existential body in simple form: every binding target is
/// a `D^n` formula.
pub fn skeletonize(psi: &PathFormula) -> Result<Skeleton> {
    skeleton_impl(psi, true)
}

/// Skeleton that abstracts any non-propositional state subformula.
pub fn skeletonize_any(psi: &PathFormula) -> Skeleton {
    skeleton_impl(psi, false).expect("lenient skeleton never fails")
}

fn skeleton_impl(psi: &PathFormula, strict: bool) -> Result<Skeleton> {
    let mut binding: Vec<(String, StateRef)> = Vec::new();
    let mut err = None;
    let ltl = psi.map_states(&mut |s| match abstract_state(s, strict, &mut binding) {
        Ok(x) => x,
        Err(e) => {
            err.get_or_insert(e);
            s.clone()
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(Skeleton { ltl, binding }),
    }
}

fn abstract_state(
    s: &StateRef,
    strict: bool,
    binding: &mut Vec<(String, StateRef)>,
) -> Result<StateRef> {
    use StateFormula as S;
    Ok(match &**s {
        S::True | S::False | S::Atom(_) => s.clone(),
        S::Not(a) => not(abstract_state(a, strict, binding)?),
        S::And(a, b) => and(abstract_state(a, strict, binding)?, abstract_state(b, strict, binding)?),
        S::Or(a, b) => or(abstract_state(a, strict, binding)?, abstract_state(b, strict, binding)?),
        S::Count(..) => fresh_for(s, binding),
        _ if !strict => fresh_for(s, binding),
        _ => return Err(Error::NotSimpleForm(format!("{s} is not a counting formula"))),
    })
}

fn fresh_for(s: &StateRef, binding: &mut Vec<(String, StateRef)>) -> StateRef {
    if let Some((name, _)) = binding.iter().find(|(_, t)| t == s) {
        return atom(name);
    }
    let name = format!("$a{}", binding.len() + 1);
    binding.push((name.clone(), s.clone()));
    atom(&name)
}

/// Substitute bound atoms back into a skeleton.
pub fn substitute(ltl: &PathFormula, binding: &[(String, StateRef)]) -> PathRef {
    let map: BTreeMap<&str, &StateRef> = binding.iter().map(|(a, s)| (a.as_str(), s)).collect();
    ltl.map_states(&mut |s| subst_state(s, &map))
}

fn subst_state(s: &StateRef, map: &BTreeMap<&str, &StateRef>) -> StateRef {
    use StateFormula as S;
    match &**s {
        S::Atom(p) => map.get(p.as_str()).map_or_else(|| s.clone(), |t| Arc::clone(t)),
        S::Not(a) => not(subst_state(a, map)),
        S::And(a, b) => and(subst_state(a, map), subst_state(b, map)),
        S::Or(a, b) => or(subst_state(a, map), subst_state(b, map)),
        _ => s.clone(),
    }
}

/// Rewrite `wX` into `X`, sound under infinite-path semantics.
pub fn strengthen_next(p: &PathFormula) -> PathRef {
    use PathFormula as P;
    match p {
        P::State(s) => st(s.clone()),
        P::Not(a) => pnot(strengthen_next(a)),
        P::And(a, b) => pand(strengthen_next(a), strengthen_next(b)),
        P::Or(a, b) => por(strengthen_next(a), strengthen_next(b)),
        P::Next(a) | P::WeakNext(a) => next(strengthen_next(a)),
        P::Yesterday(a) => yesterday(strengthen_next(a)),
        P::WeakYesterday(a) => wyesterday(strengthen_next(a)),
        P::Until(a, b) => until(strengthen_next(a), strengthen_next(b)),
        P::Release(a, b) => release(strengthen_next(a), strengthen_next(b)),
        P::Since(a, b) => since(strengthen_next(a), strengthen_next(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse_path, parse_state};

    fn s(x: &str) -> StateRef {
        parse_state(x).unwrap()
    }

    #[test]
    fn double_negation() {
        assert_eq!(to_nnf(&s("!!p"), Fragment::PastCTLpm).unwrap(), s("p"));
    }

    #[test]
    fn negated_until() {
        let got = to_nnf(&s("!E (p U q)"), Fragment::PastCTLpm).unwrap();
        assert_eq!(got, s("A (!p R !q)"));
    }

    #[test]
    fn negated_since() {
        let got = to_nnf(&s("!E (p S q)"), Fragment::PastCTLpm).unwrap();
        assert_eq!(got, s("E (!q S (!q & (A wY false | !p)))"));
    }

    #[test]
    fn nnf_rejects_other_fragments() {
        assert!(matches!(
            to_nnf(&s("E G p"), Fragment::PastCTLpm),
            Err(Error::UnsupportedFragment(_))
        ));
    }

    #[test]
    fn ctl_star_nnf() {
        let got = to_nnf(&s("!E (p U X q)"), Fragment::CTLStarPm).unwrap();
        assert_eq!(got, s("A (!p R X !q)"));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(subformula_closure(&s("E (p U q)")).unwrap(), vec![s("p"), s("q"), s("E (p U q)")]);
        assert_eq!(subformula_closure(&s("E X p")).unwrap(), vec![s("p"), s("E X p")]);
        assert_eq!(subformula_closure(&s("p")).unwrap(), vec![s("p")]);
        assert!(matches!(subformula_closure(&s("!E X p")), Err(Error::NotInNnf(_))));
    }

    #[test]
    fn release_elimination() {
        let got = eliminate_release_finite(&parse_path("p R q").unwrap());
        assert_eq!(got, parse_path("q U ((wX false | p) & q)").unwrap());
        let id = parse_path("p U q").unwrap();
        assert_eq!(eliminate_release_finite(&id), id);
        let nested = eliminate_release_finite(&parse_path("(a R b) U c").unwrap());
        assert_eq!(nested, parse_path("(b U ((wX false | a) & b)) U c").unwrap());
    }

    #[test]
    fn simple_form_keeps_top_level_exists() {
        assert_eq!(to_simple_form(&s("E (p U q)")).unwrap(), s("E (p U q)"));
        assert_eq!(to_simple_form(&s("p | q")).unwrap(), s("p | q"));
        assert_eq!(to_simple_form(&s("D2 E X p")).unwrap(), s("D2 E X p"));
    }

    #[test]
    fn simple_form_unfolds_nested_exists() {
        let got = to_simple_form(&s("E (p U E X q)")).unwrap();
        assert_eq!(got, s("E (p U D1 E q)"));
        let sk = skeletonize(match &*got {
            StateFormula::Exists(b) => b,
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(sk.binding.len(), 1);
    }

    #[test]
    fn skeleton_examples() {
        let sk = skeletonize(&parse_path("p U (D2 q)").unwrap()).unwrap();
        assert_eq!(sk.ltl.to_string(), "(p U $a1)");
        assert_eq!(sk.binding, vec![("$a1".to_string(), s("D2 q"))]);
        let plain = skeletonize(&parse_path("p U q").unwrap()).unwrap();
        assert!(plain.binding.is_empty());
        let two = parse_path("X (D1 E X p) & (q U D3 r)").unwrap();
        let sk = skeletonize(&two).unwrap();
        assert_eq!(sk.ltl.to_string(), "(X $a1 & (q U $a2))");
        assert_eq!(substitute(&sk.ltl, &sk.binding), two);
        assert!(matches!(
            skeletonize(&parse_path("p U E X q").unwrap()),
            Err(Error::NotSimpleForm(_))
        ));
    }
}
