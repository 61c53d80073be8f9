//! Greedy, deterministic counterexample minimisation.

use crate::formula::*;
use crate::model::RegularTreeModel;
use crate::word::LassoWord;

/// Upper bound on predicate evaluations per shrink.
const BUDGET: usize = 400;

/// Delete non-root nodes, lowest id first, while `fails` still holds.
pub fn shrink_model(m: &RegularTreeModel, mut fails: impl FnMut(&RegularTreeModel) -> bool) -> RegularTreeModel {
    let mut cur = m.clone();
    let mut spent = 0;
    'outer: loop {
        let ids: Vec<usize> = cur.nodes.iter().map(|n| n.id).filter(|&id| id != cur.root).collect();
        for id in ids {
            if spent >= BUDGET {
                break 'outer;
            }
            if let Some(smaller) = cur.without_node(id) {
                spent += 1;
                if fails(&smaller) {
                    cur = smaller;
                    continue 'outer;
                }
            }
        }
        break;
    }
    cur
}

/// Replace subformulas by constants or by their own operands, outermost
/// first, while the result stays in `frag` and `fails` still holds.
pub fn shrink_formula(phi: &StateRef, frag: Fragment, mut fails: impl FnMut(&StateRef) -> bool) -> StateRef {
    let mut cur = phi.clone();
    let mut spent = 0;
    'outer: loop {
        for cand in state_shrinks(&cur) {
            if spent >= BUDGET {
                break 'outer;
            }
            if cand.size() >= cur.size() || !in_fragment(&cand, frag) {
                continue;
            }
            spent += 1;
            if fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        break;
    }
    cur
}

/// Drop single letters of the prefix, then of the cycle, while `fails` holds.
pub fn shrink_lasso<L: Clone>(w: &LassoWord<L>, mut fails: impl FnMut(&LassoWord<L>) -> bool) -> LassoWord<L> {
    let mut cur = w.clone();
    'outer: loop {
        for i in 0..cur.prefix.len() + cur.cycle.len() {
            let mut cand = cur.clone();
            if i < cur.prefix.len() {
                cand.prefix.remove(i);
            } else if cur.cycle.len() > 1 {
                cand.cycle.remove(i - cur.prefix.len());
            } else {
                continue;
            }
            if fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        break;
    }
    cur
}

/// One-step simplifications of `phi`, in a fixed order.
pub fn state_shrinks(phi: &StateRef) -> Vec<StateRef> {
    use StateFormula as S;
    let mut out = Vec::new();
    if !matches!(**phi, S::True | S::False) {
        out.push(tt());
        out.push(ff());
    }
    match &**phi {
        S::True | S::False | S::Atom(_) | S::Guarded(_) => {}
        S::Not(a) => {
            out.push(a.clone());
            out.extend(state_shrinks(a).into_iter().map(not));
        }
        S::And(a, b) | S::Or(a, b) => {
            out.push(a.clone());
            out.push(b.clone());
            let rebuild = |x: StateRef, y: StateRef| if matches!(**phi, S::And(..)) { and(x, y) } else { or(x, y) };
            out.extend(state_shrinks(a).into_iter().map(|x| rebuild(x, b.clone())));
            out.extend(state_shrinks(b).into_iter().map(|y| rebuild(a.clone(), y)));
        }
        S::Count(k, a) | S::CoCount(k, a) => {
            let rebuild = |k: u32, x: StateRef| if matches!(**phi, S::Count(..)) { count(k, x) } else { cocount(k, x) };
            out.push(a.clone());
            if *k > 1 {
                out.push(rebuild(k - 1, a.clone()));
            }
            out.extend(state_shrinks(a).into_iter().map(|x| rebuild(*k, x)));
        }
        S::Exists(p) | S::Forall(p) | S::ExistsFin(p) => {
            let mut children = Vec::new();
            p.for_each_state(&mut |x| children.push(x.clone()));
            out.extend(children);
            out.extend(path_shrinks(p).into_iter().map(|q| match &**phi {
                S::Exists(_) => exists(q),
                S::Forall(_) => forall(q),
                _ => exists_fin(q),
            }));
        }
    }
    out
}

fn path_shrinks(p: &PathRef) -> Vec<PathRef> {
    use PathFormula as P;
    let mut out = Vec::new();
    match &**p {
        P::State(s) => out.extend(state_shrinks(s).into_iter().map(st)),
        P::Not(a) | P::Next(a) | P::WeakNext(a) | P::Yesterday(a) | P::WeakYesterday(a) => {
            out.push(a.clone());
            let wrap = |x: PathRef| -> PathRef {
                std::sync::Arc::new(match &**p {
                    P::Not(_) => P::Not(x),
                    P::Next(_) => P::Next(x),
                    P::WeakNext(_) => P::WeakNext(x),
                    P::Yesterday(_) => P::Yesterday(x),
                    _ => P::WeakYesterday(x),
                })
            };
            out.extend(path_shrinks(a).into_iter().map(wrap));
        }
        P::And(a, b) | P::Or(a, b) | P::Until(a, b) | P::Release(a, b) | P::Since(a, b) => {
            out.push(a.clone());
            out.push(b.clone());
            let pair = |x: PathRef, y: PathRef| -> PathRef {
                std::sync::Arc::new(match &**p {
                    P::And(..) => P::And(x, y),
                    P::Or(..) => P::Or(x, y),
                    P::Until(..) => P::Until(x, y),
                    P::Release(..) => P::Release(x, y),
                    _ => P::Since(x, y),
                })
            };
            out.extend(path_shrinks(a).into_iter().map(|x| pair(x, b.clone())));
            out.extend(path_shrinks(b).into_iter().map(|y| pair(a.clone(), y)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{random_model, ModelConfig};

    #[test]
    fn formula_shrinks_to_culprit() {
        let phi = parse_state("E (p U (q & E X r)) | A X (p | q)").unwrap();
        let has_r = |f: &StateRef| f.atoms().contains("r");
        let small = shrink_formula(&phi, Fragment::CTLStarPm, has_r);
        assert_eq!(small.to_string(), parse_state("r").unwrap().to_string());
    }

    #[test]
    fn model_shrinks_to_root() {
        let cfg = ModelConfig { max_nodes: 6, max_branch: 2, ap: vec!["p".into()] };
        let m = random_model(5, &cfg);
        let small = shrink_model(&m, |_| true);
        assert!(small.nodes.len() <= m.nodes.len());
        assert!(small.graph().is_ok());
    }

    #[test]
    fn lasso_shrinks() {
        let w = LassoWord { prefix: vec![1, 2, 3], cycle: vec![4, 5] };
        let small = shrink_lasso(&w, |l| l.cycle.contains(&5));
        assert_eq!(small, LassoWord { prefix: vec![], cycle: vec![5] });
    }
}
