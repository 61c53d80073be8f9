use std::collections::BTreeSet;

use crate::model::{random_model, ModelConfig, RegularTreeModel};

use super::accept::accepts;
use super::automaton::{ComponentKind, TreeAutomaton};
use super::dual::DualityRegistry;
use super::formula::{Clause, TransitionFormula, TreeAtom};
use super::linearize::component_moves;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub component: usize,
    pub left: Clause,
    pub right: Clause,
    pub theta: TreeAtom,
    pub theta_bar: TreeAtom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityWitness {
    pub component: usize,
    pub left: Clause,
    pub right: Clause,
    /// A sampled tree refuting every candidate pair, when one was needed.
    pub model: Option<RegularTreeModel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Visibility {
    Visible(Vec<Certificate>),
    Violated(VisibilityWitness),
    /// Neither certified nor refuted: the open pairs and the number of
    /// sampled trees tried on them.
    Unknown { open: Vec<(usize, Clause, Clause)>, samples: usize },
}

impl Visibility {
    pub fn is_visible(&self) -> bool {
        matches!(self, Visibility::Visible(_))
    }
}

/// Visibility with 64 sampled trees as the falsification budget.
pub fn visibility_check(a: &TreeAutomaton, reg: &DualityRegistry) -> Visibility {
    let cfg = ModelConfig { max_nodes: 4, max_branch: 3, ap: a.ap.clone() };
    let samples: Vec<RegularTreeModel> = (0..64).map(|s| random_model(s, &cfg)).collect();
    visibility_check_with(a, reg, &samples)
}

/// Every pair of distinct annotations on transitions leaving a state of a
/// non-transient component must contain a registered dual pair. An empty
/// annotation fails outright; other pairs are refuted on `samples`.
pub fn visibility_check_with(a: &TreeAutomaton, reg: &DualityRegistry, samples: &[RegularTreeModel]) -> Visibility {
    if a.two_way {
        return Visibility::Unknown { open: vec![], samples: 0 };
    }
    let mut certs = Vec::new();
    let mut open = Vec::new();
    for (ci, c) in a.partition.iter().enumerate() {
        if !matches!(c.kind, ComponentKind::Existential | ComponentKind::Universal) {
            continue;
        }
        let moves = match component_moves(a, ci) {
            Ok(m) => m,
            Err(_) => {
                open.push((ci, Clause::new(), Clause::new()));
                continue;
            }
        };
        let exits: BTreeSet<Clause> = moves.iter().filter(|m| m.to.is_none()).map(|m| m.annot.clone()).collect();
        let annots: BTreeSet<Clause> = moves.into_iter().map(|m| m.annot).collect();
        if annots.len() > 1 && annots.contains(&Clause::new()) {
            // Prefer a partner that labels an exit move.
            let other = annots
                .iter()
                .filter(|x| !x.is_empty())
                .min_by_key(|x| (!exits.contains(*x), render(a, x)))
                .unwrap();
            return Visibility::Violated(VisibilityWitness {
                component: ci,
                left: Clause::new(),
                right: other.clone(),
                model: None,
            });
        }
        let list: Vec<&Clause> = annots.iter().collect();
        for (i, l) in list.iter().enumerate() {
            for r in &list[i + 1..] {
                let found = l.iter().find_map(|t| r.iter().find(|u| reg.are_dual(t, u)).map(|u| (*t, *u)));
                match found {
                    Some((theta, theta_bar)) => certs.push(Certificate {
                        component: ci,
                        left: (*l).clone(),
                        right: (*r).clone(),
                        theta,
                        theta_bar,
                    }),
                    None => {
                        if let Some(model) = refute(a, c.kind, l, r, samples) {
                            return Visibility::Violated(VisibilityWitness {
                                component: ci,
                                left: (*l).clone(),
                                right: (*r).clone(),
                                model: Some(model),
                            });
                        }
                        open.push((ci, (*l).clone(), (*r).clone()));
                    }
                }
            }
        }
    }
    if open.is_empty() {
        Visibility::Visible(certs)
    } else {
        Visibility::Unknown { open, samples: samples.len() }
    }
}

fn render(a: &TreeAutomaton, c: &Clause) -> Vec<String> {
    c.iter().map(|t| t.render(&a.states)).collect()
}

/// A sample on which both annotations hold (existential) or both fail
/// (universal): then no atom of one is the complement of an atom of the other.
fn refute(a: &TreeAutomaton, kind: ComponentKind, l: &Clause, r: &Clause, samples: &[RegularTreeModel]) -> Option<RegularTreeModel> {
    let combine = |c: &Clause| {
        if kind == ComponentKind::Existential {
            TransitionFormula::from_clause(c)
        } else {
            TransitionFormula::disj(c.iter().map(|&t| TransitionFormula::Atom(t)))
        }
    };
    let al = a.with_initial_formula(&combine(l));
    let ar = a.with_initial_formula(&combine(r));
    let want = kind == ComponentKind::Existential;
    samples
        .iter()
        .find(|m| accepts(&al, m).ok() == Some(want) && accepts(&ar, m).ok() == Some(want))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::{example_a, example_a_prime};

    #[test]
    fn example_a_violated() {
        let a = example_a();
        let qb = a.state_index("qb").unwrap();
        match visibility_check(&a, &DualityRegistry::new()) {
            Visibility::Violated(w) => {
                assert_eq!(w.left, Clause::new());
                assert_eq!(w.right, Clause::from([TreeAtom::dia(1, qb)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn example_a_prime_visible() {
        let (a, reg) = example_a_prime();
        let v = visibility_check(&a, &reg);
        assert!(v.is_visible(), "{v:?}");
    }

    #[test]
    fn example_a_prime_without_registry_is_not_visible() {
        let (a, _) = example_a_prime();
        assert!(!visibility_check(&a, &DualityRegistry::new()).is_visible());
    }
}
