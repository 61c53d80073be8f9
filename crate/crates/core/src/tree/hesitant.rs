use std::fmt;

use super::automaton::{ComponentKind, TreeAutomaton};
use super::formula::{AtomKind, DEFAULT_CLAUSE_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HesitantViolation {
    Uncovered { state: usize },
    Duplicated { state: usize },
    /// A transition of `from` names `to`, whose component is higher.
    OrderBreach { from: usize, to: usize },
    TransientSelfRef { state: usize },
    /// Own-component atom with a grade other than 1.
    GradedSelfLoop { state: usize, target: usize },
    /// Own-component atom of the wrong modality for the component type.
    WrongModality { state: usize, target: usize },
    MultipleOwnAtoms { state: usize },
    /// Upward component in a one-way automaton, or an upward own atom
    /// outside an upward component.
    UpwardMisuse { state: usize },
    UpInOneWay { state: usize },
    TooManyClauses { state: usize },
}

impl fmt::Display for HesitantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use HesitantViolation::*;
        match self {
            Uncovered { state } => write!(f, "state {state} is in no component"),
            Duplicated { state } => write!(f, "state {state} is in several components"),
            OrderBreach { from, to } => write!(f, "state {from} names higher state {to}"),
            TransientSelfRef { state } => write!(f, "transient state {state} names its own component"),
            GradedSelfLoop { state, target } => write!(f, "state {state} has a graded atom on {target}"),
            WrongModality { state, target } => write!(f, "state {state} reaches {target} with the wrong modality"),
            MultipleOwnAtoms { state } => write!(f, "a clause of state {state} has several own-component atoms"),
            UpwardMisuse { state } => write!(f, "upward structure misused at state {state}"),
            UpInOneWay { state } => write!(f, "state {state} moves up in a one-way automaton"),
            TooManyClauses { state } => write!(f, "normal form of state {state} exceeds the clause limit"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HesitantReport {
    pub kinds: Vec<ComponentKind>,
    pub violations: Vec<HesitantViolation>,
}

impl HesitantReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub hesitant: bool,
    pub polarised: bool,
    pub linear: bool,
    pub two_way: bool,
}

pub fn validate_hesitant(a: &TreeAutomaton) -> HesitantReport {
    validate_hesitant_with(a, DEFAULT_CLAUSE_LIMIT)
}

pub fn validate_hesitant_with(a: &TreeAutomaton, limit: usize) -> HesitantReport {
    use HesitantViolation::*;
    let mut v = Vec::new();
    let mut seen = vec![0usize; a.len()];
    for c in &a.partition {
        for &q in &c.states {
            if q < a.len() {
                seen[q] += 1;
            }
        }
    }
    for (q, &n) in seen.iter().enumerate() {
        if n == 0 {
            v.push(Uncovered { state: q });
        } else if n > 1 {
            v.push(Duplicated { state: q });
        }
    }
    let comp = a.component_of();
    for (i, c) in a.partition.iter().enumerate() {
        if c.kind == ComponentKind::Upward && !a.two_way {
            v.extend(c.states.iter().map(|&q| UpwardMisuse { state: q }));
        }
        for &q in &c.states {
            let mut push = |x: HesitantViolation| {
                if !v.contains(&x) {
                    v.push(x)
                }
            };
            for sigma in 0..a.letters() {
                for f in &a.delta[q][sigma] {
                    f.for_each_atom(&mut |t| {
                        if t.kind == AtomKind::Up && !a.two_way {
                            push(UpInOneWay { state: q });
                        }
                        match comp[t.state] {
                            Some(j) if j > i => push(OrderBreach { from: q, to: t.state }),
                            Some(j) if j == i => {
                                let want = match c.kind {
                                    ComponentKind::Transient => {
                                        push(TransientSelfRef { state: q });
                                        return;
                                    }
                                    ComponentKind::Existential => AtomKind::Dia,
                                    ComponentKind::Universal => AtomKind::Box,
                                    ComponentKind::Upward => AtomKind::Up,
                                };
                                if t.kind != want {
                                    push(if want == AtomKind::Up || t.kind == AtomKind::Up {
                                        UpwardMisuse { state: q }
                                    } else {
                                        WrongModality { state: q, target: t.state }
                                    });
                                } else if t.k != 1 {
                                    push(GradedSelfLoop { state: q, target: t.state });
                                }
                            }
                            _ => {}
                        }
                    });
                    let own = |atom: &super::formula::TreeAtom| comp[atom.state] == Some(i);
                    let clauses = match c.kind {
                        ComponentKind::Transient => continue,
                        ComponentKind::Universal => f.cnf(limit),
                        _ => f.dnf(limit),
                    };
                    match clauses {
                        Err(_) => push(TooManyClauses { state: q }),
                        Ok(cl) => {
                            if cl.iter().any(|cl| cl.iter().filter(|t| own(t)).count() > 1) {
                                push(MultipleOwnAtoms { state: q });
                            }
                        }
                    }
                }
            }
        }
    }
    HesitantReport { kinds: a.partition.iter().map(|c| c.kind).collect(), violations: v }
}

/// Existential states outside F and universal states inside F.
pub fn is_polarised(a: &TreeAutomaton) -> bool {
    a.partition.iter().all(|c| match c.kind {
        ComponentKind::Existential => c.states.iter().all(|&q| !a.accepting[q]),
        ComponentKind::Universal => c.states.iter().all(|&q| a.accepting[q]),
        _ => true,
    })
}

pub fn structural_report(a: &TreeAutomaton) -> StructuralReport {
    StructuralReport {
        hesitant: validate_hesitant(a).ok(),
        polarised: is_polarised(a),
        linear: a.partition.iter().all(|c| c.states.len() == 1),
        two_way: a.two_way,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::automaton::Component;
    use crate::tree::formula::{TransitionFormula as TF, TreeAtom};
    use crate::tree::fixtures::example_a;

    #[test]
    fn example_a_is_hesitant() {
        let a = example_a();
        let r = validate_hesitant(&a);
        assert!(r.ok(), "{:?}", r.violations);
        assert_eq!(
            r.kinds,
            vec![ComponentKind::Transient, ComponentKind::Transient, ComponentKind::Existential]
        );
        let s = structural_report(&a);
        assert!(s.hesitant && s.polarised && !s.linear && !s.two_way);
    }

    fn one_state(kind: ComponentKind, f: TF, accepting: bool) -> TreeAutomaton {
        let mut a = TreeAutomaton::new(["p".to_string()], false);
        let q = a.add_state("q", accepting);
        for s in 0..2 {
            a.set(q, s, f.clone());
        }
        a.partition = vec![Component { states: vec![q], kind }];
        a
    }

    #[test]
    fn graded_self_loop() {
        let a = one_state(ComponentKind::Existential, TF::Atom(TreeAtom::dia(2, 0)), false);
        assert_eq!(
            validate_hesitant(&a).violations,
            vec![HesitantViolation::GradedSelfLoop { state: 0, target: 0 }]
        );
    }

    #[test]
    fn order_breach() {
        let mut a = TreeAutomaton::new(Vec::<String>::new(), false);
        let q0 = a.add_state("q0", false);
        let q1 = a.add_state("q1", false);
        a.set(q0, 0, TF::Atom(TreeAtom::dia(1, q1)));
        a.set(q1, 0, TF::True);
        a.partition = vec![
            Component { states: vec![q0], kind: ComponentKind::Transient },
            Component { states: vec![q1], kind: ComponentKind::Transient },
        ];
        assert_eq!(validate_hesitant(&a).violations, vec![HesitantViolation::OrderBreach { from: 0, to: 1 }]);
    }

    #[test]
    fn other_violations() {
        let own = TF::Atom(TreeAtom::dia(1, 0));
        let a = one_state(ComponentKind::Transient, own.clone(), false);
        assert_eq!(validate_hesitant(&a).violations, vec![HesitantViolation::TransientSelfRef { state: 0 }]);
        let a = one_state(ComponentKind::Universal, own.clone(), true);
        assert_eq!(
            validate_hesitant(&a).violations,
            vec![HesitantViolation::WrongModality { state: 0, target: 0 }]
        );
        let a = one_state(ComponentKind::Universal, TF::Atom(TreeAtom::boxed(1, 0)).or(TF::Atom(TreeAtom::boxed(1, 0))), true);
        assert!(validate_hesitant(&a).ok());
        let a = one_state(ComponentKind::Upward, TF::Atom(TreeAtom::up(0)), false);
        let vs = validate_hesitant(&a).violations;
        assert!(vs.contains(&HesitantViolation::UpwardMisuse { state: 0 }));
        assert!(vs.contains(&HesitantViolation::UpInOneWay { state: 0 }));
    }

    #[test]
    fn accepting_existential_is_not_polarised() {
        let a = one_state(ComponentKind::Existential, TF::Atom(TreeAtom::dia(1, 0)), true);
        assert!(validate_hesitant(&a).ok());
        assert!(!structural_report(&a).polarised);
    }
}
