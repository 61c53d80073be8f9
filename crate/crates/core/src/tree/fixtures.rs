//! The two hand-built automata for the language of trees with an even-length
//! ∅-labelled access path, `{a}`-children at even positions and a final
//! `{b}`-child.

use crate::formula::Valuation;

use super::automaton::{Component, ComponentKind, TreeAutomaton};
use super::dual::{DualityRegistry, Provenance};
use super::formula::{TransitionFormula as TF, TreeAtom};

fn dia(q: usize) -> TF {
    TF::Atom(TreeAtom::dia(1, q))
}

fn boxed(q: usize) -> TF {
    TF::Atom(TreeAtom::boxed(1, q))
}

fn ab() -> TreeAutomaton {
    TreeAutomaton::new(["a".to_string(), "b".to_string()], false)
}

/// Set `q` to ⊤ on letters satisfying `test`, ⊥ elsewhere.
fn literal(a: &mut TreeAutomaton, q: usize, test: impl Fn(&Valuation) -> bool) {
    for s in 0..a.letters() {
        let f = if test(&a.valuation(s)) { TF::True } else { TF::False };
        a.set(q, s, f);
    }
}

/// Counter-free but not visible: components `{qI, q}` (existential),
/// `{qb}` and `{qa}` (transient).
pub fn example_a() -> TreeAutomaton {
    let mut a = ab();
    let qi = a.add_state("qI", false);
    let q = a.add_state("q", false);
    let qa = a.add_state("qa", false);
    let qb = a.add_state("qb", false);
    a.initial = qi;
    a.set(qi, 0, dia(q).and(dia(qa)).or(dia(qb)));
    a.set(q, 0, dia(qi));
    literal(&mut a, qa, |s| s.contains("a"));
    literal(&mut a, qb, |s| s.contains("b"));
    a.partition = vec![
        Component { states: vec![qb], kind: ComponentKind::Transient },
        Component { states: vec![qa], kind: ComponentKind::Transient },
        Component { states: vec![qi, q], kind: ComponentKind::Existential },
    ];
    a
}

/// The visible refinement of [`example_a`], with the registry pairing
/// `(◇,qa)↔(□,q¬a)` and `(◇,qb)↔(□,q¬b)`. Its linearisation counts.
pub fn example_a_prime() -> (TreeAutomaton, DualityRegistry) {
    let mut a = ab();
    let qi = a.add_state("qI", false);
    let q = a.add_state("q", false);
    let qa = a.add_state("qa", false);
    let qb = a.add_state("qb", false);
    let qna = a.add_state("q!a", false);
    let qnb = a.add_state("q!b", false);
    a.initial = qi;
    a.set(
        qi,
        0,
        TF::disj([
            TF::conj([dia(q), dia(qa), dia(qb)]),
            TF::conj([dia(q), dia(qa), boxed(qnb)]),
            TF::conj([dia(qa), dia(qb)]),
            TF::conj([boxed(qna), dia(qb)]),
        ]),
    );
    a.set(
        q,
        0,
        TF::disj([
            TF::conj([dia(qi), dia(qa), dia(qb)]),
            TF::conj([dia(qi), dia(qa), boxed(qnb)]),
            TF::conj([dia(qi), boxed(qna), dia(qb)]),
            TF::conj([dia(qi), boxed(qna), boxed(qnb)]),
        ]),
    );
    literal(&mut a, qa, |s| s.contains("a"));
    literal(&mut a, qb, |s| s.contains("b"));
    literal(&mut a, qna, |s| !s.contains("a"));
    literal(&mut a, qnb, |s| !s.contains("b"));
    a.partition = vec![
        Component { states: vec![qnb], kind: ComponentKind::Transient },
        Component { states: vec![qna], kind: ComponentKind::Transient },
        Component { states: vec![qb], kind: ComponentKind::Transient },
        Component { states: vec![qa], kind: ComponentKind::Transient },
        Component { states: vec![qi, q], kind: ComponentKind::Existential },
    ];
    let mut reg = DualityRegistry::new();
    reg.insert(TreeAtom::dia(1, qa), TreeAtom::boxed(1, qna), Provenance::ByConstruction);
    reg.insert(TreeAtom::dia(1, qb), TreeAtom::boxed(1, qnb), Provenance::ByConstruction);
    (a, reg)
}
