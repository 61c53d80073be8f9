use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::word::{Acceptance, Branching, Composite, WordAutomaton};

use super::automaton::{ComponentKind, TreeAutomaton};
use super::formula::{Clause, TreeAtom, DEFAULT_CLAUSE_LIMIT};

/// The ω-word automaton `A^q_exit` of a component, over letters `(σ, C)`
/// whose annotation strings name the atoms in `atoms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearization {
    pub automaton: WordAutomaton<Composite<String>>,
    pub atoms: BTreeMap<String, TreeAtom>,
    pub component: usize,
    /// Automaton state of each component state, in component order.
    pub state_map: Vec<(usize, usize)>,
    pub exit: usize,
}

/// One clause of a component transition: from `from` on `sigma`, either to a
/// component state or out of the component, with the outside atoms `annot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ComponentMove {
    pub from: usize,
    pub sigma: usize,
    pub to: Option<usize>,
    pub annot: Clause,
}

/// Syntactic DNF (existential) or CNF (universal) clauses of every transition of a
/// non-transient component of a one-way automaton.
pub(crate) fn component_moves(a: &TreeAutomaton, ci: usize) -> Result<Vec<ComponentMove>> {
    if a.two_way {
        return Err(Error::TwoWayUnsupported);
    }
    let c = &a.partition[ci];
    let existential = match c.kind {
        ComponentKind::Existential => true,
        ComponentKind::Universal => false,
        ComponentKind::Upward => return Err(Error::TwoWayUnsupported),
        ComponentKind::Transient => {
            return Err(Error::TransientComponent(c.states.iter().map(|&q| a.states[q].clone()).collect::<Vec<_>>().join(",")))
        }
    };
    let inside: BTreeSet<usize> = c.states.iter().copied().collect();
    let mut out = Vec::new();
    for &from in &c.states {
        for sigma in 0..a.letters() {
            let f = a.transition(from, sigma, false);
            let clauses = if existential {
                f.dnf_syntactic(DEFAULT_CLAUSE_LIMIT)?
            } else {
                f.cnf_syntactic(DEFAULT_CLAUSE_LIMIT)?
            };
            for clause in clauses {
                let (own, annot): (Clause, Clause) = clause.into_iter().partition(|t| inside.contains(&t.state));
                let to = match own.len() {
                    0 => None,
                    1 => Some(own.first().unwrap().state),
                    _ => return Err(Error::NotLinearHesitant(format!("clause of {} with several own atoms", a.states[from]))),
                };
                out.push(ComponentMove { from, sigma, to, annot });
            }
        }
    }
    Ok(out)
}

/// Linearise the component of `q`. Existential components give an NCA,
/// universal ones a UBA; both have F = the component and a fresh looping
/// exit state. The alphabet is every letter on a component transition plus
/// `(σ, ∅)` for each σ.
pub fn linearize_component(a: &TreeAutomaton, q: usize) -> Result<Linearization> {
    let ci = a.component_of()[q].ok_or_else(|| Error::InvalidAutomaton(format!("state {} in no component", a.states[q])))?;
    let moves = component_moves(a, ci)?;
    let c = &a.partition[ci];
    let render = |annot: &Clause| -> BTreeSet<String> { annot.iter().map(|t| t.render(&a.states)).collect() };
    let mut atoms = BTreeMap::new();
    let mut alphabet = BTreeSet::new();
    for s in 0..a.letters() {
        alphabet.insert(Composite { sigma: a.valuation(s), annot: BTreeSet::new() });
    }
    for m in &moves {
        for t in &m.annot {
            atoms.insert(t.render(&a.states), *t);
        }
        alphabet.insert(Composite { sigma: a.valuation(m.sigma), annot: render(&m.annot) });
    }
    let mut names: Vec<String> = c.states.iter().map(|&s| a.states[s].clone()).collect();
    let mut exit_name = "q_exit".to_string();
    while names.contains(&exit_name) {
        exit_name.push('\'');
    }
    names.push(exit_name);
    let exit = c.states.len();
    let local = |s: usize| c.states.iter().position(|&x| x == s).unwrap();
    let (acceptance, branching) = match c.kind {
        ComponentKind::Existential => (Acceptance::CoBuchi, Branching::Existential),
        _ => (Acceptance::Buchi, Branching::Universal),
    };
    let mut w = WordAutomaton::new(names, alphabet, local(q), acceptance, branching);
    for i in 0..exit {
        w.accepting[i] = true;
    }
    for m in &moves {
        let letter = Composite { sigma: a.valuation(m.sigma), annot: render(&m.annot) };
        let l = w.letter_index(&letter).expect("letter collected");
        w.add_transition(local(m.from), l, m.to.map_or(exit, local));
    }
    for l in 0..w.alphabet.len() {
        w.add_transition(exit, l, exit);
    }
    let state_map = c.states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Ok(Linearization { automaton: w, atoms, component: ci, state_map, exit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::{example_a, example_a_prime};
    use crate::word::{is_counter_free, is_looping};

    fn letter(sigma: &[&str], annot: &[&str]) -> Composite<String> {
        Composite {
            sigma: sigma.iter().map(|s| s.to_string()).collect(),
            annot: annot.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn example_a_linearisation() {
        let a = example_a();
        let lin = linearize_component(&a, a.initial).unwrap();
        let w = &lin.automaton;
        assert_eq!(w.kind(), "NCA");
        let (qi, q, exit) = (0, 1, 2);
        assert_eq!(w.states, vec!["qI", "q", "q_exit"]);
        assert_eq!(w.initial, qi);
        let mut moves: Vec<(usize, Composite<String>, usize)> = w
            .transitions()
            .filter(|&(s, _, _)| s != exit)
            .map(|(s, l, t)| (s, w.alphabet[l].clone(), t))
            .collect();
        moves.sort();
        assert_eq!(
            moves,
            vec![
                (qi, letter(&[], &["(<>,qa)"]), q),
                (qi, letter(&[], &["(<>,qb)"]), exit),
                (q, letter(&[], &[]), qi),
            ]
        );
        assert!((0..w.alphabet.len()).all(|l| w.delta[exit][l] == vec![exit]));
        assert_eq!(is_looping(w), Some(exit));
        assert!(is_counter_free(w).unwrap().is_none());
    }

    #[test]
    fn example_a_prime_counts() {
        let (a, _) = example_a_prime();
        let lin = linearize_component(&a, a.initial).unwrap();
        let w = &lin.automaton;
        assert!(is_looping(w).is_some());
        let wit = is_counter_free(w).unwrap().expect("counter");
        assert_eq!(wit.state, 0);
        assert_eq!(wit.power, 2);
        assert_eq!(wit.word, vec![letter(&[], &["(<>,qa)", "(<>,qb)"])]);
    }

    #[test]
    fn transient_rejected() {
        let a = example_a();
        let qa = a.state_index("qa").unwrap();
        assert!(matches!(linearize_component(&a, qa), Err(Error::TransientComponent(_))));
    }
}
