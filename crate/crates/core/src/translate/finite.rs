use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::rewrite::{eliminate_release_finite, skeletonize_any};
use crate::formula::{
    and_all, count, exists, forall, in_fragment, not, not_fold, tt, Fragment, GuardLetter, GuardedExists,
    PathFormula, StateFormula, StateRef,
};
use crate::word::{ltl_finite_to_dfa, Acceptance, Branching, Composite, WordAutomaton};

/// Replace every finite-path existential of a CTL*f formula: `E^f X̃ψ`
/// becomes ⊤, releases are eliminated, and each remaining body becomes a
/// guarded existential whose automaton accepts the infinite paths having a
/// good finite prefix.
pub fn ctlsf_bridge(phi: &StateRef) -> Result<StateRef> {
    if !in_fragment(phi, Fragment::CTLStarF) {
        return Err(Error::WrongFragment(format!("{phi} is not CTL*f")));
    }
    bridge(phi)
}

fn bridge(s: &StateRef) -> Result<StateRef> {
    use StateFormula as S;
    Ok(match &**s {
        S::True | S::False | S::Atom(_) => s.clone(),
        S::Not(a) => not(bridge(a)?),
        S::And(a, b) => Arc::new(S::And(bridge(a)?, bridge(b)?)),
        S::Or(a, b) => Arc::new(S::Or(bridge(a)?, bridge(b)?)),
        S::Count(k, a) => count(*k, bridge(a)?),
        S::CoCount(k, a) => Arc::new(S::CoCount(*k, bridge(a)?)),
        S::Exists(p) | S::Forall(p) => {
            let mut err = None;
            let body = p.map_states(&mut |x| {
                bridge(x).unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    x.clone()
                })
            });
            if let Some(e) = err {
                return Err(e);
            }
            if matches!(**s, S::Exists(_)) {
                exists(body)
            } else {
                forall(body)
            }
        }
        S::ExistsFin(p) => {
            let body = eliminate_release_finite(p);
            if matches!(*body, PathFormula::WeakNext(_)) {
                return Ok(tt());
            }
            guarded(&body)?
        }
        S::Guarded(_) => s.clone(),
    })
}

fn guarded(body: &PathFormula) -> Result<StateRef> {
    let sk = skeletonize_any(body);
    let mut bound = Vec::new();
    for (name, f) in &sk.binding {
        bound.push((name.clone(), bridge(f)?));
    }
    let fresh: BTreeSet<String> = bound.iter().map(|(n, _)| n.clone()).collect();
    let atoms = sk.ltl.atoms();
    let ap: Vec<String> = atoms.iter().filter(|p| !fresh.contains(*p)).cloned().collect();
    let dfa = ltl_finite_to_dfa(&sk.ltl, &atoms)?;
    // Transitions into an accepting DFA state go to a looping sink instead.
    let mut names = dfa.states.clone();
    names.push("sink".into());
    let sink = dfa.len();
    let letter = |v: &BTreeSet<String>| -> GuardLetter {
        let (sigma, annot) = v.iter().cloned().partition(|p| !fresh.contains(p));
        Composite { sigma, annot }
    };
    let alphabet: Vec<GuardLetter> = dfa.alphabet.iter().map(letter).collect();
    let mut w = WordAutomaton::new(names, alphabet.clone(), dfa.initial, Acceptance::CoBuchi, Branching::Existential);
    for q in 0..sink {
        w.accepting[q] = true;
    }
    for (q, a, t) in dfa.transitions() {
        let l = w.letter_index(&alphabet[a]).expect("letter");
        w.add_transition(q, l, if dfa.accepting[t] { sink } else { t });
    }
    for l in 0..w.alphabet.len() {
        w.add_transition(sink, l, sink);
    }
    let mut guards = BTreeMap::new();
    for l in &w.alphabet {
        guards.entry(l.annot.clone()).or_insert_with(|| {
            and_all(bound.iter().map(|(n, f)| if l.annot.contains(n) { f.clone() } else { not_fold(f.clone()) }))
        });
    }
    Ok(Arc::new(StateFormula::Guarded(Arc::new(GuardedExists { ap, automaton: w, guards }))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{mc_ctlsf, mc_ctlspm};
    use crate::formula::parse_state;
    use crate::model::{random_model, ModelConfig};

    #[test]
    fn weak_next_is_true() {
        let f = ctlsf_bridge(&parse_state("Ef wX p").unwrap()).unwrap();
        assert_eq!(*f, StateFormula::True);
    }

    #[test]
    fn agrees_with_finite_semantics() {
        let cfg = ModelConfig { max_nodes: 4, max_branch: 2, ap: vec!["p".into(), "q".into()] };
        for text in ["Ef p", "Ef (p R q)", "Ef X q", "!Ef (p U (q & wX false))", "Ef (p & X Ef (X !q))", "D2 Ef X X p"] {
            let phi = parse_state(text).unwrap();
            let b = ctlsf_bridge(&phi).unwrap();
            for seed in 0..80 {
                let m = random_model(seed, &cfg);
                assert_eq!(mc_ctlspm(&m, &b).unwrap(), mc_ctlsf(&m, &phi).unwrap(), "{text} on {m:?}");
            }
        }
    }
}
