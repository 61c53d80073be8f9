use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::automaton::{Component, ComponentKind, TreeAutomaton};
use super::formula::TreeAtom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    ByConstruction,
    Unverified,
}

/// Symmetric pairing of atoms of one automaton whose languages are
/// complements of each other.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityRegistry {
    pairs: BTreeMap<TreeAtom, (TreeAtom, Provenance)>,
}

impl DualityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: TreeAtom, b: TreeAtom, provenance: Provenance) {
        self.pairs.insert(a, (b, provenance));
        self.pairs.insert(b, (a, provenance));
    }

    pub fn partner(&self, a: &TreeAtom) -> Option<(TreeAtom, Provenance)> {
        self.pairs.get(a).copied()
    }

    pub fn are_dual(&self, a: &TreeAtom, b: &TreeAtom) -> bool {
        self.pairs.get(a).is_some_and(|(x, _)| x == b)
    }

    /// Each pair once, smaller atom first.
    pub fn pairs(&self) -> impl Iterator<Item = (TreeAtom, TreeAtom, Provenance)> + '_ {
        self.pairs.iter().filter(|(a, (b, _))| a <= &b).map(|(a, (b, p))| (*a, *b, *p))
    }

    pub fn len(&self) -> usize {
        self.pairs().count()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn shifted(&self, off: usize) -> Self {
        let mut out = Self::new();
        for (a, b, p) in self.pairs() {
            out.insert(TreeAtom { state: a.state + off, ..a }, TreeAtom { state: b.state + off, ..b }, p);
        }
        out
    }

    /// The registry of the dual automaton: every atom is replaced by its dual.
    pub fn dualized(&self) -> Self {
        let mut out = Self::new();
        for (a, b, p) in self.pairs() {
            out.insert(a.dual(), b.dual(), p);
        }
        out
    }

    pub fn extend(&mut self, other: &DualityRegistry) {
        for (a, b, p) in other.pairs() {
            self.insert(a, b, p);
        }
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        Value::Array(
            self.pairs()
                .map(|(a, b, p)| {
                    json!({
                        "left": a.render(names),
                        "right": b.render(names),
                        "provenance": match p { Provenance::ByConstruction => "by_construction", Provenance::Unverified => "unverified" },
                    })
                })
                .collect(),
        )
    }
}

impl DualityRegistry {
    /// Inverse of [`DualityRegistry::to_json`], with state names resolved
    /// through `names`.
    pub fn from_json(v: &Value, names: &[String]) -> Result<Self> {
        let mut reg = DualityRegistry::new();
        let arr = v.as_array().ok_or_else(|| Error::Json(format!("registry must be an array, got {v}")))?;
        for e in arr {
            let side = |key: &str| -> Result<TreeAtom> {
                let text = e[key].as_str().ok_or_else(|| Error::Json(format!("registry entry without {key}")))?;
                TreeAtom::parse(text, names)
            };
            let provenance = match e["provenance"].as_str() {
                Some("unverified") => Provenance::Unverified,
                _ => Provenance::ByConstruction,
            };
            reg.insert(side("left")?, side("right")?, provenance);
        }
        Ok(reg)
    }
}

/// The dual automaton: complemented F, dual transitions, and existential
/// and universal components swapped. It accepts the complement language.
pub fn dualize_tree(a: &TreeAutomaton) -> Result<TreeAutomaton> {
    if a.two_way {
        return Err(Error::TwoWayUnsupported);
    }
    let mut d = a.clone();
    d.accepting = a.accepting.iter().map(|f| !f).collect();
    for row in d.delta.iter_mut() {
        for entry in row.iter_mut() {
            for f in entry.iter_mut() {
                *f = f.dual();
            }
        }
    }
    d.partition = a
        .partition
        .iter()
        .map(|c| Component {
            states: c.states.clone(),
            kind: match c.kind {
                ComponentKind::Existential => ComponentKind::Universal,
                ComponentKind::Universal => ComponentKind::Existential,
                k => k,
            },
        })
        .collect();
    Ok(d)
}

/// Dualise an automaton together with its registry.
pub fn dualize_with_registry(a: &TreeAutomaton, reg: &DualityRegistry) -> Result<(TreeAutomaton, DualityRegistry)> {
    Ok((dualize_tree(a)?, reg.dualized()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::example_a;
    use crate::tree::formula::TransitionFormula as TF;

    #[test]
    fn registry_json_round_trip() {
        let (a, reg) = crate::tree::fixtures::example_a_prime();
        let back = DualityRegistry::from_json(&reg.to_json(&a.states), &a.states).unwrap();
        assert_eq!(back, reg);
    }

    #[test]
    fn diamond_becomes_box() {
        let a = example_a();
        let d = dualize_tree(&a).unwrap();
        let q = a.state_index("q").unwrap();
        let qi = a.state_index("qI").unwrap();
        assert_eq!(*d.transition(q, 0, false), TF::Atom(TreeAtom::boxed(1, qi)));
        assert_eq!(*d.transition(q, 1, false), TF::True);
        assert_eq!(d.partition[2].kind, ComponentKind::Universal);
        assert!(d.accepting.iter().all(|&f| f));
    }

    #[test]
    fn involution() {
        let a = example_a();
        assert_eq!(dualize_tree(&dualize_tree(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn registry_is_symmetric() {
        let mut r = DualityRegistry::new();
        r.insert(TreeAtom::dia(1, 2), TreeAtom::boxed(1, 4), Provenance::ByConstruction);
        assert!(r.are_dual(&TreeAtom::boxed(1, 4), &TreeAtom::dia(1, 2)));
        assert_eq!(r.len(), 1);
        let d = r.dualized();
        assert!(d.are_dual(&TreeAtom::boxed(1, 2), &TreeAtom::dia(1, 4)));
        assert!(r.shifted(3).are_dual(&TreeAtom::dia(1, 5), &TreeAtom::boxed(1, 7)));
    }

    #[test]
    fn two_way_rejected() {
        let mut a = example_a();
        a.two_way = true;
        assert_eq!(dualize_tree(&a), Err(Error::TwoWayUnsupported));
    }
}
