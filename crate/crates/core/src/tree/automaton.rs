use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::Valuation;

use super::formula::TransitionFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Transient,
    Existential,
    Universal,
    Upward,
}

impl ComponentKind {
    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Transient => "transient",
            ComponentKind::Existential => "existential",
            ComponentKind::Universal => "universal",
            ComponentKind::Upward => "upward",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "transient" => ComponentKind::Transient,
            "existential" => ComponentKind::Existential,
            "universal" => ComponentKind::Universal,
            "upward" => ComponentKind::Upward,
            other => return Err(Error::Json(format!("unknown component type {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub states: Vec<usize>,
    pub kind: ComponentKind,
}

/// Graded alternating tree automaton over Σ = 2^ap.
///
/// Letters are bitmasks over `ap` (bit i set iff `ap[i]` ∈ σ).
/// `delta[q][σ][r]` is the transition at a non-root node (`r = 0`) or at the
/// root (`r = 1`); one-way automata keep both entries equal. `partition`
/// lists components lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeAutomaton {
    pub states: Vec<String>,
    pub ap: Vec<String>,
    pub two_way: bool,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub partition: Vec<Component>,
    pub delta: Vec<Vec<[TransitionFormula; 2]>>,
}

pub const NONROOT: usize = 0;
pub const ROOT: usize = 1;

impl TreeAutomaton {
    /// Automaton with no states; `ap` is sorted and deduplicated.
    pub fn new(ap: impl IntoIterator<Item = String>, two_way: bool) -> Self {
        let ap: Vec<String> = ap.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        TreeAutomaton {
            states: vec![],
            ap,
            two_way,
            initial: 0,
            accepting: vec![],
            partition: vec![],
            delta: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn letters(&self) -> usize {
        1 << self.ap.len()
    }

    /// Adds a state whose transitions are all ⊥.
    pub fn add_state(&mut self, name: impl Into<String>, accepting: bool) -> usize {
        self.states.push(name.into());
        self.accepting.push(accepting);
        self.delta.push(vec![[TransitionFormula::False, TransitionFormula::False]; self.letters()]);
        self.states.len() - 1
    }

    /// Set the transition for both root flags.
    pub fn set(&mut self, q: usize, sigma: usize, f: TransitionFormula) {
        self.delta[q][sigma] = [f.clone(), f];
    }

    pub fn set_rooted(&mut self, q: usize, sigma: usize, root: bool, f: TransitionFormula) {
        self.delta[q][sigma][usize::from(root)] = f;
    }

    pub fn transition(&self, q: usize, sigma: usize, root: bool) -> &TransitionFormula {
        &self.delta[q][sigma][usize::from(root)]
    }

    /// Letter of a node label; propositions outside `ap` are ignored.
    pub fn letter_of(&self, label: &Valuation) -> usize {
        self.ap.iter().enumerate().filter(|(_, p)| label.contains(*p)).map(|(i, _)| 1 << i).sum()
    }

    pub fn valuation(&self, sigma: usize) -> Valuation {
        self.ap.iter().enumerate().filter(|(i, _)| sigma >> i & 1 == 1).map(|(_, p)| p.clone()).collect()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Component index of each state, if covered.
    pub fn component_of(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.len()];
        for (i, c) in self.partition.iter().enumerate() {
            for &q in &c.states {
                if q < out.len() && out[q].is_none() {
                    out[q] = Some(i);
                }
            }
        }
        out
    }

    /// Copy the states, transitions and partition of `other` (same `ap`) into
    /// `self`, prefixing state names. Returns the index offset. The embedded
    /// components go after the existing ones.
    pub fn embed(&mut self, other: &TreeAutomaton, prefix: &str) -> usize {
        assert_eq!(self.ap, other.ap, "embedding needs a common alphabet");
        let off = self.len();
        for q in 0..other.len() {
            self.states.push(format!("{prefix}{}", other.states[q]));
            self.accepting.push(other.accepting[q]);
            let shift = |s: usize| s + off;
            self.delta.push(
                other.delta[q]
                    .iter()
                    .map(|[a, b]| [a.map_states(&shift), b.map_states(&shift)])
                    .collect(),
            );
        }
        for c in &other.partition {
            self.partition.push(Component { states: c.states.iter().map(|q| q + off).collect(), kind: c.kind });
        }
        self.two_way |= other.two_way;
        off
    }

    /// `A^θ`: a copy whose fresh transient initial state reads `f` on every
    /// letter.
    pub fn with_initial_formula(&self, f: &TransitionFormula) -> TreeAutomaton {
        let mut out = self.clone();
        let mut name = "init".to_string();
        while out.state_index(&name).is_some() {
            name.push('\'');
        }
        let q = out.add_state(name, false);
        for s in 0..out.letters() {
            out.set(q, s, f.clone());
        }
        out.initial = q;
        out.partition.push(Component { states: vec![q], kind: ComponentKind::Transient });
        out
    }

    pub fn to_json(&self) -> Value {
        let mut delta = Vec::new();
        for q in 0..self.len() {
            for sigma in 0..self.letters() {
                let [n, r] = &self.delta[q][sigma];
                let sig: Vec<String> = self.valuation(sigma).into_iter().collect();
                let entry = |root: &str, f: &TransitionFormula| {
                    json!({"state": self.states[q], "sigma": sig, "root": root, "formula": f.to_json(&self.states)})
                };
                if n == r {
                    if *n != TransitionFormula::False {
                        delta.push(entry("any", n));
                    }
                } else {
                    delta.push(entry("nonroot", n));
                    delta.push(entry("root", r));
                }
            }
        }
        json!({
            "states": self.states,
            "ap": self.ap,
            "two_way": self.two_way,
            "initial": self.states[self.initial],
            "F": (0..self.len()).filter(|&q| self.accepting[q]).map(|q| &self.states[q]).collect::<Vec<_>>(),
            "partition": self.partition.iter().map(|c| json!({
                "states": c.states.iter().map(|&q| &self.states[q]).collect::<Vec<_>>(),
                "type": c.kind.name(),
            })).collect::<Vec<_>>(),
            "delta": delta,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let states: Vec<String> = serde_json::from_value(v["states"].clone())?;
        let ap: Vec<String> = serde_json::from_value(v["ap"].clone())?;
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate state {s}")));
            }
        }
        let lookup = |x: &Value| -> Result<usize> {
            let name = x.as_str().ok_or_else(|| Error::Json(format!("expected state name, got {x}")))?;
            index.get(name).copied().ok_or_else(|| Error::InvalidAutomaton(format!("unknown state {name}")))
        };
        let mut a = TreeAutomaton::new(ap, v["two_way"].as_bool().unwrap_or(false));
        for s in &states {
            a.add_state(s.clone(), false);
        }
        a.initial = lookup(&v["initial"])?;
        for f in v["F"].as_array().into_iter().flatten() {
            a.accepting[lookup(f)?] = true;
        }
        for c in v["partition"].as_array().into_iter().flatten() {
            let kind = ComponentKind::parse(c["type"].as_str().unwrap_or(""))?;
            let states = c["states"].as_array().into_iter().flatten().map(&lookup).collect::<Result<_>>()?;
            a.partition.push(Component { states, kind });
        }
        for d in v["delta"].as_array().into_iter().flatten() {
            let q = lookup(&d["state"])?;
            let sigma: Valuation = serde_json::from_value(d["sigma"].clone())?;
            if let Some(p) = sigma.iter().find(|p| !a.ap.contains(p)) {
                return Err(Error::InvalidAutomaton(format!("letter mentions {p} outside ap")));
            }
            let s = a.letter_of(&sigma);
            let f = TransitionFormula::from_json(&d["formula"], &index)?;
            match d["root"].as_str().unwrap_or("any") {
                "any" => a.set(q, s, f),
                "root" => a.set_rooted(q, s, true, f),
                "nonroot" => a.set_rooted(q, s, false, f),
                other => return Err(Error::Json(format!("unknown root flag {other}"))),
            }
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::formula::TreeAtom;

    #[test]
    fn letters_and_json() {
        let mut a = TreeAutomaton::new(["b".to_string(), "a".to_string()], true);
        let q0 = a.add_state("q0", false);
        let q1 = a.add_state("q1", true);
        assert_eq!(a.ap, vec!["a", "b"]);
        let ab: Valuation = ["a", "b", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(a.letter_of(&ab), 3);
        assert_eq!(a.valuation(2), Valuation::from(["b".to_string()]));
        a.set(q0, 1, TransitionFormula::Atom(TreeAtom::dia(2, q1)));
        a.set_rooted(q1, 0, false, TransitionFormula::Atom(TreeAtom::up(q0)));
        a.set_rooted(q1, 0, true, TransitionFormula::True);
        a.partition = vec![
            Component { states: vec![q1], kind: ComponentKind::Upward },
            Component { states: vec![q0], kind: ComponentKind::Transient },
        ];
        let back = TreeAutomaton::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn unknown_state_rejected() {
        let v = json!({"states": ["q"], "ap": [], "initial": "r", "F": [], "partition": [], "delta": []});
        assert!(TreeAutomaton::from_json(&v).is_err());
    }
}
