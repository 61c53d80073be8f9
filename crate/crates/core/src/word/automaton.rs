use std::collections::BTreeSet;
use std::fmt::Debug;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::util::{on_cycle, reachable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Acceptance {
    Buchi,
    CoBuchi,
    FiniteAccept,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branching {
    Existential,
    Universal,
    Deterministic,
}

/// Letter types usable in automata: ordered, hashable and JSON-encodable.
pub trait Letter: Clone + Ord + std::hash::Hash + Debug {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Letter for String {
    fn to_json(&self) -> Value {
        Value::String(self.clone())
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_str().map(str::to_string).ok_or_else(|| Error::Json(format!("expected string, got {v}")))
    }
}

impl Letter for BTreeSet<String> {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(|s| Value::String(s.clone())).collect())
    }
    fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Json(format!("expected array, got {v}")))?;
        arr.iter().map(String::from_json).collect()
    }
}

/// A pair `(σ, C)`: a node label and an annotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composite<A> {
    pub sigma: BTreeSet<String>,
    pub annot: BTreeSet<A>,
}

impl<A: Letter> Letter for Composite<A> {
    fn to_json(&self) -> Value {
        json!({
            "sigma": self.sigma.to_json(),
            "annot": Value::Array(self.annot.iter().map(A::to_json).collect()),
        })
    }
    fn from_json(v: &Value) -> Result<Self> {
        let sigma = BTreeSet::<String>::from_json(&v["sigma"])?;
        let annot = v["annot"]
            .as_array()
            .ok_or_else(|| Error::Json("composite letter without annot".into()))?
            .iter()
            .map(A::from_json)
            .collect::<Result<_>>()?;
        Ok(Composite { sigma, annot })
    }
}

/// Finite or ω-word automaton. `accepting` holds the set F, read as final
/// states (Büchi, finite) or as rejecting states (co-Büchi).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordAutomaton<L> {
    pub states: Vec<String>,
    pub alphabet: Vec<L>,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub acceptance: Acceptance,
    pub branching: Branching,
    /// `delta[q][a]`: sorted successor list of state q on letter index a.
    pub delta: Vec<Vec<Vec<usize>>>,
}

/// Ultimately periodic word `u·v^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWord<L> {
    pub prefix: Vec<L>,
    pub cycle: Vec<L>,
}

impl<L: Letter> WordAutomaton<L> {
    /// Automaton with the given states and no transitions. The alphabet is
    /// sorted and deduplicated.
    pub fn new(
        states: Vec<String>,
        alphabet: impl IntoIterator<Item = L>,
        initial: usize,
        acceptance: Acceptance,
        branching: Branching,
    ) -> Self {
        let alphabet: Vec<L> = alphabet.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = states.len();
        WordAutomaton {
            delta: vec![vec![Vec::new(); alphabet.len()]; n],
            accepting: vec![false; n],
            states,
            alphabet,
            initial,
            acceptance,
            branching,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn letter_index(&self, a: &L) -> Option<usize> {
        self.alphabet.binary_search(a).ok()
    }

    pub fn add_state(&mut self, name: String, accepting: bool) -> usize {
        self.states.push(name);
        self.accepting.push(accepting);
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.states.len() - 1
    }

    pub fn add_transition(&mut self, q: usize, a: usize, t: usize) {
        let succ = &mut self.delta[q][a];
        if let Err(pos) = succ.binary_search(&t) {
            succ.insert(pos, t);
        }
    }

    pub fn add_transition_letter(&mut self, q: usize, a: &L, t: usize) -> Result<()> {
        let i = self
            .letter_index(a)
            .ok_or_else(|| Error::LetterOutOfAlphabet(format!("{a:?}")))?;
        self.add_transition(q, i, t);
        Ok(())
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter().enumerate().flat_map(move |(a, ts)| ts.iter().map(move |&t| (q, a, t)))
        })
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(|ts| ts.len() <= 1))
    }

    /// Conventional short name of the acceptance/branching pair.
    pub fn kind(&self) -> &'static str {
        use Acceptance::*;
        use Branching::*;
        match (self.acceptance, self.branching) {
            (Buchi, Existential) => "NBA",
            (Buchi, Universal) => "UBA",
            (Buchi, Deterministic) => "DBA",
            (CoBuchi, Existential) => "NCA",
            (CoBuchi, Universal) => "UCA",
            (CoBuchi, Deterministic) => "DCA",
            (FiniteAccept, Deterministic) => "DFA",
            (FiniteAccept, _) => "NFA",
        }
    }

    /// Rename letters; letters mapped to the same image are merged.
    pub fn map_letters<M: Letter>(&self, f: impl Fn(&L) -> M) -> WordAutomaton<M> {
        let mut out = WordAutomaton::new(
            self.states.clone(),
            self.alphabet.iter().map(&f),
            self.initial,
            self.acceptance,
            self.branching,
        );
        out.accepting = self.accepting.clone();
        for (q, a, t) in self.transitions() {
            let b = out.letter_index(&f(&self.alphabet[a])).expect("image letter");
            out.add_transition(q, b, t);
        }
        out
    }

    /// Keep only states reachable from the initial state.
    pub fn trim(&self) -> Self {
        let succ: Vec<Vec<usize>> = self
            .delta
            .iter()
            .map(|row| row.iter().flatten().copied().collect())
            .collect();
        let keep = reachable(&succ, self.initial);
        let mut map = vec![usize::MAX; self.len()];
        let mut next = 0;
        for q in 0..self.len() {
            if keep[q] {
                map[q] = next;
                next += 1;
            }
        }
        let mut out = WordAutomaton::new(
            (0..self.len()).filter(|&q| keep[q]).map(|q| self.states[q].clone()).collect(),
            self.alphabet.clone(),
            map[self.initial],
            self.acceptance,
            self.branching,
        );
        for q in (0..self.len()).filter(|&q| keep[q]) {
            out.accepting[map[q]] = self.accepting[q];
        }
        for (q, a, t) in self.transitions() {
            if keep[q] {
                out.add_transition(map[q], a, map[t]);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let name = |q: usize| Value::String(self.states[q].clone());
        json!({
            "kind": self.kind(),
            "states": self.states,
            "alphabet": self.alphabet.iter().map(L::to_json).collect::<Vec<_>>(),
            "initial": name(self.initial),
            "F": (0..self.len()).filter(|&q| self.accepting[q]).map(name).collect::<Vec<_>>(),
            "trans": self.transitions()
                .map(|(q, a, t)| json!([name(q), self.alphabet[a].to_json(), name(t)]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v["kind"].as_str().ok_or_else(|| Error::Json("missing kind".into()))?;
        let (acceptance, branching) = match kind {
            "NBA" => (Acceptance::Buchi, Branching::Existential),
            "UBA" => (Acceptance::Buchi, Branching::Universal),
            "DBA" => (Acceptance::Buchi, Branching::Deterministic),
            "NCA" => (Acceptance::CoBuchi, Branching::Existential),
            "UCA" => (Acceptance::CoBuchi, Branching::Universal),
            "DCA" => (Acceptance::CoBuchi, Branching::Deterministic),
            "DFA" => (Acceptance::FiniteAccept, Branching::Deterministic),
            "NFA" => (Acceptance::FiniteAccept, Branching::Existential),
            other => return Err(Error::Json(format!("unknown automaton kind {other}"))),
        };
        let states: Vec<String> = serde_json::from_value(v["states"].clone())?;
        let find = |x: &Value| -> Result<usize> {
            let s = x.as_str().ok_or_else(|| Error::Json(format!("bad state {x}")))?;
            states
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state {s}")))
        };
        let alphabet = v["alphabet"]
            .as_array()
            .ok_or_else(|| Error::Json("missing alphabet".into()))?
            .iter()
            .map(L::from_json)
            .collect::<Result<Vec<_>>>()?;
        let initial = find(&v["initial"])?;
        let mut a = WordAutomaton::new(states.clone(), alphabet, initial, acceptance, branching);
        for f in v["F"].as_array().ok_or_else(|| Error::Json("missing F".into()))? {
            let q = find(f)?;
            a.accepting[q] = true;
        }
        for t in v["trans"].as_array().ok_or_else(|| Error::Json("missing trans".into()))? {
            let (q, l, r) = (find(&t[0])?, L::from_json(&t[1])?, find(&t[2])?);
            a.add_transition_letter(q, &l, r)?;
        }
        if branching == Branching::Deterministic && !a.is_deterministic() {
            return Err(Error::InvalidAutomaton("deterministic automaton with a choice".into()));
        }
        Ok(a)
    }
}

/// Looping check: exactly one state outside F, carrying a self-loop on every
/// letter. Returns that sink.
pub fn is_looping<L: Letter>(w: &WordAutomaton<L>) -> Option<usize> {
    let outside: Vec<usize> = (0..w.len()).filter(|&q| !w.accepting[q]).collect();
    match outside.as_slice() {
        [s] if (0..w.alphabet.len()).all(|a| w.delta[*s][a].contains(s)) => Some(*s),
        _ => None,
    }
}

/// Exact acceptance of `u·v^ω` on the product with the lasso positions.
pub fn accepts_lasso<L: Letter>(w: &WordAutomaton<L>, word: &LassoWord<L>) -> Result<bool> {
    if word.cycle.is_empty() {
        return Err(Error::LetterOutOfAlphabet("empty lasso cycle".into()));
    }
    if w.acceptance == Acceptance::FiniteAccept {
        return Err(Error::WrongKind("finite-word automaton on an ω-word".into()));
    }
    let letters: Vec<usize> = word
        .prefix
        .iter()
        .chain(&word.cycle)
        .map(|a| w.letter_index(a).ok_or_else(|| Error::LetterOutOfAlphabet(format!("{a:?}"))))
        .collect::<Result<_>>()?;
    let len = letters.len();
    let loop_start = word.prefix.len();
    let step = |pos: usize| if pos + 1 < len { pos + 1 } else { loop_start };
    let id = |q: usize, pos: usize| q * len + pos;
    let mut succ = vec![Vec::new(); w.len() * len];
    for q in 0..w.len() {
        for pos in 0..len {
            succ[id(q, pos)] = w.delta[q][letters[pos]].iter().map(|&t| id(t, step(pos))).collect();
        }
    }
    let reach = reachable(&succ, id(w.initial, 0));
    let in_f = |v: usize| w.accepting[v / len];
    let avoid_f: Vec<bool> = (0..succ.len()).map(|v| reach[v] && !in_f(v)).collect();
    let all: Vec<bool> = reach.clone();
    let f_free_cycle = on_cycle(&succ, &avoid_f).into_iter().any(|b| b);
    let f_cycle = on_cycle(&succ, &all).iter().enumerate().any(|(v, &c)| c && in_f(v));
    Ok(match (w.acceptance, w.branching) {
        (Acceptance::Buchi, Branching::Universal) => !f_free_cycle,
        (Acceptance::Buchi, _) => f_cycle,
        (Acceptance::CoBuchi, Branching::Universal) => !f_cycle,
        (Acceptance::CoBuchi, _) => f_free_cycle,
        (Acceptance::FiniteAccept, _) => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dba_self_loop() {
        let mut w = WordAutomaton::new(letters(&["q0"]), letters(&["a"]), 0, Acceptance::Buchi, Branching::Deterministic);
        w.accepting[0] = true;
        w.add_transition(0, 0, 0);
        let lasso = LassoWord { prefix: vec![], cycle: letters(&["a"]) };
        assert!(accepts_lasso(&w, &lasso).unwrap());
    }

    #[test]
    fn uba_with_f_avoiding_loop_rejects() {
        // q0 final; on b it may move to q1 (not final) and stay there.
        let mut w = WordAutomaton::new(letters(&["q0", "q1"]), letters(&["a", "b"]), 0, Acceptance::Buchi, Branching::Universal);
        w.accepting[0] = true;
        w.add_transition(0, 0, 0);
        w.add_transition(0, 1, 0);
        w.add_transition(0, 1, 1);
        w.add_transition(1, 1, 1);
        let bw = LassoWord { prefix: vec![], cycle: letters(&["b"]) };
        assert!(!accepts_lasso(&w, &bw).unwrap());
        let aw = LassoWord { prefix: vec![], cycle: letters(&["a"]) };
        assert!(accepts_lasso(&w, &aw).unwrap());
        // q1 blocks on a: the partial path is not a run.
        let mixed = LassoWord { prefix: letters(&["b"]), cycle: letters(&["a"]) };
        assert!(accepts_lasso(&w, &mixed).unwrap());
    }

    #[test]
    fn letters_outside_alphabet() {
        let w: WordAutomaton<String> = WordAutomaton::new(letters(&["q"]), letters(&["a"]), 0, Acceptance::Buchi, Branching::Existential);
        let lasso = LassoWord { prefix: vec![], cycle: letters(&["z"]) };
        assert!(matches!(accepts_lasso(&w, &lasso), Err(Error::LetterOutOfAlphabet(_))));
    }

    #[test]
    fn looping_detection() {
        let mut w = WordAutomaton::new(letters(&["q0", "q1"]), letters(&["a", "b"]), 0, Acceptance::CoBuchi, Branching::Existential);
        w.accepting[0] = true;
        w.add_transition(1, 0, 1);
        assert_eq!(is_looping(&w), None);
        w.add_transition(1, 1, 1);
        assert_eq!(is_looping(&w), Some(1));
        w.accepting[1] = true;
        assert_eq!(is_looping(&w), None);
    }

    #[test]
    fn json_round_trip() {
        let mut w = WordAutomaton::new(letters(&["q0", "q1"]), letters(&["a", "b"]), 0, Acceptance::Buchi, Branching::Universal);
        w.accepting[1] = true;
        w.add_transition(0, 1, 1);
        w.add_transition(1, 0, 0);
        let back = WordAutomaton::<String>::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }
}
