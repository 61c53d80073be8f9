use std::collections::HashMap;

use crate::error::{Error, Result};

use super::automaton::{Letter, WordAutomaton};

/// Square Boolean matrix stored as packed rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BoolMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Relational composition: first `self`, then `other`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    let src = other.row(k);
                    let dst = &mut out.bits[i * self.words..(i + 1) * self.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }
}

/// The monoid `{ M(w) : w ∈ Σ* }` of path relations, with a shortest word
/// for each element. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    pub elements: Vec<BoolMatrix>,
    /// Shortest generating word (letter indices) of each element.
    pub words: Vec<Vec<usize>>,
    /// Element index of each letter.
    pub generators: Vec<usize>,
    index: HashMap<BoolMatrix, usize>,
}

impl TransitionMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, m: &BoolMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of `elements[i] · elements[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].mul(&self.elements[j]);
        self.index[&m]
    }
}

pub const MONOID_LIMIT: usize = 200_000;

/// Closure of the letter matrices under composition, breadth first so the
/// recorded words are shortest.
pub fn transition_monoid<L: Letter>(w: &WordAutomaton<L>) -> Result<TransitionMonoid> {
    let n = w.len();
    let letters: Vec<BoolMatrix> = (0..w.alphabet.len())
        .map(|a| {
            let mut m = BoolMatrix::zero(n);
            for q in 0..n {
                for &t in &w.delta[q][a] {
                    m.set(q, t);
                }
            }
            m
        })
        .collect();
    let mut elements = vec![BoolMatrix::identity(n)];
    let mut words = vec![vec![]];
    let mut index = HashMap::from([(elements[0].clone(), 0)]);
    let mut head = 0;
    while head < elements.len() {
        for (a, l) in letters.iter().enumerate() {
            let m = elements[head].mul(l);
            if !index.contains_key(&m) {
                if elements.len() >= MONOID_LIMIT {
                    return Err(Error::MonoidTooLarge(MONOID_LIMIT));
                }
                let mut word = words[head].clone();
                word.push(a);
                index.insert(m.clone(), elements.len());
                elements.push(m);
                words.push(word);
            }
        }
        head += 1;
    }
    let generators = letters.iter().map(|m| index[m]).collect();
    Ok(TransitionMonoid { elements, words, generators, index })
}

/// A state `q`, a word `w` and a power `n` with a path on `w^n` from `q`
/// to `q` but none on `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterWitness<L> {
    pub state: usize,
    pub word: Vec<L>,
    pub power: usize,
}

/// Counter-freeness checked literally on every power of every monoid element.
pub fn is_counter_free<L: Letter>(w: &WordAutomaton<L>) -> Result<Option<CounterWitness<L>>> {
    let monoid = transition_monoid(w)?;
    for (i, m) in monoid.elements.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        let mut power = m.clone();
        let mut n = 1;
        while seen.insert(power.clone()) {
            for q in 0..w.len() {
                if power.get(q, q) && !m.get(q, q) {
                    let word = monoid.words[i].iter().map(|&a| w.alphabet[a].clone()).collect();
                    return Ok(Some(CounterWitness { state: q, word, power: n }));
                }
            }
            power = power.mul(m);
            n += 1;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Acceptance, Branching};

    fn swap() -> WordAutomaton<String> {
        let mut w = WordAutomaton::new(
            vec!["q0".into(), "q1".into()],
            vec!["a".to_string()],
            0,
            Acceptance::Buchi,
            Branching::Deterministic,
        );
        w.add_transition(0, 0, 1);
        w.add_transition(1, 0, 0);
        w
    }

    #[test]
    fn swap_monoid_and_counter() {
        let w = swap();
        let m = transition_monoid(&w).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.compose(m.generators[0], m.generators[0]), 0);
        let wit = is_counter_free(&w).unwrap().unwrap();
        assert_eq!((wit.state, wit.word, wit.power), (0, vec!["a".to_string()], 2));
    }

    #[test]
    fn self_loop_is_counter_free() {
        let mut w = WordAutomaton::new(
            vec!["q".into()],
            vec!["a".to_string()],
            0,
            Acceptance::Buchi,
            Branching::Deterministic,
        );
        w.add_transition(0, 0, 0);
        let m = transition_monoid(&w).unwrap();
        assert_eq!(m.len(), 1);
        assert!(is_counter_free(&w).unwrap().is_none());
    }

    #[test]
    fn wide_matrices() {
        let n = 70;
        let mut a = BoolMatrix::zero(n);
        a.set(0, 69);
        let mut b = BoolMatrix::zero(n);
        b.set(69, 3);
        let c = a.mul(&b);
        assert!(c.get(0, 3));
        assert!(!c.get(0, 69));
    }
}
