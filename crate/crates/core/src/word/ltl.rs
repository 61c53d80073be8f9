//! Finite-path LTL to DFA by formula progression, and the looping
//! automata of the safety and co-safety fragments.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::formula::ast::{PathFormula, StateRef, Valuation};
use crate::formula::fragment::{classify_path_fragment, Fragment};
use crate::formula::rewrite::{dual_path, strengthen_next};

use super::automaton::{Acceptance, Branching, Letter, WordAutomaton};

/// Every subset of `ap`, in the sorted order used for DFA alphabets.
pub fn all_valuations(ap: &BTreeSet<String>) -> Vec<Valuation> {
    let ap: Vec<&String> = ap.iter().collect();
    let mut out: Vec<Valuation> = (0..1usize << ap.len())
        .map(|mask| (0..ap.len()).filter(|i| mask >> i & 1 == 1).map(|i| ap[i].clone()).collect())
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Lit(StateRef),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    WeakNext(usize),
    Until(usize, usize),
    Release(usize, usize),
}

/// Hash-consed NNF of a path formula under finite-path duals.
#[derive(Default)]
struct Table {
    nodes: Vec<Node>,
    ids: HashMap<Node, usize>,
}

type Dnf = BTreeSet<BTreeSet<usize>>;

impl Table {
    fn add(&mut self, n: Node) -> usize {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        self.nodes.push(n.clone());
        self.ids.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn build(&mut self, p: &PathFormula, neg: bool) -> Result<usize> {
        use PathFormula as P;
        Ok(match p {
            P::State(s) => {
                if !s.is_propositional() {
                    return Err(Error::WrongFragment(format!("non-propositional state {s}")));
                }
                let lit = if neg { crate::formula::ast::not(s.clone()) } else { s.clone() };
                self.add(Node::Lit(lit))
            }
            P::Not(a) => self.build(a, !neg)?,
            P::And(a, b) | P::Or(a, b) => {
                let (x, y) = (self.build(a, neg)?, self.build(b, neg)?);
                if matches!(p, P::And(..)) != neg {
                    self.add(Node::And(x, y))
                } else {
                    self.add(Node::Or(x, y))
                }
            }
            P::Next(a) => {
                let x = self.build(a, neg)?;
                self.add(if neg { Node::WeakNext(x) } else { Node::Next(x) })
            }
            P::WeakNext(a) => {
                let x = self.build(a, neg)?;
                self.add(if neg { Node::Next(x) } else { Node::WeakNext(x) })
            }
            P::Until(a, b) => {
                let (x, y) = (self.build(a, neg)?, self.build(b, neg)?);
                self.add(if neg { Node::Release(x, y) } else { Node::Until(x, y) })
            }
            P::Release(a, b) => {
                let (x, y) = (self.build(a, neg)?, self.build(b, neg)?);
                self.add(if neg { Node::Until(x, y) } else { Node::Release(x, y) })
            }
            P::Yesterday(_) | P::WeakYesterday(_) | P::Since(..) => {
                return Err(Error::NotPureFuture(p.to_string()))
            }
        })
    }

    /// Obligation for the next position after reading `sigma` at a
    /// non-final position.
    fn prog(&self, i: usize, sigma: &Valuation) -> Dnf {
        match &self.nodes[i] {
            Node::Lit(s) => {
                if s.eval_prop(sigma).expect("propositional literal") {
                    BTreeSet::from([BTreeSet::new()])
                } else {
                    BTreeSet::new()
                }
            }
            Node::And(a, b) => conj(&self.prog(*a, sigma), &self.prog(*b, sigma)),
            Node::Or(a, b) => disj(&self.prog(*a, sigma), &self.prog(*b, sigma)),
            Node::Next(a) | Node::WeakNext(a) => BTreeSet::from([BTreeSet::from([*a])]),
            Node::Until(a, b) => {
                let stay = conj(&self.prog(*a, sigma), &BTreeSet::from([BTreeSet::from([i])]));
                disj(&self.prog(*b, sigma), &stay)
            }
            Node::Release(a, b) => {
                let cont = disj(&self.prog(*a, sigma), &BTreeSet::from([BTreeSet::from([i])]));
                conj(&self.prog(*b, sigma), &cont)
            }
        }
    }

    /// Truth at a position carrying `sigma` that is the last of the word.
    fn last(&self, i: usize, sigma: &Valuation) -> bool {
        match &self.nodes[i] {
            Node::Lit(s) => s.eval_prop(sigma).expect("propositional literal"),
            Node::And(a, b) => self.last(*a, sigma) && self.last(*b, sigma),
            Node::Or(a, b) => self.last(*a, sigma) || self.last(*b, sigma),
            Node::Next(_) => false,
            Node::WeakNext(_) => true,
            Node::Until(_, b) | Node::Release(_, b) => self.last(*b, sigma),
        }
    }
}

fn minimal(d: Dnf) -> Dnf {
    d.iter().filter(|c| !d.iter().any(|o| o != *c && o.is_subset(c))).cloned().collect()
}

fn conj(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).copied().collect());
        }
    }
    minimal(out)
}

fn disj(a: &Dnf, b: &Dnf) -> Dnf {
    minimal(a.union(b).cloned().collect())
}

/// DFA for `{ w nonempty : (w, 0) ⊨_fin ψ }` over the alphabet `2^ap`,
/// minimal and canonically numbered.
pub fn ltl_finite_to_dfa(psi: &PathFormula, ap: &BTreeSet<String>) -> Result<WordAutomaton<Valuation>> {
    let mut table = Table::default();
    let root = table.build(psi, false)?;
    let alphabet = all_valuations(ap);
    let start: (Dnf, bool) = (BTreeSet::from([BTreeSet::from([root])]), false);
    let mut ids: HashMap<(Dnf, bool), usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (dnf, _) = states[head].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for sigma in &alphabet {
            let mut next = BTreeSet::new();
            let mut acc = false;
            for clause in &dnf {
                let mut d: Dnf = BTreeSet::from([BTreeSet::new()]);
                let mut all_last = true;
                for &e in clause {
                    d = conj(&d, &table.prog(e, sigma));
                    all_last &= table.last(e, sigma);
                }
                next = disj(&next, &d);
                acc |= all_last;
            }
            let key = (next, acc);
            let id = *ids.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row.push(id);
        }
        trans.push(row);
        head += 1;
    }
    let mut dfa = WordAutomaton::new(
        (0..states.len()).map(|i| format!("d{i}")).collect(),
        alphabet,
        0,
        Acceptance::FiniteAccept,
        Branching::Deterministic,
    );
    for (q, row) in trans.iter().enumerate() {
        dfa.accepting[q] = states[q].1;
        for (a, &t) in row.iter().enumerate() {
            dfa.add_transition(q, a, t);
        }
    }
    minimize_dfa(&dfa)
}

/// Moore partition refinement of a complete DFA, followed by breadth-first
/// renumbering from the initial state.
pub fn minimize_dfa<L: Letter>(w: &WordAutomaton<L>) -> Result<WordAutomaton<L>> {
    if w.acceptance != Acceptance::FiniteAccept || w.branching != Branching::Deterministic {
        return Err(Error::WrongKind(format!("minimisation needs a DFA, got {}", w.kind())));
    }
    let w = complete(&w.trim());
    let n = w.len();
    let k = w.alphabet.len();
    let succ = |q: usize, a: usize| w.delta[q][a][0];
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(w.accepting[q])).collect();
    let mut count = 0;
    loop {
        let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let key = (block[q], (0..k).map(|a| block[succ(q, a)]).collect());
                let len = sig.len();
                *sig.entry(key).or_insert(len)
            })
            .collect();
        let c = sig.len();
        block = next;
        if c == count {
            break;
        }
        count = c;
    }
    // canonical numbering by BFS over blocks
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut rep: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([w.initial]);
    order.insert(block[w.initial], 0);
    rep.push(w.initial);
    while let Some(q) = queue.pop_front() {
        for a in 0..k {
            let t = succ(q, a);
            if !order.contains_key(&block[t]) {
                order.insert(block[t], rep.len());
                rep.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut out = WordAutomaton::new(
        (0..rep.len()).map(|i| format!("d{i}")).collect(),
        w.alphabet.clone(),
        0,
        Acceptance::FiniteAccept,
        Branching::Deterministic,
    );
    for (i, &q) in rep.iter().enumerate() {
        out.accepting[i] = w.accepting[q];
        for a in 0..k {
            out.add_transition(i, a, order[&block[succ(q, a)]]);
        }
    }
    Ok(out)
}

fn complete<L: Letter>(w: &WordAutomaton<L>) -> WordAutomaton<L> {
    if w.delta.iter().all(|row| row.iter().all(|t| t.len() == 1)) {
        return w.clone();
    }
    let mut out = w.clone();
    let dead = out.add_state("dead".into(), false);
    for q in 0..out.len() {
        for a in 0..out.alphabet.len() {
            if out.delta[q][a].is_empty() {
                out.add_transition(q, a, dead);
            }
        }
    }
    out
}

/// Subset construction of a finite-word automaton.
pub fn subset_construct<L: Letter>(w: &WordAutomaton<L>) -> Result<WordAutomaton<L>> {
    if w.acceptance != Acceptance::FiniteAccept {
        return Err(Error::WrongKind(format!("subset construction needs an NFA, got {}", w.kind())));
    }
    let start = BTreeSet::from([w.initial]);
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut out = WordAutomaton::new(vec![], w.alphabet.clone(), 0, Acceptance::FiniteAccept, Branching::Deterministic);
    let name = |s: &BTreeSet<usize>| {
        format!("{{{}}}", s.iter().map(|&q| w.states[q].as_str()).collect::<Vec<_>>().join(","))
    };
    out.add_state(name(&sets[0]), sets[0].iter().any(|&q| w.accepting[q]));
    let mut head = 0;
    while head < sets.len() {
        for a in 0..w.alphabet.len() {
            let t: BTreeSet<usize> = sets[head].iter().flat_map(|&q| w.delta[q][a].iter().copied()).collect();
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    let id = out.add_state(name(&t), t.iter().any(|&q| w.accepting[q]));
                    ids.insert(t.clone(), id);
                    sets.push(t);
                    id
                }
            };
            out.add_transition(head, a, id);
        }
        head += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    CoSafe,
    Safe,
}

/// Looping automaton of a co-safe (NCA) or safe (UBA) LTL formula over the
/// alphabet `2^ap`.
///
/// Both are built from the good-prefix DFA of a co-safe formula: every
/// transition into an accepting DFA state is redirected to a fresh sink.
pub fn fragment_to_looping_word_automaton(
    psi: &PathFormula,
    polarity: Polarity,
    ap: &BTreeSet<String>,
) -> Result<WordAutomaton<Valuation>> {
    let frags = classify_path_fragment(psi);
    let (target, acceptance, branching) = match polarity {
        Polarity::CoSafe => {
            if !frags.contains(&Fragment::CoSafeLTL) {
                return Err(Error::WrongFragment(format!("{psi} is not co-safe LTL")));
            }
            (strengthen_next(psi), Acceptance::CoBuchi, Branching::Existential)
        }
        Polarity::Safe => {
            if !frags.contains(&Fragment::SafeLTL) {
                return Err(Error::WrongFragment(format!("{psi} is not safe LTL")));
            }
            (strengthen_next(&*dual_path(psi)?), Acceptance::Buchi, Branching::Universal)
        }
    };
    let dfa = ltl_finite_to_dfa(&target, ap)?;
    Ok(good_prefix_looping(&dfa, acceptance, branching))
}

fn good_prefix_looping<L: Letter>(
    dfa: &WordAutomaton<L>,
    acceptance: Acceptance,
    branching: Branching,
) -> WordAutomaton<L> {
    let mut out = WordAutomaton::new(vec![], dfa.alphabet.clone(), 0, acceptance, branching);
    let mut map: HashMap<usize, usize> = HashMap::new();
    let sink_name = "sink".to_string();
    let sink = out.add_state(sink_name, false);
    let mut queue = VecDeque::new();
    let mut lookup = |q: usize, out: &mut WordAutomaton<L>, queue: &mut VecDeque<(usize, usize)>| {
        if dfa.accepting[q] {
            return sink;
        }
        *map.entry(q).or_insert_with(|| {
            let id = out.add_state(dfa.states[q].clone(), true);
            queue.push_back((q, id));
            id
        })
    };
    out.initial = lookup(dfa.initial, &mut out, &mut queue);
    while let Some((q, from)) = queue.pop_front() {
        for a in 0..dfa.alphabet.len() {
            for &t in &dfa.delta[q][a] {
                let to = lookup(t, &mut out, &mut queue);
                out.add_transition(from, a, to);
            }
        }
    }
    for a in 0..dfa.alphabet.len() {
        out.add_transition(sink, a, sink);
    }
    // keep the initial state first for readability
    reorder_initial_first(out)
}

fn reorder_initial_first<L: Letter>(w: WordAutomaton<L>) -> WordAutomaton<L> {
    let n = w.len();
    let mut perm: Vec<usize> = vec![w.initial];
    perm.extend((0..n).filter(|&q| q != w.initial));
    let mut inv = vec![0; n];
    for (i, &q) in perm.iter().enumerate() {
        inv[q] = i;
    }
    let mut out = WordAutomaton::new(
        perm.iter().map(|&q| w.states[q].clone()).collect(),
        w.alphabet.clone(),
        0,
        w.acceptance,
        w.branching,
    );
    for (i, &q) in perm.iter().enumerate() {
        out.accepting[i] = w.accepting[q];
    }
    for (q, a, t) in w.transitions() {
        out.add_transition(inv[q], a, inv[t]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse_path;
    use crate::word::{accepts_lasso, is_counter_free, is_looping, LassoWord};

    fn ap(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn val(xs: &[&str]) -> Valuation {
        ap(xs)
    }

    fn run<L: Letter>(dfa: &WordAutomaton<L>, word: &[L]) -> bool {
        let mut q = dfa.initial;
        for a in word {
            q = dfa.delta[q][dfa.letter_index(a).unwrap()][0];
        }
        dfa.accepting[q]
    }

    #[test]
    fn atom_dfa() {
        let dfa = ltl_finite_to_dfa(&parse_path("p").unwrap(), &ap(&["p"])).unwrap();
        assert!(run(&dfa, &[val(&["p"])]));
        assert!(run(&dfa, &[val(&["p"]), val(&[])]));
        assert!(!run(&dfa, &[val(&[]), val(&["p"])]));
        assert!(!run(&dfa, &[]));
        assert_eq!(dfa.len(), 3);
    }

    #[test]
    fn next_needs_two_letters() {
        let dfa = ltl_finite_to_dfa(&parse_path("X p").unwrap(), &ap(&["p"])).unwrap();
        assert!(!run(&dfa, &[val(&["p"])]));
        assert!(run(&dfa, &[val(&[]), val(&["p"])]));
        let weak = ltl_finite_to_dfa(&parse_path("wX p").unwrap(), &ap(&["p"])).unwrap();
        assert!(run(&weak, &[val(&[])]));
        assert!(!run(&weak, &[val(&[]), val(&[])]));
    }

    #[test]
    fn dfa_is_counter_free() {
        let dfa = ltl_finite_to_dfa(&parse_path("(p U q) & X (q R p)").unwrap(), &ap(&["p", "q"])).unwrap();
        assert!(is_counter_free(&dfa).unwrap().is_none());
    }

    #[test]
    fn past_rejected() {
        assert!(matches!(
            ltl_finite_to_dfa(&parse_path("Y p").unwrap(), &ap(&["p"])),
            Err(Error::NotPureFuture(_))
        ));
    }

    #[test]
    fn minimise_is_idempotent() {
        let dfa = ltl_finite_to_dfa(&parse_path("p U X q").unwrap(), &ap(&["p", "q"])).unwrap();
        assert_eq!(minimize_dfa(&dfa).unwrap(), dfa);
    }

    #[test]
    fn subset_of_contains_q() {
        // q0 loops on everything and guesses the q; q1 accepts and loops.
        let alphabet = all_valuations(&ap(&["q"]));
        let mut nfa = WordAutomaton::new(vec!["q0".into(), "q1".into()], alphabet.clone(), 0, Acceptance::FiniteAccept, Branching::Existential);
        nfa.accepting[1] = true;
        for a in 0..2 {
            nfa.add_transition(0, a, 0);
            nfa.add_transition(1, a, 1);
        }
        nfa.add_transition(0, nfa.letter_index(&val(&["q"])).unwrap(), 1);
        let dfa = minimize_dfa(&subset_construct(&nfa).unwrap()).unwrap();
        assert_eq!(dfa.len(), 2);
        assert!(is_counter_free(&dfa).unwrap().is_none());
    }

    #[test]
    fn cosafe_eventually() {
        let nca = fragment_to_looping_word_automaton(&parse_path("F q").unwrap(), Polarity::CoSafe, &ap(&["q"])).unwrap();
        assert_eq!(nca.kind(), "NCA");
        assert_eq!(nca.len(), 2);
        assert!(is_looping(&nca).is_some());
        let good = LassoWord { prefix: vec![val(&[])], cycle: vec![val(&["q"])] };
        let bad = LassoWord { prefix: vec![], cycle: vec![val(&[])] };
        assert!(accepts_lasso(&nca, &good).unwrap());
        assert!(!accepts_lasso(&nca, &bad).unwrap());
    }

    #[test]
    fn cosafe_true_reaches_sink_at_once() {
        let nca = fragment_to_looping_word_automaton(&parse_path("true").unwrap(), Polarity::CoSafe, &ap(&["p"])).unwrap();
        let sink = is_looping(&nca).unwrap();
        assert!((0..nca.alphabet.len()).all(|a| nca.delta[nca.initial][a] == vec![sink]));
    }

    #[test]
    fn safe_globally() {
        let uba = fragment_to_looping_word_automaton(&parse_path("G p").unwrap(), Polarity::Safe, &ap(&["p"])).unwrap();
        assert_eq!(uba.kind(), "UBA");
        assert!(is_looping(&uba).is_some());
        let all_p = LassoWord { prefix: vec![], cycle: vec![val(&["p"])] };
        let gap = LassoWord { prefix: vec![val(&["p"]), val(&[])], cycle: vec![val(&["p"])] };
        assert!(accepts_lasso(&uba, &all_p).unwrap());
        assert!(!accepts_lasso(&uba, &gap).unwrap());
    }

    #[test]
    fn wrong_fragment() {
        let r = fragment_to_looping_word_automaton(&parse_path("G p").unwrap(), Polarity::CoSafe, &ap(&["p"]));
        assert!(matches!(r, Err(Error::WrongFragment(_))));
    }
}
