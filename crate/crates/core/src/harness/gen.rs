//! Seeded random generators for formulas, automata and lasso words.
//!
//! Every generator takes a `ChaCha8Rng`, so a campaign is reproducible from
//! its seed alone.

use std::collections::BTreeSet;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::*;
use crate::tree::{Component, ComponentKind, TransitionFormula as TF, TreeAtom, TreeAutomaton};
use crate::word::{is_counter_free, Acceptance, Branching, LassoWord, WordAutomaton};

pub type Rng = ChaCha8Rng;

/// Independent stream for trial `i` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, i: u64) -> Rng {
    Rng::seed_from_u64(seed ^ i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaConfig {
    /// Bound on [`StateFormula::depth`].
    pub depth: usize,
    pub ap: Vec<String>,
    pub max_grade: u32,
}

impl FormulaConfig {
    pub fn new(depth: usize, ap: &[&str]) -> Self {
        FormulaConfig { depth, ap: ap.iter().map(|s| s.to_string()).collect(), max_grade: 2 }
    }
}

fn leaf(rng: &mut Rng, ap: &[String]) -> StateRef {
    match rng.random_range(0..12) {
        0 => tt(),
        1 => ff(),
        _ => atom(&ap[rng.random_range(0..ap.len())]),
    }
}

fn grade(rng: &mut Rng, cfg: &FormulaConfig) -> u32 {
    rng.random_range(1..=cfg.max_grade.max(1))
}

/// Random PastCTL± formula: Boolean connectives, counting, and the
/// polarised quantifiers `E X`, `E U`, `E Y`, `E S`, `A X`, `A R`, `A wY`.
pub fn random_pctlpm(rng: &mut Rng, cfg: &FormulaConfig) -> StateRef {
    pctl(rng, cfg, cfg.depth)
}

fn pctl(rng: &mut Rng, cfg: &FormulaConfig, d: usize) -> StateRef {
    if d == 0 || rng.random_bool(0.1) {
        return leaf(rng, &cfg.ap);
    }
    let temporal = d >= 2 && rng.random_bool(0.7);
    let pick = if temporal { rng.random_range(5..12) } else { rng.random_range(0..5) };
    let sub = |rng: &mut Rng, k: usize| pctl(rng, cfg, d - k);
    match pick {
        0 => not(sub(rng, 1)),
        1 => and(sub(rng, 1), sub(rng, 1)),
        2 => or(sub(rng, 1), sub(rng, 1)),
        3 => count(grade(rng, cfg), sub(rng, 1)),
        4 => cocount(grade(rng, cfg), sub(rng, 1)),
        5 => exists(next(st(sub(rng, 2)))),
        6 => exists(until(st(sub(rng, 2)), st(sub(rng, 2)))),
        7 => exists(yesterday(st(sub(rng, 2)))),
        8 => exists(since(st(sub(rng, 2)), st(sub(rng, 2)))),
        9 => forall(next(st(sub(rng, 2)))),
        10 => forall(release(st(sub(rng, 2)), st(sub(rng, 2)))),
        _ => forall(wyesterday(st(sub(rng, 2)))),
    }
}

/// Random CTL*± formula: `E` over co-safe and `A` over safe path formulas
/// with nested state formulas.
pub fn random_ctlspm(rng: &mut Rng, cfg: &FormulaConfig) -> StateRef {
    star(rng, cfg, cfg.depth)
}

fn star(rng: &mut Rng, cfg: &FormulaConfig, d: usize) -> StateRef {
    if d == 0 || rng.random_bool(0.1) {
        return leaf(rng, &cfg.ap);
    }
    let temporal = d >= 2 && rng.random_bool(0.7);
    let pick = if temporal { rng.random_range(4..7) } else { rng.random_range(0..4) };
    match pick {
        0 => not(star(rng, cfg, d - 1)),
        1 => and(star(rng, cfg, d - 1), star(rng, cfg, d - 1)),
        2 => or(star(rng, cfg, d - 1), star(rng, cfg, d - 1)),
        3 => count(grade(rng, cfg), star(rng, cfg, d - 1)),
        4 | 5 => exists(monotone_path(rng, cfg, d - 1, false)),
        _ => forall(monotone_path(rng, cfg, d - 1, true)),
    }
}

/// Co-safe (`safe = false`) or safe path formula of depth at most `d`.
fn monotone_path(rng: &mut Rng, cfg: &FormulaConfig, d: usize, safe: bool) -> PathRef {
    if d == 0 || rng.random_bool(0.25) {
        return st(star(rng, cfg, d));
    }
    let sub = |rng: &mut Rng| monotone_path(rng, cfg, d - 1, safe);
    match rng.random_range(0..6) {
        0 => pand(sub(rng), sub(rng)),
        1 => por(sub(rng), sub(rng)),
        2 => next(sub(rng)),
        _ if safe => release(sub(rng), sub(rng)),
        _ => until(sub(rng), sub(rng)),
    }
}

/// Random CTL*f formula: finite-path existentials over future LTL bodies.
pub fn random_ctlsf(rng: &mut Rng, cfg: &FormulaConfig) -> StateRef {
    fin(rng, cfg, cfg.depth)
}

fn fin(rng: &mut Rng, cfg: &FormulaConfig, d: usize) -> StateRef {
    if d == 0 || rng.random_bool(0.1) {
        return leaf(rng, &cfg.ap);
    }
    let temporal = d >= 2 && rng.random_bool(0.7);
    match if temporal { 3 } else { rng.random_range(0..3) } {
        0 => not(fin(rng, cfg, d - 1)),
        1 => and(fin(rng, cfg, d - 1), fin(rng, cfg, d - 1)),
        2 => or(fin(rng, cfg, d - 1), fin(rng, cfg, d - 1)),
        _ => exists_fin(fin_path(rng, cfg, d - 1)),
    }
}

fn fin_path(rng: &mut Rng, cfg: &FormulaConfig, d: usize) -> PathRef {
    if d == 0 || rng.random_bool(0.25) {
        return st(fin(rng, cfg, d));
    }
    let sub = |rng: &mut Rng| fin_path(rng, cfg, d - 1);
    match rng.random_range(0..6) {
        0 => pand(sub(rng), sub(rng)),
        1 => por(sub(rng), sub(rng)),
        2 => next(sub(rng)),
        3 => wnext(sub(rng)),
        4 => until(sub(rng), sub(rng)),
        _ => release(sub(rng), sub(rng)),
    }
}

fn literal(rng: &mut Rng, ap: &[String]) -> PathRef {
    match rng.random_range(0..10) {
        0 => st(tt()),
        1 => st(ff()),
        k => {
            let p = atom(&ap[rng.random_range(0..ap.len())]);
            st(if k % 2 == 0 { not(p) } else { p })
        }
    }
}

/// Random co-safe LTL formula (`safe = false`: literals, `∧ ∨ X wX U`) or
/// safe LTL formula (`∧ ∨ X wX R`) with at most `size` nodes, literals
/// counting as one.
pub fn random_ltl(rng: &mut Rng, ap: &[String], size: usize, safe: bool) -> PathRef {
    let size = rng.random_range(1..=size.max(1));
    ltl(rng, ap, size, safe)
}

fn ltl(rng: &mut Rng, ap: &[String], size: usize, safe: bool) -> PathRef {
    if size <= 1 {
        return literal(rng, ap);
    }
    if size == 2 || rng.random_bool(0.3) {
        let a = ltl(rng, ap, size - 1, safe);
        return if rng.random_bool(0.5) { next(a) } else { wnext(a) };
    }
    let left = rng.random_range(1..size - 1);
    let a = ltl(rng, ap, left, safe);
    let b = ltl(rng, ap, size - 1 - left, safe);
    match rng.random_range(0..4) {
        0 => pand(a, b),
        1 => por(a, b),
        _ if safe => release(a, b),
        _ => until(a, b),
    }
}

/// Letters `a`, `b`, `c`, ... of a plain alphabet.
pub fn plain_alphabet(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Random looping UBA with at most `max_states` states (the sink included)
/// over `alphabet`. Not necessarily counter-free.
pub fn random_looping_uba(rng: &mut Rng, max_states: usize, alphabet: &[String]) -> WordAutomaton<String> {
    let n = rng.random_range(2..=max_states.max(2));
    let sink = n - 1;
    let names = (0..n).map(|i| if i == sink { "sink".to_string() } else { format!("q{i}") }).collect();
    let mut w = WordAutomaton::new(names, alphabet.to_vec(), 0, Acceptance::Buchi, Branching::Universal);
    for q in 0..sink {
        w.accepting[q] = true;
        for a in 0..w.alphabet.len() {
            for t in 0..n {
                if rng.random_bool(0.3) {
                    w.add_transition(q, a, t);
                }
            }
        }
    }
    for a in 0..w.alphabet.len() {
        w.add_transition(sink, a, sink);
    }
    w
}

/// Rejection-sample a counter-free looping UBA; `None` after `tries` draws.
pub fn random_counter_free_uba(
    rng: &mut Rng,
    max_states: usize,
    alphabet: &[String],
    tries: usize,
) -> Option<WordAutomaton<String>> {
    (0..tries).find_map(|_| {
        let w = random_looping_uba(rng, max_states, alphabet);
        matches!(is_counter_free(&w), Ok(None)).then_some(w)
    })
}

/// Lasso with `|u| ≤ max_prefix` and `1 ≤ |v| ≤ max_cycle`.
pub fn random_lasso<L: Clone>(rng: &mut Rng, alphabet: &[L], max_prefix: usize, max_cycle: usize) -> LassoWord<L> {
    let pick = |rng: &mut Rng, n: usize| -> Vec<L> {
        (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())].clone()).collect()
    };
    let u = rng.random_range(0..=max_prefix);
    let v = rng.random_range(1..=max_cycle.max(1));
    LassoWord { prefix: pick(rng, u), cycle: pick(rng, v) }
}

/// Random one-way, hesitant, polarised automaton with at most `max_states`
/// states. States are numbered so that components are consecutive and
/// listed lowest first.
pub fn random_hesitant(rng: &mut Rng, max_states: usize, ap: &[String]) -> TreeAutomaton {
    let n = rng.random_range(1..=max_states.max(1));
    let mut a = TreeAutomaton::new(ap.iter().cloned(), false);
    let mut comps: Vec<(Vec<usize>, ComponentKind)> = Vec::new();
    let mut q = 0;
    while q < n {
        let kind = match rng.random_range(0..3) {
            0 => ComponentKind::Transient,
            1 => ComponentKind::Existential,
            _ => ComponentKind::Universal,
        };
        let size = if kind == ComponentKind::Transient { 1 } else { rng.random_range(1..=(n - q).min(2)) };
        comps.push(((q..q + size).collect(), kind));
        q += size;
    }
    for (states, kind) in &comps {
        for &s in states {
            a.add_state(format!("q{s}"), *kind == ComponentKind::Universal);
        }
    }
    for (states, kind) in &comps {
        let lower: Vec<usize> = (0..states[0]).collect();
        for &s in states {
            for sigma in 0..a.letters() {
                let f = match kind {
                    ComponentKind::Transient => lower_formula(rng, &lower, 2),
                    ComponentKind::Existential => TF::disj((0..rng.random_range(1..=2)).map(|_| {
                        let own = rng.random_bool(0.6).then(|| TF::Atom(TreeAtom::dia(1, pick(rng, states))));
                        TF::conj(own.into_iter().chain(lower_atoms(rng, &lower)))
                    })),
                    _ => TF::conj((0..rng.random_range(1..=2)).map(|_| {
                        let own = rng.random_bool(0.6).then(|| TF::Atom(TreeAtom::boxed(1, pick(rng, states))));
                        TF::disj(own.into_iter().chain(lower_atoms(rng, &lower)))
                    })),
                };
                a.set(s, sigma, f);
            }
        }
    }
    a.initial = n - 1;
    a.partition = comps.into_iter().map(|(states, kind)| Component { states, kind }).collect();
    a
}

fn pick(rng: &mut Rng, xs: &[usize]) -> usize {
    xs[rng.random_range(0..xs.len())]
}

fn lower_atom(rng: &mut Rng, lower: &[usize]) -> TF {
    let q = pick(rng, lower);
    let k = rng.random_range(1..=2);
    TF::Atom(if rng.random_bool(0.5) { TreeAtom::dia(k, q) } else { TreeAtom::boxed(k, q) })
}

fn lower_atoms(rng: &mut Rng, lower: &[usize]) -> Vec<TF> {
    if lower.is_empty() {
        return vec![];
    }
    (0..rng.random_range(0..=1)).map(|_| lower_atom(rng, lower)).collect()
}

fn lower_formula(rng: &mut Rng, lower: &[usize], d: usize) -> TF {
    if lower.is_empty() || d == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..3) {
            0 if !lower.is_empty() => lower_atom(rng, lower),
            1 => TF::False,
            _ => TF::True,
        };
    }
    let (x, y) = (lower_formula(rng, lower, d - 1), lower_formula(rng, lower, d - 1));
    if rng.random_bool(0.5) {
        x.and(y)
    } else {
        x.or(y)
    }
}

/// Atomic propositions of a random campaign: two or more (up to `max`) of
/// p, q, r.
pub fn random_ap(rng: &mut Rng, max: usize) -> Vec<String> {
    let all = ["p", "q", "r"];
    let hi = max.clamp(1, all.len());
    let n = rng.random_range(hi.min(2)..=hi);
    all[..n].iter().map(|s| s.to_string()).collect()
}

/// Atoms actually used by `phi`, always including at least one name.
pub fn used_ap(phi: &StateRef) -> BTreeSet<String> {
    let mut ap = phi.atoms();
    if ap.is_empty() {
        ap.insert("p".into());
    }
    ap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{is_polarised, validate_hesitant};
    use crate::word::is_looping;

    #[test]
    fn formulas_stay_in_their_fragments() {
        let cfg = FormulaConfig::new(4, &["p", "q", "r"]);
        for i in 0..300 {
            let mut rng = trial_rng(1, i);
            let f = random_pctlpm(&mut rng, &cfg);
            assert!(f.depth() <= 4 && in_fragment(&f, Fragment::PastCTLpm), "{f}");
            let g = random_ctlspm(&mut rng, &cfg);
            assert!(g.depth() <= 4 && in_fragment(&g, Fragment::CTLStarPm), "{g}");
            let h = random_ctlsf(&mut rng, &cfg);
            assert!(in_fragment(&h, Fragment::CTLStarF), "{h}");
        }
    }

    #[test]
    fn ltl_generators_respect_shape_and_size() {
        let ap = vec!["p".to_string(), "q".to_string()];
        for i in 0..300 {
            let mut rng = trial_rng(2, i);
            let c = random_ltl(&mut rng, &ap, 8, false);
            assert!(c.size() <= 12 && classify_path_fragment(&c).contains(&Fragment::CoSafeLTL), "{c}");
            let s = random_ltl(&mut rng, &ap, 8, true);
            assert!(classify_path_fragment(&s).contains(&Fragment::SafeLTL), "{s}");
        }
    }

    #[test]
    fn automata_are_well_formed() {
        let ap = vec!["p".to_string()];
        for i in 0..200 {
            let mut rng = trial_rng(3, i);
            let a = random_hesitant(&mut rng, 4, &ap);
            assert!(validate_hesitant(&a).ok() && is_polarised(&a), "{:?}", validate_hesitant(&a));
            let w = random_looping_uba(&mut rng, 5, &plain_alphabet(2));
            assert!(is_looping(&w).is_some());
        }
    }

    #[test]
    fn same_seed_same_draws() {
        let cfg = FormulaConfig::new(4, &["p", "q"]);
        let a = random_ctlspm(&mut trial_rng(9, 4), &cfg);
        let b = random_ctlspm(&mut trial_rng(9, 4), &cfg);
        assert_eq!(a, b);
    }
}
