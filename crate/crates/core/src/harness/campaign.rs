//! Seeded cross-checking campaigns and their reports.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::RngExt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::check::{mc_ctlsf, mc_ctlspm, mc_pctlpm, oracle_bound, oracle_eval};
use crate::error::{Error, Result};
use crate::formula::json::state_to_json;
use crate::formula::rewrite::eliminate_release_finite;
use crate::formula::*;
use crate::model::{random_model_with, ModelConfig, RegularTreeModel};
use crate::translate::{ctlsf_bridge, ctlspm_to_hta, hta_to_ctlspm, hta_to_pctlpm, pctlpm_to_hta};
use crate::tree::{
    accepts, accepts_two_way, brute_force_accepts, dualize_tree, linearize_component, structural_report,
    visibility_check, ComponentKind, DualityRegistry, TreeAutomaton, Visibility,
};
use crate::word::{
    accepts_lasso, all_valuations, breakpoint_determinize, fragment_to_looping_word_automaton, is_counter_free,
    is_looping, LassoWord, Letter, Polarity,
};

use super::gen::*;
use super::semantics::{all_traces, lasso_by_prefixes, trace_table, TraceMode};
use super::shrink::{shrink_formula, shrink_lasso, shrink_model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// PastCTL± → two-way HTA → PastCTL±.
    Roundtrip1,
    /// CTL*± → HTA → automaton-guarded CTL*±, plus the dual automaton.
    Roundtrip2,
    /// Breakpoint determinisation and the looping LTL fragments.
    Word,
    /// Acceptance of compiled automata against their duals.
    Dual,
    /// Model checkers against the approximant oracle, and the acceptance
    /// evaluator against explicit strategy search.
    Oracle,
    /// Finite-path release elimination on explicit traces.
    Finite,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Roundtrip1, Suite::Roundtrip2, Suite::Word, Suite::Dual, Suite::Oracle, Suite::Finite];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrip1 => "roundtrip1",
            Suite::Roundtrip2 => "roundtrip2",
            Suite::Word => "word",
            Suite::Dual => "dual",
            Suite::Oracle => "oracle",
            Suite::Finite => "finite",
        }
    }

    /// Samples per generated formula or automaton.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Roundtrip1 | Suite::Roundtrip2 => 50,
            Suite::Word => 100,
            Suite::Dual | Suite::Oracle | Suite::Finite => 1,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Usage(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub formulas: usize,
    pub models: usize,
    pub checks: usize,
}

impl Counts {
    fn add(&mut self, o: Counts) {
        self.formulas += o.formulas;
        self.models += o.models;
        self.checks += o.checks;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub check: String,
    pub expected: String,
    pub got: String,
    /// Minimised artifacts (formula, model, automaton, word) as JSON.
    pub artifacts: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub suite: Suite,
    pub seed: u64,
    pub n: usize,
    pub counts: Counts,
    pub failures: Vec<Failure>,
    pub wall_ms: u128,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// The report without its wall time; equal for equal seeds.
    pub fn to_json_untimed(&self) -> Value {
        let mut v = self.to_json();
        v.as_object_mut().expect("object").remove("wall_ms");
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub suite: Suite,
    pub seed: u64,
    pub n: usize,
    pub samples: usize,
    pub threads: usize,
}

impl CampaignConfig {
    pub fn new(suite: Suite, seed: u64, n: usize) -> Self {
        let threads = std::thread::available_parallelism().map(|x| x.get()).unwrap_or(1).min(8);
        CampaignConfig { suite, seed, n, samples: suite.default_samples(), threads }
    }
}

/// Run `n` trials of `suite` with default sample counts.
pub fn fuzz_roundtrip(seed: u64, n: usize, suite: Suite) -> CampaignReport {
    run_campaign(&CampaignConfig::new(suite, seed, n))
}

#[derive(Default)]
struct Trial {
    counts: Counts,
    failures: Vec<Failure>,
}

impl Trial {
    fn fail(&mut self, trial: u64, check: &str, expected: impl Into<String>, got: impl Into<String>, artifacts: Value) {
        self.failures.push(Failure { trial, check: check.into(), expected: expected.into(), got: got.into(), artifacts });
    }
}

/// Trials are independent and run on scoped threads; each draws from its
/// own seeded stream, so the report does not depend on scheduling.
pub fn run_campaign(cfg: &CampaignConfig) -> CampaignReport {
    let start = Instant::now();
    let threads = cfg.threads.clamp(1, cfg.n.max(1));
    let mut results: Vec<(u64, Trial)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    (t..cfg.n)
                        .step_by(threads)
                        .map(|i| (i as u64, run_trial(cfg, i as u64)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial thread")).collect()
    });
    results.sort_by_key(|(i, _)| *i);
    let mut counts = Counts::default();
    let mut failures = Vec::new();
    for (_, t) in results {
        counts.add(t.counts);
        failures.extend(t.failures);
    }
    failures.sort_by_cached_key(|f| (f.trial, f.check.clone(), f.expected.clone(), f.got.clone(), f.artifacts.to_string()));
    CampaignReport {
        suite: cfg.suite,
        seed: cfg.seed,
        n: cfg.n,
        counts,
        failures,
        wall_ms: start.elapsed().as_millis(),
    }
}

fn run_trial(cfg: &CampaignConfig, i: u64) -> Trial {
    let mut rng = trial_rng(cfg.seed, i);
    let mut t = Trial::default();
    match cfg.suite {
        Suite::Roundtrip1 => roundtrip1(&mut rng, cfg.samples, i, &mut t),
        Suite::Roundtrip2 => roundtrip2(&mut rng, cfg.samples, i, &mut t),
        Suite::Word => word(&mut rng, cfg.samples, i, &mut t),
        Suite::Dual => dual(&mut rng, cfg.samples, i, &mut t),
        Suite::Oracle => oracle(&mut rng, cfg.samples, i, &mut t),
        Suite::Finite => finite(&mut rng, cfg.samples, i, &mut t),
    }
    t
}

fn model_cfg(ap: &[String], max_nodes: usize) -> ModelConfig {
    ModelConfig { max_nodes, max_branch: 3, ap: ap.to_vec() }
}

fn formula_json(phi: &StateRef) -> Value {
    json!({ "text": phi.to_string(), "ast": state_to_json(phi) })
}

fn shown<T: fmt::Debug>(r: &Result<T>) -> String {
    match r {
        Ok(x) => format!("{x:?}"),
        Err(e) => format!("error: {e}"),
    }
}

/// Three verdicts that must coincide, or the first error.
type Verdicts = Result<[bool; 3]>;

fn disagree(v: &Verdicts) -> bool {
    match v {
        Ok([a, b, c]) => !(a == b && b == c),
        Err(_) => true,
    }
}

fn show(v: &Verdicts) -> String {
    match v {
        Ok(x) => format!("{x:?}"),
        Err(e) => format!("error: {e}"),
    }
}

/// Shrink a (formula, model) disagreement: model first, then formula.
fn shrink_pair(
    phi: &StateRef,
    m: &RegularTreeModel,
    frag: Fragment,
    verdicts: impl Fn(&StateRef, &RegularTreeModel) -> Verdicts,
) -> (StateRef, RegularTreeModel, Verdicts) {
    let m2 = shrink_model(m, |x| disagree(&verdicts(phi, x)));
    let phi2 = shrink_formula(phi, frag, |f| disagree(&verdicts(f, &m2)));
    let v = verdicts(&phi2, &m2);
    (phi2, m2, v)
}

fn rt1_verdicts(phi: &StateRef, m: &RegularTreeModel) -> Verdicts {
    let a = pctlpm_to_hta(phi)?;
    let back = hta_to_pctlpm(&a)?;
    Ok([mc_pctlpm(m, phi)?.root, accepts_two_way(&a, m)?, mc_pctlpm(m, &back)?.root])
}

fn roundtrip1(rng: &mut Rng, samples: usize, i: u64, t: &mut Trial) {
    let ap = random_ap(rng, 3);
    let phi = random_pctlpm(rng, &FormulaConfig { depth: 4, ap: ap.clone(), max_grade: 2 });
    t.counts.formulas += 1;
    let a = match pctlpm_to_hta(&phi) {
        Ok(a) => a,
        Err(e) => return t.fail(i, "compile", "automaton", e.to_string(), formula_json(&phi)),
    };
    let r = structural_report(&a);
    t.counts.checks += 1;
    if !(r.two_way && r.linear && r.hesitant && r.polarised) {
        let small = shrink_formula(&phi, Fragment::PastCTLpm, |f| {
            pctlpm_to_hta(f).map(|a| structural_report(&a)).map_or(true, |r| !(r.two_way && r.linear && r.hesitant && r.polarised))
        });
        t.fail(i, "certificate", "two_way, linear, hesitant, polarised", format!("{r:?}"), formula_json(&small));
    }
    let back = match hta_to_pctlpm(&a) {
        Ok(b) => b,
        Err(e) => return t.fail(i, "decompile", "formula", e.to_string(), json!({ "formula": formula_json(&phi), "automaton": a.to_json() })),
    };
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 6));
        t.counts.models += 1;
        t.counts.checks += 1;
        let v: Verdicts = (|| Ok([mc_pctlpm(&m, &phi)?.root, accepts_two_way(&a, &m)?, mc_pctlpm(&m, &back)?.root]))();
        if disagree(&v) {
            let (f, m2, v2) = shrink_pair(&phi, &m, Fragment::PastCTLpm, rt1_verdicts);
            t.fail(
                i,
                "roundtrip1",
                "mc(phi) = accepts_two_way(A) = mc(f(A))",
                show(&v2),
                json!({ "formula": formula_json(&f), "model": m2.to_json(), "original": show(&v) }),
            );
            return;
        }
    }
}

/// Certificates of a compiled CTL*± automaton: hesitant, polarised,
/// visible, and every linearised component counter-free.
pub fn star_certificate(a: &TreeAutomaton, reg: &DualityRegistry) -> std::result::Result<(), String> {
    let r = structural_report(a);
    if !(r.hesitant && r.polarised) {
        return Err(format!("{r:?}"));
    }
    match visibility_check(a, reg) {
        Visibility::Visible(_) => {}
        other => return Err(format!("{other:?}")),
    }
    for c in &a.partition {
        if c.kind == ComponentKind::Transient {
            continue;
        }
        let lin = linearize_component(a, c.states[0]).map_err(|e| e.to_string())?;
        if let Some(w) = is_counter_free(&lin.automaton).map_err(|e| e.to_string())? {
            return Err(format!("component of {} counts: {w:?}", a.states[c.states[0]]));
        }
    }
    Ok(())
}

fn rt2_verdicts(phi: &StateRef, m: &RegularTreeModel) -> Verdicts {
    let (a, reg) = ctlspm_to_hta(phi)?;
    let back = hta_to_ctlspm(&a, &reg)?.formula;
    Ok([mc_ctlspm(m, phi)?.root, accepts(&a, m)?, mc_ctlspm(m, &back)?.root])
}

fn roundtrip2(rng: &mut Rng, samples: usize, i: u64, t: &mut Trial) {
    let ap = random_ap(rng, 3);
    let phi = random_ctlspm(rng, &FormulaConfig { depth: 4, ap: ap.clone(), max_grade: 2 });
    t.counts.formulas += 1;
    let (a, reg) = match ctlspm_to_hta(&phi) {
        Ok(x) => x,
        Err(e) => return t.fail(i, "compile", "automaton", e.to_string(), formula_json(&phi)),
    };
    t.counts.checks += 1;
    if let Err(why) = star_certificate(&a, &reg) {
        let small = shrink_formula(&phi, Fragment::CTLStarPm, |f| {
            ctlspm_to_hta(f).map_or(true, |(a, reg)| star_certificate(&a, &reg).is_err())
        });
        t.fail(i, "certificate", "hesitant, polarised, visible, counter-free", why, formula_json(&small));
    }
    let back = match hta_to_ctlspm(&a, &reg) {
        Ok(b) => b.formula,
        Err(e) => return t.fail(i, "decompile", "formula", e.to_string(), json!({ "formula": formula_json(&phi), "automaton": a.to_json() })),
    };
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 6));
        t.counts.models += 1;
        t.counts.checks += 1;
        let v: Verdicts = (|| Ok([mc_ctlspm(&m, &phi)?.root, accepts(&a, &m)?, mc_ctlspm(&m, &back)?.root]))();
        if disagree(&v) {
            let (f, m2, v2) = shrink_pair(&phi, &m, Fragment::CTLStarPm, rt2_verdicts);
            t.fail(
                i,
                "roundtrip2",
                "mc(phi) = accepts(A) = mc(f(A))",
                show(&v2),
                json!({ "formula": formula_json(&f), "model": m2.to_json(), "original": show(&v) }),
            );
            return;
        }
    }
}

fn lasso_json<L: Letter>(w: &LassoWord<L>) -> Value {
    json!({
        "prefix": w.prefix.iter().map(L::to_json).collect::<Vec<_>>(),
        "cycle": w.cycle.iter().map(L::to_json).collect::<Vec<_>>(),
    })
}

/// Breakpoint output of a counter-free looping UBA: deterministic, looping,
/// counter-free, and equal to the input on `lassos` words.
fn breakpoint_trial(rng: &mut Rng, lassos: usize, i: u64, t: &mut Trial) {
    let sigma = plain_alphabet(rng.random_range(1..=3));
    let Some(w) = random_counter_free_uba(rng, 5, &sigma, 200) else {
        return t.fail(i, "generator", "counter-free looping UBA", "none within 200 draws", json!(sigma));
    };
    t.counts.formulas += 1;
    let b = match breakpoint_determinize(&w) {
        Ok(b) => b,
        Err(e) => return t.fail(i, "breakpoint", "automaton", e.to_string(), w.to_json()),
    };
    t.counts.checks += 1;
    let shape = (b.is_deterministic(), is_looping(&b).is_some(), matches!(is_counter_free(&b), Ok(None)));
    if shape != (true, true, true) {
        t.fail(i, "breakpoint_shape", "(deterministic, looping, counter-free) = (true, true, true)", format!("{shape:?}"), json!({ "uba": w.to_json(), "dba": b.to_json() }));
    }
    let differs = |l: &LassoWord<String>| match (accepts_lasso(&w, l), accepts_lasso(&b, l)) {
        (Ok(x), Ok(y)) => x != y,
        _ => true,
    };
    for _ in 0..lassos {
        let l = random_lasso(rng, &sigma, 4, 4);
        t.counts.models += 1;
        t.counts.checks += 1;
        if differs(&l) {
            let small = shrink_lasso(&l, differs);
            let got = format!("uba {}, dba {}", shown(&accepts_lasso(&w, &small)), shown(&accepts_lasso(&b, &small)));
            return t.fail(i, "breakpoint_lasso", "equal verdicts", got, json!({ "uba": w.to_json(), "dba": b.to_json(), "lasso": lasso_json(&small) }));
        }
    }
}

/// A co-safe or safe formula's looping automaton against prefix semantics.
fn fragment_trial(rng: &mut Rng, lassos: usize, safe: bool, i: u64, t: &mut Trial) {
    let ap: Vec<String> = random_ap(rng, 2);
    let psi = random_ltl(rng, &ap, 8, safe);
    t.counts.formulas += 1;
    let apset: BTreeSet<String> = ap.iter().cloned().collect();
    let polarity = if safe { Polarity::Safe } else { Polarity::CoSafe };
    let check = if safe { "safe_lasso" } else { "cosafe_lasso" };
    let w = match fragment_to_looping_word_automaton(&psi, polarity, &apset) {
        Ok(w) => w,
        Err(e) => return t.fail(i, check, "automaton", e.to_string(), json!(psi.to_string())),
    };
    t.counts.checks += 1;
    if is_looping(&w).is_none() {
        t.fail(i, check, "looping", "not looping", json!({ "formula": psi.to_string(), "automaton": w.to_json() }));
    }
    let letters = all_valuations(&apset);
    let verdicts = |l: &LassoWord<Valuation>| (accepts_lasso(&w, l), lasso_by_prefixes(&psi, l, safe));
    let differs = |l: &LassoWord<Valuation>| match verdicts(l) {
        (Ok(x), Ok(y)) => x != y,
        _ => true,
    };
    for _ in 0..lassos {
        let l = random_lasso(rng, &letters, 4, 4);
        t.counts.models += 1;
        t.counts.checks += 1;
        if differs(&l) {
            let small = shrink_lasso(&l, differs);
            let (x, y) = verdicts(&small);
            let got = format!("automaton {}, prefixes {}", shown(&x), shown(&y));
            return t.fail(i, check, "equal verdicts", got, json!({ "formula": psi.to_string(), "automaton": w.to_json(), "lasso": lasso_json(&small) }));
        }
    }
}

fn word(rng: &mut Rng, lassos: usize, i: u64, t: &mut Trial) {
    breakpoint_trial(rng, lassos, i, t);
    fragment_trial(rng, lassos, false, i, t);
    fragment_trial(rng, lassos, true, i, t);
}

fn dual(rng: &mut Rng, samples: usize, i: u64, t: &mut Trial) {
    let ap = random_ap(rng, 3);
    let phi = random_ctlspm(rng, &FormulaConfig { depth: 4, ap: ap.clone(), max_grade: 2 });
    t.counts.formulas += 1;
    let compiled = ctlspm_to_hta(&phi).and_then(|(a, _)| Ok((dualize_tree(&a)?, a)));
    let (d, a) = match compiled {
        Ok(x) => x,
        Err(e) => return t.fail(i, "compile", "automaton and dual", e.to_string(), formula_json(&phi)),
    };
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 6));
        t.counts.models += 1;
        t.counts.checks += 1;
        let fails = |m: &RegularTreeModel| match (accepts(&a, m), accepts(&d, m)) {
            (Ok(x), Ok(y)) => x == y,
            _ => true,
        };
        if fails(&m) {
            let m2 = shrink_model(&m, fails);
            let got = format!("A {}, dual {}", shown(&accepts(&a, &m2)), shown(&accepts(&d, &m2)));
            return t.fail(i, "dual", "exactly one accepts", got, json!({ "formula": formula_json(&phi), "automaton": a.to_json(), "model": m2.to_json() }));
        }
    }
}

/// Which checker an oracle instance exercises.
fn checker(kind: u64) -> (Fragment, fn(&RegularTreeModel, &StateRef) -> Result<crate::check::McResult>) {
    match kind % 3 {
        0 => (Fragment::PastCTLpm, mc_pctlpm),
        1 => (Fragment::CTLStarPm, mc_ctlspm),
        _ => (Fragment::CTLStarF, mc_ctlsf),
    }
}

fn oracle(rng: &mut Rng, samples: usize, i: u64, t: &mut Trial) {
    let ap = random_ap(rng, 3);
    let cfg = FormulaConfig { depth: 4, ap: ap.clone(), max_grade: 2 };
    let (frag, mc) = checker(i);
    let phi = match frag {
        Fragment::PastCTLpm => random_pctlpm(rng, &cfg),
        Fragment::CTLStarPm => random_ctlspm(rng, &cfg),
        _ => random_ctlsf(rng, &cfg),
    };
    t.counts.formulas += 1;
    let verdicts = |f: &StateRef, m: &RegularTreeModel| -> Verdicts {
        let fuel = oracle_bound(m, f)?;
        let o = oracle_eval(m, f, fuel)?;
        let r = mc(m, f)?.root;
        Ok([r, o, o])
    };
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 6));
        t.counts.models += 1;
        t.counts.checks += 1;
        let v = verdicts(&phi, &m);
        if disagree(&v) {
            let (f, m2, v2) = shrink_pair(&phi, &m, frag, verdicts);
            t.fail(i, "oracle", "mc = oracle_eval at oracle_bound", show(&v2), json!({ "formula": formula_json(&f), "model": m2.to_json() }));
            break;
        }
    }
    let a = random_hesitant(rng, 4, &ap);
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 3));
        t.counts.models += 1;
        t.counts.checks += 1;
        let got = (accepts(&a, &m), brute_force_accepts(&a, &m, BRUTE_BUDGET));
        match got {
            (Ok(x), Ok(Some(y))) if x == y => {}
            (x, y) => {
                let detail = format!("accepts {}, brute force {}", shown(&x), shown(&y));
                t.fail(i, "brute_force", "accepts = brute_force_accepts", detail, json!({ "automaton": a.to_json(), "model": m.to_json() }));
                break;
            }
        }
    }
}

/// Strategy budget for explicit acceptance search.
pub const BRUTE_BUDGET: usize = 1_000_000;

/// Propositional future formula with `∧ ∨ X wX U R` over literals.
fn random_finite_body(rng: &mut Rng, ap: &[String], size: usize) -> PathRef {
    if size <= 1 {
        let p = atom(&ap[rng.random_range(0..ap.len())]);
        return st(if rng.random_bool(0.3) { not(p) } else { p });
    }
    if size == 2 || rng.random_bool(0.3) {
        let a = random_finite_body(rng, ap, size - 1);
        return if rng.random_bool(0.5) { next(a) } else { wnext(a) };
    }
    let left = rng.random_range(1..size - 1);
    let a = random_finite_body(rng, ap, left);
    let b = random_finite_body(rng, ap, size - 1 - left);
    match rng.random_range(0..4) {
        0 => pand(a, b),
        1 => por(a, b),
        2 => until(a, b),
        _ => release(a, b),
    }
}

/// Positions of a trace where `psi` and its release-free form differ.
pub fn release_elimination_mismatch(psi: &PathRef, trace: &[Valuation]) -> Result<Option<usize>> {
    let elim = eliminate_release_finite(psi);
    let x = trace_table(psi, trace, TraceMode::Neutral)?;
    let y = trace_table(&elim, trace, TraceMode::Neutral)?;
    Ok(x.iter().zip(&y).position(|(a, b)| a != b))
}

fn finite(rng: &mut Rng, samples: usize, i: u64, t: &mut Trial) {
    let ap = vec!["p".to_string(), "q".to_string()];
    let letters = all_valuations(&ap.iter().cloned().collect());
    let size = rng.random_range(1..=7);
    let psi = random_finite_body(rng, &ap, size);
    t.counts.formulas += 1;
    for trace in all_traces(&letters, 6) {
        t.counts.checks += 1;
        match release_elimination_mismatch(&psi, &trace) {
            Ok(None) => {}
            r => {
                let got = match r {
                    Ok(Some(pos)) => format!("differs at position {pos}"),
                    Err(e) => e.to_string(),
                    Ok(None) => unreachable!(),
                };
                let trace_json: Vec<Value> = trace.iter().map(|v| v.to_json()).collect();
                let elim = eliminate_release_finite(&psi).to_string();
                return t.fail(i, "release_elimination", "equal on every position", got, json!({ "formula": psi.to_string(), "rewritten": elim, "trace": trace_json }));
            }
        }
    }
    let phi = exists_fin(wnext(st(atom("p"))));
    for _ in 0..samples {
        let m = random_model_with(rng, &model_cfg(&ap, 6));
        t.counts.models += 1;
        t.counts.checks += 1;
        let ok = mc_ctlsf(&m, &phi).map(|r| r.nodes.iter().all(|n| n.holds)).unwrap_or(false)
            && ctlsf_bridge(&phi).map(|b| *b == StateFormula::True).unwrap_or(false);
        if !ok {
            return t.fail(i, "weak_next", "Ef wX p holds everywhere", "false somewhere", json!({ "model": m.to_json() }));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let mut cfg = CampaignConfig::new(Suite::Roundtrip1, 3, 4);
        cfg.samples = 5;
        let a = run_campaign(&cfg);
        cfg.threads = 1;
        let b = run_campaign(&cfg);
        assert_eq!(a.to_json_untimed(), b.to_json_untimed());
        assert!(a.passed(), "{:#}", a.to_json());
        assert_eq!(a.counts.formulas, 4);
    }

    #[test]
    fn small_campaigns_pass() {
        for suite in Suite::ALL {
            let mut cfg = CampaignConfig::new(suite, 11, 3);
            cfg.samples = cfg.samples.min(5);
            let r = run_campaign(&cfg);
            assert!(r.passed(), "{suite}: {:#}", r.to_json());
        }
    }
}
