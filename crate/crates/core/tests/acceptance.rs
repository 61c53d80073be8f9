//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails. `TREELOGIC_SEED` overrides the seed.

use std::process::ExitCode;
use std::time::Instant;

use treelogic::harness::{run_campaign, run_fixtures, CampaignConfig, CampaignReport, Suite};

const DEFAULT_SEED: u64 = 1;

fn seed() -> u64 {
    std::env::var("TREELOGIC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn campaign(suite: Suite, seed: u64, n: usize, samples: usize) -> CampaignReport {
    let mut cfg = CampaignConfig::new(suite, seed, n);
    cfg.samples = samples;
    run_campaign(&cfg)
}

fn failures(r: &CampaignReport, checks: &[&str]) -> usize {
    r.failures.iter().filter(|f| checks.contains(&f.check.as_str())).count()
}

struct Line {
    id: usize,
    passed: bool,
    text: String,
}

fn line(id: usize, passed: bool, text: String) -> Line {
    Line { id, passed, text }
}

fn first_failure(r: &CampaignReport, checks: &[&str]) -> String {
    r.failures
        .iter()
        .find(|f| checks.contains(&f.check.as_str()))
        .map(|f| format!("; first: trial {} {} expected {} got {} {}", f.trial, f.check, f.expected, f.got, f.artifacts))
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let seed = seed();
    println!("acceptance seed {seed}");
    let mut lines = Vec::new();

    let start = Instant::now();
    let rt1 = campaign(Suite::Roundtrip1, seed, 200, 50);
    let secs = start.elapsed().as_secs_f64();
    let bad = failures(&rt1, &["roundtrip1", "compile", "decompile"]);
    lines.push(line(
        1,
        bad == 0 && secs < 600.0,
        format!(
            "PastCTL± round trip: {} formulas x 50 models, {} checks, {bad} disagreements (tolerance 0), {secs:.1}s (limit 600s){}",
            rt1.counts.formulas,
            rt1.counts.models,
            first_failure(&rt1, &["roundtrip1", "compile", "decompile"])
        ),
    ));

    let rt2 = campaign(Suite::Roundtrip2, seed, 200, 50);
    let cert = ["certificate", "compile"];
    let (c1, c2) = (failures(&rt1, &cert), failures(&rt2, &cert));
    lines.push(line(
        2,
        c1 == 0 && c2 == 0,
        format!(
            "certificates: two-way {}/{} linear hesitant polarised, one-way {}/{} hesitant polarised visible counter-free{}{}",
            rt1.counts.formulas - c1,
            rt1.counts.formulas,
            rt2.counts.formulas - c2,
            rt2.counts.formulas,
            first_failure(&rt1, &cert),
            first_failure(&rt2, &cert)
        ),
    ));

    let bad = failures(&rt2, &["roundtrip2", "compile", "decompile"]);
    lines.push(line(
        3,
        bad == 0,
        format!(
            "CTL*± round trip: {} formulas x 50 models, {bad} disagreements (tolerance 0){}",
            rt2.counts.formulas,
            first_failure(&rt2, &["roundtrip2", "compile", "decompile"])
        ),
    ));

    let word = campaign(Suite::Word, seed, 100, 100);
    let bp = ["generator", "breakpoint", "breakpoint_shape", "breakpoint_lasso"];
    let bad = failures(&word, &bp);
    lines.push(line(
        4,
        bad == 0,
        format!(
            "breakpoint: 100 counter-free looping UBAs x 100 lassos, {bad} failures (deterministic, looping, counter-free, lasso-equivalent; tolerance 0){}",
            first_failure(&word, &bp)
        ),
    ));

    let frag = ["cosafe_lasso", "safe_lasso"];
    let bad = failures(&word, &frag);
    lines.push(line(
        5,
        bad == 0,
        format!(
            "safety fragments: 100 coSafeLTL + 100 SafeLTL formulas (size <= 8) x 100 lassos vs prefix semantics, {bad} disagreements (tolerance 0){}",
            first_failure(&word, &frag)
        ),
    ));

    let fin = campaign(Suite::Finite, seed, 100, 1);
    lines.push(line(
        6,
        fin.passed(),
        format!(
            "finite paths: release elimination on 100 formulas x all {} traces of length <= 6 over 2 atoms, Ef wX p true on {} models, {} failures{}",
            fin.counts.checks - fin.counts.models,
            fin.counts.models,
            fin.failures.len(),
            first_failure(&fin, &["release_elimination", "weak_next"])
        ),
    ));

    let fixtures = run_fixtures();
    let failed: Vec<String> = fixtures.iter().filter(|f| !f.passed).map(|f| format!("{}: {}", f.name, f.detail)).collect();
    lines.push(line(
        7,
        failed.is_empty(),
        format!("fixtures: {}/{} pass{}", fixtures.len() - failed.len(), fixtures.len(), if failed.is_empty() { String::new() } else { format!("; {}", failed.join("; ")) }),
    ));

    let dual = campaign(Suite::Dual, seed, 100, 1);
    lines.push(line(
        8,
        dual.passed(),
        format!(
            "duality: {} (compiled A, model) pairs, accepts(A) xor accepts(dual A), {} failures{}",
            dual.counts.checks,
            dual.failures.len(),
            first_failure(&dual, &["dual", "compile"])
        ),
    ));

    let oracle = campaign(Suite::Oracle, seed, 1000, 1);
    let o = failures(&oracle, &["oracle"]);
    let b = failures(&oracle, &["brute_force"]);
    lines.push(line(
        9,
        oracle.passed(),
        format!(
            "oracles: mc vs oracle_eval at oracle_bound on 1000 instances ({o} disagreements), accepts vs explicit search on 1000 automata |Q| <= 4 x models <= 3 nodes ({b} disagreements){}",
            first_failure(&oracle, &["oracle", "brute_force"])
        ),
    ));

    let mut ok = true;
    for l in &lines {
        ok &= l.passed;
        println!("criterion {}: {} {}", l.id, if l.passed { "PASS" } else { "FAIL" }, l.text);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
