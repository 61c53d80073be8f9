//! Run every campaign at a small size and print the reports.
//!
//!     TREELOGIC_SEED=9 cargo run --release --example fuzz_campaign

use treelogic::harness::{run_campaign, CampaignConfig, Suite};

fn main() {
    let seed = std::env::var("TREELOGIC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut failed = false;
    for suite in Suite::ALL {
        let mut cfg = CampaignConfig::new(suite, seed, 20);
        cfg.samples = cfg.samples.min(10);
        let r = run_campaign(&cfg);
        println!("{:10} seed {seed}: {:4} formulas {:5} models {:7} checks, {} failures, {} ms",
            suite.name(), r.counts.formulas, r.counts.models, r.counts.checks, r.failures.len(), r.wall_ms);
        for f in &r.failures {
            println!("  trial {} {}: expected {}, got {}", f.trial, f.check, f.expected, f.got);
        }
        failed |= !r.passed();
    }
    if failed {
        std::process::exit(1);
    }
}
