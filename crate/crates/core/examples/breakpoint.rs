use treelogic::harness::gen::{plain_alphabet, random_counter_free_uba, random_lasso, trial_rng};
use treelogic::word::{accepts_lasso, breakpoint_determinize, is_counter_free, is_looping};

fn main() -> treelogic::Result<()> {
    let seed = std::env::var("TREELOGIC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut rng = trial_rng(seed, 0);
    let alphabet = plain_alphabet(2);
    let uba = random_counter_free_uba(&mut rng, 4, &alphabet, 200).expect("a counter-free sample");
    let det = breakpoint_determinize(&uba)?;

    println!("input:  {} states, {}", uba.len(), uba.kind());
    println!("output: {} states, {}, deterministic {}, looping {}, counter-free {}",
        det.len(), det.kind(), det.is_deterministic(), is_looping(&det).is_some(), is_counter_free(&det)?.is_none());

    for _ in 0..5 {
        let w = random_lasso(&mut rng, &alphabet, 3, 3);
        println!("  {:?} ({:?})^ω  uba {}  det {}", w.prefix, w.cycle, accepts_lasso(&uba, &w)?, accepts_lasso(&det, &w)?);
    }
    Ok(())
}
