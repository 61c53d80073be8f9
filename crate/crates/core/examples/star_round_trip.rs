//! CTL*± to a one-way hesitant automaton with a duality registry, the
//! structural certificate, and the automaton-guarded formula coming back.

use treelogic::check::mc_ctlspm;
use treelogic::formula::parse_state;
use treelogic::harness::star_certificate;
use treelogic::model::{random_model, ModelConfig};
use treelogic::translate::{ctlspm_to_hta, hta_to_ctlspm};
use treelogic::tree::accepts;

fn main() -> treelogic::Result<()> {
    let phi = parse_state("E ((s | (a U b)) U r) & A G (a -> D2 b)")?;
    let (a, reg) = ctlspm_to_hta(&phi)?;
    println!("{phi}");
    println!("  {} states, {} registry pairs", a.len(), reg.len());
    match star_certificate(&a, &reg) {
        Ok(()) => println!("  certificate: hesitant, polarised, visible, counter-free"),
        Err(why) => println!("  certificate failed: {why}"),
    }

    let back = hta_to_ctlspm(&a, &reg)?;
    println!("  back ({} chars, unverified visibility {})", back.formula.to_string().len(), back.unverified_visibility);

    let cfg = ModelConfig { max_nodes: 6, max_branch: 3, ap: ["a", "b", "r", "s"].map(String::from).to_vec() };
    let mut agree = 0;
    for seed in 0..50 {
        let m = random_model(seed, &cfg);
        let want = mc_ctlspm(&m, &phi)?.root;
        if accepts(&a, &m)? == want && mc_ctlspm(&m, &back.formula)?.root == want {
            agree += 1;
        }
    }
    println!("  agreement on {agree}/50 random models");
    Ok(())
}
