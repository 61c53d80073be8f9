//! The dual automaton accepts exactly the trees the original rejects.

use treelogic::formula::parse_state;
use treelogic::model::{random_model, ModelConfig};
use treelogic::translate::ctlspm_to_hta;
use treelogic::tree::{accepts, dualize_with_registry};

fn main() -> treelogic::Result<()> {
    let phi = parse_state("E (p U (q | E X r)) & A G (p | C1 q)")?;
    let (a, reg) = ctlspm_to_hta(&phi)?;
    let (d, dreg) = dualize_with_registry(&a, &reg)?;
    println!("{phi}: {} states, dual {} states, {} registry pairs", a.len(), d.len(), dreg.len());
    let cfg = ModelConfig { max_nodes: 5, max_branch: 3, ap: ["p", "q", "r"].map(String::from).to_vec() };
    for seed in 0..10 {
        let m = random_model(seed, &cfg);
        let (x, y) = (accepts(&a, &m)?, accepts(&d, &m)?);
        println!("  model {seed}: A {x}, dual {y}");
        assert_ne!(x, y);
    }
    Ok(())
}
