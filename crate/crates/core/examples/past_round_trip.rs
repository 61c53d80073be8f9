//! PastCTL± to a two-way linear hesitant automaton and back, checked on a
//! handful of random models.

use treelogic::check::mc_pctlpm;
use treelogic::formula::parse_state;
use treelogic::model::{random_model, ModelConfig};
use treelogic::translate::{hta_to_pctlpm, pctlpm_to_hta};
use treelogic::tree::{accepts_two_way, structural_report};

fn main() -> treelogic::Result<()> {
    let phi = parse_state("A X (p | E (q S r)) & E X E Y E O p")?;
    let a = pctlpm_to_hta(&phi)?;
    let r = structural_report(&a);
    println!("{phi}");
    println!("  {} states, two-way {}, linear {}, hesitant {}, polarised {}", a.len(), r.two_way, r.linear, r.hesitant, r.polarised);

    let back = hta_to_pctlpm(&a)?;
    println!("  back: {} nodes, {} chars", back.size(), back.to_string().len());

    let cfg = ModelConfig { max_nodes: 5, max_branch: 3, ap: ["p", "q", "r"].map(String::from).to_vec() };
    for seed in 0..8 {
        let m = random_model(seed, &cfg);
        let (x, y, z) = (mc_pctlpm(&m, &phi)?.root, accepts_two_way(&a, &m)?, mc_pctlpm(&m, &back)?.root);
        println!("  model {seed}: formula {x}, automaton {y}, back {z}");
        assert!(x == y && y == z);
    }
    Ok(())
}
