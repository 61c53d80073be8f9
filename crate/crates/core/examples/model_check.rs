//! Model checking against the approximant oracle, plus explicit acceptance
//! search for a small automaton.

use treelogic::check::{mc_ctlsf, mc_ctlspm, mc_pctlpm, oracle_bound, oracle_eval};
use treelogic::formula::parse_state;
use treelogic::model::RegularTreeModel;
use treelogic::tree::fixtures::example_a;
use treelogic::tree::{accepts, brute_force_accepts};

fn main() -> treelogic::Result<()> {
    // 0 -> 1 -> 2 -> 2, and 0 -> 2; 2 carries q.
    let m = RegularTreeModel::from_parts(0, vec![vec!["p"], vec!["p"], vec!["q"]], vec![vec![1, 2], vec![2], vec![2]]);

    for text in ["E (p U q)", "A X E Y p", "D2 (p | q)", "Ef (p U q)", "E X (q & E O p)"] {
        let phi = parse_state(text)?;
        let r = match mc_pctlpm(&m, &phi) {
            Ok(r) => r,
            Err(_) => mc_ctlspm(&m, &phi).or_else(|_| mc_ctlsf(&m, &phi))?,
        };
        let fuel = oracle_bound(&m, &phi)?;
        let holds: Vec<usize> = r.nodes.iter().filter(|n| n.holds).map(|n| n.node).collect();
        println!("{phi:24} root {:5}  oracle {:5}  holds at {holds:?}", r.root, oracle_eval(&m, &phi, fuel)?);
    }

    let a = example_a();
    println!("example_a on this model: {} (explicit search {:?})", accepts(&a, &m)?, brute_force_accepts(&a, &m, 100_000)?);
    Ok(())
}
