use treelogic::tree::fixtures::{example_a, example_a_prime};
use treelogic::tree::{visibility_check, DualityRegistry, Visibility};

fn main() {
    let a = example_a();
    let (b, reg) = example_a_prime();
    for (name, aut, reg) in [("example_a", &a, DualityRegistry::new()), ("example_a_prime", &b, reg)] {
        match visibility_check(aut, &reg) {
            Visibility::Visible(certs) => println!("{name}: visible ({} certificates)", certs.len()),
            Visibility::Violated(w) => {
                let show = |c: &treelogic::tree::Clause| c.iter().map(|t| t.render(&aut.states)).collect::<Vec<_>>().join(", ");
                println!("{name}: violated in component {} on ({{{}}}, {{{}}})", w.component, show(&w.left), show(&w.right));
            }
            Visibility::Unknown { open, samples } => println!("{name}: unknown, {} open pairs after {samples} samples", open.len()),
        }
    }
}
