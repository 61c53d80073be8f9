//! Linearise the initial component of example_a and example_a_prime and
//! test counter-freeness of the resulting word automata.

use treelogic::tree::fixtures::{example_a, example_a_prime};
use treelogic::tree::linearize_component;
use treelogic::word::is_counter_free;

fn main() -> treelogic::Result<()> {
    for (name, a) in [("example_a", example_a()), ("example_a_prime", example_a_prime().0)] {
        let lin = linearize_component(&a, a.initial)?;
        println!("{name}: {} word states, {} letters", lin.automaton.len(), lin.automaton.alphabet.len());
        for (key, atom) in &lin.atoms {
            println!("  {key} = {}", atom.render(&a.states));
        }
        match is_counter_free(&lin.automaton)? {
            None => println!("  counter-free"),
            Some(w) => println!("  counter at {} on {:?}, power {}", lin.automaton.states[w.state], w.word, w.power),
        }
    }
    Ok(())
}
