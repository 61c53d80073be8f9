//! Co-safe and safe LTL to looping word automata, decided on lasso words.

use std::collections::BTreeSet;

use treelogic::formula::parse_path;
use treelogic::formula::Valuation;
use treelogic::word::{accepts_lasso, fragment_to_looping_word_automaton, LassoWord, Polarity};

fn v(atoms: &[&str]) -> Valuation {
    atoms.iter().map(|s| s.to_string()).collect()
}

fn main() -> treelogic::Result<()> {
    let ap: BTreeSet<String> = ["p", "q"].map(String::from).into();
    let words = [
        LassoWord { prefix: vec![v(&["p"]), v(&["p"])], cycle: vec![v(&["q"])] },
        LassoWord { prefix: vec![], cycle: vec![v(&["p"])] },
        LassoWord { prefix: vec![v(&[])], cycle: vec![v(&["p", "q"])] },
    ];
    for (text, pol) in [("p U q", Polarity::CoSafe), ("F (p & X q)", Polarity::CoSafe), ("G p", Polarity::Safe), ("p R q", Polarity::Safe)] {
        let psi = parse_path(text)?;
        let w = fragment_to_looping_word_automaton(&psi, pol, &ap)?;
        let verdicts: Vec<bool> = words.iter().map(|l| accepts_lasso(&w, l)).collect::<Result<_, _>>()?;
        println!("{text:12} {:?}: {} states, {}, verdicts {verdicts:?}", pol, w.len(), w.kind());
    }
    Ok(())
}
