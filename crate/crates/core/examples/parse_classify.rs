//! Parse formulas, print them back, and list the fragments they fall in.
//!
//!     cargo run --example parse_classify -- "A (p U E Y q)"

use treelogic::formula::json::state_to_json;
use treelogic::formula::{classify_fragment, parse_state};

fn main() -> treelogic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec!["E (G p)".to_string(), "A (p U E Y q)".into(), "E ((s | (a U b)) U r)".into(), "Ef wX p".into(), "D2 E O q".into()]
    } else {
        args
    };
    for text in inputs {
        let phi = parse_state(&text)?;
        let frags: Vec<String> = classify_fragment(&phi).iter().map(|f| f.to_string()).collect();
        println!("{phi}");
        println!("  fragments: {}", frags.join(", "));
        println!("  json:      {}", state_to_json(&phi));
    }
    Ok(())
}
