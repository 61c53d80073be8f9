use treelogic::formula::rewrite::eliminate_release_state;
use treelogic::formula::{parse_state, subformula_closure, to_nnf, to_simple_form, Fragment};
use treelogic::translate::ctlsf_bridge;

fn main() -> treelogic::Result<()> {
    let past = parse_state("!E (p U !E Y q)")?;
    println!("nnf (PastCTL±)  {past}  =>  {}", to_nnf(&past, Fragment::PastCTLpm)?);

    let star = parse_state("!A (G (p -> E F q))")?;
    println!("nnf (CTL*±)     {star}  =>  {}", to_nnf(&star, Fragment::CTLStarPm)?);

    let simple = parse_state("A X (E (p U q) | A (p R E X r))")?;
    println!("simple form     {simple}  =>  {}", to_simple_form(&simple)?);

    let fin = parse_state("Ef (p R q)")?;
    println!("release-free    {fin}  =>  {}", eliminate_release_state(&fin));
    for text in ["Ef wX p", "Ef X p", "Ef (p U wX q)"] {
        let phi = parse_state(text)?;
        println!("bridge          {phi}  =>  {}", ctlsf_bridge(&phi)?);
    }

    println!("closure of {simple}:");
    for g in subformula_closure(&simple)? {
        println!("  {g}");
    }
    Ok(())
}
