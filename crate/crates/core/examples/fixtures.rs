fn main() {
    let outcomes = treelogic::harness::run_fixtures();
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    if outcomes.iter().any(|o| !o.passed) {
        std::process::exit(1);
    }
}
