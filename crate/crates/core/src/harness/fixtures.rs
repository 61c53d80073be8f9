//! Named examples with known answers.

use serde::Serialize;

use crate::check::{mc_ctlsf, mc_ctlspm, mc_pctlpm};
use crate::error::Result;
use crate::formula::{parse_state, StateFormula, StateRef};
use crate::model::{random_model, ModelConfig, RegularTreeModel};
use crate::translate::ctlsf_bridge;
use crate::tree::fixtures::{example_a, example_a_prime};
use crate::tree::{accepts, brute_force_accepts, linearize_component, visibility_check, Clause, DualityRegistry, TreeAtom, Visibility};
use crate::word::{is_counter_free, Composite};

/// `E((s ∨ a U b) U r)` as a CTL*± formula.
pub const UNTIL_STAR: &str = "E ((s | (a U b)) U r)";

/// The same property at the root, written with past operators only in
/// front of `E`.
pub const UNTIL_PAST: &str = "r \
    | E F (b & E Y E (a S (r & a & !E O (!a & !b & E (!b S (!b & !s)))))) \
    | E F (r & b & E Y !E O (!a & !b & E (!b S (!b & !s)))) \
    | E F (r & E Y (!E O (!a & !b & E (!b S (!b & !s))) & !E (!b S (!b & !s))))";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, r: Result<(bool, String)>) -> FixtureOutcome {
    match r {
        Ok((passed, detail)) => FixtureOutcome { name, passed, detail },
        Err(e) => FixtureOutcome { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Every fixture, in a fixed order.
pub fn run_fixtures() -> Vec<FixtureOutcome> {
    vec![
        outcome("until_past_equivalence", until_past_equivalence(500)),
        outcome("example_a_witnesses", example_a_witnesses()),
        outcome("example_a_visibility", example_a_visibility()),
        outcome("example_a_prime_visibility", example_a_prime_visibility()),
        outcome("example_a_prime_counts", example_a_prime_counts()),
        outcome("example_a_counter_free", example_a_counter_free()),
        outcome("finite_weak_next", finite_weak_next(100)),
    ]
}

pub fn until_formulas() -> Result<(StateRef, StateRef)> {
    Ok((parse_state(UNTIL_STAR)?, parse_state(UNTIL_PAST)?))
}

/// Root agreement of [`UNTIL_STAR`] and [`UNTIL_PAST`] on `n` seeded models.
pub fn until_past_equivalence(n: u64) -> Result<(bool, String)> {
    let (star, past) = until_formulas()?;
    let cfg = ModelConfig { max_nodes: 6, max_branch: 3, ap: ["a", "b", "r", "s"].map(String::from).to_vec() };
    let mut holds = 0;
    for seed in 0..n {
        let m = random_model(seed, &cfg);
        let x = mc_ctlspm(&m, &star)?.root;
        let y = mc_pctlpm(&m, &past)?.root;
        if x != y {
            return Ok((false, format!("model seed {seed}: star {x}, past {y}: {}", m.to_json())));
        }
        holds += x as usize;
    }
    Ok((true, format!("{n} models agree ({holds} satisfy)")))
}

/// A tree in the language of A: the even ∅-path 0,1,3 ends in a {b}-child
/// and the root has an {a}-child.
pub fn member_model() -> RegularTreeModel {
    RegularTreeModel::from_parts(
        0,
        vec![vec![], vec![], vec!["a"], vec![], vec!["b"]],
        vec![vec![1, 2], vec![3], vec![2], vec![4], vec![4]],
    )
}

/// A tree outside it: the only {b}-child hangs off an odd ∅-path.
pub fn non_member_model() -> RegularTreeModel {
    RegularTreeModel::from_parts(
        0,
        vec![vec![], vec![], vec!["b"], vec!["a"]],
        vec![vec![1, 3], vec![2], vec![2], vec![3]],
    )
}

pub fn example_a_witnesses() -> Result<(bool, String)> {
    let a = example_a();
    let (m, n) = (member_model(), non_member_model());
    let got = (accepts(&a, &m)?, accepts(&a, &n)?);
    let brute = (brute_force_accepts(&a, &m, 100_000)?, brute_force_accepts(&a, &n, 100_000)?);
    let ok = got == (true, false) && brute == (Some(true), Some(false));
    Ok((ok, format!("member {}, non-member {} (brute force {:?}, {:?})", got.0, got.1, brute.0, brute.1)))
}

pub fn example_a_visibility() -> Result<(bool, String)> {
    let a = example_a();
    let qb = a.state_index("qb").expect("qb");
    Ok(match visibility_check(&a, &DualityRegistry::new()) {
        Visibility::Violated(w) => {
            let ok = w.left == Clause::new() && w.right == Clause::from([TreeAtom::dia(1, qb)]);
            (ok, format!("violated on ({}, {})", render(&a.states, &w.left), render(&a.states, &w.right)))
        }
        other => (false, format!("{other:?}")),
    })
}

fn render(names: &[String], c: &Clause) -> String {
    let atoms: Vec<String> = c.iter().map(|t| t.render(names)).collect();
    format!("{{{}}}", atoms.join(", "))
}

pub fn example_a_prime_visibility() -> Result<(bool, String)> {
    let (a, reg) = example_a_prime();
    Ok(match visibility_check(&a, &reg) {
        Visibility::Visible(certs) => (true, format!("visible, {} certificates", certs.len())),
        other => (false, format!("{other:?}")),
    })
}

/// The loop at qI on two `(∅, {(◇,qa), (◇,qb)})` letters has no one-letter
/// counterpart.
pub fn example_a_prime_counts() -> Result<(bool, String)> {
    let (a, _) = example_a_prime();
    let lin = linearize_component(&a, a.initial)?;
    let letter = Composite { sigma: Default::default(), annot: ["(<>,qa)", "(<>,qb)"].map(String::from).into() };
    Ok(match is_counter_free(&lin.automaton)? {
        Some(w) => {
            let ok = lin.automaton.states[w.state] == "qI" && w.power == 2 && w.word == vec![letter];
            (ok, format!("counter at {} on {:?}^{}", lin.automaton.states[w.state], w.word, w.power))
        }
        None => (false, "counter-free".into()),
    })
}

pub fn example_a_counter_free() -> Result<(bool, String)> {
    let a = example_a();
    let lin = linearize_component(&a, a.initial)?;
    Ok(match is_counter_free(&lin.automaton)? {
        None => (true, "counter-free".into()),
        Some(w) => (false, format!("{w:?}")),
    })
}

/// `E^f wX p` holds everywhere and the bridge rewrites it to ⊤.
pub fn finite_weak_next(n: u64) -> Result<(bool, String)> {
    let phi = parse_state("Ef wX p")?;
    if *ctlsf_bridge(&phi)? != StateFormula::True {
        return Ok((false, "bridge did not return true".into()));
    }
    let cfg = ModelConfig { max_nodes: 5, max_branch: 3, ap: vec!["p".into(), "q".into()] };
    for seed in 0..n {
        let m = random_model(seed, &cfg);
        let r = mc_ctlsf(&m, &phi)?;
        if !r.nodes.iter().all(|x| x.holds) {
            return Ok((false, format!("fails on model seed {seed}")));
        }
    }
    Ok((true, format!("true at every node of {n} models")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_pass() {
        for f in run_fixtures() {
            assert!(f.passed, "{}: {}", f.name, f.detail);
        }
    }
}
