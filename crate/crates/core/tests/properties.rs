use proptest::prelude::*;

use treelogic::check::{mc_ctlspm, mc_pctlpm, oracle_bound, oracle_eval};
use treelogic::formula::json::{state_from_json, state_to_json};
use treelogic::formula::{parse_state, to_nnf, Fragment};
use treelogic::harness::gen::{
    plain_alphabet, random_counter_free_uba, random_ctlspm, random_lasso, random_pctlpm, trial_rng, FormulaConfig,
};
use treelogic::harness::{run_campaign, CampaignConfig, Suite};
use treelogic::model::{random_model, ModelConfig, RegularTreeModel};
use treelogic::translate::{ctlspm_to_hta, hta_to_ctlspm, hta_to_pctlpm, pctlpm_to_hta};
use treelogic::tree::{accepts, accepts_two_way, dualize_tree, TreeAutomaton};
use treelogic::word::{accepts_lasso, breakpoint_determinize, is_looping};

const AP: [&str; 3] = ["p", "q", "r"];

fn models() -> ModelConfig {
    ModelConfig { max_nodes: 5, max_branch: 3, ap: AP.map(String::from).to_vec() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>(), depth in 1usize..5) {
        let mut rng = trial_rng(seed, 0);
        let cfg = FormulaConfig::new(depth, &AP);
        for phi in [random_pctlpm(&mut rng, &cfg), random_ctlspm(&mut rng, &cfg)] {
            let back = parse_state(&phi.to_string()).unwrap();
            prop_assert_eq!(back.to_string(), phi.to_string());
            let json = state_from_json(&state_to_json(&phi)).unwrap();
            prop_assert_eq!(json.to_string(), phi.to_string());
        }
    }

    #[test]
    fn nnf_keeps_verdicts(seed in any::<u64>(), mseed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let cfg = FormulaConfig::new(3, &AP);
        let m = random_model(mseed, &models());
        let past = random_pctlpm(&mut rng, &cfg);
        let star = random_ctlspm(&mut rng, &cfg);
        let np = to_nnf(&past, Fragment::PastCTLpm).unwrap();
        let ns = to_nnf(&star, Fragment::CTLStarPm).unwrap();
        prop_assert_eq!(mc_pctlpm(&m, &past).unwrap().nodes, mc_pctlpm(&m, &np).unwrap().nodes);
        prop_assert_eq!(mc_ctlspm(&m, &star).unwrap().nodes, mc_ctlspm(&m, &ns).unwrap().nodes);
    }

    #[test]
    fn checkers_match_oracle(seed in any::<u64>(), mseed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let m = random_model(mseed, &models());
        let phi = random_pctlpm(&mut rng, &FormulaConfig::new(3, &AP));
        let fuel = oracle_bound(&m, &phi).unwrap();
        prop_assert_eq!(mc_pctlpm(&m, &phi).unwrap().root, oracle_eval(&m, &phi, fuel).unwrap());
    }

    #[test]
    fn past_translation_round_trips(seed in any::<u64>(), mseed in any::<u64>()) {
        let mut rng = trial_rng(seed, 3);
        let phi = random_pctlpm(&mut rng, &FormulaConfig::new(3, &AP));
        let a = pctlpm_to_hta(&phi).unwrap();
        let back = hta_to_pctlpm(&a).unwrap();
        let m = random_model(mseed, &models());
        let want = mc_pctlpm(&m, &phi).unwrap().root;
        prop_assert_eq!(accepts_two_way(&a, &m).unwrap(), want);
        prop_assert_eq!(mc_pctlpm(&m, &back).unwrap().root, want);
    }

    #[test]
    fn star_translation_round_trips(seed in any::<u64>(), mseed in any::<u64>()) {
        let mut rng = trial_rng(seed, 4);
        let phi = random_ctlspm(&mut rng, &FormulaConfig::new(3, &AP));
        let (a, reg) = ctlspm_to_hta(&phi).unwrap();
        let back = hta_to_ctlspm(&a, &reg).unwrap();
        let m = random_model(mseed, &models());
        let want = mc_ctlspm(&m, &phi).unwrap().root;
        prop_assert_eq!(accepts(&a, &m).unwrap(), want);
        prop_assert_eq!(mc_ctlspm(&m, &back.formula).unwrap().root, want);
    }

    #[test]
    fn dual_complements(seed in any::<u64>(), mseed in any::<u64>()) {
        let mut rng = trial_rng(seed, 5);
        let (a, _) = ctlspm_to_hta(&random_ctlspm(&mut rng, &FormulaConfig::new(3, &AP))).unwrap();
        let d = dualize_tree(&a).unwrap();
        let m = random_model(mseed, &models());
        prop_assert_ne!(accepts(&a, &m).unwrap(), accepts(&d, &m).unwrap());
    }

    #[test]
    fn serialisation_round_trips(seed in any::<u64>()) {
        let m = random_model(seed, &models());
        prop_assert_eq!(RegularTreeModel::from_json(&m.to_json()).unwrap(), m);
        let mut rng = trial_rng(seed, 6);
        let a = pctlpm_to_hta(&random_pctlpm(&mut rng, &FormulaConfig::new(3, &AP))).unwrap();
        let b = TreeAutomaton::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(b.to_json(), a.to_json());
    }

    #[test]
    fn breakpoint_preserves_lassos(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 7);
        let alphabet = plain_alphabet(2);
        let Some(u) = random_counter_free_uba(&mut rng, 4, &alphabet, 50) else { return Ok(()) };
        let d = breakpoint_determinize(&u).unwrap();
        prop_assert!(d.is_deterministic());
        prop_assert!(is_looping(&d).is_some());
        for _ in 0..20 {
            let w = random_lasso(&mut rng, &alphabet, 3, 3);
            prop_assert_eq!(accepts_lasso(&d, &w).unwrap(), accepts_lasso(&u, &w).unwrap());
        }
    }
}

#[test]
fn reports_do_not_depend_on_threads() {
    for suite in [Suite::Roundtrip1, Suite::Word] {
        let mut one = CampaignConfig::new(suite, 11, 12);
        one.samples = 5;
        one.threads = 1;
        let mut many = one.clone();
        many.threads = 4;
        assert_eq!(run_campaign(&one).to_json_untimed(), run_campaign(&many).to_json_untimed());
    }
}
