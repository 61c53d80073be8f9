//! Fixtures, random generators, trace oracles and the fuzz campaigns that
//! cross-check the translations.

mod campaign;
pub mod fixtures;
pub mod gen;
pub mod semantics;
pub mod shrink;

pub use campaign::{
    fuzz_roundtrip, release_elimination_mismatch, run_campaign, star_certificate, CampaignConfig, CampaignReport,
    Counts, Failure, Suite, BRUTE_BUDGET,
};
pub use fixtures::{run_fixtures, FixtureOutcome};
