//! Compiler passes between the logics and hesitant tree automata.

mod finite;
mod past;
mod star;

pub use finite::ctlsf_bridge;
pub use past::{hta_to_pctlpm, pctlpm_to_hta};
pub use star::{ctlspm_to_hta, hta_to_ctlspm, AutomatonGuardedFormula};
