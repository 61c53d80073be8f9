//! Graded alternating tree automata: hesitant structure, dualisation,
//! linearisation of components, visibility and acceptance.

mod accept;
mod automaton;
mod brute;
mod dual;
pub mod fixtures;
mod formula;
mod hesitant;
mod linearize;
mod normalize;
mod visibility;

pub use accept::{accepting_nodes, accepts, accepts_two_way, evaluate, Evaluation};
pub use automaton::{Component, ComponentKind, TreeAutomaton, NONROOT, ROOT};
pub use brute::brute_force_accepts;
pub use dual::{dualize_tree, dualize_with_registry, DualityRegistry, Provenance};
pub use formula::{AtomKind, Clause, TransitionFormula, TreeAtom, DEFAULT_CLAUSE_LIMIT};
pub use hesitant::{
    is_polarised, structural_report, validate_hesitant, validate_hesitant_with, HesitantReport,
    HesitantViolation, StructuralReport,
};
pub use linearize::{linearize_component, Linearization};
pub use normalize::{normal_form, normalize_linear_transitions, NormalForm};
pub(crate) use normalize::regroup;
pub use visibility::{visibility_check, visibility_check_with, Visibility, VisibilityWitness};
