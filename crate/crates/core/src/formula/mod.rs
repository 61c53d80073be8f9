//! Formula ASTs for the past/future branching-time logics and their
//! syntactic passes.

pub mod ast;
pub mod fragment;
pub mod json;
pub mod parse;
pub mod print;
pub mod rewrite;

pub use ast::*;
pub use fragment::{classify_fragment, classify_path_fragment, in_fragment, Fragment};
pub use parse::{parse_path, parse_path_formula, parse_state, parse_state_formula};
pub use rewrite::{
    eliminate_release_finite, skeletonize, subformula_closure, to_nnf, to_simple_form, Skeleton,
};
