//! Branching-time temporal logics with past and graded alternating tree
//! automata over unranked, unordered, leafless trees.
//!
//! The crate is organised bottom-up:
//!
//! * [`formula`]: state/path formula ASTs, parser, printer, fragment
//!   classification and syntactic rewrites.
//! * [`model`]: finite pointed graphs whose unfoldings are the trees.
//! * [`word`]: finite and ω-word automata, counter-freeness, breakpoint
//!   determinisation and the LTL bridges.
//! * [`tree`]: graded alternating tree automata with hesitant structure,
//!   linearisation, visibility and acceptance.
//! * [`check`]: model checkers and an independent approximant oracle.
//! * [`translate`]: the four logic/automaton translations.
//! * [`harness`]: fixtures, random generators and fuzz campaigns.

pub mod check;
pub mod error;
pub mod formula;
pub mod harness;
pub mod model;
pub mod translate;
pub mod util;
pub mod tree;
pub mod word;

pub use error::{Error, Result};
