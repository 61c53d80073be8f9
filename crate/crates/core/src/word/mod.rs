//! Finite and ω-word automata: lasso acceptance, transition monoids and
//! counter-freeness, breakpoint determinisation, and the bridges from
//! LTL fragments to looping automata.

mod automaton;
mod breakpoint;
mod ltl;
mod monoid;

pub use automaton::{
    accepts_lasso, is_looping, Acceptance, Branching, Composite, Letter, LassoWord, WordAutomaton,
};
pub use breakpoint::breakpoint_determinize;
pub use ltl::{
    all_valuations, fragment_to_looping_word_automaton, ltl_finite_to_dfa, minimize_dfa,
    subset_construct, Polarity,
};
pub use monoid::{is_counter_free, transition_monoid, BoolMatrix, CounterWitness, TransitionMonoid};
