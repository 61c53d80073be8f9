use std::fmt;

use super::ast::{PathFormula, StateFormula};

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::True => write!(f, "true"),
            StateFormula::False => write!(f, "false"),
            StateFormula::Atom(p) => write!(f, "{p}"),
            StateFormula::Not(a) => write!(f, "!{a}"),
            StateFormula::And(a, b) => write!(f, "({a} & {b})"),
            StateFormula::Or(a, b) => write!(f, "({a} | {b})"),
            StateFormula::Count(n, a) => write!(f, "D{n} {a}"),
            StateFormula::CoCount(n, a) => write!(f, "C{n} {a}"),
            StateFormula::Exists(p) => write!(f, "E {p}"),
            StateFormula::Forall(p) => write!(f, "A {p}"),
            StateFormula::ExistsFin(p) => write!(f, "Ef {p}"),
            StateFormula::Guarded(g) => write!(
                f,
                "E<auto {} states, {} guards>",
                g.automaton.states.len(),
                g.guards.len()
            ),
        }
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PathFormula::*;
        match self {
            State(s) => write!(f, "{s}"),
            Not(a) => write!(f, "!{a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Next(a) => write!(f, "X {a}"),
            WeakNext(a) => write!(f, "wX {a}"),
            Yesterday(a) => write!(f, "Y {a}"),
            WeakYesterday(a) => write!(f, "wY {a}"),
            Until(a, b) => match &**a {
                State(s) if **s == StateFormula::True => write!(f, "F {b}"),
                _ => write!(f, "({a} U {b})"),
            },
            Since(a, b) => match &**a {
                State(s) if **s == StateFormula::True => write!(f, "O {b}"),
                _ => write!(f, "({a} S {b})"),
            },
            Release(a, b) => {
                if matches!(&**a, State(s) if **s == StateFormula::False) {
                    return write!(f, "G {b}");
                }
                if let Some(lhs) = weak_until_lhs(a, b) {
                    return write!(f, "({lhs} W {a})");
                }
                write!(f, "({a} R {b})")
            }
        }
    }
}

/// Recognise `r = l' ∨ a` with `a` the release's left operand, i.e. a
/// release produced by expanding `l' W a`.
fn weak_until_lhs(a: &PathFormula, b: &PathFormula) -> Option<String> {
    match (a, b) {
        (PathFormula::State(x), PathFormula::State(y)) => match &**y {
            StateFormula::Or(l, r) if r == x => Some(l.to_string()),
            _ => None,
        },
        (_, PathFormula::Or(l, r)) if **r == *a => Some(l.to_string()),
        _ => None,
    }
}
