use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::word::{Composite, WordAutomaton};

pub type StateRef = Arc<StateFormula>;
pub type PathRef = Arc<PathFormula>;

/// A set of atomic propositions, used both as a node label and as a letter.
pub type Valuation = BTreeSet<String>;

/// Letter of an automaton-guarded existential: a node label plus the set of
/// guard keys asserted at that node.
pub type GuardLetter = Composite<String>;

/// State formulas. Children are reference counted so that translations can
/// build shared DAGs without copying.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateFormula {
    True,
    False,
    Atom(String),
    Not(StateRef),
    And(StateRef, StateRef),
    Or(StateRef, StateRef),
    /// `D^n`: at least n children satisfy the operand.
    Count(u32, StateRef),
    /// `C^k`: all but at most k-1 children satisfy the operand.
    CoCount(u32, StateRef),
    Exists(PathRef),
    Forall(PathRef),
    /// Existential quantification over finite paths.
    ExistsFin(PathRef),
    /// Existential quantification guarded by a word automaton.
    Guarded(Arc<GuardedExists>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathFormula {
    State(StateRef),
    Not(PathRef),
    And(PathRef, PathRef),
    Or(PathRef, PathRef),
    Next(PathRef),
    WeakNext(PathRef),
    Yesterday(PathRef),
    WeakYesterday(PathRef),
    Until(PathRef, PathRef),
    Release(PathRef, PathRef),
    Since(PathRef, PathRef),
}

/// `E⟨automaton⟩`: some infinite path from the node whose guard-annotated
/// trace the automaton accepts.
///
/// A letter `(σ, C)` matches a node when the node label restricted to `ap`
/// is `σ` and the guard bound to `C` holds at the node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardedExists {
    pub ap: Vec<String>,
    pub automaton: WordAutomaton<GuardLetter>,
    pub guards: BTreeMap<BTreeSet<String>, StateRef>,
}

pub fn tt() -> StateRef {
    Arc::new(StateFormula::True)
}
pub fn ff() -> StateRef {
    Arc::new(StateFormula::False)
}
pub fn atom(p: &str) -> StateRef {
    Arc::new(StateFormula::Atom(p.to_string()))
}
pub fn not(a: StateRef) -> StateRef {
    Arc::new(StateFormula::Not(a))
}
pub fn and(a: StateRef, b: StateRef) -> StateRef {
    Arc::new(StateFormula::And(a, b))
}
pub fn or(a: StateRef, b: StateRef) -> StateRef {
    Arc::new(StateFormula::Or(a, b))
}
pub fn count(n: u32, a: StateRef) -> StateRef {
    Arc::new(StateFormula::Count(n, a))
}
pub fn cocount(n: u32, a: StateRef) -> StateRef {
    Arc::new(StateFormula::CoCount(n, a))
}
pub fn exists(p: PathRef) -> StateRef {
    Arc::new(StateFormula::Exists(p))
}
pub fn forall(p: PathRef) -> StateRef {
    Arc::new(StateFormula::Forall(p))
}
pub fn exists_fin(p: PathRef) -> StateRef {
    Arc::new(StateFormula::ExistsFin(p))
}

pub fn st(s: StateRef) -> PathRef {
    Arc::new(PathFormula::State(s))
}
pub fn pnot(a: PathRef) -> PathRef {
    Arc::new(PathFormula::Not(a))
}
pub fn pand(a: PathRef, b: PathRef) -> PathRef {
    Arc::new(PathFormula::And(a, b))
}
pub fn por(a: PathRef, b: PathRef) -> PathRef {
    Arc::new(PathFormula::Or(a, b))
}
pub fn next(a: PathRef) -> PathRef {
    Arc::new(PathFormula::Next(a))
}
pub fn wnext(a: PathRef) -> PathRef {
    Arc::new(PathFormula::WeakNext(a))
}
pub fn yesterday(a: PathRef) -> PathRef {
    Arc::new(PathFormula::Yesterday(a))
}
pub fn wyesterday(a: PathRef) -> PathRef {
    Arc::new(PathFormula::WeakYesterday(a))
}
pub fn until(a: PathRef, b: PathRef) -> PathRef {
    Arc::new(PathFormula::Until(a, b))
}
pub fn release(a: PathRef, b: PathRef) -> PathRef {
    Arc::new(PathFormula::Release(a, b))
}
pub fn since(a: PathRef, b: PathRef) -> PathRef {
    Arc::new(PathFormula::Since(a, b))
}

/// Path conjunction that stays at state level when both sides are state formulas.
pub fn path_and(a: PathRef, b: PathRef) -> PathRef {
    match (&*a, &*b) {
        (PathFormula::State(x), PathFormula::State(y)) => st(and(x.clone(), y.clone())),
        _ => pand(a, b),
    }
}

pub fn path_or(a: PathRef, b: PathRef) -> PathRef {
    match (&*a, &*b) {
        (PathFormula::State(x), PathFormula::State(y)) => st(or(x.clone(), y.clone())),
        _ => por(a, b),
    }
}

pub fn path_not(a: PathRef) -> PathRef {
    match &*a {
        PathFormula::State(x) => st(not(x.clone())),
        _ => pnot(a),
    }
}

/// Constant-folding conjunction.
pub fn and_fold(a: StateRef, b: StateRef) -> StateRef {
    match (&*a, &*b) {
        (StateFormula::False, _) | (_, StateFormula::False) => ff(),
        (StateFormula::True, _) => b,
        (_, StateFormula::True) => a,
        _ => and(a, b),
    }
}

/// Constant-folding disjunction.
pub fn or_fold(a: StateRef, b: StateRef) -> StateRef {
    match (&*a, &*b) {
        (StateFormula::True, _) | (_, StateFormula::True) => tt(),
        (StateFormula::False, _) => b,
        (_, StateFormula::False) => a,
        _ => or(a, b),
    }
}

/// Constant-folding negation; also removes a double negation.
pub fn not_fold(a: StateRef) -> StateRef {
    match &*a {
        StateFormula::True => ff(),
        StateFormula::False => tt(),
        StateFormula::Not(x) => x.clone(),
        _ => not(a),
    }
}

pub fn and_all(items: impl IntoIterator<Item = StateRef>) -> StateRef {
    items.into_iter().fold(tt(), and_fold)
}

pub fn or_all(items: impl IntoIterator<Item = StateRef>) -> StateRef {
    items.into_iter().fold(ff(), or_fold)
}

impl StateFormula {
    /// True when the formula is a Boolean combination of atoms and constants.
    pub fn is_propositional(&self) -> bool {
        match self {
            StateFormula::True | StateFormula::False | StateFormula::Atom(_) => true,
            StateFormula::Not(a) => a.is_propositional(),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            _ => false,
        }
    }

    /// Evaluate a propositional formula under a valuation.
    pub fn eval_prop(&self, val: &Valuation) -> Option<bool> {
        Some(match self {
            StateFormula::True => true,
            StateFormula::False => false,
            StateFormula::Atom(p) => val.contains(p),
            StateFormula::Not(a) => !a.eval_prop(val)?,
            StateFormula::And(a, b) => a.eval_prop(val)? && b.eval_prop(val)?,
            StateFormula::Or(a, b) => a.eval_prop(val)? || b.eval_prop(val)?,
            _ => return None,
        })
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_state_atoms(self, &mut out);
        out
    }

    /// Number of AST nodes, counting shared subterms once per occurrence.
    pub fn size(&self) -> usize {
        match self {
            StateFormula::True | StateFormula::False | StateFormula::Atom(_) => 1,
            StateFormula::Guarded(_) => 1,
            StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => {
                1 + a.size()
            }
            StateFormula::And(a, b) | StateFormula::Or(a, b) => 1 + a.size() + b.size(),
            StateFormula::Exists(p) | StateFormula::Forall(p) | StateFormula::ExistsFin(p) => {
                1 + p.size()
            }
        }
    }

    /// Nesting depth of operators.
    pub fn depth(&self) -> usize {
        match self {
            StateFormula::True | StateFormula::False | StateFormula::Atom(_) => 0,
            StateFormula::Guarded(_) => 1,
            StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => {
                1 + a.depth()
            }
            StateFormula::And(a, b) | StateFormula::Or(a, b) => 1 + a.depth().max(b.depth()),
            StateFormula::Exists(p) | StateFormula::Forall(p) | StateFormula::ExistsFin(p) => {
                1 + p.depth()
            }
        }
    }
}

impl PathFormula {
    pub fn size(&self) -> usize {
        match self {
            PathFormula::State(s) => s.size(),
            PathFormula::Not(a)
            | PathFormula::Next(a)
            | PathFormula::WeakNext(a)
            | PathFormula::Yesterday(a)
            | PathFormula::WeakYesterday(a) => 1 + a.size(),
            PathFormula::And(a, b)
            | PathFormula::Or(a, b)
            | PathFormula::Until(a, b)
            | PathFormula::Release(a, b)
            | PathFormula::Since(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            PathFormula::State(s) => s.depth(),
            PathFormula::Not(a)
            | PathFormula::Next(a)
            | PathFormula::WeakNext(a)
            | PathFormula::Yesterday(a)
            | PathFormula::WeakYesterday(a) => 1 + a.depth(),
            PathFormula::And(a, b)
            | PathFormula::Or(a, b)
            | PathFormula::Until(a, b)
            | PathFormula::Release(a, b)
            | PathFormula::Since(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// True when some past operator occurs outside nested quantifiers.
    pub fn has_past(&self) -> bool {
        match self {
            PathFormula::State(_) => false,
            PathFormula::Yesterday(_) | PathFormula::WeakYesterday(_) | PathFormula::Since(..) => {
                true
            }
            PathFormula::Not(a) | PathFormula::Next(a) | PathFormula::WeakNext(a) => a.has_past(),
            PathFormula::And(a, b)
            | PathFormula::Or(a, b)
            | PathFormula::Until(a, b)
            | PathFormula::Release(a, b) => a.has_past() || b.has_past(),
        }
    }

    /// True when some future operator occurs outside nested quantifiers.
    pub fn has_future(&self) -> bool {
        match self {
            PathFormula::State(_) => false,
            PathFormula::Next(_)
            | PathFormula::WeakNext(_)
            | PathFormula::Until(..)
            | PathFormula::Release(..) => true,
            PathFormula::Not(a) | PathFormula::Yesterday(a) | PathFormula::WeakYesterday(a) => {
                a.has_future()
            }
            PathFormula::And(a, b) | PathFormula::Or(a, b) | PathFormula::Since(a, b) => {
                a.has_future() || b.has_future()
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_path_atoms(self, &mut out);
        out
    }

    /// Apply `f` to every maximal embedded state formula.
    pub fn map_states(&self, f: &mut dyn FnMut(&StateRef) -> StateRef) -> PathRef {
        use PathFormula::*;
        Arc::new(match self {
            State(s) => State(f(s)),
            Not(a) => Not(a.map_states(f)),
            And(a, b) => And(a.map_states(f), b.map_states(f)),
            Or(a, b) => Or(a.map_states(f), b.map_states(f)),
            Next(a) => Next(a.map_states(f)),
            WeakNext(a) => WeakNext(a.map_states(f)),
            Yesterday(a) => Yesterday(a.map_states(f)),
            WeakYesterday(a) => WeakYesterday(a.map_states(f)),
            Until(a, b) => Until(a.map_states(f), b.map_states(f)),
            Release(a, b) => Release(a.map_states(f), b.map_states(f)),
            Since(a, b) => Since(a.map_states(f), b.map_states(f)),
        })
    }

    /// Visit every maximal embedded state formula.
    pub fn for_each_state(&self, f: &mut dyn FnMut(&StateRef)) {
        use PathFormula::*;
        match self {
            State(s) => f(s),
            Not(a) | Next(a) | WeakNext(a) | Yesterday(a) | WeakYesterday(a) => {
                a.for_each_state(f)
            }
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) | Since(a, b) => {
                a.for_each_state(f);
                b.for_each_state(f);
            }
        }
    }
}

fn collect_state_atoms(s: &StateFormula, out: &mut BTreeSet<String>) {
    match s {
        StateFormula::True | StateFormula::False => {}
        StateFormula::Atom(p) => {
            out.insert(p.clone());
        }
        StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => {
            collect_state_atoms(a, out)
        }
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            collect_state_atoms(a, out);
            collect_state_atoms(b, out);
        }
        StateFormula::Exists(p) | StateFormula::Forall(p) | StateFormula::ExistsFin(p) => {
            collect_path_atoms(p, out)
        }
        StateFormula::Guarded(g) => {
            out.extend(g.ap.iter().cloned());
            for v in g.guards.values() {
                collect_state_atoms(v, out);
            }
        }
    }
}

fn collect_path_atoms(p: &PathFormula, out: &mut BTreeSet<String>) {
    p.for_each_state(&mut |s| collect_state_atoms(s, out));
}
