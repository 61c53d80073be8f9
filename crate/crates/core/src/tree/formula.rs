use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// `(◇k, q)`: at least k children are accepted from q.
    Dia,
    /// `(□k, q)`: all but at most k-1 children are accepted from q.
    Box,
    /// `(⇑, q)`: the parent is accepted from q.
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAtom {
    pub kind: AtomKind,
    pub k: u32,
    pub state: usize,
}

impl TreeAtom {
    pub fn dia(k: u32, state: usize) -> Self {
        TreeAtom { kind: AtomKind::Dia, k, state }
    }

    pub fn boxed(k: u32, state: usize) -> Self {
        TreeAtom { kind: AtomKind::Box, k, state }
    }

    pub fn up(state: usize) -> Self {
        TreeAtom { kind: AtomKind::Up, k: 1, state }
    }

    /// `◇k ↔ □k`; `⇑` has no one-way dual and is kept.
    pub fn dual(self) -> Self {
        let kind = match self.kind {
            AtomKind::Dia => AtomKind::Box,
            AtomKind::Box => AtomKind::Dia,
            AtomKind::Up => AtomKind::Up,
        };
        TreeAtom { kind, ..self }
    }

    /// Inverse of [`TreeAtom::render`].
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let bad = || Error::Json(format!("malformed atom {text}"));
        let inner = text.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (modality, name) = inner.split_once(',').ok_or_else(bad)?;
        let state = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state {name}")))?;
        let grade = |digits: &str| -> Result<u32> {
            if digits.is_empty() {
                Ok(1)
            } else {
                digits.parse().ok().filter(|&k| k >= 1).ok_or_else(bad)
            }
        };
        if modality == "^" {
            Ok(TreeAtom::up(state))
        } else if let Some(d) = modality.strip_prefix("<>") {
            Ok(TreeAtom::dia(grade(d)?, state))
        } else if let Some(d) = modality.strip_prefix("[]") {
            Ok(TreeAtom::boxed(grade(d)?, state))
        } else {
            Err(bad())
        }
    }

    /// Text form `(<>k,q)`, `([]k,q)` or `(^,q)`; the grade is omitted when 1.
    pub fn render(&self, names: &[String]) -> String {
        let grade = if self.k == 1 { String::new() } else { self.k.to_string() };
        let name = &names[self.state];
        match self.kind {
            AtomKind::Dia => format!("(<>{grade},{name})"),
            AtomKind::Box => format!("([]{grade},{name})"),
            AtomKind::Up => format!("(^,{name})"),
        }
    }
}

/// A conjunction of atoms; a formula's normal form is a set of these.
pub type Clause = BTreeSet<TreeAtom>;

/// Positive Boolean formula over tree atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionFormula {
    True,
    False,
    Atom(TreeAtom),
    And(Vec<TransitionFormula>),
    Or(Vec<TransitionFormula>),
}

pub const DEFAULT_CLAUSE_LIMIT: usize = 10_000;

use TransitionFormula as TF;

impl TransitionFormula {
    pub fn atom(a: TreeAtom) -> Self {
        TF::Atom(a)
    }

    /// Flattening, constant-folding conjunction.
    pub fn conj(items: impl IntoIterator<Item = TransitionFormula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                TF::True => {}
                TF::False => return TF::False,
                TF::And(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => TF::True,
            1 => out.pop().unwrap(),
            _ => TF::And(out),
        }
    }

    /// Flattening, constant-folding disjunction.
    pub fn disj(items: impl IntoIterator<Item = TransitionFormula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                TF::False => {}
                TF::True => return TF::True,
                TF::Or(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => TF::False,
            1 => out.pop().unwrap(),
            _ => TF::Or(out),
        }
    }

    pub fn and(self, other: Self) -> Self {
        Self::conj([self, other])
    }

    pub fn or(self, other: Self) -> Self {
        Self::disj([self, other])
    }

    pub fn from_clause(c: &Clause) -> Self {
        Self::conj(c.iter().map(|&a| TF::Atom(a)))
    }

    /// Disjunction of the clauses read as conjunctions.
    pub fn from_dnf(clauses: &[Clause]) -> Self {
        Self::disj(clauses.iter().map(Self::from_clause))
    }

    /// Conjunction of the clauses read as disjunctions.
    pub fn from_cnf(clauses: &[Clause]) -> Self {
        Self::conj(clauses.iter().map(|c| Self::disj(c.iter().map(|&a| TF::Atom(a)))))
    }

    pub fn eval(&self, val: &mut impl FnMut(&TreeAtom) -> bool) -> bool {
        match self {
            TF::True => true,
            TF::False => false,
            TF::Atom(a) => val(a),
            TF::And(xs) => xs.iter().all(|x| x.eval(val)),
            TF::Or(xs) => xs.iter().any(|x| x.eval(val)),
        }
    }

    pub fn for_each_atom(&self, f: &mut impl FnMut(&TreeAtom)) {
        match self {
            TF::True | TF::False => {}
            TF::Atom(a) => f(a),
            TF::And(xs) | TF::Or(xs) => xs.iter().for_each(|x| x.for_each_atom(f)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<TreeAtom> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(*a);
        });
        out
    }

    pub fn map_atoms(&self, f: &impl Fn(TreeAtom) -> TransitionFormula) -> Self {
        match self {
            TF::True => TF::True,
            TF::False => TF::False,
            TF::Atom(a) => f(*a),
            TF::And(xs) => Self::conj(xs.iter().map(|x| x.map_atoms(f))),
            TF::Or(xs) => Self::disj(xs.iter().map(|x| x.map_atoms(f))),
        }
    }

    pub fn map_states(&self, f: &impl Fn(usize) -> usize) -> Self {
        self.map_atoms(&|a| TF::Atom(TreeAtom { state: f(a.state), ..a }))
    }

    /// The dual formula: ⊤↔⊥, ∧↔∨, ◇k↔□k.
    pub fn dual(&self) -> Self {
        match self {
            TF::True => TF::False,
            TF::False => TF::True,
            TF::Atom(a) => TF::Atom(a.dual()),
            TF::And(xs) => TF::Or(xs.iter().map(Self::dual).collect()),
            TF::Or(xs) => TF::And(xs.iter().map(Self::dual).collect()),
        }
    }

    /// Minimal disjunctive normal form: no clause contains another.
    /// `[]` is ⊥ and `[{}]` is ⊤.
    pub fn dnf(&self, limit: usize) -> Result<Vec<Clause>> {
        self.normal(true, true, limit)
    }

    /// Disjunctive normal form by distribution only: duplicate clauses are
    /// merged but subsumed clauses are kept.
    pub fn dnf_syntactic(&self, limit: usize) -> Result<Vec<Clause>> {
        self.normal(true, false, limit)
    }

    pub fn cnf_syntactic(&self, limit: usize) -> Result<Vec<Clause>> {
        self.normal(false, false, limit)
    }

    /// Minimal conjunctive normal form, each clause read as a disjunction.
    /// `[]` is ⊤ and `[{}]` is ⊥.
    pub fn cnf(&self, limit: usize) -> Result<Vec<Clause>> {
        self.normal(false, true, limit)
    }

    fn normal(&self, dnf: bool, absorb: bool, limit: usize) -> Result<Vec<Clause>> {
        let (unit, zero) = if dnf { (&TF::True, &TF::False) } else { (&TF::False, &TF::True) };
        Ok(match self {
            f if f == unit => vec![Clause::new()],
            f if f == zero => vec![],
            TF::Atom(a) => vec![Clause::from([*a])],
            TF::And(xs) | TF::Or(xs) => {
                let product = matches!(self, TF::And(_)) == dnf;
                if product {
                    let mut acc = vec![Clause::new()];
                    for x in xs {
                        let rhs = x.normal(dnf, absorb, limit)?;
                        let mut next = Vec::new();
                        for l in &acc {
                            for r in &rhs {
                                next.push(l.union(r).copied().collect());
                                if next.len() > limit * 4 {
                                    return Err(Error::ClauseLimit(limit));
                                }
                            }
                        }
                        acc = minimise(next, absorb);
                        if acc.len() > limit {
                            return Err(Error::ClauseLimit(limit));
                        }
                    }
                    acc
                } else {
                    let mut acc = Vec::new();
                    for x in xs {
                        acc.extend(x.normal(dnf, absorb, limit)?);
                        if acc.len() > limit * 4 {
                            return Err(Error::ClauseLimit(limit));
                        }
                    }
                    let acc = minimise(acc, absorb);
                    if acc.len() > limit {
                        return Err(Error::ClauseLimit(limit));
                    }
                    acc
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn render(&self, names: &[String]) -> String {
        match self {
            TF::True => "true".into(),
            TF::False => "false".into(),
            TF::Atom(a) => a.render(names),
            TF::And(xs) => join(xs, " & ", names),
            TF::Or(xs) => join(xs, " | ", names),
        }
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        match self {
            TF::True => json!({"op": "true", "args": []}),
            TF::False => json!({"op": "false", "args": []}),
            TF::Atom(a) => {
                let op = match a.kind {
                    AtomKind::Dia => "dia",
                    AtomKind::Box => "box",
                    AtomKind::Up => "up",
                };
                json!({"op": op, "k": a.k, "state": names[a.state], "args": []})
            }
            TF::And(xs) => json!({"op": "and", "args": xs.iter().map(|x| x.to_json(names)).collect::<Vec<_>>()}),
            TF::Or(xs) => json!({"op": "or", "args": xs.iter().map(|x| x.to_json(names)).collect::<Vec<_>>()}),
        }
    }

    pub fn from_json(v: &Value, index: &HashMap<String, usize>) -> Result<Self> {
        let op = v["op"].as_str().ok_or_else(|| Error::Json(format!("B+ node without op: {v}")))?;
        let args = || -> Result<Vec<TransitionFormula>> {
            v["args"]
                .as_array()
                .map(|a| a.iter().map(|x| Self::from_json(x, index)).collect())
                .unwrap_or(Ok(vec![]))
        };
        let atom = |kind| -> Result<TransitionFormula> {
            let name = v["state"].as_str().ok_or_else(|| Error::Json(format!("atom without state: {v}")))?;
            let state = *index.get(name).ok_or_else(|| Error::InvalidAutomaton(format!("unknown state {name}")))?;
            let k = match kind {
                AtomKind::Up => 1,
                _ => v["k"].as_u64().unwrap_or(1),
            };
            if k == 0 {
                return Err(Error::Json("atom grade must be at least 1".into()));
            }
            Ok(TF::Atom(TreeAtom { kind, k: k as u32, state }))
        };
        match op {
            "true" => Ok(TF::True),
            "false" => Ok(TF::False),
            "dia" => atom(AtomKind::Dia),
            "box" => atom(AtomKind::Box),
            "up" => atom(AtomKind::Up),
            "and" => Ok(TF::And(args()?)),
            "or" => Ok(TF::Or(args()?)),
            other => Err(Error::Json(format!("unknown B+ op {other}"))),
        }
    }
}

fn join(xs: &[TransitionFormula], sep: &str, names: &[String]) -> String {
    let parts: Vec<String> = xs
        .iter()
        .map(|x| match x {
            TF::And(_) | TF::Or(_) => format!("({})", x.render(names)),
            _ => x.render(names),
        })
        .collect();
    parts.join(sep)
}

/// Drop duplicate clauses and, with `absorb`, clauses subsumed by a smaller one.
fn minimise(mut clauses: Vec<Clause>, absorb: bool) -> Vec<Clause> {
    if !absorb {
        clauses.sort();
        clauses.dedup();
        return clauses;
    }
    clauses.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    clauses.dedup();
    let mut out: Vec<Clause> = Vec::new();
    for c in clauses {
        // Distinct clauses of equal size never subsume each other.
        if !out.iter().take_while(|o| o.len() < c.len()).any(|o| o.is_subset(&c)) {
            out.push(c);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(q: usize) -> TF {
        TF::Atom(TreeAtom::dia(1, q))
    }

    fn b(q: usize) -> TF {
        TF::Atom(TreeAtom::boxed(1, q))
    }

    #[test]
    fn folding() {
        assert_eq!(TF::conj([TF::True, d(0)]), d(0));
        assert_eq!(TF::conj([TF::False, d(0)]), TF::False);
        assert_eq!(TF::disj([TF::True, d(0)]), TF::True);
        assert_eq!(TF::disj(Vec::<TF>::new()), TF::False);
        assert_eq!(d(0).and(d(1).and(d(2))), TF::And(vec![d(0), d(1), d(2)]));
    }

    #[test]
    fn dnf_distributes_and_absorbs() {
        // ((◇0 ∧ ◇2) ∨ ◇3) ∧ (◇0 ∨ ◇1)
        let f = d(0).and(d(2)).or(d(3)).and(d(0).or(d(1)));
        let dnf = f.dnf(100).unwrap();
        let want: Vec<Clause> = vec![
            Clause::from([TreeAtom::dia(1, 0), TreeAtom::dia(1, 2)]),
            Clause::from([TreeAtom::dia(1, 0), TreeAtom::dia(1, 3)]),
            Clause::from([TreeAtom::dia(1, 1), TreeAtom::dia(1, 3)]),
        ];
        let mut got = dnf.clone();
        got.sort();
        let mut want_sorted = want;
        want_sorted.sort();
        assert_eq!(got, want_sorted);
        assert_eq!(TF::True.dnf(1).unwrap(), vec![Clause::new()]);
        assert!(TF::False.dnf(1).unwrap().is_empty());
        let redundant = d(0).and(d(1)).or(d(1));
        assert_eq!(redundant.dnf(10).unwrap().len(), 1);
        assert_eq!(redundant.dnf_syntactic(10).unwrap().len(), 2);
        assert!(TF::True.cnf(1).unwrap().is_empty());
        assert_eq!(TF::False.cnf(1).unwrap(), vec![Clause::new()]);
    }

    #[test]
    fn cnf_of_disjunction() {
        let f = d(0).and(d(1)).or(b(2));
        let cnf = f.cnf(100).unwrap();
        assert_eq!(cnf.len(), 2);
        let back = TF::from_cnf(&cnf);
        for bits in 0..8u32 {
            let mut v = |a: &TreeAtom| bits >> a.state & 1 == 1;
            assert_eq!(back.eval(&mut v), f.eval(&mut v));
        }
    }

    #[test]
    fn clause_limit() {
        // ⋀_{i<14} (◇2i ∨ ◇2i+1) has 2^14 DNF clauses.
        let f = TF::conj((0..14).map(|i| d(2 * i).or(d(2 * i + 1))));
        assert_eq!(f.dnf(10_000), Err(Error::ClauseLimit(10_000)));
        assert_eq!(f.cnf(10_000).unwrap().len(), 14);
    }

    #[test]
    fn dual_is_involution() {
        let f = d(0).and(b(1).or(TF::True));
        assert_eq!(f.dual().dual(), f);
        assert_eq!(d(3).dual(), b(3));
    }

    #[test]
    fn json_round_trip() {
        let names: Vec<String> = ["qI", "q", "qa"].iter().map(|s| s.to_string()).collect();
        let index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let f = TF::Atom(TreeAtom::dia(2, 1)).and(TF::Atom(TreeAtom::up(2))).or(b(0));
        let back = TF::from_json(&f.to_json(&names), &index).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.render(&names), "((<>2,q) & (^,qa)) | ([],qI)");
    }
}
