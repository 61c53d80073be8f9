//! Approximant oracle. Shares no evaluation code with the checkers: history
//! classes are explored top-down with signatures restricted to the past
//! subformulas of the formula at hand, fixpoints are Kleene iterations with
//! counted rounds, path quantifiers use on-the-fly formula progression, and
//! guarded existentials use nested Emerson–Lei iteration.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::fragment::{cosafe_shape, safe_shape};
use crate::formula::{not, GuardedExists, PathFormula, PathRef, StateFormula, StateRef};
use crate::model::{Graph, RegularTreeModel};
use crate::word::{Acceptance, Branching};

type Sig = Vec<bool>;
type Class = (usize, Sig);
type Dnf = BTreeSet<BTreeSet<PathRef>>;

struct Oracle {
    g: Graph,
    fuel: usize,
    needed: usize,
    past: HashMap<StateRef, Arc<Vec<StateRef>>>,
    memo: HashMap<(StateRef, usize, Sig), bool>,
}

/// Root verdict of `phi` by bounded approximation. Every fixpoint or path
/// search must fit within `fuel` positions, otherwise the result is
/// `InsufficientFuel`.
pub fn oracle_eval(m: &RegularTreeModel, phi: &StateRef, fuel: usize) -> Result<bool> {
    let mut o = Oracle { g: m.graph()?, fuel, needed: 0, past: HashMap::new(), memo: HashMap::new() };
    let root = o.g.root;
    let sig = o.root_sig(phi)?;
    o.eval(phi, root, &sig)
}

/// Smallest fuel for which [`oracle_eval`] answers.
pub fn oracle_bound(m: &RegularTreeModel, phi: &StateRef) -> Result<usize> {
    let mut o = Oracle { g: m.graph()?, fuel: usize::MAX, needed: 0, past: HashMap::new(), memo: HashMap::new() };
    let root = o.g.root;
    let sig = o.root_sig(phi)?;
    o.eval(phi, root, &sig)?;
    Ok(o.needed.max(1))
}

fn is_past(s: &StateFormula) -> bool {
    match s {
        StateFormula::Exists(p) => matches!(**p, PathFormula::Yesterday(_) | PathFormula::Since(..)),
        StateFormula::Forall(p) => matches!(**p, PathFormula::WeakYesterday(_)),
        _ => false,
    }
}

fn state_operand(p: &PathFormula) -> Result<StateRef> {
    match p {
        PathFormula::State(s) => Ok(s.clone()),
        other => Err(Error::WrongFragment(format!("past operator over path formula {other}"))),
    }
}

impl Oracle {
    fn spend(&mut self, positions: usize) -> Result<()> {
        self.needed = self.needed.max(positions);
        if positions > self.fuel {
            return Err(Error::InsufficientFuel { needed: positions, given: self.fuel });
        }
        Ok(())
    }

    /// Past subformulas of `f`, operands before operators.
    fn past_of(&mut self, f: &StateRef) -> Arc<Vec<StateRef>> {
        if let Some(p) = self.past.get(f) {
            return p.clone();
        }
        let mut out: Vec<StateRef> = Vec::new();
        let add = |xs: &[StateRef], out: &mut Vec<StateRef>| {
            for x in xs {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        };
        let mut children: Vec<StateRef> = Vec::new();
        match &**f {
            StateFormula::Not(a) | StateFormula::Count(_, a) | StateFormula::CoCount(_, a) => children.push(a.clone()),
            StateFormula::And(a, b) | StateFormula::Or(a, b) => children.extend([a.clone(), b.clone()]),
            StateFormula::Exists(p) | StateFormula::Forall(p) | StateFormula::ExistsFin(p) => {
                p.for_each_state(&mut |x| children.push(x.clone()))
            }
            StateFormula::Guarded(ge) => children.extend(ge.guards.values().cloned()),
            _ => {}
        }
        for c in &children {
            let sub = self.past_of(c);
            add(&sub, &mut out);
        }
        if is_past(f) {
            add(&[f.clone()], &mut out);
        }
        let out = Arc::new(out);
        self.past.insert(f.clone(), out.clone());
        out
    }

    fn restrict(&mut self, f: &StateRef, sig: &Sig, g: &StateRef) -> Sig {
        let pf = self.past_of(f);
        let pg = self.past_of(g);
        pg.iter().map(|x| sig[pf.iter().position(|y| y == x).expect("sub-past")]).collect()
    }

    fn root_sig(&mut self, f: &StateRef) -> Result<Sig> {
        let pf = self.past_of(f);
        let root = self.g.root;
        let mut sig: Sig = Vec::with_capacity(pf.len());
        for x in pf.iter() {
            let bit = match &**x {
                StateFormula::Exists(p) => match &**p {
                    PathFormula::Yesterday(_) => false,
                    PathFormula::Since(_, b) => {
                        let b = state_operand(b)?;
                        let partial = self.partial(&pf, &sig, &b);
                        self.eval(&b, root, &partial)?
                    }
                    _ => unreachable!(),
                },
                _ => true,
            };
            sig.push(bit);
        }
        Ok(sig)
    }

    /// Signature of `g` read off a prefix of the signature over `pf`.
    fn partial(&mut self, pf: &[StateRef], prefix: &Sig, g: &StateRef) -> Sig {
        let pg = self.past_of(g);
        pg.iter().map(|x| prefix[pf.iter().position(|y| y == x).expect("earlier bit")]).collect()
    }

    /// Class of child `w` of `(v, sig)`, with signatures over `past(f)`.
    fn child(&mut self, f: &StateRef, v: usize, sig: &Sig, w: usize) -> Result<Sig> {
        let pf = self.past_of(f);
        let mut out: Sig = Vec::with_capacity(pf.len());
        for (i, x) in pf.iter().enumerate() {
            let bit = match &**x {
                StateFormula::Exists(p) | StateFormula::Forall(p) => match &**p {
                    PathFormula::Yesterday(a) | PathFormula::WeakYesterday(a) => {
                        let a = state_operand(a)?;
                        let s = self.restrict(f, sig, &a);
                        self.eval(&a, v, &s)?
                    }
                    PathFormula::Since(a, b) => {
                        let (a, b) = (state_operand(a)?, state_operand(b)?);
                        let sb = self.partial(&pf, &out, &b);
                        if self.eval(&b, w, &sb)? {
                            true
                        } else {
                            let sa = self.partial(&pf, &out, &a);
                            sig[i] && self.eval(&a, w, &sa)?
                        }
                    }
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            };
            out.push(bit);
        }
        Ok(out)
    }

    /// Classes reachable from `(v, sig)` with their successor lists.
    fn explore(&mut self, f: &StateRef, v: usize, sig: &Sig) -> Result<(Vec<Class>, Vec<Vec<usize>>)> {
        let mut index: HashMap<Class, usize> = HashMap::new();
        let mut classes: Vec<Class> = vec![(v, sig.clone())];
        index.insert((v, sig.clone()), 0);
        let mut succ = Vec::new();
        let mut i = 0;
        while i < classes.len() {
            let (u, s) = classes[i].clone();
            let mut row = Vec::new();
            for w in self.g.succ[u].clone() {
                let c = (w, self.child(f, u, &s, w)?);
                let id = match index.get(&c) {
                    Some(&id) => id,
                    None => {
                        classes.push(c.clone());
                        index.insert(c, classes.len() - 1);
                        classes.len() - 1
                    }
                };
                row.push(id);
            }
            succ.push(row);
            i += 1;
        }
        self.spend(classes.len())?;
        Ok((classes, succ))
    }

    fn eval(&mut self, f: &StateRef, v: usize, sig: &Sig) -> Result<bool> {
        let key = (f.clone(), v, sig.clone());
        if let Some(&b) = self.memo.get(&key) {
            return Ok(b);
        }
        use StateFormula as S;
        let value = match &**f {
            S::True => true,
            S::False => false,
            S::Atom(p) => self.g.labels[v].contains(p),
            S::Not(a) => {
                let s = self.restrict(f, sig, a);
                !self.eval(a, v, &s)?
            }
            S::And(a, b) | S::Or(a, b) => {
                let sa = self.restrict(f, sig, a);
                let sb = self.restrict(f, sig, b);
                let x = self.eval(a, v, &sa)?;
                let y = self.eval(b, v, &sb)?;
                if matches!(&**f, S::And(..)) { x && y } else { x || y }
            }
            S::Count(k, a) | S::CoCount(k, a) => {
                let mut sat = 0;
                let kids = self.g.succ[v].clone();
                for &w in &kids {
                    let cs = self.child(f, v, sig, w)?;
                    let s = self.restrict(f, &cs, a);
                    sat += usize::from(self.eval(a, w, &s)?);
                }
                if matches!(&**f, S::Count(..)) { sat >= *k as usize } else { kids.len() - sat < *k as usize }
            }
            _ if is_past(f) => {
                let i = self.past_of(f).iter().position(|x| x == f).expect("own bit");
                sig[i]
            }
            S::Exists(p) | S::Forall(p) => self.quantifier(f, p, v, sig)?,
            S::ExistsFin(p) => {
                let body = nnf(p, false, false)?;
                self.progress(f, &body, v, sig)?
            }
            S::Guarded(ge) => self.guarded(f, ge, v, sig)?,
        };
        self.memo.insert(key, value);
        Ok(value)
    }

    fn quantifier(&mut self, f: &StateRef, p: &PathFormula, v: usize, sig: &Sig) -> Result<bool> {
        use PathFormula as P;
        let universal = matches!(&**f, StateFormula::Forall(_));
        match p {
            P::Next(a) if matches!(**a, P::State(_)) => {
                let a = state_operand(a)?;
                let mut all = true;
                let mut any = false;
                for w in self.g.succ[v].clone() {
                    let cs = self.child(f, v, sig, w)?;
                    let s = self.restrict(f, &cs, &a);
                    let x = self.eval(&a, w, &s)?;
                    all &= x;
                    any |= x;
                }
                Ok(if universal { all } else { any })
            }
            P::Until(a, b) | P::Release(a, b)
                if matches!((&**a, &**b), (P::State(_), P::State(_))) && universal == matches!(p, P::Release(..)) =>
            {
                let (a, b) = (state_operand(a)?, state_operand(b)?);
                let (classes, succ) = self.explore(f, v, sig)?;
                let mut va = Vec::new();
                let mut vb = Vec::new();
                for (u, s) in &classes {
                    let sa = self.restrict(f, s, &a);
                    let sb = self.restrict(f, s, &b);
                    va.push(self.eval(&a, *u, &sa)?);
                    vb.push(self.eval(&b, *u, &sb)?);
                }
                let n = classes.len();
                // E(a U b): Z ↦ b ∨ (a ∧ EX Z) from ∅.
                // A(a R b): Z ↦ b ∧ (a ∨ AX Z) from everything.
                let mut z = vec![universal; n];
                let mut rounds = 0;
                loop {
                    let next: Vec<bool> = (0..n)
                        .map(|i| {
                            if universal {
                                vb[i] && (va[i] || succ[i].iter().all(|&j| z[j]))
                            } else {
                                vb[i] || (va[i] && succ[i].iter().any(|&j| z[j]))
                            }
                        })
                        .collect();
                    rounds += 1;
                    if next == z {
                        break;
                    }
                    debug_assert!(if universal { next.iter().zip(&z).all(|(x, y)| !x | y) } else { next.iter().zip(&z).all(|(x, y)| x | !y) });
                    assert!(rounds <= n + 1, "approximants did not converge");
                    z = next;
                }
                Ok(z[0])
            }
            _ => {
                if p.has_past() {
                    return Err(Error::WrongFragment(format!("{f}: past inside a path body")));
                }
                if universal {
                    if !safe_shape(p) {
                        return Err(Error::WrongFragment(format!("{f}: A needs a safe body")));
                    }
                    let body = nnf(p, true, true)?;
                    Ok(!self.progress(f, &body, v, sig)?)
                } else {
                    if !cosafe_shape(p) {
                        return Err(Error::WrongFragment(format!("{f}: E needs a co-safe body")));
                    }
                    let body = nnf(p, false, true)?;
                    self.progress(f, &body, v, sig)
                }
            }
        }
    }

    /// Is there a nonempty finite path from `(v, sig)` satisfying `body`
    /// under finite semantics? Breadth-first over (class, obligation).
    fn progress(&mut self, f: &StateRef, body: &PathRef, v: usize, sig: &Sig) -> Result<bool> {
        let start: Dnf = BTreeSet::from([BTreeSet::from([body.clone()])]);
        let mut seen: HashMap<(Class, Dnf), ()> = HashMap::new();
        let mut queue = VecDeque::from([((v, sig.clone()), start)]);
        let mut found = false;
        while let Some(((u, s), d)) = queue.pop_front() {
            if seen.insert(((u, s.clone()), d.clone()), ()).is_some() {
                continue;
            }
            self.spend(seen.len())?;
            let mut next: Dnf = BTreeSet::new();
            for clause in &d {
                let mut acc: Dnf = BTreeSet::from([BTreeSet::new()]);
                let mut ends = true;
                for x in clause {
                    let (step, end) = self.step(f, x, u, &s)?;
                    acc = conj(&acc, &step);
                    ends &= end;
                }
                if ends {
                    found = true;
                    break;
                }
                next.extend(acc);
            }
            if found {
                break;
            }
            if next.is_empty() {
                continue;
            }
            for w in self.g.succ[u].clone() {
                let cs = self.child(f, u, &s, w)?;
                queue.push_back(((w, cs), next.clone()));
            }
        }
        Ok(found)
    }

    /// Progression of `x` through node `u`: the obligations for the rest of
    /// the path, and whether `x` holds if the path ends at `u`.
    fn step(&mut self, f: &StateRef, x: &PathRef, u: usize, sig: &Sig) -> Result<(Dnf, bool)> {
        use PathFormula as P;
        let tt: Dnf = BTreeSet::from([BTreeSet::new()]);
        Ok(match &**x {
            P::State(s) => {
                let ss = self.restrict(f, sig, s);
                if self.eval(s, u, &ss)? {
                    (tt, true)
                } else {
                    (BTreeSet::new(), false)
                }
            }
            P::Next(a) => (BTreeSet::from([BTreeSet::from([a.clone()])]), false),
            P::WeakNext(a) => (BTreeSet::from([BTreeSet::from([a.clone()])]), true),
            P::And(a, b) => {
                let (da, ea) = self.step(f, a, u, sig)?;
                let (db, eb) = self.step(f, b, u, sig)?;
                (conj(&da, &db), ea && eb)
            }
            P::Or(a, b) => {
                let (mut da, ea) = self.step(f, a, u, sig)?;
                let (db, eb) = self.step(f, b, u, sig)?;
                da.extend(db);
                (da, ea || eb)
            }
            P::Until(a, b) => {
                let (da, _) = self.step(f, a, u, sig)?;
                let (mut db, eb) = self.step(f, b, u, sig)?;
                db.extend(conj(&da, &BTreeSet::from([BTreeSet::from([x.clone()])])));
                (db, eb)
            }
            P::Release(a, b) => {
                let (mut da, _) = self.step(f, a, u, sig)?;
                let (db, eb) = self.step(f, b, u, sig)?;
                da.insert(BTreeSet::from([x.clone()]));
                (conj(&db, &da), eb)
            }
            other => return Err(Error::WrongFragment(format!("{other} in a progressed body"))),
        })
    }

    fn guarded(&mut self, f: &StateRef, ge: &GuardedExists, v: usize, sig: &Sig) -> Result<bool> {
        let w = &ge.automaton;
        if w.branching == Branching::Universal || w.acceptance == Acceptance::FiniteAccept {
            return Err(Error::WrongFragment("guarded E needs an existential ω-automaton".into()));
        }
        let (classes, succ) = self.explore(f, v, sig)?;
        let k = w.len();
        let n = classes.len() * k;
        self.spend(n)?;
        let mut prod: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, (u, s)) in classes.iter().enumerate() {
            let sigma: BTreeSet<String> = self.g.labels[*u].iter().filter(|p| ge.ap.contains(p)).cloned().collect();
            for (li, l) in w.alphabet.iter().enumerate() {
                if l.sigma != sigma {
                    continue;
                }
                let ok = match ge.guards.get(&l.annot) {
                    Some(gs) => {
                        let rs = self.restrict(f, s, gs);
                        self.eval(gs, *u, &rs)?
                    }
                    None if l.annot.is_empty() => true,
                    None => return Err(Error::InvalidAutomaton(format!("no guard for {:?}", l.annot))),
                };
                if !ok {
                    continue;
                }
                for q in 0..k {
                    for &t in &w.delta[q][li] {
                        prod[ci * k + q].extend(succ[ci].iter().map(|&cj| cj * k + t));
                    }
                }
            }
        }
        let fin = |x: usize| w.accepting[x % k];
        let ex = |z: &[bool], x: usize| prod[x].iter().any(|&y| z[y]);
        // Büchi: νZ. μY. (F ∧ EX Z) ∨ EX Y.  co-Büchi: μY. EX Y ∨ νZ. (¬F ∧ EX Z).
        let buchi = w.acceptance == Acceptance::Buchi;
        let mut outer = vec![buchi; n];
        loop {
            let mut inner = vec![!buchi; n];
            loop {
                let next: Vec<bool> = (0..n)
                    .map(|x| {
                        if buchi {
                            (fin(x) && ex(&outer, x)) || ex(&inner, x)
                        } else {
                            !fin(x) && ex(&inner, x)
                        }
                    })
                    .collect();
                if next == inner {
                    break;
                }
                inner = next;
            }
            let next: Vec<bool> = if buchi { inner } else { (0..n).map(|x| inner[x] || ex(&outer, x)).collect() };
            if next == outer {
                break;
            }
            outer = next;
        }
        Ok(outer[w.initial])
    }
}

fn conj(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).cloned().collect());
        }
    }
    out
}

/// Negation normal form for progression. `strong` reads `wX` as `X` and
/// negates `X` as infinite-path semantics does; otherwise `¬X = wX¬`.
fn nnf(p: &PathFormula, neg: bool, strong: bool) -> Result<PathRef> {
    use PathFormula as P;
    let r = |x: &PathFormula, n: bool| nnf(x, n, strong);
    Ok(Arc::new(match p {
        P::State(s) => P::State(if neg { not(s.clone()) } else { s.clone() }),
        P::Not(a) => return r(a, !neg),
        P::And(a, b) if neg => P::Or(r(a, true)?, r(b, true)?),
        P::And(a, b) => P::And(r(a, false)?, r(b, false)?),
        P::Or(a, b) if neg => P::And(r(a, true)?, r(b, true)?),
        P::Or(a, b) => P::Or(r(a, false)?, r(b, false)?),
        P::Next(a) if neg && !strong => P::WeakNext(r(a, true)?),
        P::Next(a) => P::Next(r(a, neg)?),
        P::WeakNext(a) if strong || neg => P::Next(r(a, neg)?),
        P::WeakNext(a) => P::WeakNext(r(a, false)?),
        P::Until(a, b) if neg => P::Release(r(a, true)?, r(b, true)?),
        P::Until(a, b) => P::Until(r(a, false)?, r(b, false)?),
        P::Release(a, b) if neg => P::Until(r(a, true)?, r(b, true)?),
        P::Release(a, b) => P::Release(r(a, false)?, r(b, false)?),
        other => return Err(Error::WrongFragment(format!("past operator {other} in a progressed body"))),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{mc_ctlsf, mc_ctlspm, mc_pctlpm};
    use crate::formula::parse_state;

    #[test]
    fn eventually_without_p() {
        let m = RegularTreeModel::from_parts(0, vec![vec![]], vec![vec![0]]);
        let f = parse_state("E (true U p)").unwrap();
        assert!(!oracle_eval(&m, &f, 1).unwrap());
    }

    #[test]
    fn fuel_contract() {
        let m = RegularTreeModel::from_parts(0, vec![vec![], vec![], vec!["p"]], vec![vec![1], vec![2], vec![2]]);
        let f = parse_state("E (true U E Y p)").unwrap();
        let bound = oracle_bound(&m, &f).unwrap();
        assert!(bound > 1);
        assert!(matches!(oracle_eval(&m, &f, bound - 1), Err(Error::InsufficientFuel { .. })));
        assert!(oracle_eval(&m, &f, bound).unwrap());
    }

    #[test]
    fn agrees_on_handwritten_cases() {
        let m = RegularTreeModel::from_parts(
            0,
            vec![vec!["q"], vec!["p"], vec!["p", "q"], vec![]],
            vec![vec![1, 2], vec![3, 1], vec![0], vec![3]],
        );
        for s in [
            "E (p U q)",
            "A (p R q)",
            "E X E (p S q)",
            "A (true R A wY (p | q))",
            "D2 E (true U q)",
            "C1 E X p",
            "E (true U (E Y q & !q))",
        ] {
            let f = parse_state(s).unwrap();
            let want = mc_pctlpm(&m, &f).unwrap().root;
            assert_eq!(oracle_eval(&m, &f, 100).unwrap(), want, "{s}");
        }
        for s in ["E ((p U q) & X X p)", "A (q R (p | q))", "!E (X (p & X q))"] {
            let f = parse_state(s).unwrap();
            assert_eq!(oracle_eval(&m, &f, 100).unwrap(), mc_ctlspm(&m, &f).unwrap().root, "{s}");
        }
        for s in ["Ef (X p & wX wX false)", "Ef (p R q)", "Ef !(true U p)", "Ef wX X q"] {
            let f = parse_state(s).unwrap();
            assert_eq!(oracle_eval(&m, &f, 100).unwrap(), mc_ctlsf(&m, &f).unwrap().root, "{s}");
        }
    }
}
