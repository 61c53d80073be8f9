//! Direct trace semantics used as oracles. They share nothing with the
//! automata constructions: each operator is evaluated by a backward pass
//! over an explicit finite trace.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{PathFormula, PathRef, Valuation};
use crate::word::LassoWord;

/// How the end of a finite trace is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    /// Finite-path semantics: `X` needs a successor, `wX` does not, `U`
    /// needs its goal inside the trace, `R` only constrains the trace.
    Neutral,
    /// Every obligation must be met inside the trace (good prefixes).
    Strong,
    /// Every pending obligation is assumed met after the trace (no bad
    /// prefix yet).
    Weak,
}

/// Truth of `psi` at every position of a non-empty finite trace.
pub fn trace_table(psi: &PathFormula, trace: &[Valuation], mode: TraceMode) -> Result<Vec<bool>> {
    let n = trace.len();
    if n == 0 {
        return Err(Error::InvalidModel("empty trace".into()));
    }
    use PathFormula as P;
    let strong_next = |m: TraceMode, weak_op: bool| match m {
        TraceMode::Strong => true,
        TraceMode::Weak => false,
        TraceMode::Neutral => !weak_op,
    };
    Ok(match psi {
        P::State(s) => trace
            .iter()
            .map(|v| s.eval_prop(v).ok_or_else(|| Error::WrongFragment(format!("{s} is not propositional"))))
            .collect::<Result<_>>()?,
        P::Not(a) => trace_table(a, trace, dual(mode))?.into_iter().map(|b| !b).collect(),
        P::And(a, b) => zip(trace_table(a, trace, mode)?, trace_table(b, trace, mode)?, |x, y| x && y),
        P::Or(a, b) => zip(trace_table(a, trace, mode)?, trace_table(b, trace, mode)?, |x, y| x || y),
        P::Next(a) | P::WeakNext(a) => {
            let t = trace_table(a, trace, mode)?;
            let end = !strong_next(mode, matches!(psi, P::WeakNext(_)));
            (0..n).map(|i| if i + 1 < n { t[i + 1] } else { end }).collect()
        }
        P::Yesterday(a) | P::WeakYesterday(a) => {
            let t = trace_table(a, trace, mode)?;
            let start = matches!(psi, P::WeakYesterday(_));
            (0..n).map(|i| if i > 0 { t[i - 1] } else { start }).collect()
        }
        P::Until(a, b) => {
            let (ta, tb) = (trace_table(a, trace, mode)?, trace_table(b, trace, mode)?);
            let mut out = vec![false; n];
            let mut later = mode == TraceMode::Weak;
            for i in (0..n).rev() {
                out[i] = tb[i] || (ta[i] && later);
                later = out[i];
            }
            out
        }
        P::Release(a, b) => {
            let (ta, tb) = (trace_table(a, trace, mode)?, trace_table(b, trace, mode)?);
            let mut out = vec![false; n];
            let mut later = mode != TraceMode::Strong;
            for i in (0..n).rev() {
                out[i] = tb[i] && (ta[i] || later);
                later = out[i];
            }
            out
        }
        P::Since(a, b) => {
            let (ta, tb) = (trace_table(a, trace, mode)?, trace_table(b, trace, mode)?);
            let mut out = vec![false; n];
            let mut earlier = false;
            for i in 0..n {
                out[i] = tb[i] || (ta[i] && earlier);
                earlier = out[i];
            }
            out
        }
    })
}

fn dual(m: TraceMode) -> TraceMode {
    match m {
        TraceMode::Strong => TraceMode::Weak,
        TraceMode::Weak => TraceMode::Strong,
        TraceMode::Neutral => TraceMode::Neutral,
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Distinct path subformulas.
pub fn path_subformulas(psi: &PathRef) -> BTreeSet<PathRef> {
    let mut out = BTreeSet::new();
    let mut todo = vec![psi.clone()];
    while let Some(p) = todo.pop() {
        if !out.insert(p.clone()) {
            continue;
        }
        use PathFormula as P;
        match &*p {
            P::State(_) => {}
            P::Not(a) | P::Next(a) | P::WeakNext(a) | P::Yesterday(a) | P::WeakYesterday(a) => todo.push(a.clone()),
            P::And(a, b) | P::Or(a, b) | P::Until(a, b) | P::Release(a, b) | P::Since(a, b) => {
                todo.push(a.clone());
                todo.push(b.clone());
            }
        }
    }
    out
}

/// Prefix length after which a lasso's verdict on a co-safe or safe formula
/// is settled: `|u| + |v|·2^|sub(ψ)|`.
pub fn prefix_bound<L>(psi: &PathRef, w: &LassoWord<L>) -> usize {
    let sub = path_subformulas(psi).len().min(20) as u32;
    w.prefix.len() + w.cycle.len() * (1usize << sub)
}

/// The first `len` letters of `u·v^ω`.
pub fn unroll<L: Clone>(w: &LassoWord<L>, len: usize) -> Vec<L> {
    w.prefix.iter().chain(w.cycle.iter().cycle()).take(len).cloned().collect()
}

/// Lasso membership by prefixes: a co-safe formula holds iff some prefix
/// within the bound is good, a safe one iff no such prefix is bad. Good
/// prefixes are closed under extension and bad ones too, so the longest
/// prefix decides.
pub fn lasso_by_prefixes(psi: &PathRef, w: &LassoWord<Valuation>, safe: bool) -> Result<bool> {
    let trace = unroll(w, prefix_bound(psi, w));
    let mode = if safe { TraceMode::Weak } else { TraceMode::Strong };
    Ok(trace_table(psi, &trace, mode)?[0])
}

/// All traces of length `1..=max_len` over the valuations `letters`.
pub fn all_traces(letters: &[Valuation], max_len: usize) -> Vec<Vec<Valuation>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Valuation>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|t| letters.iter().map(move |l| t.iter().cloned().chain([l.clone()]).collect::<Vec<_>>()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_path;

    fn v(s: &str) -> Valuation {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn table(f: &str, t: &[&str], m: TraceMode) -> Vec<bool> {
        let trace: Vec<Valuation> = t.iter().map(|s| v(s)).collect();
        trace_table(&parse_path(f).unwrap(), &trace, m).unwrap()
    }

    #[test]
    fn end_of_trace() {
        assert_eq!(table("X p", &["", "p"], TraceMode::Neutral), vec![true, false]);
        assert_eq!(table("wX p", &["", "p"], TraceMode::Neutral), vec![true, true]);
        assert_eq!(table("p R q", &["q", "q"], TraceMode::Neutral), vec![true, true]);
        assert_eq!(table("p R q", &["q", "q"], TraceMode::Strong), vec![false, false]);
        assert_eq!(table("p U q", &["p", "p"], TraceMode::Weak), vec![true, true]);
        assert_eq!(table("p U q", &["p", "p"], TraceMode::Neutral), vec![false, false]);
        assert_eq!(table("!(X p)", &["p"], TraceMode::Strong), vec![false]);
    }

    #[test]
    fn lasso_prefixes() {
        let f = parse_path("p U q").unwrap();
        let w = LassoWord { prefix: vec![v("p")], cycle: vec![v("p"), v("q")] };
        assert!(lasso_by_prefixes(&f, &w, false).unwrap());
        let g = parse_path("p R q").unwrap();
        let w2 = LassoWord { prefix: vec![], cycle: vec![v("q")] };
        assert!(lasso_by_prefixes(&g, &w2, true).unwrap());
        let w3 = LassoWord { prefix: vec![v("q")], cycle: vec![v("")] };
        assert!(!lasso_by_prefixes(&g, &w3, true).unwrap());
    }

    #[test]
    fn trace_count() {
        assert_eq!(all_traces(&[v(""), v("p")], 3).len(), 2 + 4 + 8);
    }
}
