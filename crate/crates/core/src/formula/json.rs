//! JSON encoding `{"op": ..., "args": [...]}` of formulas.
//!
//! Path-level Boolean connectives use `pnot`/`pand`/`por`; a state formula
//! in path position is embedded as is.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::ast::*;
use crate::error::{Error, Result};
use crate::word::{Letter, WordAutomaton};

pub fn state_to_json(s: &StateFormula) -> Value {
    use StateFormula as S;
    match s {
        S::True => json!({"op": "true", "args": []}),
        S::False => json!({"op": "false", "args": []}),
        S::Atom(p) => json!({"op": "atom", "name": p, "args": []}),
        S::Not(a) => json!({"op": "not", "args": [state_to_json(a)]}),
        S::And(a, b) => json!({"op": "and", "args": [state_to_json(a), state_to_json(b)]}),
        S::Or(a, b) => json!({"op": "or", "args": [state_to_json(a), state_to_json(b)]}),
        S::Count(n, a) => json!({"op": "D", "n": n, "args": [state_to_json(a)]}),
        S::CoCount(n, a) => json!({"op": "C", "n": n, "args": [state_to_json(a)]}),
        S::Exists(p) => json!({"op": "E", "args": [path_to_json(p)]}),
        S::Forall(p) => json!({"op": "A", "args": [path_to_json(p)]}),
        S::ExistsFin(p) => json!({"op": "Ef", "args": [path_to_json(p)]}),
        S::Guarded(g) => json!({
            "op": "eauto",
            "ap": g.ap,
            "automaton": g.automaton.to_json(),
            "guards": g.guards.iter().map(|(k, f)| json!({"annot": k.to_json(), "formula": state_to_json(f)})).collect::<Vec<_>>(),
            "args": [],
        }),
    }
}

pub fn path_to_json(p: &PathFormula) -> Value {
    use PathFormula as P;
    let un = |op: &str, a: &PathFormula| json!({"op": op, "args": [path_to_json(a)]});
    let bin = |op: &str, a: &PathFormula, b: &PathFormula| {
        json!({"op": op, "args": [path_to_json(a), path_to_json(b)]})
    };
    match p {
        P::State(s) => state_to_json(s),
        P::Not(a) => un("pnot", a),
        P::And(a, b) => bin("pand", a, b),
        P::Or(a, b) => bin("por", a, b),
        P::Next(a) => un("X", a),
        P::WeakNext(a) => un("wX", a),
        P::Yesterday(a) => un("Y", a),
        P::WeakYesterday(a) => un("wY", a),
        P::Until(a, b) => bin("U", a, b),
        P::Release(a, b) => bin("R", a, b),
        P::Since(a, b) => bin("S", a, b),
    }
}

fn op(v: &Value) -> Result<&str> {
    v["op"].as_str().ok_or_else(|| Error::Json(format!("node without op: {v}")))
}

fn arg(v: &Value, i: usize) -> Result<&Value> {
    v["args"].get(i).ok_or_else(|| Error::Json(format!("missing argument {i} in {v}")))
}

fn arity(v: &Value) -> Result<u32> {
    let n = v["n"].as_u64().ok_or_else(|| Error::Json(format!("missing n in {v}")))?;
    if n == 0 {
        return Err(Error::Json("counting arity must be at least 1".into()));
    }
    u32::try_from(n).map_err(|_| Error::Json("arity too large".into()))
}

pub fn state_from_json(v: &Value) -> Result<StateRef> {
    let s = |i| state_from_json(arg(v, i)?);
    let p = |i| path_from_json(arg(v, i)?);
    Ok(match op(v)? {
        "true" => tt(),
        "false" => ff(),
        "atom" => atom(v["name"].as_str().ok_or_else(|| Error::Json("atom without name".into()))?),
        "not" => not(s(0)?),
        "and" => and(s(0)?, s(1)?),
        "or" => or(s(0)?, s(1)?),
        "D" => count(arity(v)?, s(0)?),
        "C" => cocount(arity(v)?, s(0)?),
        "E" => exists(p(0)?),
        "A" => forall(p(0)?),
        "Ef" => exists_fin(p(0)?),
        "eauto" => {
            let ap: Vec<String> = serde_json::from_value(v["ap"].clone())?;
            let automaton = WordAutomaton::<GuardLetter>::from_json(&v["automaton"])?;
            let mut guards = BTreeMap::new();
            for g in v["guards"].as_array().ok_or_else(|| Error::Json("eauto without guards".into()))? {
                guards.insert(Valuation::from_json(&g["annot"])?, state_from_json(&g["formula"])?);
            }
            Arc::new(StateFormula::Guarded(Arc::new(GuardedExists { ap, automaton, guards })))
        }
        other => return Err(Error::Json(format!("unknown state op {other}"))),
    })
}

pub fn path_from_json(v: &Value) -> Result<PathRef> {
    let p = |i| path_from_json(arg(v, i)?);
    Ok(match op(v)? {
        "pnot" => pnot(p(0)?),
        "pand" => pand(p(0)?, p(1)?),
        "por" => por(p(0)?, p(1)?),
        "X" => next(p(0)?),
        "wX" => wnext(p(0)?),
        "Y" => yesterday(p(0)?),
        "wY" => wyesterday(p(0)?),
        "U" => until(p(0)?, p(1)?),
        "R" => release(p(0)?, p(1)?),
        "S" => since(p(0)?, p(1)?),
        _ => st(state_from_json(v)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse_state;

    #[test]
    fn round_trip() {
        for text in ["E (p U (q & X r))", "A G (p | wY false)", "D2 !C1 Ef (p R wX q)", "E (p S (q & !r))"] {
            let f = parse_state(text).unwrap();
            let back = state_from_json(&state_to_json(&f)).unwrap();
            assert_eq!(back, f, "{text}");
        }
    }

    #[test]
    fn shape() {
        let f = parse_state("E (p U q)").unwrap();
        let v = state_to_json(&f);
        assert_eq!(v["op"], "E");
        assert_eq!(v["args"][0]["op"], "U");
        assert_eq!(v["args"][0]["args"][1]["name"], "q");
    }

    #[test]
    fn zero_arity_rejected() {
        let v = json!({"op": "D", "n": 0, "args": [{"op": "true", "args": []}]});
        assert!(state_from_json(&v).is_err());
    }
}
