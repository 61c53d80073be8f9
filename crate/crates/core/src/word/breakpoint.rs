use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

use super::automaton::{is_looping, Acceptance, Branching, Letter, WordAutomaton};

type Macro = (BTreeSet<usize>, BTreeSet<usize>);

/// Miyano–Hayashi breakpoint construction for a UBA, yielding a
/// deterministic Büchi automaton. A looping input gives a looping output: all
/// macrostates whose obligation set holds the sink are fused into `SINK`.
pub fn breakpoint_determinize<L: Letter>(w: &WordAutomaton<L>) -> Result<WordAutomaton<L>> {
    if w.acceptance != Acceptance::Buchi || w.branching != Branching::Universal {
        return Err(Error::NotUba);
    }
    let sink = is_looping(w);
    let post = |s: &BTreeSet<usize>, a: usize| -> BTreeSet<usize> {
        s.iter().flat_map(|&q| w.delta[q][a].iter().copied()).collect()
    };
    let strip = |s: BTreeSet<usize>| -> BTreeSet<usize> {
        s.into_iter().filter(|&q| !w.accepting[q]).collect()
    };
    let fused = |m: &Macro| sink.is_some_and(|s| m.1.contains(&s));

    let mut out = WordAutomaton::new(vec![], w.alphabet.clone(), 0, Acceptance::Buchi, Branching::Deterministic);
    let mut ids: HashMap<Macro, usize> = HashMap::new();
    let mut sink_id: Option<usize> = None;
    let mut queue: VecDeque<(Macro, usize)> = VecDeque::new();
    let mut intern = |m: Macro, out: &mut WordAutomaton<L>, queue: &mut VecDeque<(Macro, usize)>| {
        if fused(&m) {
            return *sink_id.get_or_insert_with(|| out.add_state("SINK".into(), false));
        }
        if let Some(&id) = ids.get(&m) {
            return id;
        }
        let id = out.add_state(macro_name(&m, w), m.1.is_empty());
        ids.insert(m.clone(), id);
        queue.push_back((m, id));
        id
    };
    let init_s = BTreeSet::from([w.initial]);
    let init_o = strip(init_s.clone());
    out.initial = intern((init_s, init_o), &mut out, &mut queue);
    while let Some((m, from)) = queue.pop_front() {
        for a in 0..w.alphabet.len() {
            let s2 = post(&m.0, a);
            let o2 = if m.1.is_empty() { strip(s2.clone()) } else { strip(post(&m.1, a)) };
            let to = intern((s2, o2), &mut out, &mut queue);
            out.add_transition(from, a, to);
        }
    }
    drop(intern);
    if sink.is_some() {
        let s = sink_id.unwrap_or_else(|| out.add_state("SINK".into(), false));
        for a in 0..w.alphabet.len() {
            out.add_transition(s, a, s);
        }
    }
    Ok(out)
}

fn macro_name<L: Letter>(m: &Macro, w: &WordAutomaton<L>) -> String {
    let set = |s: &BTreeSet<usize>| {
        s.iter().map(|&q| w.states[q].as_str()).collect::<Vec<_>>().join(",")
    };
    format!("({{{}}},{{{}}})", set(&m.0), set(&m.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{accepts_lasso, is_counter_free, LassoWord};

    fn s(x: &str) -> String {
        x.to_string()
    }

    /// G a as a looping UBA: q0 final, sink on b.
    fn g_a() -> WordAutomaton<String> {
        let mut w = WordAutomaton::new(vec![s("q0"), s("sink")], vec![s("a"), s("b")], 0, Acceptance::Buchi, Branching::Universal);
        w.accepting[0] = true;
        w.add_transition(0, 0, 0);
        w.add_transition(0, 1, 1);
        w.add_transition(1, 0, 1);
        w.add_transition(1, 1, 1);
        w
    }

    #[test]
    fn looping_input_gives_looping_output() {
        let d = breakpoint_determinize(&g_a()).unwrap();
        assert!(d.is_deterministic());
        let sink = is_looping(&d).expect("looping");
        assert_eq!(d.states[sink], "SINK");
        assert!(is_counter_free(&d).unwrap().is_none());
        let words = [
            (vec![], vec![s("a")], true),
            (vec![s("a")], vec![s("b")], false),
            (vec![s("a"), s("b")], vec![s("a")], false),
        ];
        for (u, v, expect) in words {
            let l = LassoWord { prefix: u, cycle: v };
            assert_eq!(accepts_lasso(&d, &l).unwrap(), expect);
            assert_eq!(accepts_lasso(&g_a(), &l).unwrap(), expect);
        }
    }

    #[test]
    fn single_final_state() {
        let mut w = WordAutomaton::new(vec![s("q")], vec![s("a")], 0, Acceptance::Buchi, Branching::Universal);
        w.accepting[0] = true;
        w.add_transition(0, 0, 0);
        let d = breakpoint_determinize(&w).unwrap();
        assert_eq!(d.len(), 1);
        let l = LassoWord { prefix: vec![], cycle: vec![s("a")] };
        assert!(accepts_lasso(&d, &l).unwrap());
    }

    #[test]
    fn rejects_non_uba() {
        let mut w = g_a();
        w.branching = Branching::Existential;
        assert_eq!(breakpoint_determinize(&w), Err(Error::NotUba));
    }
}
