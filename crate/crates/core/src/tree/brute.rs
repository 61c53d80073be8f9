use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::RegularTreeModel;
use crate::util::on_cycle;

use super::automaton::TreeAutomaton;
use super::formula::{AtomKind, DEFAULT_CLAUSE_LIMIT};

type Pos = (usize, usize);

/// Acceptance by exhaustive search for a positional winning strategy of the
/// automaton in the acceptance game played on the graph.
///
/// A position is (state, node). The automaton picks a ⊆-minimal set of
/// positions satisfying the transition (a `(◇k,q)` atom sends q to k chosen
/// successor entries, `(□k,q)` to all but k-1 of them); the pathfinder picks
/// one. The automaton wins iff its strategy graph, restricted to reachable
/// positions, has no cycle avoiding F. Returns `None` when more than
/// `budget` strategies would have to be examined.
pub fn brute_force_accepts(a: &TreeAutomaton, m: &RegularTreeModel, budget: usize) -> Result<Option<bool>> {
    if a.two_way {
        return Err(Error::TwoWayUnsupported);
    }
    let g = m.graph()?;
    let mut choices: HashMap<Pos, Vec<Vec<Pos>>> = HashMap::new();
    let mut todo = vec![(a.initial, g.root)];
    while let Some(p) = todo.pop() {
        if choices.contains_key(&p) {
            continue;
        }
        let (q, v) = p;
        let f = a.transition(q, a.letter_of(&g.labels[v]), false);
        let kids = &g.succ[v];
        let mut options: BTreeSet<BTreeSet<Pos>> = BTreeSet::new();
        for clause in f.dnf(DEFAULT_CLAUSE_LIMIT)? {
            // Each atom contributes alternative target sets; take their product.
            let mut partial: Vec<BTreeSet<Pos>> = vec![BTreeSet::new()];
            for t in &clause {
                let need = match t.kind {
                    AtomKind::Dia => t.k as usize,
                    AtomKind::Box => (kids.len() + 1).saturating_sub(t.k as usize),
                    AtomKind::Up => return Err(Error::TwoWayUnsupported),
                };
                if need > kids.len() {
                    partial.clear();
                    break;
                }
                let picks: Vec<BTreeSet<Pos>> = subsets(kids.len(), need)
                    .into_iter()
                    .map(|s| s.into_iter().map(|i| (t.state, kids[i])).collect())
                    .collect();
                partial = partial
                    .iter()
                    .flat_map(|x| picks.iter().map(move |y| x.union(y).copied().collect()))
                    .collect();
            }
            options.extend(partial);
        }
        let minimal: Vec<Vec<Pos>> = options
            .iter()
            .filter(|o| !options.iter().any(|p| p != *o && p.is_subset(o)))
            .map(|o| o.iter().copied().collect())
            .collect();
        for o in &minimal {
            todo.extend(o.iter().copied());
        }
        choices.insert(p, minimal);
    }
    let mut s = Search { a, choices: &choices, assign: HashMap::new(), budget, spent: 0 };
    Ok(s.run((a.initial, g.root)))
}

struct Search<'a> {
    a: &'a TreeAutomaton,
    choices: &'a HashMap<Pos, Vec<Vec<Pos>>>,
    assign: HashMap<Pos, usize>,
    budget: usize,
    spent: usize,
}

impl Search<'_> {
    /// Reachable positions under the current partial strategy, and the
    /// first unassigned one.
    fn reach(&self, start: Pos) -> (Vec<Pos>, Option<Pos>) {
        let mut seen = vec![start];
        let mut i = 0;
        let mut open = None;
        while i < seen.len() {
            let p = seen[i];
            i += 1;
            match self.assign.get(&p) {
                None => {
                    open.get_or_insert(p);
                }
                Some(&c) => {
                    for t in &self.choices[&p][c] {
                        if !seen.contains(t) {
                            seen.push(*t);
                        }
                    }
                }
            }
        }
        (seen, open)
    }

    fn losing_cycle(&self, reach: &[Pos]) -> bool {
        let idx: HashMap<Pos, usize> = reach.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let succ: Vec<Vec<usize>> = reach
            .iter()
            .map(|p| match self.assign.get(p) {
                Some(&c) => self.choices[p][c].iter().map(|t| idx[t]).collect(),
                None => vec![],
            })
            .collect();
        let keep: Vec<bool> = reach.iter().map(|&(q, _)| !self.a.accepting[q]).collect();
        on_cycle(&succ, &keep).into_iter().any(|b| b)
    }

    fn run(&mut self, start: Pos) -> Option<bool> {
        self.spent += 1;
        if self.spent > self.budget {
            return None;
        }
        let (reach, open) = self.reach(start);
        if self.losing_cycle(&reach) {
            return Some(false);
        }
        let Some(p) = open else { return Some(true) };
        for c in 0..self.choices[&p].len() {
            self.assign.insert(p, c);
            let r = self.run(start);
            self.assign.remove(&p);
            match r {
                Some(true) | None => return r,
                Some(false) => {}
            }
        }
        Some(false)
    }
}

/// All k-element subsets of `0..n`, as sorted index lists.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(0, n, k, &mut vec![], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::accept::accepts;
    use crate::tree::fixtures::example_a;

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn agrees_on_example_a() {
        let a = example_a();
        let models = [
            RegularTreeModel::from_parts(0, vec![vec![], vec!["b"]], vec![vec![1], vec![1]]),
            RegularTreeModel::from_parts(0, vec![vec![], vec!["a"]], vec![vec![0, 1], vec![1]]),
            RegularTreeModel::from_parts(0, vec![vec![], vec!["a"], vec!["b"]], vec![vec![1, 2], vec![1], vec![2]]),
            RegularTreeModel::from_parts(
                0,
                vec![vec![], vec![], vec!["a"], vec!["b"]],
                vec![vec![1, 2], vec![0, 3], vec![2], vec![3]],
            ),
        ];
        for m in &models {
            let want = accepts(&a, m).unwrap();
            assert_eq!(brute_force_accepts(&a, m, 100_000).unwrap(), Some(want));
        }
    }
}
