//! Graph helpers shared by the product constructions.

/// Strongly connected components (iterative Tarjan) of the subgraph induced
/// by nodes with `keep[v]`. Returns the component index of every kept node.
pub fn scc(succ: &[Vec<usize>], keep: &[bool]) -> Vec<Option<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![None; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if !keep[root] || index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = work.last() {
            if i < succ[v].len() {
                let w = succ[v][i];
                work.last_mut().expect("nonempty").1 += 1;
                if !keep[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = Some(ncomp);
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Kept nodes lying on a cycle of the kept subgraph.
pub fn on_cycle(succ: &[Vec<usize>], keep: &[bool]) -> Vec<bool> {
    let comp = scc(succ, keep);
    let mut size = std::collections::HashMap::new();
    for c in comp.iter().flatten() {
        *size.entry(*c).or_insert(0usize) += 1;
    }
    (0..succ.len())
        .map(|v| match comp[v] {
            None => false,
            Some(c) => size[&c] > 1 || succ[v].iter().any(|&w| w == v),
        })
        .collect()
}

/// Nodes from which some node in `target` is reachable (including targets).
pub fn can_reach(succ: &[Vec<usize>], target: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut seen = target.to_vec();
    let mut queue: Vec<usize> = (0..n).filter(|&v| target[v]).collect();
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if !seen[v] {
                seen[v] = true;
                queue.push(v);
            }
        }
    }
    seen
}

/// Nodes reachable from `start`.
pub fn reachable(succ: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    seen[start] = true;
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles() {
        let succ = vec![vec![1], vec![2], vec![1], vec![3], vec![0]];
        let all = vec![true; 5];
        assert_eq!(on_cycle(&succ, &all), vec![false, true, true, true, false]);
        let no2 = vec![true, true, false, true, true];
        assert_eq!(on_cycle(&succ, &no2), vec![false, false, false, true, false]);
        assert_eq!(can_reach(&succ, &[false, false, false, true, false]), vec![false, false, false, true, false]);
        assert_eq!(reachable(&succ, 4), vec![true, true, true, false, true]);
    }
}
