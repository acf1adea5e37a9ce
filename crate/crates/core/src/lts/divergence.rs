use std::collections::BTreeSet;

use super::{ActionLabel, Lts, StateId, Transition};

/// Strongly connected components of a graph given as adjacency lists.
/// Returns the component of every node; components are numbered in reverse
/// topological order (a component's successors have smaller numbers).
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // (node, next edge position)
    let mut work: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        work.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    (comp, next_comp)
}

/// Components of the silent-edge graph, with a flag per component telling
/// whether it contains a silent cycle (more than one state, or a self-loop).
pub fn silent_sccs(lts: &Lts) -> (Vec<usize>, Vec<bool>) {
    let adj = lts.silent_successors();
    let (comp, count) = tarjan(&adj);
    let mut size = vec![0usize; count];
    for c in &comp {
        size[*c] += 1;
    }
    let mut cyclic: Vec<bool> = size.iter().map(|s| *s > 1).collect();
    for (s, succ) in adj.iter().enumerate() {
        if succ.contains(&s) {
            cyclic[comp[s]] = true;
        }
    }
    (comp, cyclic)
}

/// States from which an infinite run of silent steps exists: those that can
/// reach a silent cycle by silent steps.
pub fn mark_divergence(lts: &Lts) -> BTreeSet<StateId> {
    let (comp, cyclic) = silent_sccs(lts);
    let mut pred = vec![Vec::new(); lts.num_states()];
    for t in lts.transitions().iter().filter(|t| t.label.is_silent()) {
        pred[t.target].push(t.source);
    }
    let mut marked = vec![false; lts.num_states()];
    let mut stack: Vec<StateId> = (0..lts.num_states()).filter(|s| cyclic[comp[*s]]).collect();
    for s in &stack {
        marked[*s] = true;
    }
    while let Some(s) = stack.pop() {
        for p in &pred[s] {
            if !marked[*p] {
                marked[*p] = true;
                stack.push(*p);
            }
        }
    }
    (0..lts.num_states()).filter(|s| marked[*s]).collect()
}

/// An LTS with every silent SCC collapsed to one state, where collapsed
/// components that contained a silent cycle carry a `<div>` self-loop.
#[derive(Clone, Debug)]
pub struct DivergenceQuotient {
    pub lts: Lts,
    /// Quotient state of every original state.
    pub class_of: Vec<StateId>,
}

pub fn divergence_quotient(lts: &Lts) -> DivergenceQuotient {
    let (comp, cyclic) = silent_sccs(lts);
    let mut transitions = Vec::new();
    for t in lts.transitions() {
        let (a, b) = (comp[t.source], comp[t.target]);
        if t.label.is_silent() && a == b {
            continue;
        }
        transitions.push(Transition {
            source: a,
            label: t.label.clone(),
            target: b,
        });
    }
    for (c, is_cyclic) in cyclic.iter().enumerate() {
        if *is_cyclic {
            transitions.push(Transition {
                source: c,
                label: ActionLabel::divergence(),
                target: c,
            });
        }
    }
    let quotient = Lts::new(cyclic.len(), comp[lts.initial()], transitions)
        .expect("component ids are in range");
    DivergenceQuotient {
        lts: quotient,
        class_of: comp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_diverges() {
        let l = Lts::from_triples(1, 0, [(0, "tau", 0)]).unwrap();
        assert_eq!(mark_divergence(&l), BTreeSet::from([0]));
    }

    #[test]
    fn chain_does_not_diverge() {
        let l = Lts::from_triples(3, 0, [(0, "tau", 1), (1, "tau", 2)]).unwrap();
        assert!(mark_divergence(&l).is_empty());
    }

    #[test]
    fn entry_into_cycle_diverges() {
        let l = Lts::from_triples(
            4,
            0,
            [(0, "tau", 1), (1, "tau", 2), (2, "tau", 1), (3, "a", 0)],
        )
        .unwrap();
        assert_eq!(mark_divergence(&l), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn visible_cycle_is_not_divergence() {
        let l = Lts::from_triples(2, 0, [(0, "a", 1), (1, "tau", 0)]).unwrap();
        assert!(mark_divergence(&l).is_empty());
    }

    #[test]
    fn quotient_collapses_and_marks() {
        let l = Lts::from_triples(3, 0, [(0, "tau", 1), (1, "tau", 0), (1, "a", 2)]).unwrap();
        let q = divergence_quotient(&l);
        assert_eq!(q.lts.num_states(), 2);
        assert_eq!(q.class_of[0], q.class_of[1]);
        let c = q.class_of[0];
        assert!(q.lts.has_transition(c, &ActionLabel::divergence(), c));
        assert!(q
            .lts
            .has_transition(c, &ActionLabel::input("a", None), q.class_of[2]));
        assert!(mark_divergence(&q.lts).is_empty());
    }

    #[test]
    fn tarjan_orders_sinks_first() {
        let adj = vec![vec![1], vec![2], vec![1]];
        let (comp, count) = tarjan(&adj);
        assert_eq!(count, 2);
        assert_eq!(comp[1], comp[2]);
        assert!(comp[1] < comp[0]);
    }
}
