//! Branching bisimilarity by signature refinement, and the
//! divergence-preserving variant on top of it.
//!
//! The signature of a state with respect to a partition is the set of
//! `(label, target block)` pairs it can reach after silent steps that stay
//! inside its own block, excluding silent steps that remain in the block.
//! Blocks are split by signature until nothing changes. Every intermediate
//! partition is kept: the history is what the counterexample builder uses to
//! rank positions of the distinguishing game.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::divergence::{divergence_quotient, tarjan};
use super::play::{self, DistinguishingPlay};
use super::{ActionLabel, CheckResult, Lts, Partition, StateId, Transition, Verdict};

/// Which equivalence a check or minimisation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Branching bisimilarity.
    Branching,
    /// Divergence-preserving branching bisimilarity.
    DivergencePreserving,
}

/// Label id 0 is always the silent step.
pub(crate) const SILENT: u32 = 0;

/// Integer-labelled graph the refinement works on.
pub(crate) struct Graph {
    pub succ: Vec<Vec<(u32, usize)>>,
    pub labels: Vec<ActionLabel>,
}

impl Graph {
    fn build(parts: &[&Lts]) -> Graph {
        let mut ids: BTreeMap<ActionLabel, u32> = BTreeMap::new();
        let mut labels = vec![ActionLabel::Silent];
        ids.insert(ActionLabel::Silent, SILENT);
        for lts in parts {
            for l in lts.labels() {
                if !ids.contains_key(&l) {
                    ids.insert(l.clone(), labels.len() as u32);
                    labels.push(l);
                }
            }
        }
        let total: usize = parts.iter().map(|l| l.num_states()).sum();
        let mut succ = vec![Vec::new(); total];
        let mut offset = 0;
        for lts in parts {
            for t in lts.transitions() {
                succ[offset + t.source].push((ids[&t.label], offset + t.target));
            }
            offset += lts.num_states();
        }
        Graph { succ, labels }
    }
}

type Signature = Vec<(u32, usize)>;

fn signatures(g: &Graph, blocks: &[usize]) -> Vec<Signature> {
    let n = g.succ.len();
    let inert: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            g.succ[s]
                .iter()
                .filter(|(a, t)| *a == SILENT && blocks[*t] == blocks[s])
                .map(|(_, t)| *t)
                .collect()
        })
        .collect();
    let (comp, count) = tarjan(&inert);
    let mut members = vec![Vec::new(); count];
    for (s, c) in comp.iter().enumerate() {
        members[*c].push(s);
    }
    let mut comp_sig: Vec<Signature> = Vec::with_capacity(count);
    for (c, group) in members.iter().enumerate() {
        let mut set = BTreeSet::new();
        for &s in group {
            for &(a, t) in &g.succ[s] {
                if a == SILENT && blocks[t] == blocks[s] {
                    if comp[t] != c {
                        set.extend(comp_sig[comp[t]].iter().copied());
                    }
                } else {
                    set.insert((a, blocks[t]));
                }
            }
        }
        comp_sig.push(set.into_iter().collect());
    }
    (0..n).map(|s| comp_sig[comp[s]].clone()).collect()
}

/// Runs signature refinement from the single-block partition. Returns every
/// partition computed; the last one is stable.
pub(crate) fn refine(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.succ.len();
    let mut history = vec![vec![0usize; n]];
    let mut count = usize::from(n > 0);
    loop {
        let current = history.last().unwrap();
        let sigs = signatures(g, current);
        let mut ids: HashMap<(usize, &Signature), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let fresh = ids.len();
                *ids.entry((current[s], &sigs[s])).or_insert(fresh)
            })
            .collect();
        let next_count = ids.len();
        if next_count == count {
            return history;
        }
        count = next_count;
        history.push(next);
    }
}

/// Branching-bisimilarity classes of a single LTS.
pub fn bb_partition(lts: &Lts) -> Partition {
    let g = Graph::build(&[lts]);
    Partition::from_assignment(refine(&g).last().unwrap())
}

/// Divergence-preserving branching-bisimilarity classes of a single LTS.
pub fn dpbb_partition(lts: &Lts) -> Partition {
    let q = divergence_quotient(lts);
    let p = bb_partition(&q.lts);
    let raw: Vec<usize> = q.class_of.iter().map(|c| p.block_of(*c)).collect();
    Partition::from_assignment(&raw)
}

fn check_union(
    left: &Lts,
    right: &Lts,
    mode: Mode,
) -> (Verdict, Vec<usize>, Option<DistinguishingPlay>) {
    let g = Graph::build(&[left, right]);
    let history = refine(&g);
    let last = history.last().unwrap();
    let nl = left.num_states();
    let root = (left.initial(), right.initial());
    if last[root.0] == last[nl + root.1] {
        (Verdict::Equivalent, last.clone(), None)
    } else {
        let play = play::build(&g, nl, &history, root, mode);
        (Verdict::Inequivalent, last.clone(), Some(play))
    }
}

fn pairs_in_same_block(
    left_blocks: impl Iterator<Item = usize>,
    right_blocks: impl Iterator<Item = usize> + Clone,
) -> Vec<(StateId, StateId)> {
    let mut by_block: HashMap<usize, Vec<StateId>> = HashMap::new();
    for (y, b) in right_blocks.enumerate() {
        by_block.entry(b).or_default().push(y);
    }
    let mut pairs = Vec::new();
    for (x, b) in left_blocks.enumerate() {
        if let Some(ys) = by_block.get(&b) {
            pairs.extend(ys.iter().map(|y| (x, *y)));
        }
    }
    pairs
}

/// Decides branching bisimilarity of the initial states.
pub fn bb_check(left: &Lts, right: &Lts) -> CheckResult {
    let (verdict, blocks, play) = check_union(left, right, Mode::Branching);
    let nl = left.num_states();
    let witness = (verdict == Verdict::Equivalent)
        .then(|| pairs_in_same_block(blocks[..nl].iter().copied(), blocks[nl..].iter().copied()));
    CheckResult {
        verdict,
        witness,
        counterexample: play,
    }
}

/// Decides divergence-preserving branching bisimilarity of the initial
/// states: silent SCCs are collapsed, divergent ones get a `<div>` self-loop,
/// and branching bisimilarity is decided on the result. A counterexample is
/// stated over those divergence quotients.
pub fn dpbb_check(left: &Lts, right: &Lts) -> CheckResult {
    let ql = divergence_quotient(left);
    let qr = divergence_quotient(right);
    let (verdict, blocks, play) = check_union(&ql.lts, &qr.lts, Mode::DivergencePreserving);
    let nl = ql.lts.num_states();
    let witness = (verdict == Verdict::Equivalent).then(|| {
        pairs_in_same_block(
            ql.class_of.iter().map(|c| blocks[*c]),
            qr.class_of.iter().map(|c| blocks[nl + *c]),
        )
    });
    CheckResult {
        verdict,
        witness,
        counterexample: play,
    }
}

/// Quotient of an LTS by the chosen equivalence. Inert silent steps are
/// dropped; under [`Mode::DivergencePreserving`] divergent classes keep a
/// silent self-loop.
pub fn minimize(lts: &Lts, mode: Mode) -> Lts {
    let (base, class_of) = match mode {
        Mode::Branching => (lts.clone(), (0..lts.num_states()).collect::<Vec<_>>()),
        Mode::DivergencePreserving => {
            let q = divergence_quotient(lts);
            (q.lts, q.class_of)
        }
    };
    let p = bb_partition(&base);
    let div = ActionLabel::divergence();
    let mut transitions = Vec::new();
    for t in base.transitions() {
        let (a, b) = (p.block_of(t.source), p.block_of(t.target));
        if t.label == div {
            transitions.push(Transition {
                source: a,
                label: ActionLabel::Silent,
                target: a,
            });
        } else if !(t.label.is_silent() && a == b) {
            transitions.push(Transition {
                source: a,
                label: t.label.clone(),
                target: b,
            });
        }
    }
    let initial = p.block_of(class_of[lts.initial()]);
    Lts::new(p.num_blocks().max(1), initial, transitions).expect("blocks in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lts(n: usize, edges: &[(usize, &str, usize)]) -> Lts {
        Lts::from_triples(n, 0, edges.iter().copied()).unwrap()
    }

    #[test]
    fn inert_tau_is_absorbed() {
        let l1 = lts(4, &[(0, "a", 1), (1, "tau", 2), (2, "b", 3)]);
        let l2 = lts(3, &[(0, "a", 1), (1, "b", 2)]);
        assert!(bb_check(&l1, &l2).is_equivalent());
        assert!(dpbb_check(&l1, &l2).is_equivalent());
    }

    #[test]
    fn reflexive_with_identity_in_witness() {
        let l = lts(3, &[(0, "a", 1), (1, "tau", 2), (2, "b", 0)]);
        let r = bb_check(&l, &l);
        let w = r.witness.unwrap();
        for s in 0..3 {
            assert!(w.contains(&(s, s)));
        }
    }

    #[test]
    fn missing_output_is_played() {
        let l1 = lts(2, &[(0, "'y1", 1), (0, "'y2", 1)]);
        let l2 = lts(2, &[(0, "'y1", 1)]);
        let r = bb_check(&l1, &l2);
        assert!(!r.is_equivalent());
        let play = r.counterexample.unwrap();
        assert_eq!(play.opening().label, ActionLabel::output("y2", None));
        play.verify(&l1, &l2).unwrap();
    }

    #[test]
    fn divergence_separates_only_dpbb() {
        let loop_ = lts(1, &[(0, "tau", 0)]);
        let dead = lts(1, &[]);
        assert!(bb_check(&loop_, &dead).is_equivalent());
        let r = dpbb_check(&loop_, &dead);
        assert!(!r.is_equivalent());
        r.counterexample.unwrap().verify(&loop_, &dead).unwrap();
    }

    #[test]
    fn non_inert_tau_is_kept() {
        // a.0 + tau.b.0 vs a.0 + b.0
        let l1 = lts(4, &[(0, "a", 1), (0, "tau", 2), (2, "b", 3)]);
        let l2 = lts(3, &[(0, "a", 1), (0, "b", 2)]);
        let r = bb_check(&l1, &l2);
        assert!(!r.is_equivalent());
        r.counterexample.unwrap().verify(&l1, &l2).unwrap();
    }

    #[test]
    fn minimize_collapses() {
        let l = lts(4, &[(0, "tau", 1), (1, "a", 2), (0, "a", 3)]);
        let m = minimize(&l, Mode::Branching);
        assert_eq!(m.num_states(), 2);
        assert!(bb_check(&l, &m).is_equivalent());
        let d = lts(2, &[(0, "tau", 1), (1, "tau", 0)]);
        let md = minimize(&d, Mode::DivergencePreserving);
        assert_eq!(md.num_states(), 1);
        assert_eq!(md.num_transitions(), 1);
        assert!(dpbb_check(&d, &md).is_equivalent());
    }

    #[test]
    fn partitions() {
        let l = lts(3, &[(0, "tau", 1), (1, "tau", 1), (0, "tau", 2)]);
        let bb = bb_partition(&l);
        assert_eq!(bb.num_blocks(), 1);
        let dp = dpbb_partition(&l);
        // 0 may still choose the non-divergent branch, 1 may not
        assert_eq!(dp.num_blocks(), 3);
    }
}
