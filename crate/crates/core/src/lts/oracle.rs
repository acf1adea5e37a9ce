//! Greatest-fixpoint oracle for branching bisimilarity, with and without the
//! divergence condition. Quadratic in the number of state pairs and meant
//! only for cross-checking the refinement on small systems.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use super::{ActionLabel, CheckResult, Lts, StateId, Verdict};

/// Largest `|left| * |right|` the oracle accepts.
pub const ORACLE_PAIR_LIMIT: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to {ORACLE_PAIR_LIMIT} state pairs, got {0}")]
    TooLarge(usize),
}

struct Side {
    succ: Vec<Vec<(ActionLabel, StateId)>>,
    silent: Vec<Vec<StateId>>,
    closure: Vec<Vec<StateId>>,
}

impl Side {
    fn new(lts: &Lts) -> Self {
        let succ = lts.successors();
        let silent = lts.silent_successors();
        let closure = (0..lts.num_states())
            .map(|s| {
                let mut seen = vec![s];
                let mut set = HashSet::from([s]);
                let mut i = 0;
                while i < seen.len() {
                    for t in &silent[seen[i]] {
                        if set.insert(*t) {
                            seen.push(*t);
                        }
                    }
                    i += 1;
                }
                seen
            })
            .collect();
        Side {
            succ,
            silent,
            closure,
        }
    }

    /// Whether an infinite silent run from `start` exists that stays inside
    /// `allowed`.
    fn diverges_within(&self, start: StateId, allowed: impl Fn(StateId) -> bool) -> bool {
        if !allowed(start) {
            return false;
        }
        let mut nodes = vec![start];
        let mut set = HashSet::from([start]);
        let mut i = 0;
        while i < nodes.len() {
            for t in &self.silent[nodes[i]] {
                if allowed(*t) && set.insert(*t) {
                    nodes.push(*t);
                }
            }
            i += 1;
        }
        // Kahn: a cycle remains iff some node is never freed
        let mut indeg: std::collections::HashMap<StateId, usize> =
            nodes.iter().map(|n| (*n, 0)).collect();
        for n in &nodes {
            for t in &self.silent[*n] {
                if set.contains(t) {
                    *indeg.get_mut(t).unwrap() += 1;
                }
            }
        }
        let mut queue: VecDeque<StateId> =
            nodes.iter().copied().filter(|n| indeg[n] == 0).collect();
        let mut removed = 0;
        while let Some(n) = queue.pop_front() {
            removed += 1;
            for t in &self.silent[n] {
                if let Some(d) = indeg.get_mut(t) {
                    *d -= 1;
                    if *d == 0 {
                        queue.push_back(*t);
                    }
                }
            }
        }
        removed < nodes.len()
    }
}

/// Transfer (and optionally divergence) condition for one pair, given the
/// current relation.
fn pair_ok(
    l: &Side,
    r: &Side,
    rel: &dyn Fn(StateId, StateId) -> bool,
    s: StateId,
    t: StateId,
    divergence_sensitive: bool,
) -> bool {
    for (a, s2) in &l.succ[s] {
        if a.is_silent() && rel(*s2, t) {
            continue;
        }
        let matched = r.closure[t]
            .iter()
            .any(|t1| rel(s, *t1) && r.succ[*t1].iter().any(|(b, t2)| b == a && rel(*s2, *t2)));
        if !matched {
            return false;
        }
    }
    for (a, t2) in &r.succ[t] {
        if a.is_silent() && rel(s, *t2) {
            continue;
        }
        let matched = l.closure[s]
            .iter()
            .any(|s1| rel(*s1, t) && l.succ[*s1].iter().any(|(b, s2)| b == a && rel(*s2, *t2)));
        if !matched {
            return false;
        }
    }
    if divergence_sensitive {
        let left_div = l.diverges_within(s, |u| rel(u, t));
        let right_div = r.diverges_within(t, |v| rel(s, v));
        if left_div != right_div {
            return false;
        }
    }
    true
}

/// Decides (divergence-preserving) branching bisimilarity by deleting pairs
/// from the full relation until what remains is closed under the transfer
/// conditions.
pub fn brute_force_check(
    left: &Lts,
    right: &Lts,
    divergence_sensitive: bool,
) -> Result<CheckResult, OracleError> {
    let (nl, nr) = (left.num_states(), right.num_states());
    if nl * nr > ORACLE_PAIR_LIMIT {
        return Err(OracleError::TooLarge(nl * nr));
    }
    let (l, r) = (Side::new(left), Side::new(right));
    let mut rel = vec![vec![true; nr]; nl];
    loop {
        let mut changed = false;
        for s in 0..nl {
            for t in 0..nr {
                if !rel[s][t] {
                    continue;
                }
                let ok = {
                    let view = |a: StateId, b: StateId| rel[a][b];
                    pair_ok(&l, &r, &view, s, t, divergence_sensitive)
                };
                if !ok {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let equivalent = rel[left.initial()][right.initial()];
    let witness = equivalent.then(|| {
        (0..nl)
            .flat_map(|s| (0..nr).map(move |t| (s, t)))
            .filter(|(s, t)| rel[*s][*t])
            .collect()
    });
    Ok(CheckResult {
        verdict: if equivalent {
            Verdict::Equivalent
        } else {
            Verdict::Inequivalent
        },
        witness,
        counterexample: None,
    })
}

/// Checks that `pairs` contains the initial pair and that every pair in it
/// satisfies the transfer conditions (and the divergence condition when
/// asked). Returns the first offending pair.
pub fn verify_witness(
    left: &Lts,
    right: &Lts,
    pairs: &[(StateId, StateId)],
    divergence_sensitive: bool,
) -> Result<(), (StateId, StateId)> {
    let set: HashSet<(StateId, StateId)> = pairs.iter().copied().collect();
    let root = (left.initial(), right.initial());
    if !set.contains(&root) {
        return Err(root);
    }
    let (l, r) = (Side::new(left), Side::new(right));
    let view = |a: StateId, b: StateId| set.contains(&(a, b));
    for &(s, t) in pairs {
        if !pair_ok(&l, &r, &view, s, t, divergence_sensitive) {
            return Err((s, t));
        }
    }
    Ok(())
}
