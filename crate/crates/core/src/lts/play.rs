//! Distinguishing plays: attacker strategies in the branching bisimulation
//! game.
//!
//! A position is a pair `(left state, right state)`. At each position the
//! strategy names one attacker step on one side. The defender answers with a
//! silent path on the other side followed by a matching step (or, against a
//! silent attack, by standing still); the attacker may then continue from
//! any state along the defender's path or from the pair of targets. Each
//! position carries a rank that strictly decreases along every continuation,
//! so replaying the strategy checks a finite, well-founded proof that the
//! defender loses.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use super::branching::{Graph, Mode, SILENT};
use super::divergence::divergence_quotient;
use super::{ActionLabel, Lts, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One attacker step. `from` and `to` are states of the attacking side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attack {
    pub side: Side,
    pub from: StateId,
    pub label: ActionLabel,
    pub to: StateId,
    /// `(refinement round that separated the pair, silent steps the attacker
    /// still needs before its distinguishing move)`, compared
    /// lexicographically.
    pub rank: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct DistinguishingPlay {
    /// `DivergencePreserving` plays are stated over the divergence quotients
    /// of the two systems.
    pub mode: Mode,
    pub root: (StateId, StateId),
    pub positions: BTreeMap<(StateId, StateId), Attack>,
}

impl DistinguishingPlay {
    /// The attacker's first move from the pair of initial states.
    pub fn opening(&self) -> &Attack {
        &self.positions[&self.root]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Human-readable listing, root first, at most `limit` positions.
    pub fn describe(&self, limit: usize) -> String {
        let mut out = String::new();
        let arena = match self.mode {
            Mode::Branching => "",
            Mode::DivergencePreserving => " (over divergence quotients)",
        };
        out.push_str(&format!(
            "distinguishing play{arena}: {} position(s)\n",
            self.positions.len()
        ));
        let root = std::iter::once((&self.root, self.opening()));
        let rest = self.positions.iter().filter(|(p, _)| **p != self.root);
        for ((l, r), a) in root.chain(rest).take(limit) {
            out.push_str(&format!(
                "  at ({l},{r}): {} plays {} --{}--> {}\n",
                a.side, a.from, a.label, a.to
            ));
        }
        out
    }

    /// Replays the strategy against the two systems it claims to separate.
    /// Succeeds only if every defence of every position is answered by a
    /// position of strictly smaller rank.
    pub fn verify(&self, left: &Lts, right: &Lts) -> Result<(), String> {
        let (left, right) = match self.mode {
            Mode::Branching => (left.clone(), right.clone()),
            Mode::DivergencePreserving => (
                divergence_quotient(left).lts,
                divergence_quotient(right).lts,
            ),
        };
        if self.root != (left.initial(), right.initial()) {
            return Err("play does not start at the initial states".into());
        }
        if !self.positions.contains_key(&self.root) {
            return Err("play has no move at the root".into());
        }
        let succ = [left.successors(), right.successors()];
        let beaten = |pos: (StateId, StateId), rank: (usize, usize)| {
            self.positions.get(&pos).is_some_and(|a| a.rank < rank)
        };
        for (&(x, y), att) in &self.positions {
            let (att_succ, def_succ, def_start) = match att.side {
                Side::Left => (&succ[0], &succ[1], y),
                Side::Right => (&succ[1], &succ[0], x),
            };
            let here = match att.side {
                Side::Left => x,
                Side::Right => y,
            };
            if att.from != here {
                return Err(format!("attack at ({x},{y}) starts from {}", att.from));
            }
            if !att_succ
                .get(here)
                .is_some_and(|es| es.iter().any(|(l, t)| *l == att.label && *t == att.to))
            {
                return Err(format!("attack at ({x},{y}) uses a missing transition"));
            }
            // pair a defender state with the attacker's source or target
            let at_source = |d: StateId| match att.side {
                Side::Left => (x, d),
                Side::Right => (d, y),
            };
            let at_target = |d: StateId| match att.side {
                Side::Left => (att.to, d),
                Side::Right => (d, att.to),
            };
            let mut reach = vec![def_start];
            let mut seen = std::collections::HashSet::from([def_start]);
            let mut i = 0;
            while i < reach.len() {
                let d = reach[i];
                i += 1;
                for (l, t) in &def_succ[d] {
                    if l.is_silent() && !beaten(at_source(*t), att.rank) && seen.insert(*t) {
                        reach.push(*t);
                    }
                }
            }
            if att.label.is_silent() && !beaten(at_target(def_start), att.rank) {
                return Err(format!("defender at ({x},{y}) survives by stuttering"));
            }
            for d in reach {
                for (l, t) in &def_succ[d] {
                    if *l == att.label && !beaten(at_target(*t), att.rank) {
                        return Err(format!(
                            "defender at ({x},{y}) answers via {d} --{l}--> {t}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Ranked {
    rank: (usize, usize),
    side: Side,
    label: u32,
    /// union-graph index of the attacker's target
    to: usize,
}

struct Builder<'a> {
    g: &'a Graph,
    nl: usize,
    history: &'a [Vec<usize>],
    cache: HashMap<(usize, usize), Option<Ranked>>,
}

type SigDist = BTreeMap<(u32, usize), (usize, u32, usize)>;

impl Builder<'_> {
    /// Elements of the signature of `u` under partition `p`, each with the
    /// length of the shortest inert path to it and the first step of that
    /// path.
    fn signature_with_distance(&self, u: usize, p: &[usize]) -> SigDist {
        let mut out = SigDist::new();
        let mut seen = std::collections::HashSet::from([u]);
        let mut queue = VecDeque::from([(u, 0usize, usize::MAX)]);
        while let Some((v, d, first)) = queue.pop_front() {
            for &(a, w) in &self.g.succ[v] {
                if a == SILENT && p[w] == p[v] {
                    if seen.insert(w) {
                        let f = if d == 0 { w } else { first };
                        queue.push_back((w, d + 1, f));
                    }
                } else {
                    let step = if d == 0 { (a, w) } else { (SILENT, first) };
                    out.entry((a, p[w])).or_insert((d, step.0, step.1));
                }
            }
        }
        out
    }

    fn rank(&mut self, x: usize, y: usize) -> Option<Ranked> {
        if let Some(r) = self.cache.get(&(x, y)) {
            return *r;
        }
        let level = (1..self.history.len()).find(|j| self.history[*j][x] != self.history[*j][y]);
        let result = level.map(|k| {
            let p = &self.history[k - 1];
            let sx = self.signature_with_distance(x, p);
            let sy = self.signature_with_distance(y, p);
            let left = sx
                .iter()
                .filter(|(e, _)| !sy.contains_key(e))
                .map(|(e, v)| (v.0, Side::Left, *e, *v));
            let right = sy
                .iter()
                .filter(|(e, _)| !sx.contains_key(e))
                .map(|(e, v)| (v.0, Side::Right, *e, *v));
            let (d, side, _, (_, label, to)) = left
                .chain(right)
                .min_by_key(|c| (c.0, c.1, c.2))
                .expect("pairs split by refinement differ in signature");
            Ranked {
                rank: (k, d),
                side,
                label,
                to,
            }
        });
        self.cache.insert((x, y), result);
        result
    }
}

pub(crate) fn build(
    g: &Graph,
    nl: usize,
    history: &[Vec<usize>],
    root: (StateId, StateId),
    mode: Mode,
) -> DistinguishingPlay {
    let mut b = Builder {
        g,
        nl,
        history,
        cache: HashMap::new(),
    };
    let mut positions = BTreeMap::new();
    let mut work = VecDeque::from([(root.0, nl + root.1)]);
    while let Some((x, y)) = work.pop_front() {
        let key = (x, y - nl);
        if positions.contains_key(&key) {
            continue;
        }
        let r = b.rank(x, y).expect("only separated pairs are queued");
        let (from, def_start) = match r.side {
            Side::Left => (x, y),
            Side::Right => (y, x),
        };
        let local = |s: usize| if s >= b.nl { s - b.nl } else { s };
        positions.insert(
            key,
            Attack {
                side: r.side,
                from: local(from),
                label: g.labels[r.label as usize].clone(),
                to: local(r.to),
                rank: r.rank,
            },
        );
        let at_source = |d: usize| match r.side {
            Side::Left => (x, d),
            Side::Right => (d, y),
        };
        let at_target = |d: usize| match r.side {
            Side::Left => (r.to, d),
            Side::Right => (d, r.to),
        };
        let mut reach = vec![def_start];
        let mut seen = std::collections::HashSet::from([def_start]);
        let mut i = 0;
        while i < reach.len() {
            let d = reach[i];
            i += 1;
            for &(a, t) in &g.succ[d] {
                if a != SILENT || !seen.insert(t) {
                    continue;
                }
                let pos = at_source(t);
                if b.rank(pos.0, pos.1).is_some_and(|q| q.rank < r.rank) {
                    work.push_back(pos);
                } else {
                    reach.push(t);
                }
            }
        }
        if r.label == SILENT {
            work.push_back(at_target(def_start));
        }
        for d in reach {
            for &(a, t) in &g.succ[d] {
                if a == r.label {
                    work.push_back(at_target(t));
                }
            }
        }
    }
    DistinguishingPlay {
        mode,
        root,
        positions,
    }
}
