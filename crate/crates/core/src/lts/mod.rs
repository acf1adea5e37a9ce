//! Finite labelled transition systems and the branching-bisimulation
//! checkers that decide equivalence between them.
//!
//! States are numbered `0..num_states`. Labels are [`ActionLabel`]s; the
//! silent step and the reserved internal marker `i` are distinguished from
//! ordinary observable channel actions.

mod aut;
mod branching;
mod divergence;
mod oracle;
mod play;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use aut::{canonical_order, emit_aut, parse_aut, AutError};
pub use branching::{bb_check, bb_partition, dpbb_check, dpbb_partition, minimize, Mode};
pub use divergence::{divergence_quotient, mark_divergence, silent_sccs, DivergenceQuotient};
pub use oracle::{brute_force_check, verify_witness, OracleError, ORACLE_PAIR_LIMIT};
pub use play::{Attack, DistinguishingPlay, Side};

/// Reserved label text for the internal marker.
pub const INTERNAL_TEXT: &str = "i";
/// Reserved label text for the silent step.
pub const SILENT_TEXT: &str = "tau";
/// Channel of the self-loop marking divergent states in a divergence quotient.
/// It cannot be produced by the `.aut` parser.
pub const DIVERGENCE_CHANNEL: &str = "<div>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Input,
    Output,
}

/// Label of an LTS edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionLabel {
    Silent,
    /// The visible stand-in `i` for a silent step.
    Internal,
    Observable {
        channel: String,
        polarity: Polarity,
        payload: Option<String>,
    },
}

impl ActionLabel {
    pub fn input(channel: impl Into<String>, payload: Option<&str>) -> Self {
        ActionLabel::Observable {
            channel: channel.into(),
            polarity: Polarity::Input,
            payload: payload.map(str::to_owned),
        }
    }

    pub fn output(channel: impl Into<String>, payload: Option<&str>) -> Self {
        ActionLabel::Observable {
            channel: channel.into(),
            polarity: Polarity::Output,
            payload: payload.map(str::to_owned),
        }
    }

    pub fn divergence() -> Self {
        ActionLabel::output(DIVERGENCE_CHANNEL, None)
    }

    pub fn is_silent(&self) -> bool {
        matches!(self, ActionLabel::Silent)
    }

    /// Parses the `.aut` label syntax: `tau`, `i`, `chan`, `'chan`,
    /// `chan name` and `'chan name`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        match text {
            SILENT_TEXT => return Ok(ActionLabel::Silent),
            INTERNAL_TEXT => return Ok(ActionLabel::Internal),
            "" => return Err("empty label".into()),
            _ => {}
        }
        let (polarity, rest) = match text.strip_prefix('\'') {
            Some(rest) => (Polarity::Output, rest),
            None => (Polarity::Input, text),
        };
        let mut parts = rest.split_whitespace();
        let channel = parts.next().ok_or("missing channel")?;
        let payload = parts.next();
        if parts.next().is_some() {
            return Err(format!("label `{text}` has more than one payload"));
        }
        check_label_name(channel)?;
        if channel == INTERNAL_TEXT || channel == SILENT_TEXT {
            return Err(format!("channel name `{channel}` is reserved"));
        }
        if let Some(p) = payload {
            check_label_name(p)?;
        }
        Ok(ActionLabel::Observable {
            channel: channel.to_owned(),
            polarity,
            payload: payload.map(str::to_owned),
        })
    }
}

fn check_label_name(name: &str) -> Result<(), String> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '@' | '.' | '-'));
    if ok {
        Ok(())
    } else {
        Err(format!("invalid name `{name}` in label"))
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionLabel::Silent => f.write_str(SILENT_TEXT),
            ActionLabel::Internal => f.write_str(INTERNAL_TEXT),
            ActionLabel::Observable {
                channel,
                polarity,
                payload,
            } => {
                if *polarity == Polarity::Output {
                    f.write_str("'")?;
                }
                f.write_str(channel)?;
                if let Some(p) = payload {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
        }
    }
}

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: ActionLabel,
    pub target: StateId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtsError {
    #[error("initial state {initial} is not among {num_states} states")]
    InitialOutOfRange { initial: StateId, num_states: usize },
    #[error("transition endpoint {state} is not among {num_states} states")]
    EndpointOutOfRange { state: StateId, num_states: usize },
}

/// A finite LTS. Transitions are kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    num_states: usize,
    initial: StateId,
    transitions: Vec<Transition>,
}

impl Lts {
    pub fn new(
        num_states: usize,
        initial: StateId,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, LtsError> {
        if initial >= num_states {
            return Err(LtsError::InitialOutOfRange {
                initial,
                num_states,
            });
        }
        let set: BTreeSet<Transition> = transitions.into_iter().collect();
        for t in &set {
            for state in [t.source, t.target] {
                if state >= num_states {
                    return Err(LtsError::EndpointOutOfRange { state, num_states });
                }
            }
        }
        Ok(Lts {
            num_states,
            initial,
            transitions: set.into_iter().collect(),
        })
    }

    /// Builds an LTS from `(source, label, target)` triples.
    pub fn from_triples<'a>(
        num_states: usize,
        initial: StateId,
        triples: impl IntoIterator<Item = (StateId, &'a str, StateId)>,
    ) -> Result<Self, String> {
        let mut transitions = Vec::new();
        for (source, label, target) in triples {
            transitions.push(Transition {
                source,
                label: ActionLabel::parse(label)?,
                target,
            });
        }
        Lts::new(num_states, initial, transitions).map_err(|e| e.to_string())
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// Outgoing `(label, target)` lists, indexed by state.
    pub fn successors(&self) -> Vec<Vec<(ActionLabel, StateId)>> {
        let mut out = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            out[t.source].push((t.label.clone(), t.target));
        }
        out
    }

    /// Silent successors, indexed by state.
    pub fn silent_successors(&self) -> Vec<Vec<StateId>> {
        let mut out = vec![Vec::new(); self.num_states];
        for t in self.transitions.iter().filter(|t| t.label.is_silent()) {
            out[t.source].push(t.target);
        }
        out
    }

    pub fn has_transition(&self, source: StateId, label: &ActionLabel, target: StateId) -> bool {
        self.transitions
            .binary_search_by(|t| (t.source, &t.label, t.target).cmp(&(source, label, target)))
            .is_ok()
    }

    pub fn labels(&self) -> BTreeSet<ActionLabel> {
        self.transitions.iter().map(|t| t.label.clone()).collect()
    }

    /// Replaces every `from` label by `to`.
    pub fn relabel(&self, from: &ActionLabel, to: &ActionLabel) -> Lts {
        let transitions = self.transitions.iter().map(|t| Transition {
            source: t.source,
            label: if &t.label == from {
                to.clone()
            } else {
                t.label.clone()
            },
            target: t.target,
        });
        Lts::new(self.num_states, self.initial, transitions).expect("relabel keeps endpoints")
    }
}

/// Free-function form of [`Lts::relabel`].
pub fn relabel(lts: &Lts, from: &ActionLabel, to: &ActionLabel) -> Lts {
    lts.relabel(from, to)
}

/// Side-by-side copy of two systems; states of `right` are shifted by
/// `left.num_states()`. The initial state is that of `left`.
pub fn disjoint_union(left: &Lts, right: &Lts) -> Lts {
    let off = left.num_states;
    let shifted = right.transitions.iter().map(|t| Transition {
        source: t.source + off,
        label: t.label.clone(),
        target: t.target + off,
    });
    Lts::new(
        off + right.num_states,
        left.initial,
        left.transitions.iter().cloned().chain(shifted),
    )
    .expect("shifted indices are in range")
}

/// Assignment of every state to a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<usize>,
}

impl Partition {
    /// Renumbers block ids densely in order of first occurrence.
    pub fn from_assignment(raw: &[usize]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let blocks = raw
            .iter()
            .map(|b| {
                let next = ids.len();
                *ids.entry(*b).or_insert(next)
            })
            .collect();
        Partition { blocks }
    }

    pub fn block_of(&self, state: StateId) -> usize {
        self.blocks[state]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn num_states(&self) -> usize {
        self.blocks.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.blocks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent,
}

/// Outcome of an equivalence check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub verdict: Verdict,
    /// On `Equivalent`: the related `(left, right)` state pairs, which
    /// include the pair of initial states.
    pub witness: Option<Vec<(StateId, StateId)>>,
    /// On `Inequivalent`: an attacker strategy that wins against every
    /// defence.
    pub counterexample: Option<DistinguishingPlay>,
}

impl CheckResult {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_syntax() {
        assert_eq!(ActionLabel::parse("tau").unwrap(), ActionLabel::Silent);
        assert_eq!(ActionLabel::parse("i").unwrap(), ActionLabel::Internal);
        assert_eq!(
            ActionLabel::parse("'y1").unwrap(),
            ActionLabel::output("y1", None)
        );
        assert_eq!(
            ActionLabel::parse("x y1").unwrap(),
            ActionLabel::input("x", Some("y1"))
        );
        assert!(ActionLabel::parse("'i").is_err());
        assert!(ActionLabel::parse("i z").is_err());
        assert!(ActionLabel::parse("a b c").is_err());
        for text in ["tau", "i", "a", "'a", "x y", "'x y"] {
            assert_eq!(ActionLabel::parse(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn observable_equality_needs_all_fields() {
        assert_ne!(
            ActionLabel::input("a", None),
            ActionLabel::output("a", None)
        );
        assert_ne!(
            ActionLabel::output("a", Some("p")),
            ActionLabel::output("a", Some("q"))
        );
    }

    #[test]
    fn construction_validates_and_dedups() {
        let l = Lts::from_triples(2, 0, [(0, "a", 1), (0, "a", 1)]).unwrap();
        assert_eq!(l.num_transitions(), 1);
        assert!(Lts::from_triples(2, 2, []).is_err());
        assert!(Lts::from_triples(2, 0, [(0, "a", 3)]).is_err());
    }

    #[test]
    fn relabel_round_trip() {
        let l = Lts::from_triples(2, 0, [(0, "tau", 0), (0, "a", 1)]).unwrap();
        let r = l.relabel(&ActionLabel::Silent, &ActionLabel::Internal);
        assert!(mark_divergence(&r).is_empty());
        assert!(r.has_transition(0, &ActionLabel::Internal, 0));
        assert_eq!(r.relabel(&ActionLabel::Internal, &ActionLabel::Silent), l);
        let no_tau = Lts::from_triples(2, 0, [(0, "a", 1)]).unwrap();
        assert_eq!(
            no_tau.relabel(&ActionLabel::Silent, &ActionLabel::Internal),
            no_tau
        );
    }

    #[test]
    fn partition_renumbers() {
        let p = Partition::from_assignment(&[7, 3, 7, 9]);
        assert_eq!(p.as_slice(), &[0, 1, 0, 2]);
        assert_eq!(p.num_blocks(), 3);
    }
}
