//! Refutes a finite machine's claim to behave like `x(y).'y.0`: after
//! receiving any of unboundedly many names the process must be able to emit
//! exactly that name, but a machine only has finitely many triggers.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::lts::{ActionLabel, Polarity};
use crate::rtm::{step, triggers, Configuration, Rtm, Trigger};

/// Input channel of the target process `x(y).'y.0`.
pub const PROBE_CHANNEL: &str = "x";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// `'y` is not an action of the candidate.
    OutsideAlphabet,
    /// Reached after `x(y)` and directly enabling `'y`.
    Reached {
        configuration: Configuration,
        trigger: Trigger,
    },
    /// Exploration closed without finding such a configuration.
    Unmatched,
    /// The bound was hit first.
    Unknown,
    /// Not probed because an earlier branch already decided.
    Skipped,
}

/// A run of the candidate, replayable with `rtm::step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPath {
    pub start: Configuration,
    pub steps: Vec<(ActionLabel, Configuration)>,
}

impl RunPath {
    pub fn end(&self) -> &Configuration {
        self.steps.last().map_or(&self.start, |s| &s.1)
    }

    pub fn verify(&self, rtm: &Rtm) -> Result<(), String> {
        let mut cur = &self.start;
        for (label, next) in &self.steps {
            if !step(rtm, cur).iter().any(|(l, c)| l == label && c == next) {
                return Err(format!("{cur} cannot do {label} to {next}"));
            }
            cur = next;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The candidate cannot emit `'name` at all.
    Alphabet { name: String },
    /// Two probes reach configurations with the same trigger; the first one
    /// can therefore also answer with the second probe's name.
    Pigeonhole {
        i: usize,
        j: usize,
        trigger: Trigger,
        /// From the initial configuration through `x(y_i)` to `C_i`, then
        /// `'y_j`.
        play: RunPath,
    },
    /// The candidate cannot weakly perform `x(name)` followed by `'name`.
    SimulationFailure { name: String },
    /// The bound was hit before any branch could decide.
    Inconclusive { name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationReport {
    pub trigger_count: usize,
    pub probes: Vec<String>,
    pub outcomes: Vec<ProbeOutcome>,
    pub branch: Branch,
}

impl RefutationReport {
    pub fn refuted(&self) -> bool {
        !matches!(self.branch, Branch::Inconclusive { .. })
    }

    /// Checks the evidence of the deciding branch against the candidate.
    pub fn verify(&self, rtm: &Rtm) -> Result<(), String> {
        match &self.branch {
            Branch::Alphabet { name } => {
                if rtm
                    .actions()
                    .contains(&ActionLabel::output(name.as_str(), None))
                {
                    Err(format!("'{name} is an action of the candidate"))
                } else {
                    Ok(())
                }
            }
            Branch::Pigeonhole {
                i,
                j,
                trigger,
                play,
            } => {
                play.verify(rtm)?;
                if play.start != rtm.initial_configuration() {
                    return Err("play does not start in the initial configuration".into());
                }
                let (yi, yj) = (&self.probes[*i], &self.probes[*j]);
                let labels: Vec<&ActionLabel> = play.steps.iter().map(|s| &s.0).collect();
                let Some((last, prefix)) = labels.split_last() else {
                    return Err("empty play".into());
                };
                let receive = ActionLabel::input(PROBE_CHANNEL, Some(yi));
                let visible: Vec<&&ActionLabel> =
                    prefix.iter().filter(|l| !l.is_silent()).collect();
                if visible != [&&receive] {
                    return Err(format!(
                        "play must perform exactly {receive} before answering"
                    ));
                }
                if **last != ActionLabel::output(yj.as_str(), None) || i == j {
                    return Err(format!("play must end with '{yj}"));
                }
                let ci = &play.steps[play.steps.len() - 2].1;
                if ci.trigger() != *trigger {
                    return Err("C_i does not satisfy the reported trigger".into());
                }
                match &self.outcomes[*j] {
                    ProbeOutcome::Reached { trigger: tj, .. } if tj == trigger => Ok(()),
                    _ => Err("C_j does not satisfy the reported trigger".into()),
                }
            }
            Branch::SimulationFailure { .. } | Branch::Inconclusive { .. } => Ok(()),
        }
    }
}

impl fmt::Display for RefutationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target: x(y).'y.0")?;
        writeln!(f, "triggers: {}", self.trigger_count)?;
        writeln!(f, "probes: {}", self.probes.join(" "))?;
        for (k, (y, o)) in self.probes.iter().zip(&self.outcomes).enumerate() {
            match o {
                ProbeOutcome::OutsideAlphabet => {
                    writeln!(f, "  #{} {y}: '{y} outside the alphabet", k + 1)?
                }
                ProbeOutcome::Reached {
                    configuration,
                    trigger,
                } => writeln!(
                    f,
                    "  #{} {y}: C{} = {configuration}, trigger ({}, {})",
                    k + 1,
                    k + 1,
                    trigger.state,
                    trigger.datum
                )?,
                ProbeOutcome::Unmatched => {
                    writeln!(f, "  #{} {y}: no run x({y}) then '{y}", k + 1)?
                }
                ProbeOutcome::Unknown => writeln!(f, "  #{} {y}: bound reached", k + 1)?,
                ProbeOutcome::Skipped => {}
            }
        }
        match &self.branch {
            Branch::Alphabet { name } => {
                writeln!(f, "REFUTED (alphabet): the candidate has no action '{name}")
            }
            Branch::Pigeonhole {
                i,
                j,
                trigger,
                play,
            } => {
                writeln!(
                    f,
                    "REFUTED (pigeonhole): C{} and C{} share trigger ({}, {})",
                    i + 1,
                    j + 1,
                    trigger.state,
                    trigger.datum
                )?;
                writeln!(f, "play: {}", play.start)?;
                for (l, c) in &play.steps {
                    writeln!(f, "  -{l}-> {c}")?;
                }
                writeln!(
                    f,
                    "after x({}) the target can only emit '{}",
                    self.probes[*i], self.probes[*i]
                )
            }
            Branch::SimulationFailure { name } => writeln!(
                f,
                "REFUTED (simulation): the candidate cannot receive {name} on x and then emit '{name}"
            ),
            Branch::Inconclusive { name } => writeln!(
                f,
                "INCONCLUSIVE: bound reached while probing {name}"
            ),
        }
    }
}

/// Names `y` for which the candidate declares both `x(y)` and `'y`.
pub fn expressible_names(rtm: &Rtm) -> Vec<String> {
    let outs: BTreeSet<&str> = rtm
        .actions()
        .iter()
        .filter_map(|a| match a {
            ActionLabel::Observable {
                channel,
                polarity: Polarity::Output,
                payload: None,
            } => Some(channel.as_str()),
            _ => None,
        })
        .collect();
    let mut names: Vec<String> = rtm
        .actions()
        .iter()
        .filter_map(|a| match a {
            ActionLabel::Observable {
                channel,
                polarity: Polarity::Input,
                payload: Some(p),
            } if channel == PROBE_CHANNEL && outs.contains(p.as_str()) => Some(p.clone()),
            _ => None,
        })
        .collect();
    names.sort();
    names.dedup();
    names
}

fn fresh_names(rtm: &Rtm, taken: &[String], count: usize) -> Vec<String> {
    let mut used: BTreeSet<String> = taken.iter().cloned().collect();
    for a in rtm.actions() {
        if let ActionLabel::Observable {
            channel, payload, ..
        } = a
        {
            used.insert(channel.clone());
            used.extend(payload.clone());
        }
    }
    (1..)
        .map(|k| format!("y{k}"))
        .filter(|n| !used.contains(n))
        .take(count)
        .collect()
}

/// Search node: a configuration and whether `x(y)` has happened.
type Node = (Configuration, bool);

enum Search {
    Found(RunPath),
    Unmatched,
    Unknown,
}

/// Breadth-first search for `=> x(y) =>` ending in a configuration with a
/// direct `'y` step, visiting at most `max_states` (configuration, phase)
/// nodes.
fn probe(rtm: &Rtm, y: &str, max_states: usize) -> Search {
    let receive = ActionLabel::input(PROBE_CHANNEL, Some(y));
    let answer = ActionLabel::output(y, None);
    let start = (rtm.initial_configuration(), false);
    let mut parent: HashMap<Node, Option<(Node, ActionLabel)>> =
        HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start]);
    let mut truncated = false;
    while let Some(node) = queue.pop_front() {
        let moves = step(rtm, &node.0);
        if node.1 && moves.iter().any(|(l, _)| *l == answer) {
            let mut steps = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, label))) = parent.get(&cur) {
                steps.push((label.clone(), cur.0.clone()));
                cur = prev.clone();
            }
            steps.reverse();
            return Search::Found(RunPath {
                start: rtm.initial_configuration(),
                steps,
            });
        }
        for (l, c) in moves {
            let next = if l.is_silent() {
                (c, node.1)
            } else if !node.1 && l == receive {
                (c, true)
            } else {
                continue;
            };
            if parent.contains_key(&next) {
                continue;
            }
            if parent.len() >= max_states {
                truncated = true;
                continue;
            }
            parent.insert(next.clone(), Some((node.clone(), l)));
            queue.push_back(next);
        }
    }
    if truncated {
        Search::Unknown
    } else {
        Search::Unmatched
    }
}

pub fn refute(rtm: &Rtm, max_states: usize) -> RefutationReport {
    let trigger_count = triggers(rtm).count();
    let n = trigger_count + 1;
    let mut probes: Vec<String> = expressible_names(rtm).into_iter().take(n).collect();
    let expressible = probes.len();
    let fresh = fresh_names(rtm, &probes, n - expressible);
    probes.extend(fresh);
    let mut outcomes = vec![ProbeOutcome::Skipped; n];
    let finish = |outcomes, branch| RefutationReport {
        trigger_count,
        probes: probes.clone(),
        outcomes,
        branch,
    };

    let mut paths: Vec<Option<RunPath>> = vec![None; n];
    for i in 0..n {
        // the first probe establishes that the candidate simulates at all;
        // after that a name outside the alphabet decides immediately
        if i > 0 && i >= expressible {
            outcomes[i] = ProbeOutcome::OutsideAlphabet;
            return finish(
                outcomes,
                Branch::Alphabet {
                    name: probes[i].clone(),
                },
            );
        }
        match probe(rtm, &probes[i], max_states) {
            Search::Found(path) => {
                let c = path.end().clone();
                outcomes[i] = ProbeOutcome::Reached {
                    trigger: c.trigger(),
                    configuration: c,
                };
                paths[i] = Some(path);
            }
            Search::Unmatched => {
                outcomes[i] = ProbeOutcome::Unmatched;
                return finish(
                    outcomes,
                    Branch::SimulationFailure {
                        name: probes[i].clone(),
                    },
                );
            }
            Search::Unknown => {
                outcomes[i] = ProbeOutcome::Unknown;
                return finish(
                    outcomes,
                    Branch::Inconclusive {
                        name: probes[i].clone(),
                    },
                );
            }
        }
        // pigeonhole: look for an earlier probe with the same trigger
        let ti = match &outcomes[i] {
            ProbeOutcome::Reached { trigger, .. } => trigger.clone(),
            _ => unreachable!(),
        };
        let earlier = (0..i).find(
            |k| matches!(&outcomes[*k], ProbeOutcome::Reached { trigger, .. } if *trigger == ti),
        );
        if let Some(k) = earlier {
            // C_k satisfies the trigger under which C_i answers 'y_i, so C_k
            // can answer 'y_i as well
            let ck = paths[k].clone().unwrap();
            let answer = ActionLabel::output(probes[i].as_str(), None);
            let (label, next) = step(rtm, ck.end())
                .into_iter()
                .find(|(l, _)| *l == answer)
                .expect("equal triggers enable the same rules");
            let mut play = ck;
            play.steps.push((label, next));
            return finish(
                outcomes,
                Branch::Pigeonhole {
                    i: k,
                    j: i,
                    trigger: ti,
                    play,
                },
            );
        }
    }
    unreachable!("{n} probes over {trigger_count} triggers must collide")
}
