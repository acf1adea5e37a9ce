use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Configuration, Move, Rtm, Trigger, BLANK};
use crate::lts::{ActionLabel, Lts, Transition};

/// All outcomes of one step: for every rule whose trigger matches, write,
/// move (reading blank beyond the recorded tape) and renormalise.
pub fn step(rtm: &Rtm, c: &Configuration) -> Vec<(ActionLabel, Configuration)> {
    let mut out: Vec<(ActionLabel, Configuration)> = rtm
        .rules_for(&c.state, &c.head)
        .map(|rule| {
            let mut left = c.left.clone();
            let mut right = c.right.clone();
            let head = match rule.mv {
                Move::L => {
                    right.insert(0, rule.write.clone());
                    left.pop().unwrap_or_else(|| BLANK.to_owned())
                }
                Move::R => {
                    left.push(rule.write.clone());
                    if right.is_empty() {
                        BLANK.to_owned()
                    } else {
                        right.remove(0)
                    }
                }
            };
            let next = Configuration::new(&rule.to, left, &head, right);
            (rule.action.clone(), next)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Reachable fragment of a machine's transition system.
#[derive(Clone, Debug)]
pub struct Reachable {
    pub lts: Lts,
    /// Configuration of every LTS state.
    pub configurations: Vec<Configuration>,
    /// False when exploration stopped at the state bound.
    pub complete: bool,
}

impl Reachable {
    pub fn state_of(&self, c: &Configuration) -> Option<usize> {
        self.configurations.iter().position(|x| x == c)
    }
}

/// Breadth-first exploration from `(initial, [_])`, visiting at most
/// `max_states` configurations.
pub fn reachable_lts(rtm: &Rtm, max_states: usize) -> Reachable {
    let max_states = max_states.max(1);
    let start = rtm.initial_configuration();
    let mut index: HashMap<Configuration, usize> = HashMap::from([(start.clone(), 0)]);
    let mut configurations = vec![start];
    let mut transitions = Vec::new();
    let mut complete = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for (label, next) in step(rtm, &configurations[s]) {
            let target = match index.get(&next) {
                Some(t) => *t,
                None if configurations.len() < max_states => {
                    let t = configurations.len();
                    index.insert(next.clone(), t);
                    configurations.push(next);
                    queue.push_back(t);
                    t
                }
                None => {
                    complete = false;
                    continue;
                }
            };
            transitions.push(Transition {
                source: s,
                label,
                target,
            });
        }
    }
    let lts = Lts::new(configurations.len(), 0, transitions).expect("indices are in range");
    Reachable {
        lts,
        configurations,
        complete,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriggerSet {
    /// Every (state, datum) pair.
    pub all: BTreeSet<Trigger>,
    /// Those that at least one rule responds to.
    pub used: BTreeSet<Trigger>,
}

impl TriggerSet {
    pub fn count(&self) -> usize {
        self.all.len()
    }
}

pub fn triggers(rtm: &Rtm) -> TriggerSet {
    let all = rtm
        .states()
        .iter()
        .flat_map(|s| {
            rtm.data().iter().map(move |d| Trigger {
                state: s.clone(),
                datum: d.clone(),
            })
        })
        .collect();
    let used = rtm.rules().iter().map(|r| r.trigger()).collect();
    TriggerSet { all, used }
}
