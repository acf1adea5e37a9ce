use std::collections::{BTreeMap, BTreeSet};

use super::EncodeError;
use crate::lts::{canonical_order, ActionLabel, Lts};
use crate::rtm::{Move, Rtm, Rule, Trigger, BLANK};

/// Control states of the constructed machine.
pub const START: &str = "up";
pub const STEP: &str = "s";
pub const CHOOSE: &str = "t";

/// A finite transition system whose states are numbered injectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinTs {
    pub lts: Lts,
    /// Number of every state.
    pub phi: Vec<u64>,
}

impl FinTs {
    pub fn new(lts: Lts, phi: Vec<u64>) -> Result<Self, EncodeError> {
        if phi.len() != lts.num_states() {
            return Err(EncodeError::Numbering(format!(
                "{} numbers for {} states",
                phi.len(),
                lts.num_states()
            )));
        }
        let mut seen = BTreeMap::new();
        for (s, n) in phi.iter().enumerate() {
            if let Some(first) = seen.insert(*n, s) {
                return Err(EncodeError::Numbering(format!(
                    "states {first} and {s} share number {n}"
                )));
            }
        }
        Ok(FinTs { lts, phi })
    }

    /// Numbers states by breadth-first rank from the initial state, from 1.
    pub fn with_auto_numbering(lts: Lts) -> Self {
        let phi = canonical_order(&lts)
            .iter()
            .map(|r| *r as u64 + 1)
            .collect();
        FinTs { lts, phi }
    }

    fn datum(&self, s: usize) -> String {
        self.phi[s].to_string()
    }
}

/// Parses `state_index = natural` lines; every state must be numbered.
pub fn parse_numbering(text: &str, num_states: usize) -> Result<Vec<u64>, EncodeError> {
    let mut phi: Vec<Option<u64>> = vec![None; num_states];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = || EncodeError::Numbering(format!("line {}: expected `state = number`", i + 1));
        let (l, r) = line.split_once('=').ok_or_else(bad)?;
        let s: usize = l.trim().parse().map_err(|_| bad())?;
        let n: u64 = r.trim().parse().map_err(|_| bad())?;
        if s >= num_states {
            return Err(EncodeError::Numbering(format!(
                "line {}: no state {s}",
                i + 1
            )));
        }
        if phi[s].replace(n).is_some() {
            return Err(EncodeError::Numbering(format!(
                "line {}: state {s} numbered twice",
                i + 1
            )));
        }
    }
    phi.iter()
        .enumerate()
        .map(|(s, n)| n.ok_or_else(|| EncodeError::Numbering(format!("state {s} has no number"))))
        .collect()
}

fn start_rule(ts: &FinTs) -> Rule {
    Rule::new(
        START,
        ActionLabel::Silent,
        BLANK,
        &ts.datum(ts.lts.initial()),
        Move::R,
        STEP,
    )
}

fn step_rule() -> Rule {
    Rule::new(STEP, ActionLabel::Silent, BLANK, BLANK, Move::L, CHOOSE)
}

fn choose_rules(ts: &FinTs, from: Option<usize>) -> Vec<Rule> {
    ts.lts
        .transitions()
        .iter()
        .filter(|t| from.is_none_or(|f| f == t.source))
        .map(|t| {
            Rule::new(
                CHOOSE,
                t.label.clone(),
                &ts.datum(t.source),
                &ts.datum(t.target),
                Move::R,
                STEP,
            )
        })
        .collect()
}

/// The three-schema machine: write the initial state's number, then
/// repeatedly step back onto the current number and replace it by a
/// successor's number while performing the transition's action.
pub fn ts_to_rtm(ts: &FinTs) -> Rtm {
    let states = vec![START.to_owned(), STEP.to_owned(), CHOOSE.to_owned()];
    let data = std::iter::once(BLANK.to_owned())
        .chain((0..ts.lts.num_states()).map(|s| ts.datum(s)))
        .collect();
    let actions: Vec<ActionLabel> = ts
        .lts
        .labels()
        .into_iter()
        .filter(|a| matches!(a, ActionLabel::Observable { .. }))
        .collect();
    let mut rules = vec![start_rule(ts), step_rule()];
    rules.extend(choose_rules(ts, None));
    Rtm::new(states, data, actions, rules, START.to_owned())
        .expect("constructed machines are well formed")
}

/// Answers rule queries for the constructed machine trigger by trigger,
/// without building its data and action sets.
#[derive(Clone, Debug)]
pub struct LazyRuleOracle {
    ts: FinTs,
    by_number: BTreeMap<String, usize>,
}

impl LazyRuleOracle {
    pub fn new(ts: FinTs) -> Self {
        let by_number = (0..ts.lts.num_states()).map(|s| (ts.datum(s), s)).collect();
        LazyRuleOracle { ts, by_number }
    }

    pub fn rules_for(&self, trigger: &Trigger) -> BTreeSet<Rule> {
        match (trigger.state.as_str(), trigger.datum.as_str()) {
            (START, BLANK) => BTreeSet::from([start_rule(&self.ts)]),
            (STEP, BLANK) => BTreeSet::from([step_rule()]),
            (CHOOSE, d) => match self.by_number.get(d) {
                Some(s) => choose_rules(&self.ts, Some(*s)).into_iter().collect(),
                None => BTreeSet::new(),
            },
            _ => BTreeSet::new(),
        }
    }
}

pub fn lazy_rule_oracle(ts: FinTs) -> LazyRuleOracle {
    LazyRuleOracle::new(ts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtm::{parse_rtm, reachable_lts};

    fn single() -> FinTs {
        let lts = Lts::from_triples(2, 0, [(0, "a", 1)]).unwrap();
        FinTs::new(lts, vec![1, 2]).unwrap()
    }

    #[test]
    fn single_transition_gives_three_rules() {
        let m = ts_to_rtm(&single());
        let expected = parse_rtm(
            "states: up s t\ninitial: up\ndata: _ 1 2\nactions: a\n\
             rule: up tau _ / 1 R s\nrule: s tau _ / _ L t\nrule: t a 1 / 2 R s\n",
        )
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn no_transitions_deadlocks_in_t() {
        let ts = FinTs::new(Lts::from_triples(1, 0, []).unwrap(), vec![1]).unwrap();
        let m = ts_to_rtm(&ts);
        assert_eq!(m.rules().len(), 2);
        let r = reachable_lts(&m, 10);
        let last = r.configurations.last().unwrap();
        assert_eq!(last.state, CHOOSE);
        assert!(crate::rtm::step(&m, last).is_empty());
    }

    #[test]
    fn numbering_file() {
        assert_eq!(
            parse_numbering("0 = 5\n1 = 7 # c\n", 2).unwrap(),
            vec![5, 7]
        );
        assert!(parse_numbering("0 = 5\n", 2).is_err());
        assert!(parse_numbering("0 = 5\n0 = 6\n", 1).is_err());
        assert!(FinTs::new(Lts::from_triples(2, 0, []).unwrap(), vec![3, 3]).is_err());
    }

    #[test]
    fn oracle_queries() {
        let o = lazy_rule_oracle(single());
        let q = |s: &str, d: &str| {
            o.rules_for(&Trigger {
                state: s.into(),
                datum: d.into(),
            })
        };
        assert_eq!(q("t", "1").len(), 1);
        assert!(q("up", "1").is_empty());
        assert!(q("t", "2").is_empty());
    }
}
