//! Reactive Turing machines: rules carry action labels, so a machine denotes
//! a transition system over its configurations.

mod semantics;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::lts::ActionLabel;

pub use semantics::{reachable_lts, step, triggers, Reachable, TriggerSet};
pub use text::{emit_rtm, format_action, parse_action, parse_rtm};

/// Spelling of the blank datum.
pub const BLANK: &str = "_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    L,
    R,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::R => "R",
        })
    }
}

/// `from --action[read/write]mv--> to`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub from: String,
    pub action: ActionLabel,
    pub read: String,
    pub write: String,
    pub mv: Move,
    pub to: String,
}

impl Rule {
    pub fn new(
        from: &str,
        action: ActionLabel,
        read: &str,
        write: &str,
        mv: Move,
        to: &str,
    ) -> Self {
        Rule {
            from: from.into(),
            action,
            read: read.into(),
            write: write.into(),
            mv,
            to: to.into(),
        }
    }

    pub fn trigger(&self) -> Trigger {
        Trigger {
            state: self.from.clone(),
            datum: self.read.clone(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} / {} {} {}",
            self.from,
            format_action(&self.action),
            self.read,
            self.write,
            self.mv,
            self.to
        )
    }
}

/// The pair of control state and datum under the head that decides which
/// rules are enabled.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trigger {
    pub state: String,
    pub datum: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RtmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared {kind} `{name}`")]
    Undeclared {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("line {line}: duplicate {what}")]
    Duplicate { line: usize, what: String },
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("action `{0}` is reserved and cannot be declared")]
    ReservedAction(String),
    #[error("the blank `_` must be a declared datum")]
    NoBlank,
    #[error("machine already uses the internal action `i`")]
    InternalCollision,
}

/// A machine over finite sets of control states, data and actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rtm {
    states: Vec<String>,
    data: Vec<String>,
    actions: Vec<ActionLabel>,
    rules: Vec<Rule>,
    initial: String,
}

impl Rtm {
    /// Validates membership of every rule component in the declared sets.
    /// Line numbers in errors are 0 when the machine was not parsed.
    pub fn new(
        states: Vec<String>,
        data: Vec<String>,
        actions: Vec<ActionLabel>,
        rules: Vec<Rule>,
        initial: String,
    ) -> Result<Self, RtmError> {
        let lines = vec![0; rules.len()];
        Self::with_lines(states, data, actions, rules, initial, &lines)
    }

    pub(crate) fn with_lines(
        states: Vec<String>,
        data: Vec<String>,
        actions: Vec<ActionLabel>,
        rules: Vec<Rule>,
        initial: String,
        lines: &[usize],
    ) -> Result<Self, RtmError> {
        for (kind, items) in [("state", &states), ("datum", &data)] {
            let mut seen = BTreeSet::new();
            for s in items.iter() {
                if !seen.insert(s) {
                    return Err(RtmError::Duplicate {
                        line: 0,
                        what: format!("{kind} `{s}`"),
                    });
                }
            }
        }
        let mut seen = BTreeSet::new();
        for a in &actions {
            if !matches!(a, ActionLabel::Observable { .. }) {
                return Err(RtmError::ReservedAction(a.to_string()));
            }
            if !seen.insert(a) {
                return Err(RtmError::Duplicate {
                    line: 0,
                    what: format!("action `{}`", format_action(a)),
                });
            }
        }
        if !data.iter().any(|d| d == BLANK) {
            return Err(RtmError::NoBlank);
        }
        if !states.contains(&initial) {
            return Err(RtmError::Undeclared {
                line: 0,
                kind: "initial state",
                name: initial,
            });
        }
        for (rule, line) in rules.iter().zip(lines) {
            let undeclared = |kind, name: &str| RtmError::Undeclared {
                line: *line,
                kind,
                name: name.to_owned(),
            };
            for s in [&rule.from, &rule.to] {
                if !states.contains(s) {
                    return Err(undeclared("state", s));
                }
            }
            for d in [&rule.read, &rule.write] {
                if !data.contains(d) {
                    return Err(undeclared("datum", d));
                }
            }
            if matches!(rule.action, ActionLabel::Observable { .. })
                && !actions.contains(&rule.action)
            {
                return Err(undeclared("action", &format_action(&rule.action)));
            }
        }
        let mut rules = rules;
        rules.sort();
        rules.dedup();
        Ok(Rtm {
            states,
            data,
            actions,
            rules,
            initial,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn data(&self) -> &[String] {
        &self.data
    }

    pub fn actions(&self) -> &[ActionLabel] {
        &self.actions
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration::new(&self.initial, vec![], BLANK, vec![])
    }

    /// Rules enabled by a trigger.
    pub fn rules_for<'a>(
        &'a self,
        state: &'a str,
        datum: &'a str,
    ) -> impl Iterator<Item = &'a Rule> {
        self.rules
            .iter()
            .filter(move |r| r.from == state && r.read == datum)
    }

    /// Replaces every silent rule by an `i`-labelled one.
    pub fn relabel_internal(&self) -> Result<Rtm, RtmError> {
        if self.rules.iter().any(|r| r.action == ActionLabel::Internal) {
            return Err(RtmError::InternalCollision);
        }
        let mut m = self.clone();
        for r in &mut m.rules {
            if r.action.is_silent() {
                r.action = ActionLabel::Internal;
            }
        }
        m.rules.sort();
        Ok(m)
    }
}

/// A control state and a tape `left [head] right`. Kept in normal form: no
/// blanks at the far left of `left` or the far right of `right`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: String,
    pub left: Vec<String>,
    pub head: String,
    pub right: Vec<String>,
}

impl Configuration {
    pub fn new(state: &str, left: Vec<String>, head: &str, right: Vec<String>) -> Self {
        let mut c = Configuration {
            state: state.into(),
            left,
            head: head.into(),
            right,
        };
        c.normalize();
        c
    }

    pub fn normalize(&mut self) {
        let lead = self.left.iter().take_while(|d| *d == BLANK).count();
        self.left.drain(..lead);
        while self.right.last().is_some_and(|d| d == BLANK) {
            self.right.pop();
        }
    }

    pub fn is_normal(&self) -> bool {
        self.left.first().is_none_or(|d| d != BLANK) && self.right.last().is_none_or(|d| d != BLANK)
    }

    pub fn trigger(&self) -> Trigger {
        Trigger {
            state: self.state.clone(),
            datum: self.head.clone(),
        }
    }

    pub fn satisfies(&self, trigger: &Trigger) -> bool {
        self.state == trigger.state && self.head == trigger.datum
    }
}

/// Free-function form of [`Configuration::satisfies`].
pub fn satisfies_trigger(c: &Configuration, trigger: &Trigger) -> bool {
    c.satisfies(trigger)
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},", self.state)?;
        for d in &self.left {
            write!(f, " {d}")?;
        }
        write!(f, " [{}]", self.head)?;
        for d in &self.right {
            write!(f, " {d}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normal_form_trims_outer_blanks() {
        let c = Configuration::new("s", v(&["_", "_", "1", "_"]), "_", v(&["_", "2", "_", "_"]));
        assert_eq!(c.left, v(&["1", "_"]));
        assert_eq!(c.right, v(&["_", "2"]));
        assert!(c.is_normal());
        assert_eq!(c.to_string(), "(s, 1 _ [_] _ 2)");
    }

    #[test]
    fn trigger_satisfaction() {
        let c = Configuration::new("s", vec![], "_", vec![]);
        assert!(satisfies_trigger(
            &c,
            &Trigger {
                state: "s".into(),
                datum: "_".into()
            }
        ));
        assert!(!satisfies_trigger(
            &c,
            &Trigger {
                state: "t".into(),
                datum: "_".into()
            }
        ));
    }

    #[test]
    fn validation() {
        let ok = Rtm::new(v(&["q"]), v(&["_"]), vec![], vec![], "q".into());
        assert!(ok.is_ok());
        let bad = Rtm::new(
            v(&["q"]),
            v(&["_"]),
            vec![],
            vec![Rule::new("q", ActionLabel::Silent, "_", "_", Move::L, "p")],
            "q".into(),
        );
        assert!(matches!(
            bad,
            Err(RtmError::Undeclared { kind: "state", .. })
        ));
        assert_eq!(
            Rtm::new(v(&["q"]), v(&["1"]), vec![], vec![], "q".into()),
            Err(RtmError::NoBlank)
        );
        assert!(Rtm::new(
            v(&["q"]),
            v(&["_"]),
            vec![ActionLabel::Internal],
            vec![],
            "q".into()
        )
        .is_err());
    }

    #[test]
    fn relabel_internal_renames_silent_rules() {
        let m = Rtm::new(
            v(&["q"]),
            v(&["_"]),
            vec![],
            vec![Rule::new("q", ActionLabel::Silent, "_", "_", Move::R, "q")],
            "q".into(),
        )
        .unwrap();
        let r = m.relabel_internal().unwrap();
        assert_eq!(r.rules()[0].action, ActionLabel::Internal);
        assert_eq!(r.relabel_internal(), Err(RtmError::InternalCollision));
        let plain = Rtm::new(v(&["q"]), v(&["_"]), vec![], vec![], "q".into()).unwrap();
        assert_eq!(plain.relabel_internal().unwrap(), plain);
    }
}
