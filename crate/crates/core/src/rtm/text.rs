//! Line-oriented machine format:
//!
//! ```text
//! states: up s t
//! initial: up
//! data: _ 1 2
//! actions: a 'b x(y) 'x<y>
//! rule: up tau _ / 1 R s
//! ```
//!
//! `#` starts a comment. `tau` and `i` are reserved action spellings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Move, Rtm, RtmError, Rule};
use crate::lts::{ActionLabel, Polarity};

/// Parses one action token: `tau`, `i`, `a`, `'a`, `a(p)` or `'a<p>`.
pub fn parse_action(token: &str) -> Result<ActionLabel, String> {
    match token {
        "tau" => return Ok(ActionLabel::Silent),
        "i" => return Ok(ActionLabel::Internal),
        _ => {}
    }
    let (output, rest) = match token.strip_prefix('\'') {
        Some(r) => (true, r),
        None => (false, token),
    };
    let (open, close) = if output { ('<', '>') } else { ('(', ')') };
    let (channel, payload) = match rest.split_once(open) {
        Some((c, p)) => {
            let p = p
                .strip_suffix(close)
                .ok_or_else(|| format!("malformed action `{token}`"))?;
            (c, Some(p))
        }
        None => (rest, None),
    };
    let label_text = match payload {
        Some(p) => format!("{}{channel} {p}", if output { "'" } else { "" }),
        None => format!("{}{channel}", if output { "'" } else { "" }),
    };
    match ActionLabel::parse(&label_text) {
        Ok(l @ ActionLabel::Observable { .. }) => Ok(l),
        Ok(_) => Err(format!("malformed action `{token}`")),
        Err(e) => Err(e),
    }
}

/// Inverse of [`parse_action`].
pub fn format_action(label: &ActionLabel) -> String {
    match label {
        ActionLabel::Silent => "tau".into(),
        ActionLabel::Internal => "i".into(),
        ActionLabel::Observable {
            channel,
            polarity: Polarity::Output,
            payload,
        } => match payload {
            Some(p) => format!("'{channel}<{p}>"),
            None => format!("'{channel}"),
        },
        ActionLabel::Observable {
            channel, payload, ..
        } => match payload {
            Some(p) => format!("{channel}({p})"),
            None => channel.clone(),
        },
    }
}

fn is_symbol(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn list(value: &str) -> Vec<&str> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn parse_rtm(text: &str) -> Result<Rtm, RtmError> {
    let mut states: Option<Vec<String>> = None;
    let mut data: Option<Vec<String>> = None;
    let mut actions: Option<Vec<ActionLabel>> = None;
    let mut initial: Option<String> = None;
    let mut rules = Vec::new();
    let mut rule_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| RtmError::Syntax {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| syntax(format!("expected `key: value`, got `{line}`")))?;
        let duplicate = |what: &str| RtmError::Duplicate {
            line: line_no,
            what: what.to_owned(),
        };
        let symbols = |value: &str, kind: &str| -> Result<Vec<String>, RtmError> {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for s in list(value) {
                if !is_symbol(s) {
                    return Err(syntax(format!("invalid {kind} `{s}`")));
                }
                if !seen.insert(s) {
                    return Err(duplicate(&format!("{kind} `{s}`")));
                }
                out.push(s.to_owned());
            }
            Ok(out)
        };
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(duplicate("`states` declaration"));
                }
                states = Some(symbols(value, "state")?);
            }
            "data" => {
                if data.is_some() {
                    return Err(duplicate("`data` declaration"));
                }
                data = Some(symbols(value, "datum")?);
            }
            "initial" => {
                if initial.is_some() {
                    return Err(duplicate("`initial` declaration"));
                }
                let v = list(value);
                if v.len() != 1 {
                    return Err(syntax("`initial` takes exactly one state".into()));
                }
                initial = Some(v[0].to_owned());
            }
            "actions" => {
                if actions.is_some() {
                    return Err(duplicate("`actions` declaration"));
                }
                let mut out: Vec<ActionLabel> = Vec::new();
                for tok in list(value) {
                    let a = parse_action(tok).map_err(syntax)?;
                    if !matches!(a, ActionLabel::Observable { .. }) {
                        return Err(RtmError::ReservedAction(tok.to_owned()));
                    }
                    if out.contains(&a) {
                        return Err(duplicate(&format!("action `{tok}`")));
                    }
                    out.push(a);
                }
                actions = Some(out);
            }
            "rule" => {
                let t: Vec<&str> = value.split_whitespace().collect();
                if t.len() != 7 || t[3] != "/" {
                    return Err(syntax(
                        "expected `rule: from action read / write L|R to`".into(),
                    ));
                }
                let action = parse_action(t[1]).map_err(syntax)?;
                let mv = match t[5] {
                    "L" => Move::L,
                    "R" => Move::R,
                    other => return Err(syntax(format!("move must be L or R, got `{other}`"))),
                };
                rules.push(Rule::new(t[0], action, t[2], t[4], mv, t[6]));
                rule_lines.push(line_no);
            }
            other => return Err(syntax(format!("unknown key `{other}`"))),
        }
    }
    let states = states.ok_or(RtmError::Missing("states"))?;
    let data = data.ok_or(RtmError::Missing("data"))?;
    let initial = initial.ok_or(RtmError::Missing("initial"))?;
    Rtm::with_lines(
        states,
        data,
        actions.unwrap_or_default(),
        rules,
        initial,
        &rule_lines,
    )
}

pub fn emit_rtm(rtm: &Rtm) -> String {
    let mut out = String::new();
    writeln!(out, "states: {}", rtm.states().join(" ")).unwrap();
    writeln!(out, "initial: {}", rtm.initial()).unwrap();
    writeln!(out, "data: {}", rtm.data().join(" ")).unwrap();
    let actions: Vec<String> = rtm.actions().iter().map(format_action).collect();
    writeln!(out, "actions: {}", actions.join(" ")).unwrap();
    for r in rtm.rules() {
        writeln!(out, "rule: {r}").unwrap();
    }
    out
}
