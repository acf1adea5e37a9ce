//! Aldebaran (`.aut`) reading and writing.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use super::{ActionLabel, Lts, StateId, Transition};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{message} at line {line}")]
pub struct AutError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> AutError {
    AutError {
        line,
        message: message.into(),
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize, usize), AutError> {
    let rest = line
        .trim()
        .strip_prefix("des")
        .ok_or_else(|| err(line_no, "malformed header"))?;
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(line_no, "malformed header"))?;
    let fields: Vec<_> = inner.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(err(line_no, "malformed header"));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| err(line_no, "malformed header"))
    };
    Ok((num(fields[0])?, num(fields[1])?, num(fields[2])?))
}

fn parse_edge(line_no: usize, line: &str) -> Result<(usize, ActionLabel, usize), AutError> {
    let malformed = || err(line_no, "malformed transition");
    let inner = line
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(malformed)?;
    let (src, rest) = inner.split_once(',').ok_or_else(malformed)?;
    let rest = rest.trim_start().strip_prefix('"').ok_or_else(malformed)?;
    let (label, rest) = rest.split_once('"').ok_or_else(malformed)?;
    let dst = rest.trim_start().strip_prefix(',').ok_or_else(malformed)?;
    let src = src.trim().parse().map_err(|_| malformed())?;
    let dst = dst.trim().parse().map_err(|_| malformed())?;
    let label = ActionLabel::parse(label).map_err(|m| err(line_no, m))?;
    Ok((src, label, dst))
}

/// Parses an Aldebaran file. State identities are the numeric indices used in
/// the file.
pub fn parse_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "malformed header"))?;
    let (initial, count, num_states) = parse_header(hline, header)?;
    if initial >= num_states {
        return Err(err(hline, "state index out of range"));
    }
    let mut transitions = Vec::with_capacity(count);
    let mut last_line = hline;
    for (line_no, line) in lines {
        let (source, label, target) = parse_edge(line_no, line)?;
        if source >= num_states || target >= num_states {
            return Err(err(line_no, "state index out of range"));
        }
        transitions.push(Transition {
            source,
            label,
            target,
        });
        last_line = line_no;
    }
    if transitions.len() != count {
        return Err(err(
            last_line,
            format!(
                "transition count mismatch: header says {count}, found {}",
                transitions.len()
            ),
        ));
    }
    Ok(Lts::new(num_states, initial, transitions).expect("indices checked"))
}

/// The renumbering used by [`emit_aut`]: `order[old] = new`. States are
/// numbered breadth-first from the initial state, following outgoing edges
/// in sorted order; unreachable states come last in index order.
pub fn canonical_order(lts: &Lts) -> Vec<StateId> {
    let succ = lts.successors();
    let mut order = vec![usize::MAX; lts.num_states()];
    let mut next = 0;
    let mut queue = VecDeque::from([lts.initial()]);
    order[lts.initial()] = 0;
    next += 1;
    while let Some(s) = queue.pop_front() {
        for (_, t) in &succ[s] {
            if order[*t] == usize::MAX {
                order[*t] = next;
                next += 1;
                queue.push_back(*t);
            }
        }
    }
    for slot in order.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    order
}

/// Writes an LTS in Aldebaran format with canonically renumbered states.
pub fn emit_aut(lts: &Lts) -> String {
    let order = canonical_order(lts);
    let mut edges: Vec<(usize, String, usize)> = lts
        .transitions()
        .iter()
        .map(|t| (order[t.source], t.label.to_string(), order[t.target]))
        .collect();
    edges.sort();
    let mut out = format!("des (0,{},{})\n", edges.len(), lts.num_states());
    for (s, l, t) in edges {
        writeln!(out, "({s},\"{l}\",{t})").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let l = parse_aut("des (0,1,2)\n(0,\"tau\",1)").unwrap();
        assert_eq!(l.num_states(), 2);
        assert_eq!(l.num_transitions(), 1);
        assert!(l.has_transition(0, &ActionLabel::Silent, 1));
    }

    #[test]
    fn output_edges() {
        let l = parse_aut("des (0,2,2)\n(0,\"'y1\",1)\n(0,\"'y2\",1)").unwrap();
        assert!(l.has_transition(0, &ActionLabel::output("y1", None), 1));
        assert!(l.has_transition(0, &ActionLabel::output("y2", None), 1));
    }

    #[test]
    fn index_out_of_range() {
        let e = parse_aut("des (0,1,1)\n(0,\"a\",5)").unwrap_err();
        assert_eq!(e.to_string(), "state index out of range at line 2");
    }

    #[test]
    fn header_and_count_errors() {
        assert_eq!(parse_aut("des 0,1,1").unwrap_err().line, 1);
        let e = parse_aut("des (0,2,2)\n(0,\"a\",1)").unwrap_err();
        assert!(e.message.contains("count mismatch"));
        let e = parse_aut("des (0,1,2)\n(0,a,1)").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_aut("des (0,1,2)\n(0,\"'i\",1)").unwrap_err();
        assert!(e.message.contains("reserved"));
    }

    #[test]
    fn emit_single_state() {
        let l = Lts::new(1, 0, []).unwrap();
        assert_eq!(emit_aut(&l), "des (0,0,1)\n");
    }

    #[test]
    fn emit_renumbers_from_initial() {
        let l = Lts::from_triples(3, 2, [(2, "a", 0), (0, "b", 1)]).unwrap();
        assert_eq!(emit_aut(&l), "des (0,2,3)\n(0,\"a\",1)\n(1,\"b\",2)\n");
    }
}
