use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use super::tape::{TapeFamily, TapeWindow, PROTOCOL};
use super::EncodeError;
use crate::lts::{ActionLabel, Polarity, INTERNAL_TEXT};
use crate::pi::{
    default_projection, explore, pretty_program, DefTable, Exploration, Name, PiLabel, Term,
};
use crate::rtm::{format_action, Configuration, Move, Rtm, Rule, BLANK};

/// Mutation hooks for testing the verification pipeline against a
/// deliberately wrong encoding.
#[derive(Clone, Debug, Default)]
pub struct EncodeOptions {
    /// Leave out the handler branch of this rule (index into `Rtm::rules`).
    pub omit_rule: Option<usize>,
}

/// A machine's specification: the initial term, its definitions and the
/// correspondence between machine symbols and π names.
#[derive(Clone, Debug)]
pub struct SpecBundle {
    pub term: Term,
    pub defs: DefTable,
    /// `(role, name)` pairs: protocol channels, one name per control state,
    /// datum and action. Injective.
    pub names: Vec<(String, String)>,
    /// Output channel → machine action.
    pub projection: BTreeMap<String, ActionLabel>,
    rtm: Rtm,
    options: EncodeOptions,
}

const KEYWORDS: [&str; 5] = ["def", "new", "in", "tau", "family"];

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn state_name(s: &str) -> String {
    format!("st_{}", sanitize(s))
}

fn datum_name(d: &str) -> String {
    if d == BLANK {
        "d_blank".into()
    } else {
        format!("d_{}", sanitize(d))
    }
}

/// Channel on which a visible action is emitted.
fn action_name(a: &ActionLabel) -> String {
    match a {
        ActionLabel::Observable {
            channel,
            polarity,
            payload,
        } => {
            let mut s = match polarity {
                Polarity::Input => sanitize(channel),
                Polarity::Output => format!("co_{}", sanitize(channel)),
            };
            if let Some(p) = payload {
                s.push('_');
                s.push_str(&sanitize(p));
            }
            if KEYWORDS.contains(&s.as_str()) || s.starts_with(|c: char| c.is_ascii_digit()) {
                s = format!("act_{s}");
            }
            s
        }
        _ => INTERNAL_TEXT.into(),
    }
}

impl SpecBundle {
    pub fn rtm(&self) -> &Rtm {
        &self.rtm
    }

    /// Maps a calculus label to the machine label it stands for.
    pub fn project(&self, l: &PiLabel) -> ActionLabel {
        match l {
            PiLabel::Output {
                chan,
                payload: None,
                ..
            } => match self.projection.get(chan) {
                Some(a) => a.clone(),
                None => default_projection(l),
            },
            _ => default_projection(l),
        }
    }

    pub fn name_of(&self, role: &str) -> Option<&str> {
        self.names
            .iter()
            .find(|(r, _)| r == role)
            .map(|(_, n)| n.as_str())
    }

    /// Specification of an arbitrary configuration, sharing this bundle's
    /// names and definitions.
    pub fn configuration_term(&self, c: &Configuration) -> Result<Term, EncodeError> {
        let index = |d: &str| {
            self.rtm
                .data()
                .iter()
                .position(|x| x == d)
                .ok_or_else(|| EncodeError::UnknownSymbol(format!("datum `{d}`")))
        };
        if !self.rtm.states().contains(&c.state) {
            return Err(EncodeError::UnknownSymbol(format!("state `{}`", c.state)));
        }
        let window = TapeWindow {
            left: c.left.iter().map(|d| index(d)).collect::<Result<_, _>>()?,
            head: index(&c.head)?,
            right: c.right.iter().map(|d| index(d)).collect::<Result<_, _>>()?,
        }
        .normalize(index(BLANK)?);
        Ok(build_term(
            &self.rtm,
            &self.options,
            &c.state,
            &c.head,
            &window,
        ))
    }

    pub fn explore(&self, max_states: usize) -> Exploration {
        explore(&self.term, &self.defs, &[], max_states, &|l| {
            self.project(l)
        })
    }

    /// Program text accepted by `pi::parse_pi_with` together with
    /// [`super::resolve_family`].
    pub fn source(&self) -> String {
        pretty_program(&self.defs, &self.term)
    }

    /// `role = name` lines.
    pub fn name_map_text(&self) -> String {
        let mut out = String::new();
        for (role, name) in &self.names {
            writeln!(out, "{role} = {name}").unwrap();
        }
        out
    }
}

pub fn rtm_to_pi(rtm: &Rtm) -> Result<SpecBundle, EncodeError> {
    rtm_to_pi_with(rtm, &EncodeOptions::default())
}

/// Translates a machine into the term
/// `new write, read, mvL, mvR, st_.., d_.. in ('st_init.'d_blank.0 | !S_.. | Tape_h(..))`
/// where every control state `s` with rules has a replicated handler
///
/// `!st_s.(sum_x d_x.(sum_rules act.'write<e>.'mvM.read(f).'st_t.'f.0))`.
pub fn rtm_to_pi_with(rtm: &Rtm, options: &EncodeOptions) -> Result<SpecBundle, EncodeError> {
    let mut names: Vec<(String, String)> = PROTOCOL
        .iter()
        .map(|p| (p.to_string(), p.to_string()))
        .collect();
    for s in rtm.states() {
        names.push((format!("state:{s}"), state_name(s)));
    }
    for d in rtm.data() {
        names.push((format!("datum:{d}"), datum_name(d)));
    }
    let mut projection = BTreeMap::new();
    let mut actions: BTreeSet<ActionLabel> = rtm.actions().iter().cloned().collect();
    actions.extend(
        rtm.rules()
            .iter()
            .filter(|r| matches!(r.action, ActionLabel::Observable { .. }))
            .map(|r| r.action.clone()),
    );
    for a in &actions {
        let n = action_name(a);
        names.push((format!("action:{}", format_action(a)), n.clone()));
        projection.insert(n, a.clone());
    }
    if rtm
        .rules()
        .iter()
        .any(|r| r.action == ActionLabel::Internal)
    {
        names.push(("action:i".into(), INTERNAL_TEXT.into()));
    }
    let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
    for (role, name) in &names {
        if KEYWORDS.contains(&name.as_str()) {
            return Err(EncodeError::NameCollision {
                first: role.clone(),
                second: "keyword".into(),
                name: name.clone(),
            });
        }
        if let Some(first) = seen.insert(name.as_str(), role.as_str()) {
            return Err(EncodeError::NameCollision {
                first: first.to_owned(),
                second: role.clone(),
                name: name.clone(),
            });
        }
    }
    let blank = rtm
        .data()
        .iter()
        .position(|d| d == BLANK)
        .expect("machines always declare the blank");
    let mut defs = DefTable::new();
    defs.add_family(Arc::new(TapeFamily {
        data: rtm.data().len(),
        blank,
    }));
    let window = TapeWindow {
        left: vec![],
        head: blank,
        right: vec![],
    };
    let term = build_term(rtm, options, rtm.initial(), BLANK, &window);
    Ok(SpecBundle {
        term,
        defs,
        names,
        projection,
        rtm: rtm.clone(),
        options: options.clone(),
    })
}

fn free(s: &str) -> Name {
    Name::free(s)
}

fn residue(rule: &Rule) -> Term {
    let mv = match rule.mv {
        Move::L => "mvL",
        Move::R => "mvR",
    };
    // read(f).'t.'f.0
    let read = Term::input(
        free("read"),
        "f",
        Term::output(
            free(&state_name(&rule.to)),
            None,
            Term::output(Name::Bound(0), None, Term::Nil),
        ),
    );
    Term::output(
        free("write"),
        Some(free(&datum_name(&rule.write))),
        Term::output(free(mv), None, read),
    )
}

fn handler(rtm: &Rtm, options: &EncodeOptions, state: &str) -> Option<Term> {
    let mut per_datum = Vec::new();
    for d in rtm.data() {
        let branches: Vec<Term> = rtm
            .rules()
            .iter()
            .enumerate()
            .filter(|(k, r)| r.from == state && r.read == *d && options.omit_rule != Some(*k))
            .map(|(_, r)| {
                let rest = residue(r);
                match &r.action {
                    ActionLabel::Silent => Term::tau(rest),
                    a => Term::output(free(&action_name(a)), None, rest),
                }
            })
            .collect();
        if !branches.is_empty() {
            per_datum.push(Term::sync_in(free(&datum_name(d)), Term::Sum(branches)));
        }
    }
    if per_datum.is_empty() {
        return None;
    }
    Some(Term::bang(Term::sync_in(
        free(&state_name(state)),
        Term::Sum(per_datum),
    )))
}

fn build_term(
    rtm: &Rtm,
    options: &EncodeOptions,
    state: &str,
    head: &str,
    tape: &TapeWindow,
) -> Term {
    let kickoff = Term::output(
        free(&state_name(state)),
        None,
        Term::output(free(&datum_name(head)), None, Term::Nil),
    );
    let mut parts = vec![kickoff];
    parts.extend(rtm.states().iter().filter_map(|s| handler(rtm, options, s)));
    let args = PROTOCOL
        .iter()
        .map(|p| free(p))
        .chain(rtm.data().iter().map(|d| free(&datum_name(d))))
        .collect();
    parts.push(Term::Call {
        def: tape.def_name(),
        args,
    });
    let mut t = Term::Par(parts);
    let restricted: Vec<String> = PROTOCOL
        .iter()
        .map(|p| p.to_string())
        .chain(rtm.states().iter().map(|s| state_name(s)))
        .chain(rtm.data().iter().map(|d| datum_name(d)))
        .collect();
    for n in restricted.iter().rev() {
        t = t.restrict(n);
    }
    t
}

/// Specification of configuration `c` of `rtm`.
pub fn spec_of_configuration(rtm: &Rtm, c: &Configuration) -> Result<Term, EncodeError> {
    rtm_to_pi(rtm)?.configuration_term(c)
}
