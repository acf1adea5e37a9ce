//! Command layer behind the `rtmpi` binary. Every command takes file
//! contents rather than paths and returns the text to print together with an
//! exit code, so the binary only does I/O.

mod refute;

use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::encode::{
    parse_numbering, resolve_family, rtm_to_pi, side_by_side, ts_to_rtm, EncodeError,
    EncodeOptions, FinTs,
};
use crate::lts::{
    bb_check, dpbb_check, emit_aut, minimize, parse_aut, AutError, CheckResult, Lts, Mode,
};
use crate::pi::{default_projection, explore, parse_pi_with, pretty, PiError};
use crate::rtm::{emit_rtm, parse_rtm, step, RtmError};

pub use refute::{
    expressible_names, refute, Branch, ProbeOutcome, RefutationReport, RunPath, PROBE_CHANNEL,
};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exit {
    /// Success, or the compared systems are equivalent.
    Ok = 0,
    Inequivalent = 1,
    /// A state bound was reached before a verdict.
    Inconclusive = 2,
    /// Bad arguments or unparsable input.
    Usage = 64,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit: Exit,
    pub text: String,
}

impl Outcome {
    fn new(exit: Exit, text: String) -> Self {
        Outcome { exit, text }
    }
}

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("machine: {0}")]
    Machine(#[from] RtmError),
    #[error("transition system: {0}")]
    Aut(#[from] AutError),
    #[error("process: {0}")]
    Pi(#[from] PiError),
    #[error("encoding: {0}")]
    Encode(#[from] EncodeError),
    #[error("{0}")]
    Config(String),
}

impl From<WorkbenchError> for Outcome {
    fn from(e: WorkbenchError) -> Self {
        Outcome::new(Exit::Usage, format!("error: {e}\n"))
    }
}

/// Input names offered to early input transitions during exploration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Universe {
    /// The term's free names plus this many fresh ones.
    Fresh(usize),
    /// Exactly these names.
    Names(Vec<String>),
}

impl Universe {
    /// `3` or `a,b,c`.
    pub fn parse(text: &str) -> Result<Self, WorkbenchError> {
        if let Ok(n) = text.trim().parse() {
            return Ok(Universe::Fresh(n));
        }
        let names: Vec<String> = text
            .split(',')
            .map(|s| s.trim().to_owned())
            .filter(|s| !s.is_empty())
            .collect();
        if names.is_empty()
            || names
                .iter()
                .any(|n| !n.chars().all(|c| c.is_alphanumeric() || c == '_'))
        {
            return Err(WorkbenchError::Config(format!("bad universe `{text}`")));
        }
        Ok(Universe::Names(names))
    }

    pub fn resolve(&self, free: impl IntoIterator<Item = String>) -> Vec<String> {
        match self {
            Universe::Names(ns) => ns.clone(),
            Universe::Fresh(k) => {
                let mut names: Vec<String> = free.into_iter().collect();
                let fresh: Vec<String> = (1..)
                    .map(|i| format!("n{i}"))
                    .filter(|n| !names.contains(n))
                    .take(*k)
                    .collect();
                names.extend(fresh);
                names
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Aut,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub rtm_max_states: usize,
    pub pi_max_states: usize,
    pub universe: Universe,
    pub mode: Mode,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rtm_max_states: 50_000,
            pi_max_states: 50_000,
            universe: Universe::Fresh(1),
            mode: Mode::DivergencePreserving,
            seed: 0,
            format: Format::Aut,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), WorkbenchError> {
        if self.rtm_max_states == 0 || self.pi_max_states == 0 {
            return Err(WorkbenchError::Config(
                "state bounds must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

fn run(f: impl FnOnce() -> Result<Outcome, WorkbenchError>) -> Outcome {
    f().unwrap_or_else(Outcome::from)
}

fn check(mode: Mode, l: &Lts, r: &Lts) -> CheckResult {
    match mode {
        Mode::Branching => bb_check(l, r),
        Mode::DivergencePreserving => dpbb_check(l, r),
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Branching => "bb",
        Mode::DivergencePreserving => "dpbb",
    }
}

fn verdict_outcome(res: &CheckResult, mut text: String) -> Outcome {
    if res.is_equivalent() {
        text.push_str("EQUIVALENT\n");
        Outcome::new(Exit::Ok, text)
    } else {
        text.push_str("INEQUIVALENT\n");
        if let Some(play) = &res.counterexample {
            text.push_str(&play.describe(32));
        }
        Outcome::new(Exit::Inequivalent, text)
    }
}

fn text_lts(lts: &Lts) -> String {
    let mut out = format!(
        "{} states, {} transitions, initial {}\n",
        lts.num_states(),
        lts.num_transitions(),
        lts.initial()
    );
    for t in lts.transitions() {
        writeln!(out, "{} -{}-> {}", t.source, t.label, t.target).unwrap();
    }
    out
}

/// Random run of at most `steps` steps; the seed fixes every choice.
pub fn simulate(rtm_text: &str, steps: usize, config: &RunConfig) -> Outcome {
    run(|| {
        let rtm = parse_rtm(rtm_text)?;
        let mut rng = StdRng::seed_from_u64(config.seed);
        let mut cur = rtm.initial_configuration();
        let mut out = format!("{cur}\n");
        for _ in 0..steps {
            let moves = step(&rtm, &cur);
            let Some((label, next)) = moves.choose(&mut rng) else {
                out.push_str("deadlock\n");
                break;
            };
            writeln!(out, "-{label}-> {next}").unwrap();
            cur = next.clone();
        }
        Ok(Outcome::new(Exit::Ok, out))
    })
}

/// Specification source followed by the name map as comments, so the whole
/// output is itself a loadable process file.
pub fn encode_rtm2pi(rtm_text: &str) -> Outcome {
    run(|| {
        let bundle = rtm_to_pi(&parse_rtm(rtm_text)?)?;
        let mut out = bundle.source();
        out.push_str("\n# names\n");
        for line in bundle.name_map_text().lines() {
            writeln!(out, "# {line}").unwrap();
        }
        Ok(Outcome::new(Exit::Ok, out))
    })
}

/// Name map alone, one `role = name` per line.
pub fn encode_names(rtm_text: &str) -> Outcome {
    run(|| {
        let bundle = rtm_to_pi(&parse_rtm(rtm_text)?)?;
        Ok(Outcome::new(Exit::Ok, bundle.name_map_text()))
    })
}

pub fn encode_ts2rtm(aut_text: &str, numbering: Option<&str>) -> Outcome {
    run(|| {
        let lts = parse_aut(aut_text)?;
        let ts = match numbering {
            Some(text) => {
                let phi = parse_numbering(text, lts.num_states())?;
                FinTs::new(lts, phi)?
            }
            None => FinTs::with_auto_numbering(lts),
        };
        Ok(Outcome::new(Exit::Ok, emit_rtm(&ts_to_rtm(&ts))))
    })
}

pub fn explore_pi(pi_text: &str, config: &RunConfig) -> Outcome {
    run(|| {
        config.validate()?;
        let prog = parse_pi_with(pi_text, &resolve_family)?;
        let universe = config.universe.resolve(prog.term.free_names());
        let e = explore(
            &prog.term,
            &prog.defs,
            &universe,
            config.pi_max_states,
            &default_projection,
        );
        let mut out = match config.format {
            Format::Aut => emit_aut(&e.lts),
            Format::Text => {
                let mut s = text_lts(&e.lts);
                for (k, t) in e.states.iter().enumerate() {
                    writeln!(s, "state {k}: {}", pretty(t)).unwrap();
                }
                s
            }
        };
        if e.complete {
            Ok(Outcome::new(Exit::Ok, out))
        } else {
            if config.format == Format::Text {
                out.push_str("INCONCLUSIVE: state bound reached\n");
            }
            Ok(Outcome::new(Exit::Inconclusive, out))
        }
    })
}

pub fn check_aut(left: &str, right: &str, mode: Mode) -> Outcome {
    run(|| {
        let l = parse_aut(left)?;
        let r = parse_aut(right)?;
        let res = check(mode, &l, &r);
        Ok(verdict_outcome(
            &res,
            format!("mode: {}\n", mode_name(mode)),
        ))
    })
}

pub fn minimize_aut(aut_text: &str, config: &RunConfig) -> Outcome {
    run(|| {
        let m = minimize(&parse_aut(aut_text)?, config.mode);
        Ok(Outcome::new(
            Exit::Ok,
            match config.format {
                Format::Aut => emit_aut(&m),
                Format::Text => text_lts(&m),
            },
        ))
    })
}

/// Compares a machine with the exploration of its own specification.
pub fn verify_spec(rtm_text: &str, config: &RunConfig) -> Outcome {
    verify_spec_with(rtm_text, config, &EncodeOptions::default())
}

/// [`verify_spec`] against a possibly mutated encoding.
pub fn verify_spec_with(rtm_text: &str, config: &RunConfig, options: &EncodeOptions) -> Outcome {
    run(|| {
        config.validate()?;
        let rtm = parse_rtm(rtm_text)?;
        if let Some(k) = options.omit_rule.filter(|k| *k >= rtm.rules().len()) {
            return Err(WorkbenchError::Config(format!("no rule {k} to omit")));
        }
        let sbs = side_by_side(&rtm, options, config.rtm_max_states, config.pi_max_states)?;
        let head = format!(
            "mode: {}\nmachine: {} states{}\nprocess: {} states{}\n",
            mode_name(config.mode),
            sbs.machine.lts.num_states(),
            if sbs.machine.complete {
                ""
            } else {
                " (bound reached)"
            },
            sbs.spec.lts.num_states(),
            if sbs.spec.complete {
                ""
            } else {
                " (bound reached)"
            },
        );
        if !sbs.complete() {
            return Ok(Outcome::new(Exit::Inconclusive, head + "INCONCLUSIVE\n"));
        }
        let res = check(config.mode, &sbs.machine.lts, &sbs.spec.lts);
        Ok(verdict_outcome(&res, head))
    })
}

pub fn refute_rtm(rtm_text: &str, config: &RunConfig) -> Outcome {
    run(|| {
        config.validate()?;
        let rtm = parse_rtm(rtm_text)?;
        let report = refute(&rtm, config.rtm_max_states);
        let exit = if report.refuted() {
            Exit::Ok
        } else {
            Exit::Inconclusive
        };
        Ok(Outcome::new(exit, report.to_string()))
    })
}
