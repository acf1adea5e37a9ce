//! Translations between the two models: machines into π-calculus
//! specifications, and finite transition systems into machines.

mod check;
mod tape;
mod to_pi;
mod to_rtm;

use thiserror::Error;

use crate::rtm::RtmError;

pub use check::{
    relabel_commutation, side_by_side, stepwise_check, RelabelComparison, SideBySide,
    StepwiseReport,
};
pub use tape::{resolve_family, TapeFamily, TapeWindow, PROTOCOL, TAPE_PREFIX};
pub use to_pi::{rtm_to_pi, rtm_to_pi_with, spec_of_configuration, EncodeOptions, SpecBundle};
pub use to_rtm::{
    lazy_rule_oracle, parse_numbering, ts_to_rtm, FinTs, LazyRuleOracle, CHOOSE, START, STEP,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("{first} and {second} both map to the name `{name}`")]
    NameCollision {
        first: String,
        second: String,
        name: String,
    },
    #[error("unknown {0}")]
    UnknownSymbol(String),
    #[error("state numbering: {0}")]
    Numbering(String),
    #[error(transparent)]
    Machine(#[from] RtmError),
}
