//! A polyadic-free π-calculus with guarded choice, replication and
//! parametric definitions. Terms are locally nameless: bound names are de
//! Bruijn indices, free names are strings.

mod canon;
mod defs;
mod explore;
mod parse;
mod pretty;
mod semantics;
mod term;

pub use canon::canonicalize;
pub use defs::{DefFamily, DefTable, Definition};
pub use explore::{default_projection, explore, Exploration};
pub use parse::{parse_pi, parse_pi_with, parse_term, FamilyResolver, PiError, PiProgram};
pub use pretty::{pretty, pretty_program};
pub use semantics::{transitions, PiLabel, UNFOLD_LIMIT};
pub use term::{close, open, rename, rename_one, Hint, Name, Term};
