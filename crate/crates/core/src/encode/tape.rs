//! The tape as an on-demand family of defining equations, one per tape
//! contents. `Tape_1_h0_2` holds data 1, 0, 2 (indices into the machine's
//! data list) with the head on the middle cell. Blank cells at the outer ends
//! are never part of a name.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::pi::{DefFamily, Definition, Name, Term};

pub const TAPE_PREFIX: &str = "Tape";
/// Protocol channels in parameter order.
pub const PROTOCOL: [&str; 4] = ["write", "read", "mvL", "mvR"];

/// Tape contents by datum index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TapeWindow {
    pub left: Vec<usize>,
    pub head: usize,
    pub right: Vec<usize>,
}

impl TapeWindow {
    pub fn normalize(mut self, blank: usize) -> Self {
        let lead = self.left.iter().take_while(|d| **d == blank).count();
        self.left.drain(..lead);
        while self.right.last() == Some(&blank) {
            self.right.pop();
        }
        self
    }

    pub fn def_name(&self) -> String {
        let mut s = TAPE_PREFIX.to_owned();
        for d in &self.left {
            s.push_str(&format!("_{d}"));
        }
        s.push_str(&format!("_h{}", self.head));
        for d in &self.right {
            s.push_str(&format!("_{d}"));
        }
        s
    }

    fn parse(name: &str) -> Option<Self> {
        let rest = name.strip_prefix(TAPE_PREFIX)?.strip_prefix('_')?;
        let mut left = Vec::new();
        let mut head = None;
        let mut right = Vec::new();
        for cell in rest.split('_') {
            if let Some(h) = cell.strip_prefix('h') {
                if head.is_some() {
                    return None;
                }
                head = Some(h.parse().ok()?);
            } else if head.is_none() {
                left.push(cell.parse().ok()?);
            } else {
                right.push(cell.parse().ok()?);
            }
        }
        Some(TapeWindow {
            left,
            head: head?,
            right,
        })
    }

    /// Contents after writing `d` and moving one cell.
    fn after(&self, d: usize, left_move: bool, blank: usize) -> Self {
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        let head = if left_move {
            right.insert(0, d);
            left.pop().unwrap_or(blank)
        } else {
            left.push(d);
            if right.is_empty() {
                blank
            } else {
                right.remove(0)
            }
        };
        TapeWindow { left, head, right }.normalize(blank)
    }
}

/// Tape equations over `data` datum names, with `blank` the blank's index.
///
/// `Tape_w(write, read, mvL, mvR, d0..) =
///   write(x).('x.0 | sum_y d_y.(mvL.'read<head'>.Tape_w' + mvR.'read<head''>.Tape_w''))`
///
/// The written datum name is decoded by synchronising on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TapeFamily {
    pub data: usize,
    pub blank: usize,
}

impl TapeFamily {
    pub fn params(&self) -> Vec<String> {
        PROTOCOL
            .iter()
            .map(|s| s.to_string())
            .chain((0..self.data).map(|k| format!("d{k}")))
            .collect()
    }

    fn call(&self, w: &TapeWindow) -> Term {
        Term::Call {
            def: w.def_name(),
            args: self.params().iter().map(|p| Name::free(p)).collect(),
        }
    }

    fn body(&self, w: &TapeWindow) -> Term {
        let datum = |k: usize| Name::Free(format!("d{k}"));
        let branches = (0..self.data)
            .map(|y| {
                let go = |left_move: bool, chan: &str| {
                    let next = w.after(y, left_move, self.blank);
                    Term::sync_in(
                        Name::free(chan),
                        Term::output(Name::free("read"), Some(datum(next.head)), self.call(&next)),
                    )
                };
                Term::sync_in(datum(y), Term::Sum(vec![go(true, "mvL"), go(false, "mvR")]))
            })
            .collect();
        let decode = Term::Par(vec![
            Term::output(Name::Bound(0), None, Term::Nil),
            Term::Sum(branches),
        ]);
        Term::input(Name::free("write"), "x", decode)
    }

    pub fn directive_args(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("data".to_owned(), self.data.to_string()),
            ("blank".to_owned(), self.blank.to_string()),
        ])
    }

    /// Rebuilds a family from the arguments of its directive.
    pub fn from_args(args: &BTreeMap<String, String>) -> Result<Self, String> {
        let get = |k: &str| -> Result<usize, String> {
            args.get(k)
                .ok_or_else(|| format!("missing `{k}`"))?
                .parse()
                .map_err(|_| format!("`{k}` must be a natural number"))
        };
        let f = TapeFamily {
            data: get("data")?,
            blank: get("blank")?,
        };
        if f.blank >= f.data {
            return Err("`blank` must index one of the data".into());
        }
        Ok(f)
    }
}

impl DefFamily for TapeFamily {
    fn owns(&self, name: &str) -> bool {
        TapeWindow::parse(name).is_some_and(|w| {
            let in_range = |d: &usize| *d < self.data;
            in_range(&w.head)
                && w.left.iter().all(in_range)
                && w.right.iter().all(in_range)
                && w.clone().normalize(self.blank) == w
        })
    }

    fn generate(&self, name: &str) -> Option<Definition> {
        if !self.owns(name) {
            return None;
        }
        let w = TapeWindow::parse(name)?;
        Some(Definition {
            params: self.params(),
            body: self.body(&w),
        })
    }

    fn directive(&self) -> String {
        format!(
            "family {TAPE_PREFIX} data={} blank={}",
            self.data, self.blank
        )
    }
}

/// Resolver for `family` directives, for use with
/// [`crate::pi::parse_pi_with`].
pub fn resolve_family(
    name: &str,
    args: &BTreeMap<String, String>,
) -> Result<Arc<dyn DefFamily>, String> {
    if name != TAPE_PREFIX {
        return Err(format!("unknown definition family `{name}`"));
    }
    Ok(Arc::new(TapeFamily::from_args(args)?))
}
