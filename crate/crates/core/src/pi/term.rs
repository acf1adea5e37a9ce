use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

/// A channel or datum name. Bound names are de Bruijn indices counting
/// enclosing binders (input parameters and restrictions), so alpha-variants
/// are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Name {
    Free(String),
    Bound(u32),
}

impl Name {
    pub fn free(s: &str) -> Name {
        Name::Free(s.to_owned())
    }

    pub fn as_free(&self) -> Option<&str> {
        match self {
            Name::Free(s) => Some(s),
            Name::Bound(_) => None,
        }
    }
}

/// Preferred spelling of a bound name for printing. Invisible to equality,
/// ordering and hashing.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl From<&str> for Hint {
    fn from(s: &str) -> Self {
        Hint(s.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Nil,
    /// `a(x).P` binds `x` in `P` when `binder` is present; `a.P` otherwise.
    Input {
        chan: Name,
        binder: Option<Hint>,
        body: Box<Term>,
    },
    /// `'a<x>.P` or `'a.P`
    Output {
        chan: Name,
        payload: Option<Name>,
        cont: Box<Term>,
    },
    Tau(Box<Term>),
    Par(Vec<Term>),
    /// Guarded choice.
    Sum(Vec<Term>),
    /// `new x in P`
    New {
        hint: Hint,
        body: Box<Term>,
    },
    Bang(Box<Term>),
    /// Instance of a defining equation.
    Call {
        def: String,
        args: Vec<Name>,
    },
}

impl Term {
    pub fn input(chan: Name, binder: &str, body: Term) -> Term {
        Term::Input {
            chan,
            binder: Some(binder.into()),
            body: Box::new(body),
        }
    }

    pub fn sync_in(chan: Name, body: Term) -> Term {
        Term::Input {
            chan,
            binder: None,
            body: Box::new(body),
        }
    }

    pub fn output(chan: Name, payload: Option<Name>, cont: Term) -> Term {
        Term::Output {
            chan,
            payload,
            cont: Box::new(cont),
        }
    }

    pub fn tau(cont: Term) -> Term {
        Term::Tau(Box::new(cont))
    }

    pub fn new_name(hint: &str, body: Term) -> Term {
        Term::New {
            hint: hint.into(),
            body: Box::new(body),
        }
    }

    pub fn bang(body: Term) -> Term {
        Term::Bang(Box::new(body))
    }

    /// Restricts the free name `name`: `new name in self`.
    pub fn restrict(self, name: &str) -> Term {
        Term::New {
            hint: name.into(),
            body: Box::new(close(&self, name)),
        }
    }

    /// As [`Term::restrict`] with an explicit printing hint.
    pub fn restrict_as(self, name: &str, hint: &Hint) -> Term {
        Term::New {
            hint: hint.clone(),
            body: Box::new(close(&self, name)),
        }
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        visit_names(self, 0, &mut |n, _| {
            if let Name::Free(s) = n {
                out.insert(s.clone());
            }
        });
        out
    }

    pub fn mentions(&self, name: &str) -> bool {
        let mut found = false;
        visit_names(self, 0, &mut |n, _| {
            if matches!(n, Name::Free(s) if s == name) {
                found = true;
            }
        });
        found
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Nil | Term::Call { .. } => 1,
            Term::Input { body, .. } => 1 + body.size(),
            Term::Output { cont, .. } | Term::Tau(cont) => 1 + cont.size(),
            Term::New { body, .. } | Term::Bang(body) => 1 + body.size(),
            Term::Par(ts) | Term::Sum(ts) => 1 + ts.iter().map(Term::size).sum::<usize>(),
        }
    }
}

fn visit_names(t: &Term, depth: u32, f: &mut impl FnMut(&Name, u32)) {
    match t {
        Term::Nil => {}
        Term::Input { chan, binder, body } => {
            f(chan, depth);
            visit_names(body, depth + u32::from(binder.is_some()), f);
        }
        Term::Output {
            chan,
            payload,
            cont,
        } => {
            f(chan, depth);
            if let Some(p) = payload {
                f(p, depth);
            }
            visit_names(cont, depth, f);
        }
        Term::Tau(p) | Term::Bang(p) => visit_names(p, depth, f),
        Term::New { body, .. } => visit_names(body, depth + 1, f),
        Term::Par(ts) | Term::Sum(ts) => ts.iter().for_each(|t| visit_names(t, depth, f)),
        Term::Call { args, .. } => args.iter().for_each(|a| f(a, depth)),
    }
}

/// Rebuilds `t` with every name replaced by `f(name, binders passed)`.
pub(crate) fn map_names(t: &Term, depth: u32, f: &impl Fn(&Name, u32) -> Name) -> Term {
    match t {
        Term::Nil => Term::Nil,
        Term::Input { chan, binder, body } => Term::Input {
            chan: f(chan, depth),
            binder: binder.clone(),
            body: Box::new(map_names(body, depth + u32::from(binder.is_some()), f)),
        },
        Term::Output {
            chan,
            payload,
            cont,
        } => Term::Output {
            chan: f(chan, depth),
            payload: payload.as_ref().map(|p| f(p, depth)),
            cont: Box::new(map_names(cont, depth, f)),
        },
        Term::Tau(p) => Term::Tau(Box::new(map_names(p, depth, f))),
        Term::Bang(p) => Term::Bang(Box::new(map_names(p, depth, f))),
        Term::New { hint, body } => Term::New {
            hint: hint.clone(),
            body: Box::new(map_names(body, depth + 1, f)),
        },
        Term::Par(ts) => Term::Par(ts.iter().map(|t| map_names(t, depth, f)).collect()),
        Term::Sum(ts) => Term::Sum(ts.iter().map(|t| map_names(t, depth, f)).collect()),
        Term::Call { def, args } => Term::Call {
            def: def.clone(),
            args: args.iter().map(|a| f(a, depth)).collect(),
        },
    }
}

/// Instantiates the outermost binder of a binder body with a free name.
pub fn open(body: &Term, name: &str) -> Term {
    map_names(body, 0, &|n, depth| match n {
        Name::Bound(i) if *i == depth => Name::Free(name.to_owned()),
        Name::Bound(i) if *i > depth => Name::Bound(i - 1),
        other => other.clone(),
    })
}

/// Abstracts the free name `name`, producing a binder body. Inverse of
/// [`open`] when `name` is fresh.
pub fn close(t: &Term, name: &str) -> Term {
    map_names(t, 0, &|n, depth| match n {
        Name::Free(s) if s == name => Name::Bound(depth),
        Name::Bound(i) if *i >= depth => Name::Bound(i + 1),
        other => other.clone(),
    })
}

/// Simultaneous substitution of free names.
pub fn rename(t: &Term, map: &BTreeMap<String, String>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    map_names(t, 0, &|n, _| match n {
        Name::Free(s) => match map.get(s) {
            Some(r) => Name::Free(r.clone()),
            None => n.clone(),
        },
        other => other.clone(),
    })
}

pub fn rename_one(t: &Term, from: &str, to: &str) -> Term {
    rename(t, &BTreeMap::from([(from.to_owned(), to.to_owned())]))
}

/// Source of names that cannot clash with parsed ones.
#[derive(Debug, Default)]
pub(crate) struct Fresh(usize);

impl Fresh {
    pub fn next(&mut self) -> String {
        self.0 += 1;
        format!("%{}", self.0)
    }
}
