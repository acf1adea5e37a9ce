use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::defs::DefTable;
use super::term::{Hint, Name, Term};

/// Renders a term in the concrete syntax accepted by the parser. Bound names
/// use their hints, suffixed where needed to avoid capturing free names or
/// shadowing enclosing binders.
pub fn pretty(t: &Term) -> String {
    let mut p = Printer {
        free: t.free_names(),
        scope: Vec::new(),
        out: String::new(),
    };
    p.term(t, 0);
    p.out
}

/// Renders definitions, family directives and the main term as a program.
pub fn pretty_program(defs: &DefTable, t: &Term) -> String {
    let mut out = String::new();
    for f in defs.families() {
        writeln!(out, "{}", f.directive()).unwrap();
    }
    for (name, d) in defs.explicit() {
        if d.params.is_empty() {
            writeln!(out, "def {name} = {}", pretty(&d.body)).unwrap();
        } else {
            writeln!(
                out,
                "def {name}({}) = {}",
                d.params.join(", "),
                pretty(&d.body)
            )
            .unwrap();
        }
    }
    out.push_str(&pretty(t));
    out.push('\n');
    out
}

struct Printer {
    free: BTreeSet<String>,
    scope: Vec<String>,
    out: String,
}

const KEYWORDS: [&str; 5] = ["def", "new", "in", "tau", "family"];

impl Printer {
    fn name(&mut self, n: &Name) {
        match n {
            Name::Free(s) => self.out.push_str(s),
            Name::Bound(i) => {
                let s = self
                    .scope
                    .len()
                    .checked_sub(1 + *i as usize)
                    .map_or_else(|| format!("?{i}"), |k| self.scope[k].clone());
                self.out.push_str(&s);
            }
        }
    }

    fn pick(&self, hint: &Hint) -> String {
        let base: String = hint
            .0
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        let base = if base.is_empty() || base == "0" {
            "x".to_owned()
        } else {
            base
        };
        let taken = |s: &str| {
            self.free.contains(s) || self.scope.iter().any(|b| b == s) || KEYWORDS.contains(&s)
        };
        if !taken(&base) {
            return base;
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|s| !taken(s))
            .unwrap()
    }

    /// Levels: 0 parallel, 1 sum, 2 prefix.
    fn term(&mut self, t: &Term, level: u8) {
        match t {
            Term::Nil => self.out.push('0'),
            Term::Par(ts) | Term::Sum(ts) if ts.is_empty() => self.out.push('0'),
            Term::Par(ts) => self.group(ts, " | ", 1, level > 0),
            Term::Sum(ts) => self.group(ts, " + ", 2, level > 1),
            Term::Input { chan, binder, body } => {
                self.name(chan);
                match binder {
                    Some(h) => {
                        let x = self.pick(h);
                        write!(self.out, "({x}).").unwrap();
                        self.scope.push(x);
                        self.term(body, 2);
                        self.scope.pop();
                    }
                    None => {
                        self.out.push('.');
                        self.term(body, 2);
                    }
                }
            }
            Term::Output {
                chan,
                payload,
                cont,
            } => {
                self.out.push('\'');
                self.name(chan);
                if let Some(p) = payload {
                    self.out.push('<');
                    self.name(p);
                    self.out.push('>');
                }
                self.out.push('.');
                self.term(cont, 2);
            }
            Term::Tau(p) => {
                self.out.push_str("tau.");
                self.term(p, 2);
            }
            Term::Bang(p) => {
                self.out.push('!');
                self.term(p, 2);
            }
            Term::New { .. } => {
                // new a, b in P
                let mut cur = t;
                let mut names = Vec::new();
                while let Term::New { hint, body } = cur {
                    let x = self.pick(hint);
                    self.scope.push(x.clone());
                    names.push(x);
                    cur = body;
                }
                write!(self.out, "new {} in ", names.join(", ")).unwrap();
                self.term(cur, 2);
                for _ in &names {
                    self.scope.pop();
                }
            }
            Term::Call { def, args } => {
                self.out.push_str(def);
                if !args.is_empty() {
                    self.out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            self.out.push_str(", ");
                        }
                        self.name(a);
                    }
                    self.out.push(')');
                }
            }
        }
    }

    fn group(&mut self, ts: &[Term], sep: &str, inner: u8, paren: bool) {
        if paren {
            self.out.push('(');
        }
        for (i, t) in ts.iter().enumerate() {
            if i > 0 {
                self.out.push_str(sep);
            }
            self.term(t, inner);
        }
        if paren {
            self.out.push(')');
        }
    }
}
