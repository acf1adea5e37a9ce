//! Concrete syntax:
//!
//! ```text
//! P ::= 0 | a(x).P | a.P | 'a<x>.P | 'a.P | tau.P | P | P | P + P
//!     | new x, y in P | !P | Id(a, b) | Id | (P)
//! def Id(x, y) = P
//! family Name key=value ...
//! ```
//!
//! `|` binds weakest, then `+`, then prefixes. `#` starts a comment.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::defs::{DefFamily, DefTable, Definition};
use super::term::{Hint, Name, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PiError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unbound identifier `{name}`")]
    Unbound {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: `{name}` expects {expected} argument(s), got {found}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: usize,
        found: usize,
    },
}

/// Parsed definitions plus the main term.
#[derive(Clone, Debug)]
pub struct PiProgram {
    pub defs: DefTable,
    pub term: Term,
}

/// Builds a definition family from a `family` directive.
pub type FamilyResolver<'a> =
    &'a dyn Fn(&str, &BTreeMap<String, String>) -> Result<Arc<dyn DefFamily>, String>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@'
}

fn lex(text: &str) -> Result<Vec<Spanned>, PiError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap();
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: li + 1,
                    col,
                });
            } else if "().'<>|+!,=".contains(c) {
                out.push(Spanned {
                    tok: Tok::Sym(c),
                    line: li + 1,
                    col,
                });
                i += 1;
            } else {
                return Err(PiError::Syntax {
                    line: li + 1,
                    col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    let line = text.lines().count().max(1);
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["def", "new", "in", "tau", "family"];

struct CallSite {
    name: String,
    arity: usize,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
    calls: Vec<CallSite>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PiError> {
        let (line, col) = self.here();
        Err(PiError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PiError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", self.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String, PiError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected a name, found {}", self.describe())),
        }
    }

    fn name(&mut self) -> Result<Name, PiError> {
        let s = self.ident()?;
        Ok(self.resolve(&s))
    }

    fn resolve(&self, s: &str) -> Name {
        match self.scope.iter().rev().position(|b| b == s) {
            Some(i) => Name::Bound(i as u32),
            None => Name::Free(s.to_owned()),
        }
    }

    fn with_binder<T>(
        &mut self,
        name: String,
        f: impl FnOnce(&mut Self) -> Result<T, PiError>,
    ) -> Result<T, PiError> {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn process(&mut self) -> Result<Term, PiError> {
        let mut parts = vec![self.sum()?];
        while self.eat('|') {
            parts.push(self.sum()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Term::Par(parts)
        })
    }

    fn sum(&mut self) -> Result<Term, PiError> {
        let mut parts = vec![self.prefix()?];
        while self.eat('+') {
            parts.push(self.prefix()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Term::Sum(parts)
        })
    }

    fn continuation(&mut self) -> Result<Term, PiError> {
        self.expect('.')?;
        self.prefix()
    }

    fn prefix(&mut self) -> Result<Term, PiError> {
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.pos += 1;
                let p = self.process()?;
                self.expect(')')?;
                Ok(p)
            }
            Tok::Sym('!') => {
                self.pos += 1;
                Ok(Term::bang(self.prefix()?))
            }
            Tok::Sym('\'') => {
                self.pos += 1;
                let chan = self.name()?;
                let payload = if self.eat('<') {
                    let p = self.name()?;
                    self.expect('>')?;
                    Some(p)
                } else {
                    None
                };
                let cont = self.continuation()?;
                Ok(Term::output(chan, payload, cont))
            }
            Tok::Ident(s) if s == "0" => {
                self.pos += 1;
                Ok(Term::Nil)
            }
            Tok::Ident(s) if s == "tau" => {
                self.pos += 1;
                Ok(Term::tau(self.continuation()?))
            }
            Tok::Ident(s) if s == "new" => {
                self.pos += 1;
                let mut names = vec![self.ident()?];
                while self.eat(',') {
                    names.push(self.ident()?);
                }
                if !self.is_keyword("in") {
                    return self.error(format!("expected `in`, found {}", self.describe()));
                }
                self.pos += 1;
                self.restriction(&names)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => self.name_led(s),
            _ => self.error(format!("expected a process, found {}", self.describe())),
        }
    }

    fn restriction(&mut self, names: &[String]) -> Result<Term, PiError> {
        match names.split_first() {
            None => self.prefix(),
            Some((first, rest)) => {
                let body = self.with_binder(first.clone(), |p| p.restriction(rest))?;
                Ok(Term::New {
                    hint: Hint(first.clone()),
                    body: Box::new(body),
                })
            }
        }
    }

    /// `a(x).P`, `a.P`, `Id(args)` or `Id`.
    fn name_led(&mut self, s: String) -> Result<Term, PiError> {
        let (line, col) = self.here();
        self.pos += 1;
        if self.eat('.') {
            let chan = self.resolve(&s);
            return Ok(Term::sync_in(chan, self.prefix()?));
        }
        if *self.peek() != Tok::Sym('(') {
            return Ok(self.call(s, vec![], line, col));
        }
        // `a(x).P` has exactly one name in parentheses followed by `.`
        let is_input = matches!(
            (self.peek_at(1), self.peek_at(2), self.peek_at(3)),
            (Tok::Ident(_), Tok::Sym(')'), Tok::Sym('.'))
        );
        self.pos += 1;
        if is_input {
            let chan = self.resolve(&s);
            let x = self.ident()?;
            self.expect(')')?;
            self.expect('.')?;
            let body = self.with_binder(x.clone(), |p| p.prefix())?;
            return Ok(Term::Input {
                chan,
                binder: Some(Hint(x)),
                body: Box::new(body),
            });
        }
        let mut args = Vec::new();
        if !self.eat(')') {
            args.push(self.name()?);
            while self.eat(',') {
                args.push(self.name()?);
            }
            self.expect(')')?;
        }
        Ok(self.call(s, args, line, col))
    }

    fn call(&mut self, def: String, args: Vec<Name>, line: usize, col: usize) -> Term {
        self.calls.push(CallSite {
            name: def.clone(),
            arity: args.len(),
            line,
            col,
        });
        Term::Call { def, args }
    }

    fn definition(&mut self) -> Result<(String, Definition), PiError> {
        self.pos += 1;
        let name = self.ident()?;
        let mut params = Vec::new();
        if self.eat('(') && !self.eat(')') {
            params.push(self.ident()?);
            while self.eat(',') {
                params.push(self.ident()?);
            }
            self.expect(')')?;
        }
        self.expect('=')?;
        let body = self.process()?;
        Ok((name, Definition { params, body }))
    }

    fn family(&mut self) -> Result<(String, BTreeMap<String, String>), PiError> {
        self.pos += 1;
        let name = self.ident()?;
        let mut args = BTreeMap::new();
        while matches!(self.peek_at(1), Tok::Sym('=')) {
            let key = self.ident()?;
            self.expect('=')?;
            let value = self.ident()?;
            args.insert(key, value);
        }
        Ok((name, args))
    }
}

fn no_families(name: &str, _: &BTreeMap<String, String>) -> Result<Arc<dyn DefFamily>, String> {
    Err(format!("unknown definition family `{name}`"))
}

/// Parses a program without definition families.
pub fn parse_pi(text: &str) -> Result<PiProgram, PiError> {
    parse_pi_with(text, &no_families)
}

/// Parses definitions, family directives and one main term.
pub fn parse_pi_with(text: &str, families: FamilyResolver<'_>) -> Result<PiProgram, PiError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        calls: Vec::new(),
    };
    let mut defs = DefTable::new();
    loop {
        if p.is_keyword("def") {
            let (line, col) = p.here();
            let (name, def) = p.definition()?;
            if defs.lookup(&name).is_some() {
                return Err(PiError::Syntax {
                    line,
                    col,
                    message: format!("`{name}` is defined twice"),
                });
            }
            defs.insert(&name, def);
        } else if p.is_keyword("family") {
            let (line, col) = p.here();
            let (name, args) = p.family()?;
            let fam =
                families(&name, &args).map_err(|message| PiError::Syntax { line, col, message })?;
            defs.add_family(fam);
        } else {
            break;
        }
    }
    let term = p.process()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.describe()));
    }
    check_calls(&p.calls, &defs)?;
    Ok(PiProgram { defs, term })
}

/// Parses a single term whose calls refer to `defs`.
pub fn parse_term(text: &str, defs: &DefTable) -> Result<Term, PiError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        calls: Vec::new(),
    };
    let term = p.process()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.describe()));
    }
    check_calls(&p.calls, defs)?;
    Ok(term)
}

fn check_calls(calls: &[CallSite], defs: &DefTable) -> Result<(), PiError> {
    for c in calls {
        match defs.arity(&c.name) {
            None => {
                return Err(PiError::Unbound {
                    line: c.line,
                    col: c.col,
                    name: c.name.clone(),
                })
            }
            Some(n) if n != c.arity => {
                return Err(PiError::Arity {
                    line: c.line,
                    col: c.col,
                    name: c.name.clone(),
                    expected: n,
                    found: c.arity,
                })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(s: &str) -> Term {
        parse_pi(s).unwrap().term
    }

    #[test]
    fn prefixes_and_binders() {
        let t = term("x(y).'y.0");
        assert_eq!(
            t,
            Term::input(
                Name::free("x"),
                "y",
                Term::output(Name::Bound(0), None, Term::Nil)
            )
        );
        assert_eq!(term("x(z).'z.0"), t);
        assert_eq!(term("new a in 'a.0"), term("new b in 'b.0"));
    }

    #[test]
    fn precedence() {
        let t = term("a.0 + b.0 | c.0");
        match t {
            Term::Par(ps) => {
                assert!(matches!(ps[0], Term::Sum(_)));
                assert_eq!(ps.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(term("!a.0 | b.0"), Term::Par(_)));
    }

    #[test]
    fn definitions_and_calls() {
        let p = parse_pi("def A(x) = 'x.A(x)\ndef B = A(b)\nB").unwrap();
        assert_eq!(p.defs.arity("A"), Some(1));
        assert_eq!(
            p.term,
            Term::Call {
                def: "B".into(),
                args: vec![]
            }
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_pi("Foo(a)"),
            Err(PiError::Unbound {
                line: 1,
                col: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_pi("def A(x, y) = 0\nA(a)"),
            Err(PiError::Arity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_pi("'a<b.0"),
            Err(PiError::Syntax {
                line: 1,
                col: 5,
                ..
            })
        ));
        assert!(matches!(parse_pi("a(x).0 ;"), Err(PiError::Syntax { .. })));
        assert!(matches!(
            parse_pi("family Tape data=2\n0"),
            Err(PiError::Syntax { .. })
        ));
    }

    #[test]
    fn multi_restriction_nests_in_order() {
        let t = term("new a, b in 'a<b>.0");
        let expected = Term::new_name(
            "a",
            Term::new_name(
                "b",
                Term::output(Name::Bound(1), Some(Name::Bound(0)), Term::Nil),
            ),
        );
        assert_eq!(t, expected);
    }
}
