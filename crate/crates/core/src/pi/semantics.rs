//! Early labelled semantics. Internally inputs are computed as abstractions
//! over a fresh placeholder and instantiated at the top level, once per name
//! in the input universe.

use std::fmt;

use super::defs::DefTable;
use super::term::{open, rename_one, Fresh, Hint, Name, Term};

/// Maximum number of nested definition unfoldings while deriving one
/// transition. Guards against unguarded recursion such as `def A = A`.
pub const UNFOLD_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PiLabel {
    Silent,
    Input {
        chan: String,
        name: Option<String>,
    },
    /// `bound` marks scope extrusion of a restricted payload.
    Output {
        chan: String,
        payload: Option<String>,
        bound: bool,
    },
}

impl fmt::Display for PiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiLabel::Silent => f.write_str("tau"),
            PiLabel::Input { chan, name: None } => write!(f, "{chan}"),
            PiLabel::Input {
                chan,
                name: Some(n),
            } => write!(f, "{chan}({n})"),
            PiLabel::Output {
                chan,
                payload: None,
                ..
            } => write!(f, "'{chan}"),
            PiLabel::Output {
                chan,
                payload: Some(p),
                bound,
            } => {
                if *bound {
                    write!(f, "'{chan}<new {p}>")
                } else {
                    write!(f, "'{chan}<{p}>")
                }
            }
        }
    }
}

enum Step {
    Tau(Term),
    Out {
        chan: String,
        payload: Option<String>,
        /// Hint of the payload's restriction when it is carried out of scope.
        extruded: Option<Hint>,
        cont: Term,
    },
    /// `param` is a placeholder occurring free in `body`.
    In {
        chan: String,
        param: Option<String>,
        body: Term,
    },
}

struct Deriver<'a> {
    defs: &'a DefTable,
    fresh: Fresh,
}

fn replace(ps: &[Term], i: usize, with: Term) -> Vec<Term> {
    let mut v = ps.to_vec();
    v[i] = with;
    v
}

fn replace2(ps: &[Term], i: usize, a: Term, j: usize, b: Term) -> Vec<Term> {
    let mut v = ps.to_vec();
    v[i] = a;
    v[j] = b;
    v
}

/// Wraps `body` in restrictions of the extruded names once communication
/// closes their scope again.
fn communicate(out_payload: &Option<String>, extruded: &Option<Hint>, built: Term) -> Term {
    match (out_payload, extruded) {
        (Some(v), Some(h)) => built.restrict_as(v, h),
        _ => built,
    }
}

impl Deriver<'_> {
    fn steps(&mut self, t: &Term, unfold: usize) -> Vec<Step> {
        match t {
            Term::Nil => vec![],
            Term::Tau(p) => vec![Step::Tau((**p).clone())],
            Term::Output {
                chan: Name::Free(c),
                payload,
                cont,
            } => {
                let payload = match payload {
                    None => None,
                    Some(Name::Free(p)) => Some(p.clone()),
                    Some(Name::Bound(_)) => return vec![],
                };
                vec![Step::Out {
                    chan: c.clone(),
                    payload,
                    extruded: None,
                    cont: (**cont).clone(),
                }]
            }
            Term::Input {
                chan: Name::Free(c),
                binder,
                body,
            } => match binder {
                None => vec![Step::In {
                    chan: c.clone(),
                    param: None,
                    body: (**body).clone(),
                }],
                Some(_) => {
                    let rho = self.fresh.next();
                    vec![Step::In {
                        chan: c.clone(),
                        body: open(body, &rho),
                        param: Some(rho),
                    }]
                }
            },
            // a dangling index as subject cannot fire
            Term::Output { .. } | Term::Input { .. } => vec![],
            Term::Sum(bs) => bs.iter().flat_map(|b| self.steps(b, unfold)).collect(),
            Term::Par(ps) => self.par_steps(ps, unfold),
            Term::New { hint, body } => {
                let nu = self.fresh.next();
                let opened = open(body, &nu);
                let mut out = Vec::new();
                for s in self.steps(&opened, unfold) {
                    match s {
                        Step::Tau(p) => out.push(Step::Tau(p.restrict_as(&nu, hint))),
                        Step::Out { ref chan, .. } | Step::In { ref chan, .. } if *chan == nu => {}
                        Step::Out {
                            chan,
                            payload,
                            extruded,
                            cont,
                        } => {
                            if payload.as_deref() == Some(nu.as_str()) {
                                out.push(Step::Out {
                                    chan,
                                    payload,
                                    extruded: Some(hint.clone()),
                                    cont,
                                });
                            } else {
                                out.push(Step::Out {
                                    chan,
                                    payload,
                                    extruded,
                                    cont: cont.restrict_as(&nu, hint),
                                });
                            }
                        }
                        Step::In { chan, param, body } => out.push(Step::In {
                            chan,
                            param,
                            body: body.restrict_as(&nu, hint),
                        }),
                    }
                }
                out
            }
            Term::Bang(p) => {
                let bang = t.clone();
                let inner = self.steps(p, unfold);
                let mut out = Vec::new();
                // two copies communicating
                for o in &inner {
                    let Step::Out {
                        chan: oc,
                        payload,
                        extruded,
                        cont,
                    } = o
                    else {
                        continue;
                    };
                    // the receiving copy is derived afresh so its
                    // placeholder names differ from the sender's
                    for i in self.steps(p, unfold) {
                        if let Some(res) = self.sync(oc, payload, extruded, cont, &i, |c, b| {
                            Term::Par(vec![c, b, bang.clone()])
                        }) {
                            out.push(Step::Tau(res));
                        }
                    }
                }
                for s in inner {
                    out.push(match s {
                        Step::Tau(q) => Step::Tau(Term::Par(vec![q, bang.clone()])),
                        Step::Out {
                            chan,
                            payload,
                            extruded,
                            cont,
                        } => Step::Out {
                            chan,
                            payload,
                            extruded,
                            cont: Term::Par(vec![cont, bang.clone()]),
                        },
                        Step::In { chan, param, body } => Step::In {
                            chan,
                            param,
                            body: Term::Par(vec![body, bang.clone()]),
                        },
                    });
                }
                out
            }
            Term::Call { def, args } => {
                if unfold >= UNFOLD_LIMIT {
                    return vec![];
                }
                let Some(d) = self.defs.lookup(def) else {
                    return vec![];
                };
                let Some(args) = args
                    .iter()
                    .map(|a| a.as_free().map(str::to_owned))
                    .collect::<Option<Vec<_>>>()
                else {
                    return vec![];
                };
                if args.len() != d.params.len() {
                    return vec![];
                }
                let body = d.instantiate(&args);
                self.steps(&body, unfold + 1)
            }
        }
    }

    /// Result of an output meeting an input, or `None` when they do not
    /// match. `build` combines sender and receiver continuations.
    fn sync(
        &self,
        chan: &str,
        payload: &Option<String>,
        extruded: &Option<Hint>,
        cont: &Term,
        input: &Step,
        build: impl FnOnce(Term, Term) -> Term,
    ) -> Option<Term> {
        let Step::In {
            chan: ic,
            param,
            body,
        } = input
        else {
            return None;
        };
        if ic != chan {
            return None;
        }
        let received = match (payload, param) {
            (None, None) => body.clone(),
            (Some(v), Some(rho)) => rename_one(body, rho, v),
            _ => return None,
        };
        Some(communicate(
            payload,
            extruded,
            build(cont.clone(), received),
        ))
    }

    fn par_steps(&mut self, ps: &[Term], unfold: usize) -> Vec<Step> {
        let per: Vec<Vec<Step>> = ps.iter().map(|p| self.steps(p, unfold)).collect();
        let mut out = Vec::new();
        for (i, si) in per.iter().enumerate() {
            for o in si {
                let Step::Out {
                    chan,
                    payload,
                    extruded,
                    cont,
                } = o
                else {
                    continue;
                };
                for (j, sj) in per.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for inp in sj {
                        if let Some(res) = self.sync(chan, payload, extruded, cont, inp, |c, b| {
                            Term::Par(replace2(ps, i, c, j, b))
                        }) {
                            out.push(Step::Tau(res));
                        }
                    }
                }
            }
        }
        for (i, si) in per.into_iter().enumerate() {
            for s in si {
                out.push(match s {
                    Step::Tau(q) => Step::Tau(Term::Par(replace(ps, i, q))),
                    Step::Out {
                        chan,
                        payload,
                        extruded,
                        cont,
                    } => Step::Out {
                        chan,
                        payload,
                        extruded,
                        cont: Term::Par(replace(ps, i, cont)),
                    },
                    Step::In { chan, param, body } => Step::In {
                        chan,
                        param,
                        body: Term::Par(replace(ps, i, body)),
                    },
                });
            }
        }
        out
    }
}

/// Smallest `@k` not free in `t`, used to name extruded scopes.
fn extrusion_name(t: &Term) -> String {
    let free = t.free_names();
    (1..)
        .map(|k| format!("@{k}"))
        .find(|s| !free.contains(s))
        .unwrap()
}

/// All transitions of a closed term. Inputs with a parameter are offered once
/// per name in `universe`; extruded names become `@k`.
pub fn transitions(t: &Term, defs: &DefTable, universe: &[String]) -> Vec<(PiLabel, Term)> {
    let mut d = Deriver {
        defs,
        fresh: Fresh::default(),
    };
    let mut out = Vec::new();
    for s in d.steps(t, 0) {
        match s {
            Step::Tau(p) => out.push((PiLabel::Silent, p)),
            Step::Out {
                chan,
                payload,
                extruded: None,
                cont,
            } => out.push((
                PiLabel::Output {
                    chan,
                    payload,
                    bound: false,
                },
                cont,
            )),
            Step::Out {
                chan,
                payload,
                extruded: Some(_),
                cont,
            } => {
                let hidden = payload.expect("extruded outputs carry a payload");
                let visible = extrusion_name(t);
                out.push((
                    PiLabel::Output {
                        chan,
                        payload: Some(visible.clone()),
                        bound: true,
                    },
                    rename_one(&cont, &hidden, &visible),
                ));
            }
            Step::In {
                chan,
                param: None,
                body,
            } => out.push((PiLabel::Input { chan, name: None }, body)),
            Step::In {
                chan,
                param: Some(rho),
                body,
            } => {
                for u in universe {
                    out.push((
                        PiLabel::Input {
                            chan: chan.clone(),
                            name: Some(u.clone()),
                        },
                        rename_one(&body, &rho, u),
                    ));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::{canonicalize, parse_pi};

    fn run(src: &str, universe: &[&str]) -> Vec<(String, Term)> {
        let p = parse_pi(src).unwrap();
        let u: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        let mut out: Vec<(String, Term)> = transitions(&p.term, &p.defs, &u)
            .into_iter()
            .map(|(l, t)| (l.to_string(), canonicalize(&t)))
            .collect();
        out.dedup();
        out
    }

    fn term(src: &str) -> Term {
        canonicalize(&parse_pi(src).unwrap().term)
    }

    #[test]
    fn early_input_per_universe_name() {
        let ts = run("x(y).'y.0", &["y1", "y2"]);
        assert_eq!(
            ts,
            vec![
                ("x(y1)".to_string(), term("'y1.0")),
                ("x(y2)".to_string(), term("'y2.0")),
            ]
        );
    }

    #[test]
    fn communication_substitutes() {
        let ts = run("'a<n>.0 | a(z).'z.0", &[]);
        assert!(ts.contains(&("tau".to_string(), term("'n.0"))));
        assert!(ts.contains(&("'a<n>".to_string(), term("a(z).'z.0"))));
    }

    #[test]
    fn restricted_channel_is_silent() {
        assert!(run("new a in 'a.0", &["u"]).is_empty());
        assert!(run("new a in a(x).0", &["u"]).is_empty());
    }

    #[test]
    fn scope_extrusion() {
        let ts = run("new a in 'b<a>.a.0", &[]);
        assert_eq!(ts, vec![("'b<new @1>".to_string(), term("@1.0"))]);
        // communication closes the scope again
        let ts = run("(new a in 'b<a>.a.0) | b(x).'x.0", &[]);
        assert!(ts.contains(&("tau".to_string(), term("new a in (a.0 | 'a.0)"))));
    }

    #[test]
    fn replication_acts_and_communicates() {
        let ts = run("!(a.0 + 'a.0)", &[]);
        let labels: Vec<&str> = ts.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["tau", "a", "'a"]);
        assert_eq!(ts[0].1, term("!(a.0 + 'a.0)"));
    }

    #[test]
    fn bang_and_copy_agree() {
        // !P | P and !P have the same transitions up to canonical form
        let a = run("!x(y).'y.0 | x(y).'y.0", &["u"]);
        let b = run("!x(y).'y.0", &["u"]);
        assert_eq!(a, b);
    }

    #[test]
    fn unguarded_recursion_terminates() {
        assert!(run("def A = A\nA", &[]).is_empty());
        let ts = run("def A = 'a.A\nA", &[]);
        assert_eq!(ts.len(), 1);
    }

    #[test]
    fn alpha_variants_have_same_transitions() {
        assert_eq!(
            run("new q in ('q<b>.0 | q(z).'z.0)", &["u"]),
            run("new r in ('r<b>.0 | r(w).'w.0)", &["u"])
        );
    }
}
