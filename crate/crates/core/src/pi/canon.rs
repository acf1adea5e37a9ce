use std::collections::BTreeMap;

use super::term::{close, open, rename, Fresh, Hint, Term};

/// Standard form modulo structural congruence: every process position is
/// `new x1..xk in (G1 | .. | Gn)` with guarded, sorted components `Gi`.
///
/// - `0` is a unit of `|` and `+`; both are associative and commutative; `+`
///   is idempotent
/// - `P | !P = !P`, `!P | !P = !P`, `!0 = 0`
/// - restrictions float to the top of their process position, unused ones
///   vanish, and the order of the remaining ones is fixed by how each name
///   is used, not by the order of the source binders
///
/// Binders are de Bruijn indices, so alpha-variants coincide.
pub fn canonicalize(t: &Term) -> Term {
    Canon::default().term(t)
}

#[derive(Default)]
struct Canon {
    fresh: Fresh,
    level: usize,
}

const SELF: &str = "%*";
const OTHER: &str = "%?";

impl Canon {
    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Nil | Term::Par(_) | Term::New { .. } => self.process(t),
            Term::Call { .. } => t.clone(),
            Term::Tau(p) => Term::tau(self.process(p)),
            Term::Output {
                chan,
                payload,
                cont,
            } => Term::output(chan.clone(), payload.clone(), self.process(cont)),
            Term::Input {
                chan,
                binder: None,
                body,
            } => Term::sync_in(chan.clone(), self.process(body)),
            Term::Input {
                chan,
                binder: Some(h),
                body,
            } => {
                let x = self.fresh.next();
                let b = self.process(&open(body, &x));
                Term::Input {
                    chan: chan.clone(),
                    binder: Some(h.clone()),
                    body: Box::new(close(&b, &x)),
                }
            }
            Term::Sum(bs) => {
                let mut items = Vec::new();
                for b in bs {
                    match self.term(b) {
                        Term::Nil => {}
                        Term::Sum(inner) => items.extend(inner),
                        other => items.push(other),
                    }
                }
                items.sort();
                items.dedup();
                collapse(items, Term::Sum)
            }
            Term::Bang(p) => match self.process(p) {
                Term::Nil => Term::Nil,
                q => Term::bang(q),
            },
        }
    }

    /// Opens restrictions and flattens parallel composition into `names` and
    /// canonical guarded `comps`.
    fn collect(&mut self, t: &Term, names: &mut Vec<(String, Hint)>, comps: &mut Vec<Term>) {
        match t {
            Term::Nil => {}
            Term::Par(ps) => ps.iter().for_each(|p| self.collect(p, names, comps)),
            Term::New { hint, body } => {
                let nu = self.fresh.next();
                let opened = open(body, &nu);
                names.push((nu, hint.clone()));
                self.collect(&opened, names, comps);
            }
            other => match self.term(other) {
                c @ (Term::Par(_) | Term::New { .. }) => self.collect(&c, names, comps),
                Term::Nil => {}
                c => comps.push(c),
            },
        }
    }

    fn process(&mut self, t: &Term) -> Term {
        let mut names = Vec::new();
        let mut comps = Vec::new();
        self.collect(t, &mut names, &mut comps);
        absorb(&mut comps);
        names.retain(|(n, _)| comps.iter().any(|c| c.mentions(n)));
        if names.is_empty() {
            return collapse(comps, Term::Par);
        }
        if names.len() > 1 {
            names = self.order(names, Term::Par(comps.clone()));
        }
        // rename to positional placeholders and re-sort at every depth
        self.level += 1;
        let placeholders: Vec<String> = (0..names.len())
            .map(|i| format!("%{}#{i}", self.level))
            .collect();
        let map: BTreeMap<String, String> = names
            .iter()
            .map(|(n, _)| n.clone())
            .zip(placeholders.iter().cloned())
            .collect();
        let mut comps: Vec<Term> = comps.iter().map(|c| self.term(&rename(c, &map))).collect();
        self.level -= 1;
        absorb(&mut comps);
        let mut out = collapse(comps, Term::Par);
        for ((_, hint), p) in names.iter().zip(&placeholders).rev() {
            out = Term::New {
                hint: hint.clone(),
                body: Box::new(close(&out, p)),
            };
        }
        out
    }

    /// Orders restricted names by colour refinement: a name's colour is the
    /// body seen with that name marked and every other name of the chain
    /// replaced by its current colour. Names still tied at the fixpoint are
    /// kept in source order.
    fn order(&mut self, names: Vec<(String, Hint)>, body: Term) -> Vec<(String, Hint)> {
        let mut colour = vec![0usize; names.len()];
        let mut classes = 1;
        loop {
            let mut keyed: Vec<((usize, Term), usize)> = Vec::with_capacity(names.len());
            for (i, (n, _)) in names.iter().enumerate() {
                let map: BTreeMap<String, String> = names
                    .iter()
                    .zip(&colour)
                    .map(|((m, _), c)| {
                        let to = if m == n {
                            SELF.to_owned()
                        } else {
                            format!("{OTHER}{c}")
                        };
                        (m.clone(), to)
                    })
                    .collect();
                keyed.push(((colour[i], self.process(&rename(&body, &map))), i));
            }
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let mut next = vec![0usize; names.len()];
            let mut c = 0;
            for k in 0..keyed.len() {
                if k > 0 && keyed[k].0 != keyed[k - 1].0 {
                    c += 1;
                }
                next[keyed[k].1] = c;
            }
            colour = next;
            if c + 1 == classes || c + 1 == names.len() {
                break;
            }
            classes = c + 1;
        }
        let mut idx: Vec<usize> = (0..names.len()).collect();
        idx.sort_by_key(|i| colour[*i]);
        idx.into_iter().map(|i| names[i].clone()).collect()
    }
}

/// Sorts components, absorbing `P` into a sibling `!P` and merging equal
/// replications.
fn absorb(items: &mut Vec<Term>) {
    let banged: Vec<Term> = items
        .iter()
        .filter_map(|t| match t {
            Term::Bang(p) => Some((**p).clone()),
            _ => None,
        })
        .collect();
    if !banged.is_empty() {
        items.retain(|t| !banged.contains(t));
    }
    items.sort();
    items.dedup_by(|a, b| matches!(a, Term::Bang(_)) && a == b);
}

fn collapse(mut items: Vec<Term>, wrap: fn(Vec<Term>) -> Term) -> Term {
    match items.len() {
        0 => Term::Nil,
        1 => items.pop().unwrap(),
        _ => wrap(items),
    }
}
