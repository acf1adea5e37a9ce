use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::canon::canonicalize;
use super::defs::DefTable;
use super::semantics::{transitions, PiLabel};
use super::term::Term;
use crate::lts::{ActionLabel, Lts, Transition};

/// Reachable fragment of a term's transition system, states identified up to
/// [`canonicalize`].
#[derive(Clone, Debug)]
pub struct Exploration {
    pub lts: Lts,
    /// Canonical term of every state.
    pub states: Vec<Term>,
    /// False when the state bound cut exploration short.
    pub complete: bool,
    /// Which calculus labels were projected onto each LTS label.
    pub label_map: BTreeMap<ActionLabel, BTreeSet<PiLabel>>,
}

/// Identity-like projection: `tau` is silent, `i` the internal action and
/// every other label observable with its channel and payload.
pub fn default_projection(l: &PiLabel) -> ActionLabel {
    match l {
        PiLabel::Silent => ActionLabel::Silent,
        PiLabel::Output {
            chan,
            payload: None,
            ..
        } if chan == crate::lts::INTERNAL_TEXT => ActionLabel::Internal,
        PiLabel::Input { chan, name } => ActionLabel::input(chan, name.as_deref()),
        PiLabel::Output { chan, payload, .. } => ActionLabel::output(chan, payload.as_deref()),
    }
}

/// Breadth-first exploration visiting at most `max_states` states.
pub fn explore(
    term: &Term,
    defs: &DefTable,
    universe: &[String],
    max_states: usize,
    project: &dyn Fn(&PiLabel) -> ActionLabel,
) -> Exploration {
    let max_states = max_states.max(1);
    let start = canonicalize(term);
    let mut index: HashMap<Term, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut edges = Vec::new();
    let mut label_map: BTreeMap<ActionLabel, BTreeSet<PiLabel>> = BTreeMap::new();
    let mut complete = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for (label, next) in transitions(&states[s], defs, universe) {
            let next = canonicalize(&next);
            let target = match index.get(&next) {
                Some(t) => *t,
                None if states.len() < max_states => {
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
                None => {
                    complete = false;
                    continue;
                }
            };
            let action = project(&label);
            label_map.entry(action.clone()).or_default().insert(label);
            edges.push(Transition {
                source: s,
                label: action,
                target,
            });
        }
    }
    let lts = Lts::new(states.len(), 0, edges).expect("indices are in range");
    Exploration {
        lts,
        states,
        complete,
        label_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::parse_pi;

    fn go(src: &str, universe: &[&str], bound: usize) -> Exploration {
        let p = parse_pi(src).unwrap();
        let u: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        explore(&p.term, &p.defs, &u, bound, &default_projection)
    }

    #[test]
    fn finite_term() {
        let e = go("x(y).'y.0", &["y1", "y2"], 100);
        assert!(e.complete);
        assert_eq!(e.lts.num_states(), 4);
        assert_eq!(e.lts.num_transitions(), 4);
    }

    #[test]
    fn recursion_folds_back() {
        let e = go("def A = a.'b.A\nA", &[], 100);
        assert!(e.complete);
        assert_eq!(e.lts.num_states(), 2);
    }

    #[test]
    fn bound_is_respected() {
        let e = go("def C = 'a.(C | C)\nC", &[], 5);
        assert!(!e.complete);
        assert_eq!(e.lts.num_states(), 5);
    }

    #[test]
    fn internal_name_projects_to_internal() {
        let e = go("'i.0", &[], 10);
        assert_eq!(e.lts.transitions()[0].label, ActionLabel::Internal);
    }
}
