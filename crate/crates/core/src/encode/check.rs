use std::collections::{BTreeSet, VecDeque};

use super::to_pi::{rtm_to_pi, rtm_to_pi_with, EncodeOptions, SpecBundle};
use super::EncodeError;
use crate::lts::{
    bb_check, disjoint_union, dpbb_check, dpbb_partition, ActionLabel, CheckResult, Verdict,
};
use crate::pi::{canonicalize, Exploration};
use crate::rtm::{reachable_lts, Reachable, Rtm};

/// A machine's reachable system next to its specification's exploration.
#[derive(Debug)]
pub struct SideBySide {
    pub machine: Reachable,
    pub bundle: SpecBundle,
    pub spec: Exploration,
}

impl SideBySide {
    pub fn complete(&self) -> bool {
        self.machine.complete && self.spec.complete
    }

    /// Divergence-preserving check, machine on the left.
    pub fn dpbb(&self) -> CheckResult {
        dpbb_check(&self.machine.lts, &self.spec.lts)
    }
}

pub fn side_by_side(
    rtm: &Rtm,
    options: &EncodeOptions,
    rtm_bound: usize,
    pi_bound: usize,
) -> Result<SideBySide, EncodeError> {
    let machine = reachable_lts(rtm, rtm_bound);
    let bundle = rtm_to_pi_with(rtm, options)?;
    let spec = bundle.explore(pi_bound);
    Ok(SideBySide {
        machine,
        bundle,
        spec,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepwiseReport {
    pub complete: bool,
    /// Related (configuration, specification state) pairs.
    pub pairs: usize,
    /// Machine steps replayed from those pairs.
    pub steps: usize,
    pub failures: Vec<String>,
}

impl StepwiseReport {
    pub fn all_matched(&self) -> bool {
        self.complete && self.failures.is_empty() && self.steps > 0
    }
}

/// For every configuration `c`, every specification state related to it and
/// every machine step `c -a-> c'`, looks for a path that stutters silently
/// inside `c`'s class, performs `a` (nothing for a silent step) and then
/// reaches, silently, a state equivalent to the encoding of `c'`.
pub fn stepwise_check(
    rtm: &Rtm,
    rtm_bound: usize,
    pi_bound: usize,
) -> Result<StepwiseReport, EncodeError> {
    let sbs = side_by_side(rtm, &EncodeOptions::default(), rtm_bound, pi_bound)?;
    let mut report = StepwiseReport {
        complete: sbs.complete(),
        ..Default::default()
    };
    if !report.complete {
        return Ok(report);
    }
    let m = &sbs.machine.lts;
    let e = &sbs.spec.lts;
    let off = m.num_states();
    let part = dpbb_partition(&disjoint_union(m, e));
    let block = |s: usize| part.block_of(s);
    let succ = e.successors();
    let spec_index = |term| sbs.spec.states.iter().position(|s| *s == term);
    for t in m.transitions() {
        let cfg = &sbs.machine.configurations[t.target];
        let target_term = canonicalize(&sbs.bundle.configuration_term(cfg)?);
        let Some(y) = spec_index(target_term) else {
            report
                .failures
                .push(format!("specification of {cfg} is not reachable"));
            continue;
        };
        let goal = block(off + y);
        let source_block = block(t.source);
        for x in (0..e.num_states()).filter(|x| block(off + x) == source_block) {
            report.steps += 1;
            if !replays(&succ, x, &t.label, |s| block(off + s), source_block, goal) {
                report.failures.push(format!(
                    "{} -{}-> {} not matched from specification state {x}",
                    sbs.machine.configurations[t.source], t.label, cfg
                ));
            }
        }
    }
    report.pairs = (0..m.num_states())
        .map(|c| {
            (0..e.num_states())
                .filter(|x| block(off + x) == block(c))
                .count()
        })
        .sum();
    Ok(report)
}

fn replays(
    succ: &[Vec<(ActionLabel, usize)>],
    start: usize,
    label: &ActionLabel,
    block: impl Fn(usize) -> usize,
    source_block: usize,
    goal: usize,
) -> bool {
    // phase 0: before the action, phase 1: after it
    let mut seen = BTreeSet::from([(start, label.is_silent())]);
    let mut queue = VecDeque::from([(start, label.is_silent())]);
    while let Some((s, done)) = queue.pop_front() {
        if done && block(s) == goal {
            return true;
        }
        for (l, t) in &succ[s] {
            let next = if l.is_silent() {
                if !done && block(*t) != source_block {
                    continue;
                }
                (*t, done)
            } else if !done && l == label {
                (*t, true)
            } else {
                continue;
            };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Verdicts of the two sides of the relabelling device: divergence-preserving
/// on the machine and its specification, and plain branching once the
/// machine's silent rules are renamed to `i` on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelabelComparison {
    pub complete: bool,
    pub original: Verdict,
    pub relabelled: Verdict,
}

pub fn relabel_commutation(
    rtm: &Rtm,
    rtm_bound: usize,
    pi_bound: usize,
) -> Result<RelabelComparison, EncodeError> {
    let renamed = rtm.relabel_internal()?;
    let a = side_by_side(rtm, &EncodeOptions::default(), rtm_bound, pi_bound)?;
    let machine = reachable_lts(&renamed, rtm_bound);
    let spec = rtm_to_pi(&renamed)?.explore(pi_bound);
    Ok(RelabelComparison {
        complete: a.complete() && machine.complete && spec.complete,
        original: a.dpbb().verdict,
        relabelled: bb_check(&machine.lts, &spec.lts).verdict,
    })
}
