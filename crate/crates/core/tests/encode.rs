use std::fs;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rtm_pi::encode::{
    lazy_rule_oracle, relabel_commutation, resolve_family, rtm_to_pi, rtm_to_pi_with, side_by_side,
    stepwise_check, ts_to_rtm, EncodeError, EncodeOptions, FinTs,
};
use rtm_pi::lts::{bb_check, dpbb_check, mark_divergence, parse_aut, ActionLabel, Lts, Verdict};
use rtm_pi::pi::{canonicalize, parse_pi_with, pretty};
use rtm_pi::rtm::{parse_rtm, reachable_lts, triggers, Rtm, Trigger};

const CORPUS: [&str; 5] = ["deadlock", "parity", "tau_loop", "mt_cyclic", "nondet"];
const BOUND: usize = 50_000;

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn machine(name: &str) -> Rtm {
    parse_rtm(&fs::read_to_string(corpus_path(&format!("{name}.rtm"))).unwrap()).unwrap()
}

#[test]
fn corpus_specifications_are_equivalent() {
    for name in CORPUS {
        let sbs = side_by_side(&machine(name), &EncodeOptions::default(), BOUND, BOUND).unwrap();
        assert!(sbs.complete(), "{name}");
        let res = sbs.dpbb();
        assert_eq!(res.verdict, Verdict::Equivalent, "{name}");
    }
}

#[test]
fn one_rule_machine_has_six_step_protocol() {
    let m =
        parse_rtm("states: p q\ninitial: p\ndata: _ 1\nactions: a\nrule: p a _ / 1 R q\n").unwrap();
    let e = rtm_to_pi(&m).unwrap().explore(1000);
    assert!(e.complete);
    let labels: Vec<String> = e
        .lts
        .transitions()
        .iter()
        .map(|t| t.label.to_string())
        .collect();
    // state trigger, datum trigger, a, write, decode, move, read, then the
    // next state's trigger finds no handler
    assert_eq!(labels, ["tau", "tau", "a", "tau", "tau", "tau", "tau"]);
    assert!(bb_check(&reachable_lts(&m, 10).lts, &e.lts).is_equivalent());
}

#[test]
fn handler_residue_is_literal() {
    let m = parse_rtm("states: s t\ninitial: s\ndata: _ d e\nactions: a\nrule: s a d / e L t\n")
        .unwrap();
    let src = rtm_to_pi(&m).unwrap().source();
    assert!(
        src.contains("'a.'write<d_e>.'mvL.read(f).'st_t.'f.0"),
        "{src}"
    );
}

#[test]
fn zero_rule_machine_deadlocks_after_kickoff() {
    let m = machine("deadlock");
    let e = rtm_to_pi(&m).unwrap().explore(100);
    assert!(e.complete);
    assert_eq!(e.lts.num_transitions(), 0);
    assert!(bb_check(&reachable_lts(&m, 10).lts, &e.lts).is_equivalent());
}

#[test]
fn source_round_trips_through_parser() {
    for name in CORPUS {
        let b = rtm_to_pi(&machine(name)).unwrap();
        let p = parse_pi_with(&b.source(), &resolve_family).unwrap();
        assert_eq!(canonicalize(&p.term), canonicalize(&b.term), "{name}");
    }
}

#[test]
fn name_collisions_are_reported() {
    let m = parse_rtm("states: a-b a_b\ninitial: a-b\ndata: _\n").unwrap();
    assert!(matches!(
        rtm_to_pi(&m),
        Err(EncodeError::NameCollision { .. })
    ));
}

#[test]
fn dropping_a_handler_breaks_equivalence() {
    let m = machine("parity");
    for k in 0..m.rules().len() {
        let opts = EncodeOptions { omit_rule: Some(k) };
        let sbs = side_by_side(&m, &opts, BOUND, BOUND).unwrap();
        let res = sbs.dpbb();
        assert_eq!(res.verdict, Verdict::Inequivalent, "rule {k}");
        res.counterexample
            .unwrap()
            .verify(&sbs.machine.lts, &sbs.spec.lts)
            .unwrap();
    }
}

#[test]
fn stepwise_replay_covers_every_step() {
    for name in CORPUS {
        let r = stepwise_check(&machine(name), BOUND, BOUND).unwrap();
        assert!(
            r.complete && r.failures.is_empty(),
            "{name}: {:?}",
            r.failures
        );
        if name != "deadlock" {
            assert!(r.steps > 0, "{name}");
        }
    }
}

#[test]
fn divergence_only_where_expected() {
    for name in CORPUS {
        let e = rtm_to_pi(&machine(name)).unwrap().explore(BOUND);
        let divergent = !mark_divergence(&e.lts).is_empty();
        assert_eq!(divergent, name == "tau_loop", "{name}");
    }
}

#[test]
fn relabelling_device_agrees() {
    for name in CORPUS {
        let r = relabel_commutation(&machine(name), BOUND, BOUND).unwrap();
        assert!(r.complete);
        assert_eq!(r.original, r.relabelled, "{name}");
    }
}

#[test]
fn configuration_specifications_match_reachable_states() {
    let m = machine("mt_cyclic");
    let b = rtm_to_pi(&m).unwrap();
    let e = b.explore(BOUND);
    for c in reachable_lts(&m, 100).configurations {
        let t = canonicalize(&b.configuration_term(&c).unwrap());
        assert!(e.states.contains(&t), "{c}: {}", pretty(&t));
    }
}

fn random_ts(rng: &mut StdRng) -> Lts {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(0..=10);
    let labels = ["a", "b", "tau"];
    let triples: Vec<_> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                labels[rng.gen_range(0..3)],
                rng.gen_range(0..n),
            )
        })
        .collect();
    Lts::from_triples(n, 0, triples).unwrap()
}

#[test]
fn constructed_machines_are_equivalent_to_their_systems() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..25 {
        let ts = random_ts(&mut rng);
        let m = ts_to_rtm(&FinTs::with_auto_numbering(ts.clone()));
        let r = reachable_lts(&m, 10_000);
        assert!(r.complete);
        assert!(dpbb_check(&r.lts, &ts).is_equivalent());
    }
    let cyc = parse_aut(&fs::read_to_string(corpus_path("cycle3.aut")).unwrap()).unwrap();
    let m = ts_to_rtm(&FinTs::with_auto_numbering(cyc));
    assert_eq!(m, machine("mt_cyclic"));
}

#[test]
fn oracle_agrees_with_construction() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut ts = random_ts(&mut rng);
    while ts.num_states() != 4 {
        ts = random_ts(&mut rng);
    }
    let fin = FinTs::with_auto_numbering(ts);
    let m = ts_to_rtm(&fin);
    let oracle = lazy_rule_oracle(fin);
    let mut queried = triggers(&m).all;
    queried.insert(Trigger {
        state: "t".into(),
        datum: "99".into(),
    });
    for trig in queried {
        let direct: std::collections::BTreeSet<_> =
            m.rules_for(&trig.state, &trig.datum).cloned().collect();
        assert_eq!(oracle.rules_for(&trig), direct, "{trig:?}");
    }
}

#[test]
fn internal_label_projects_through() {
    let m = machine("tau_loop").relabel_internal().unwrap();
    let e = rtm_to_pi(&m).unwrap().explore(1000);
    assert!(e.lts.labels().contains(&ActionLabel::Internal));
}

#[test]
fn explicit_options_default_matches() {
    let m = machine("nondet");
    let a = rtm_to_pi(&m).unwrap();
    let b = rtm_to_pi_with(&m, &EncodeOptions::default()).unwrap();
    assert_eq!(a.term, b.term);
}
