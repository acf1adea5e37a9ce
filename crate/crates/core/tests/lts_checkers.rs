use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rtm_pi::lts::{
    bb_check, brute_force_check, canonical_order, dpbb_check, emit_aut, parse_aut, verify_witness,
    ActionLabel, Lts, Transition,
};

fn random_lts(rng: &mut StdRng, max_states: usize, max_edges: usize) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(0..=max_edges);
    let labels = ["tau", "tau", "a", "b"];
    let triples: Vec<_> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                labels[rng.gen_range(0..labels.len())],
                rng.gen_range(0..n),
            )
        })
        .collect();
    Lts::from_triples(n, 0, triples).unwrap()
}

#[test]
fn refinement_agrees_with_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let l = random_lts(&mut rng, 6, 10);
        let r = random_lts(&mut rng, 6, 10);
        let bb = bb_check(&l, &r);
        let dp = dpbb_check(&l, &r);
        assert_eq!(
            bb.verdict,
            brute_force_check(&l, &r, false).unwrap().verdict,
            "bb\n{}\n{}",
            emit_aut(&l),
            emit_aut(&r)
        );
        assert_eq!(
            dp.verdict,
            brute_force_check(&l, &r, true).unwrap().verdict,
            "dpbb\n{}\n{}",
            emit_aut(&l),
            emit_aut(&r)
        );
        if dp.is_equivalent() {
            assert!(bb.is_equivalent());
        }
        for (res, div) in [(&bb, false), (&dp, true)] {
            match (&res.witness, &res.counterexample) {
                (Some(w), None) => verify_witness(&l, &r, w, div).unwrap(),
                (None, Some(p)) => p.verify(&l, &r).unwrap(),
                _ => panic!("result carries neither witness nor play"),
            }
        }
    }
}

#[test]
fn equivalence_laws_on_sampled_triples() {
    let mut rng = StdRng::seed_from_u64(11);
    let pool: Vec<Lts> = (0..24).map(|_| random_lts(&mut rng, 4, 6)).collect();
    for check in [bb_check, dpbb_check] {
        for a in &pool {
            assert!(check(a, a).is_equivalent());
            for b in &pool {
                let ab = check(a, b).is_equivalent();
                assert_eq!(ab, check(b, a).is_equivalent());
                if !ab {
                    continue;
                }
                for c in &pool {
                    if check(b, c).is_equivalent() {
                        assert!(check(a, c).is_equivalent());
                    }
                }
            }
        }
    }
}

#[test]
fn plays_name_the_missing_action() {
    let l = parse_aut("des (0,2,2)\n(0,\"'y1\",1)\n(0,\"'y2\",1)\n").unwrap();
    let r = parse_aut("des (0,1,2)\n(0,\"'y1\",1)\n").unwrap();
    let res = bb_check(&l, &r);
    let play = res.counterexample.unwrap();
    assert_eq!(play.opening().label, ActionLabel::output("y2", None));
    // a play checked against the wrong pair of systems must be rejected
    assert!(play.verify(&l, &l).is_err());
}

fn arb_lts() -> impl Strategy<Value = Lts> {
    (1usize..=20).prop_flat_map(|n| {
        let label = prop_oneof![
            Just("tau".to_string()),
            Just("i".to_string()),
            Just("a".to_string()),
            Just("'b".to_string()),
            Just("c d".to_string()),
        ];
        (
            Just(n),
            0..n,
            prop::collection::vec((0..n, label, 0..n), 0..40),
        )
            .prop_map(|(n, init, edges)| {
                let ts = edges.into_iter().map(|(s, l, t)| Transition {
                    source: s,
                    label: ActionLabel::parse(&l).unwrap(),
                    target: t,
                });
                Lts::new(n, init, ts).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn aut_round_trip_is_canonical_renumbering(l in arb_lts()) {
        let parsed = parse_aut(&emit_aut(&l)).unwrap();
        let order = canonical_order(&l);
        let renumbered = Lts::new(
            l.num_states(),
            order[l.initial()],
            l.transitions().iter().map(|t| Transition {
                source: order[t.source],
                label: t.label.clone(),
                target: order[t.target],
            }),
        ).unwrap();
        prop_assert_eq!(parsed, renumbered);
    }
}
