use std::collections::BTreeSet;

use proptest::prelude::*;
use rtm_pi::encode::resolve_family;
use rtm_pi::lts::{dpbb_check, emit_aut};
use rtm_pi::pi::{
    canonicalize, default_projection, explore, parse_pi, parse_pi_with, pretty, transitions,
    DefTable, Name, PiError, PiLabel, Term,
};

fn term(src: &str) -> Term {
    parse_pi(src).unwrap().term
}

fn universe(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Transitions with canonical targets.
fn moves(t: &Term, u: &[String]) -> BTreeSet<(PiLabel, Term)> {
    transitions(t, &DefTable::default(), u)
        .into_iter()
        .map(|(l, p)| (l, canonicalize(&p)))
        .collect()
}

#[test]
fn echo_process_parses_to_input_then_output() {
    let t = term("x(y).'y.0");
    let Term::Input { chan, binder, body } = &t else {
        panic!("{t:?}")
    };
    assert_eq!(*chan, Name::free("x"));
    assert!(binder.is_some());
    assert_eq!(
        **body,
        Term::Output {
            chan: Name::Bound(0),
            payload: None,
            cont: Box::new(Term::Nil)
        }
    );
    assert_eq!(term("0"), Term::Nil);
}

#[test]
fn unknown_definition_is_rejected() {
    assert!(matches!(
        parse_pi("Tape(d1,d2)"),
        Err(PiError::Unbound { .. })
    ));
    assert!(matches!(
        parse_pi("def A(x) = 'x.0\nA(a, b)"),
        Err(PiError::Arity { .. })
    ));
    assert!(matches!(parse_pi("a(.0"), Err(PiError::Syntax { .. })));
}

#[test]
fn pretty_then_parse_is_identity_up_to_alpha() {
    for src in [
        "x(y).'y.0",
        "new a, b in ('a<b>.0 | b(z).'z.0) | !c.tau.0",
        "def T(p, q) = 'p<q>.T(q, p)\nnew n in T(n, m)",
        "a.0 + 'b<c>.0 + tau.0",
        "new x in x(x).'x.0",
    ] {
        let p = parse_pi(src).unwrap();
        let again = parse_pi(&rtm_pi::pi::pretty_program(&p.defs, &p.term)).unwrap();
        assert_eq!(again.term, p.term, "{src}");
    }
}

#[test]
fn early_input_instantiates_every_universe_name() {
    let u = universe(&["y1", "y2"]);
    let got = moves(&term("x(y).'y.0"), &u);
    let want: BTreeSet<_> = ["y1", "y2"]
        .iter()
        .map(|n| {
            (
                PiLabel::Input {
                    chan: "x".into(),
                    name: Some(n.to_string()),
                },
                term(&format!("'{n}.0")),
            )
        })
        .collect();
    assert_eq!(got, want);
}

#[test]
fn communication_and_restriction() {
    let u = universe(&["n"]);
    let got = moves(&term("'a<n>.0 | a(z).'z.0"), &u);
    assert!(got.contains(&(PiLabel::Silent, term("'n.0"))));
    assert!(moves(&term("new a in 'a.0"), &u).is_empty());
}

#[test]
fn replication_law_preserves_transitions() {
    let u = universe(&["a", "b"]);
    for p in ["a(x).'x.0", "'a.b.0", "tau.'a<b>.0"] {
        let banged = term(&format!("!{p}"));
        let both = term(&format!("!{p} | {p}"));
        assert_eq!(canonicalize(&both), canonicalize(&banged), "{p}");
        assert_eq!(moves(&both, &u), moves(&banged, &u), "{p}");
    }
}

#[test]
fn canonical_examples() {
    assert_eq!(
        canonicalize(&term("0 | 'a.b.0")),
        canonicalize(&term("'a.b.0"))
    );
    assert_eq!(canonicalize(&term("new a in 0")), Term::Nil);
}

#[test]
fn alpha_variants_coincide() {
    let pairs = [
        ("new a in ('a.0 | x(y).'y.0)", "new b in ('b.0 | x(z).'z.0)"),
        ("new a, b in 'a<b>.b.0", "new c, d in 'c<d>.d.0"),
        ("x(y).new z in 'y<z>.0", "x(w).new v in 'w<v>.0"),
    ];
    for (l, r) in pairs {
        assert_eq!(canonicalize(&term(l)), canonicalize(&term(r)), "{l} / {r}");
    }
}

#[test]
fn small_explorations() {
    let run = |src: &str| {
        let p = parse_pi(src).unwrap();
        explore(&p.term, &p.defs, &[], 100, &default_projection)
    };
    let e = run("0");
    assert!(e.complete);
    assert_eq!((e.lts.num_states(), e.lts.num_transitions()), (1, 0));
    let e = run("'a.0");
    assert!(e.complete);
    assert_eq!((e.lts.num_states(), e.lts.num_transitions()), (2, 1));
    assert_eq!(e.lts.transitions()[0].label.to_string(), "'a");
    // an ever-growing process is cut off by the bound
    let e = run("def C = 'a.(C | C)\nC");
    assert!(!e.complete);
    assert_eq!(e.lts.num_states(), 100);
}

#[test]
fn exploration_is_deterministic() {
    let src = "new c in ('a<c>.c.0 | 'c.0) | !b(x).'x.0";
    let p = parse_pi(src).unwrap();
    let u = universe(&["a", "b", "n"]);
    let one = explore(&p.term, &p.defs, &u, 500, &default_projection);
    let two = explore(&p.term, &p.defs, &u, 500, &default_projection);
    assert_eq!(emit_aut(&one.lts), emit_aut(&two.lts));
    assert_eq!(one.states, two.states);
}

#[test]
fn tape_round_trip_matches_updated_tape() {
    // write 1 at the head, move right, read the blank there, step back and
    // read the written cell; the observer announces what it read
    let observe = |g: &str, then: &str| format!("('{g}.0 | (d0.'saw0.{then} + d1.'saw1.{then}))");
    let back = format!("'mvL.read(h).{}", observe("h", "0"));
    let header = "family Tape data=2 blank=0\nnew write, read, mvL, mvR, d0, d1 in ";
    let a = format!(
        "{header}('write<d1>.'mvR.read(f).{} | Tape_h0(write, read, mvL, mvR, d0, d1))",
        observe("f", &format!("('write<d0>.{back})"))
    );
    let b = format!(
        "{header}({} | Tape_1_h0(write, read, mvL, mvR, d0, d1))",
        observe("d0", &format!("('write<d0>.{back})"))
    );
    let run = |src: &str| {
        let p = parse_pi_with(src, &resolve_family).unwrap();
        explore(&p.term, &p.defs, &[], 10_000, &default_projection)
    };
    let (ea, eb) = (run(&a), run(&b));
    assert!(ea.complete && eb.complete);
    assert!(dpbb_check(&ea.lts, &eb.lts).is_equivalent());
    let labels: BTreeSet<String> = ea.lts.labels().iter().map(|l| l.to_string()).collect();
    assert!(labels.contains("'saw1"), "{labels:?}");
    // a tape holding the other datum is told apart
    let c = b.replace("Tape_1_h0", "Tape_h0");
    assert!(!dpbb_check(&ea.lts, &run(&c).lts).is_equivalent());
}

fn arb_source() -> impl Strategy<Value = String> {
    let name = prop::sample::select(vec!["a", "b", "c"]);
    let leaf = Just("0".to_owned());
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let name = name.clone();
        prop_oneof![
            (name.clone(), inner.clone()).prop_map(|(a, p)| format!("'{a}.{}", wrap(&p))),
            (name.clone(), name.clone(), inner.clone())
                .prop_map(|(a, b, p)| format!("'{a}<{b}>.{}", wrap(&p))),
            (name.clone(), inner.clone()).prop_map(|(a, p)| format!("{a}(x).{}", wrap(&p))),
            (name.clone(), inner.clone()).prop_map(|(a, p)| format!("{a}.{}", wrap(&p))),
            inner.clone().prop_map(|p| format!("tau.{}", wrap(&p))),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| format!("({p} | {q})")),
            (name.clone(), inner.clone(), name.clone(), inner.clone())
                .prop_map(|(a, p, b, q)| format!("({a}.{} + '{b}.{})", wrap(&p), wrap(&q))),
            (name.clone(), inner.clone()).prop_map(|(a, p)| format!("(new {a} in {p})")),
            inner.prop_map(|p| format!("!{}", wrap(&p))),
        ]
    })
}

fn wrap(p: &str) -> String {
    if p == "0" {
        p.to_owned()
    } else {
        format!("({p})")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalize_is_idempotent(src in arb_source()) {
        let t = term(&src);
        let once = canonicalize(&t);
        prop_assert_eq!(canonicalize(&once), once.clone());
        // printing and reparsing the canonical form changes nothing
        prop_assert_eq!(canonicalize(&term(&pretty(&once))), once);
    }

    #[test]
    fn canonicalize_preserves_transitions(src in arb_source()) {
        let t = term(&src);
        let u = universe(&["a", "b", "n"]);
        prop_assert_eq!(moves(&canonicalize(&t), &u), moves(&t, &u));
    }
}
