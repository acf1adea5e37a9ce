//! Explores a small process with scope extrusion.

use rtm_pi::pi::{default_projection, explore, parse_pi, pretty};

fn main() {
    let prog = parse_pi("new c in ('a<c>.c.0 | 'c.0)").unwrap();
    let universe = vec!["a".to_owned()];
    let e = explore(&prog.term, &prog.defs, &universe, 100, &default_projection);
    for (k, t) in e.states.iter().enumerate() {
        println!("{k}: {}", pretty(t));
    }
    for t in e.lts.transitions() {
        println!("{} -{}-> {}", t.source, t.label, t.target);
    }
}
