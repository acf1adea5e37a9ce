//! Branching versus divergence-preserving branching bisimilarity on a silent
//! loop and a deadlock.

use rtm_pi::lts::{bb_check, dpbb_check, emit_aut, minimize, parse_aut, Mode};

fn main() {
    let spin = parse_aut("des (0, 1, 1)\n(0, \"tau\", 0)\n").unwrap();
    let stop = parse_aut("des (0, 0, 1)\n").unwrap();
    println!("bb:   {:?}", bb_check(&spin, &stop).verdict);
    let res = dpbb_check(&spin, &stop);
    println!("dpbb: {:?}", res.verdict);
    print!("{}", res.counterexample.unwrap().describe(4));

    let chain =
        parse_aut("des (0, 3, 3)\n(0, \"tau\", 1)\n(1, \"a\", 2)\n(0, \"a\", 2)\n").unwrap();
    print!("{}", emit_aut(&minimize(&chain, Mode::Branching)));
}
