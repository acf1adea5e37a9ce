//! Builds a machine from a finite transition system and checks that it
//! behaves the same.

use rtm_pi::encode::{ts_to_rtm, FinTs};
use rtm_pi::lts::{dpbb_check, parse_aut};
use rtm_pi::rtm::{emit_rtm, reachable_lts};

fn main() {
    let ts = parse_aut(include_str!("../corpus/cycle3.aut")).unwrap();
    let rtm = ts_to_rtm(&FinTs::with_auto_numbering(ts.clone()));
    print!("{}", emit_rtm(&rtm));
    let r = reachable_lts(&rtm, 10_000);
    println!(
        "{} configurations, equivalent: {}",
        r.lts.num_states(),
        dpbb_check(&r.lts, &ts).is_equivalent()
    );
}
