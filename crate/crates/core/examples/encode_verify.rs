//! Translates a machine into a process, explores it and compares the result
//! with the machine's own transition system.

use rtm_pi::encode::{rtm_to_pi, side_by_side, stepwise_check, EncodeOptions};
use rtm_pi::rtm::parse_rtm;

fn main() {
    let rtm = parse_rtm(include_str!("../corpus/tau_loop.rtm")).unwrap();
    let bundle = rtm_to_pi(&rtm).unwrap();
    println!("{}", bundle.source());

    let sbs = side_by_side(&rtm, &EncodeOptions::default(), 10_000, 10_000).unwrap();
    println!(
        "machine {} states, process {} states, verdict {:?}",
        sbs.machine.lts.num_states(),
        sbs.spec.lts.num_states(),
        sbs.dpbb().verdict
    );

    // dropping a handler breaks the correspondence
    let broken = side_by_side(&rtm, &EncodeOptions { omit_rule: Some(0) }, 10_000, 10_000).unwrap();
    let res = broken.dpbb();
    println!("without rule 0: {:?}", res.verdict);
    if let Some(play) = res.counterexample {
        print!("{}", play.describe(8));
    }

    let steps = stepwise_check(&rtm, 10_000, 10_000).unwrap();
    println!(
        "stepwise: {} steps replayed, {} failures",
        steps.steps,
        steps.failures.len()
    );
}
