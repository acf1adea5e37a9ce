//! Seeded random run of the parity machine.

use rtm_pi::workbench::{simulate, RunConfig};

fn main() {
    let src = include_str!("../corpus/parity.rtm");
    let config = RunConfig {
        seed: 7,
        ..RunConfig::default()
    };
    print!("{}", simulate(src, 12, &config).text);
}
