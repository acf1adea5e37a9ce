//! Refutes a finite-memory candidate for the process that echoes back
//! whatever name it receives.

use rtm_pi::rtm::parse_rtm;
use rtm_pi::workbench::refute;

fn main() {
    let rtm = parse_rtm(include_str!("../corpus/candidates/kresp2.rtm")).unwrap();
    let report = refute(&rtm, 50_000);
    print!("{report}");
    report.verify(&rtm).unwrap();
    println!("evidence replayed");
}
