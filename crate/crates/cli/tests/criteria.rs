//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

use dimer_resonance::verify::check;
use std::time::Instant;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let start = Instant::now();
        let c = check(id);
        println!(
            "criterion {:>2} {} {} | measured: {} | target: {} | {:.2?}",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.target,
            start.elapsed()
        );
        if !c.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
