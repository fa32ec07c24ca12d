use std::process::ExitCode;
use std::time::Instant;

use dhzero::acceptance::{self, NAMES};

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    for id in 1..=NAMES.len() {
        let start = Instant::now();
        let outcome = acceptance::run(id);
        println!("{} [{:.1}s]", outcome.line(), start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        NAMES.len() - failed,
        NAMES.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
