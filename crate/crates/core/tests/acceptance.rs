use std::process::ExitCode;

use torusloop::acceptance::{run, NAMES};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        let r = run(id);
        println!("{}", r.line());
        if r.gating && !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all gating criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
