//! Runs every acceptance criterion at its stated budget and prints one line
//! per criterion. Runs without the libtest harness so the report is never
//! captured.

use std::process::ExitCode;

use hodgekit::suite::{run_all, DEFAULT_SEED};

fn main() -> ExitCode {
    let results = run_all(DEFAULT_SEED);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
