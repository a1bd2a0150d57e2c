//! Runs every check for a scenario file and prints the report.
//!
//!     cargo run --example run_scenario -- scenarios/karlin_swap.scn

use std::path::PathBuf;

use reduction_lab::cli::{check_lines, parse_scenario};

fn main() {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/two_patch.scn")));
    let scenario = match parse_scenario(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    match check_lines(&scenario) {
        Ok(lines) => lines.iter().for_each(|l| println!("{l}")),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    }
}
