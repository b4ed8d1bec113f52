//! Runs every acceptance criterion and prints one line per criterion.
//! Set `ACCEPTANCE_VERBOSE=1` for the individual checks.

use sigquiver::verify;

fn main() {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for id in 1..=verify::TITLES.len() {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let r = verify::run(id, 2024);
        println!("{}", r.summary());
        if verbose || !r.passed {
            for l in &r.lines {
                println!("    {l}");
            }
        }
        failed += !r.passed as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
