//! Seeded runs of every inequality check on the uniform-ratio set with
//! dimension 0.35.

use lowdim::cutout::{build_cutout, GapSequence};
use lowdim::spectrum::{run_suite, Check, SuiteConfig};

fn main() -> lowdim::Result<()> {
    let set = build_cutout(GapSequence::uniform_ratio(0.35)?, 12, 20_000)?;
    let config = SuiteConfig { seed: 2024, ..SuiteConfig::default() };
    for outcome in run_suite(&set, &config, &Check::ALL)? {
        println!("{}", outcome.line());
    }
    Ok(())
}
