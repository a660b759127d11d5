//! Every dimension in the chain for a few sets, with the chain checked.
//!
//! The example set fails the chain at this depth: its box count over the
//! deepest resolvable levels still feels the early α-blocks, so `lower_box`
//! lands below the spectrum.

use lowdim::cutout::{build_cutout, GapSequence, GrowthRule};
use lowdim::spectrum::{full_report, ReportConfig};

fn main() -> lowdim::Result<()> {
    let sets = [
        ("ternary", GapSequence::ternary()),
        ("uniform 0.5", GapSequence::uniform_ratio(0.5)?),
        ("example 0.4/0.6", GapSequence::example(0.4, 0.6, GrowthRule::Default)?),
    ];
    for (name, gaps) in sets {
        let set = build_cutout(gaps, 14, 60_000)?;
        let report = full_report(&set, 0.9, &ReportConfig::default())?;
        println!("# {name}\n{}", report.to_text());
    }
    Ok(())
}
