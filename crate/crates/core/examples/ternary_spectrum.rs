//! The exact lower spectrum of the middle-thirds Cantor set as CSV.

use lowdim::cutout::{build_cutout, GapSequence};
use lowdim::spectrum::{theta_grid, SpectrumCurve};

fn main() -> lowdim::Result<()> {
    let set = build_cutout(GapSequence::ternary(), 2, 5000)?;
    let curve = SpectrumCurve::exact(&set, &theta_grid(0.05, 0.95, 0.05)?, None)?;
    print!("{}", curve.to_csv());
    println!("# log 2 / log 3 = {:.9}", std::f64::consts::LN_2 / 3f64.ln());
    Ok(())
}
