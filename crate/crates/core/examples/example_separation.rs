//! A cut-out set whose lower Assouad dimension stays at `α` while its
//! quasi-lower Assouad dimension and spectrum sit near `β`.

use lowdim::cutout::{build_cutout, GapSequence, GrowthRule, LiminfWindow};
use lowdim::spectrum::two_scale_spectrum;

fn main() -> lowdim::Result<()> {
    let (alpha, beta) = (0.4, 0.6);
    let horizon = 60_000;
    let set = build_cutout(GapSequence::example(alpha, beta, GrowthRule::Default)?, 2, horizon)?;

    let lower = set.exact_lower_assouad(8, &LiminfWindow::new(2, horizon - 8)?)?;
    let quasi = set.quasi_lower(&[0.9, 0.95, 0.99], None)?;
    println!("lower Assouad  {lower:.6}");
    for (theta, value) in &quasi.values {
        println!("spectrum({theta})  {value:.6}");
    }
    println!("quasi-lower    {:.6}", quasi.value);
    let w = set.auto_window(0.5)?;
    println!("two-scale(0.5) {:.6} over levels {:?}", two_scale_spectrum(&set, 0.5, &w)?, w.levels());
    Ok(())
}
