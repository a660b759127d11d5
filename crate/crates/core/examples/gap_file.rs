//! Round-trips a gap document through a file and freezes it into an
//! explicit level list.

use lowdim::cutout::{build_cutout, GapSequence, GapSpec, GrowthRule};

fn main() -> lowdim::Result<()> {
    let spec = GapSpec::Example { alpha: 0.3, beta: 0.6, growth: GrowthRule::Default };
    let path = std::env::temp_dir().join("lowdim_gaps.json");
    std::fs::write(&path, spec.to_json()).expect("write temp file");
    let loaded = GapSpec::from_json(&std::fs::read_to_string(&path).expect("read temp file"))?;
    assert_eq!(loaded, spec);

    let gaps = GapSequence::from_spec(&loaded)?;
    let set = build_cutout(gaps, 8, 200)?;
    let levels: Vec<f64> = (1..=8).map(|n| set.gap(n)).collect::<lowdim::Result<_>>()?;
    let frozen = GapSequence::explicit(levels)?;
    println!("{}", frozen.spec().to_json());
    println!("uniformly perfect with ratio {:.4}", set.uniform_perfectness_ratio());
    Ok(())
}
