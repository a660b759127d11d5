use lowdim::cutout::Block;
use lowdim::{build_cutout, Error, GapSequence, GapSpec, GrowthRule};

#[test]
fn gap_documents_round_trip() {
    let docs = [
        r#"{"kind":"ternary"}"#,
        r#"{"kind":"uniform-ratio","d":0.35}"#,
        r#"{"kind":"example","alpha":0.4,"beta":0.6,"growth":"default"}"#,
        r#"{"kind":"explicit","levels":[0.5,0.1,0.02]}"#,
    ];
    for doc in docs {
        let spec = GapSpec::from_json(doc).unwrap();
        assert_eq!(GapSpec::from_json(&spec.to_json()).unwrap(), spec);
        GapSequence::from_spec(&spec).unwrap();
    }
    let short = GapSpec::from_json(r#"{"kind":"example","alpha":0.4,"beta":0.6}"#).unwrap();
    assert_eq!(short, GapSpec::Example { alpha: 0.4, beta: 0.6, growth: GrowthRule::Default });
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(GapSpec::from_json(r#"{"kind":"pentagon"}"#), Err(Error::InvalidGaps(_))));
    assert!(GapSequence::uniform_ratio(1.0).is_err());
    assert!(GapSequence::uniform_ratio(0.0).is_err());
    assert!(GapSequence::explicit(vec![0.1, 0.2]).is_err());
    assert!(GapSequence::explicit(vec![0.5, -0.1]).is_err());
    let raw = GapSequence::explicit_unnormalized(vec![0.9, 0.2]).unwrap();
    assert!(build_cutout(raw, 2, 2).is_err());
    assert!(GapSequence::example(0.7, 0.5, GrowthRule::Default).is_err());
}

#[test]
fn example_blocks_follow_the_boundaries() {
    assert_eq!(GrowthRule::Default.boundaries(20_000), vec![1, 4, 11, 33, 132, 660, 3960, 27720]);
    let gaps = GapSequence::example(0.4, 0.6, GrowthRule::Default).unwrap();
    let alpha: Vec<usize> = (1..=40).filter(|&k| gaps.block(k) == Some(Block::Alpha)).collect();
    assert_eq!(alpha, vec![3, 9, 10, 30, 31, 32]);
    assert_eq!(GapSequence::ternary().block(5), None);
}

#[test]
fn ternary_geometry() {
    let set = build_cutout(GapSequence::ternary(), 3, 50).unwrap();
    let level2 = set.basic_intervals(2).unwrap();
    let expect = [(0.0, 1.0 / 9.0), (2.0 / 9.0, 1.0 / 3.0), (2.0 / 3.0, 7.0 / 9.0), (8.0 / 9.0, 1.0)];
    for (got, want) in level2.iter().zip(expect) {
        assert!((got.0 - want.0).abs() < 1e-15 && (got.1 - want.1).abs() < 1e-15, "{got:?}");
    }
    assert_eq!(set.approximation(3).unwrap().intervals().len(), 8);
    assert!((set.gap(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(matches!(set.basic_intervals(4), Err(Error::LevelOutOfRange { .. })));
}

#[test]
fn basic_intervals_have_the_level_scale() {
    for spec in [GapSpec::UniformRatio { d: 0.35 }, GapSpec::Example { alpha: 0.4, beta: 0.6, growth: GrowthRule::Default }] {
        let set = build_cutout(GapSequence::from_spec(&spec).unwrap(), 10, 100).unwrap();
        for level in 0..=10 {
            let s = set.scale(level).unwrap().exp();
            let ivs = set.basic_intervals(level).unwrap();
            assert_eq!(ivs.len(), 1 << level);
            assert!(ivs.iter().all(|iv| (iv.1 - iv.0 - s).abs() < 1e-14), "level {level}");
            assert!(ivs.windows(2).all(|w| w[0].1 < w[1].0));
        }
    }
}
