//! Lower Assouad type dimensions of Cantor cut-out sets and finite interval
//! unions.
//!
//! - [`metric_cover`]: exact covering and packing numbers on the line, the
//!   ground truth behind every empirical estimate.
//! - [`cutout`]: cut-out sets built from gap sequences, with the closed-form
//!   spectrum, lower Assouad and quasi-lower formulas.
//! - [`spectrum`]: two-scale and empirical estimators, the lower box
//!   dimension, dimension reports and the numerical verification suite.
//! - [`cli`]: the command-line front end used by the `lowdim` binary.

pub mod cli;
pub mod cutout;
pub mod error;
pub mod metric_cover;
pub mod spectrum;

pub use cutout::{build_cutout, CountMode, CutoutSet, GapSequence, GapSpec, GrowthRule, LiminfWindow};
pub use error::{Error, Result};
pub use metric_cover::{covering_number, packing_number, restrict, Ball, CoverReport, IntervalUnion};
pub use spectrum::{DimensionReport, SpectrumCurve, VerificationOutcome};
