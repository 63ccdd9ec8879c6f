//! Cavity-model design and analysis of rectangular and circular microstrip
//! patch antennas on electrically thick substrates.
//!
//! Every routine is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases cover the common case.

// `!(x > 0)` is how NaN gets rejected alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circpatch;
pub mod error;
pub mod media;
pub mod rectpatch;
pub mod response;
mod scalar;
pub mod specfun;

pub use circpatch::{CircLossReport, CircOptions, CircPatchDesign, FeedRule, PatternPlane};
pub use error::{Error, Result};
pub use media::{PhysicalConstants, Regime, RegimeReport, SubstrateSpec};
pub use rectpatch::{
    RectAnalysis, RectDerived, RectModel, RectPatchDesign, ResistanceBreakdown, T1Form, WidthRule,
};
pub use response::{FrequencyResponse, PatchModel, ResonanceReport, Resonator, SweepSpec};
pub use scalar::Real;
pub use specfun::Bracket;

pub type SubstrateSpec64 = SubstrateSpec<f64>;
pub type RectPatchDesign64 = RectPatchDesign<f64>;
pub type CircPatchDesign64 = CircPatchDesign<f64>;
pub type ResistanceBreakdown64 = ResistanceBreakdown<f64>;
pub type FrequencyResponse64 = FrequencyResponse<f64>;
pub type SweepSpec64 = SweepSpec<f64>;
pub type PatchModel64 = PatchModel<f64>;
