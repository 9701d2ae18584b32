//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// Besides the arithmetic bounds, a scalar carries the two tolerances the
/// algorithms compare against: the absolute tolerance used for
/// normalization, feasibility and invariant checks, and the (much tighter)
/// tolerance under which two merge deltas count as tied.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for stochasticity and invariant checks.
    fn tolerance() -> Self;

    /// Two candidate deltas closer than this are treated as equal.
    fn tie_tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn tie_tolerance() -> Self {
        1e-12
    }
}

// Single precision cannot resolve the double-precision tolerances; these are
// scaled to roughly the same number of ulps.
impl Real for f32 {
    fn tolerance() -> Self {
        1e-4
    }

    fn tie_tolerance() -> Self {
        1e-6
    }
}
