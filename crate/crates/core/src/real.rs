//! Scalar abstraction: every kernel in this crate is generic over a real
//! floating-point type.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lifts an `f64` literal into the scalar type.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable in scalar type")
    }

    /// Lossy view as `f64`, used when reporting errors and diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A point in the local coordinate chart.
pub type Point3<T> = [T; 3];

/// Converts a point to `f64` components for diagnostics.
pub fn point_as_f64<T: Real>(p: &Point3<T>) -> [f64; 3] {
    [p[0].as_f64(), p[1].as_f64(), p[2].as_f64()]
}
