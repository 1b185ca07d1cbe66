//! Real-number abstraction shared by the centrality engine and analytics.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point type that centrality values are accumulated in: `f32` or `f64`.
///
/// Hop distances and shortest-path counts stay integral; only the ratios,
/// sums and summaries derived from them live in `Self`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a path count. Counts beyond the mantissa lose
    /// precision exactly as `u128 as f64` does.
    fn from_count(count: u128) -> Self {
        Self::from_u128(count).unwrap_or_else(Self::infinity)
    }

    fn from_usize(value: usize) -> Self {
        <Self as FromPrimitive>::from_usize(value).unwrap_or_else(Self::infinity)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
