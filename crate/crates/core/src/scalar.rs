//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type the library can run on: `f32` or `f64`.
///
/// Besides the arithmetic from `num_traits::Float`, each implementor carries the
/// tolerances that decide metric validity and eigenvalue signs, since an
/// absolute slack that is right for `f64` is meaningless for `f32`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute slack on triangle, symmetry and ultrametric comparisons.
    fn metric_slack() -> Self;
    /// Relative eigenvalue tolerance; multiplied by the largest matrix entry.
    fn eig_rel_tol() -> Self;
    /// Off-diagonal threshold below which Jacobi sweeps stop.
    fn jacobi_eps() -> Self;
    /// Allowed `|Σ η|` relative to `max(1, Σ |η|)` for a balanced vector.
    fn balance_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn metric_slack() -> Self {
        1e-12
    }
    fn eig_rel_tol() -> Self {
        1e-9
    }
    fn jacobi_eps() -> Self {
        f64::EPSILON
    }
    fn balance_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn metric_slack() -> Self {
        1e-5
    }
    fn eig_rel_tol() -> Self {
        1e-5
    }
    fn jacobi_eps() -> Self {
        f32::EPSILON
    }
    fn balance_tol() -> Self {
        1e-5
    }
}

/// `d^p` with the convention `0^p = 0` for every `p >= 0`.
///
/// Inequality sums and the power matrix treat coincident points as contributing
/// nothing, including at `p = 0`.
#[inline]
pub fn dist_pow<T: Scalar>(d: T, p: T) -> T {
    if d == T::zero() {
        T::zero()
    } else if p == T::one() {
        d
    } else {
        d.powf(p)
    }
}
