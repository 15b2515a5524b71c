use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Real scalar the numerical core is generic over.
///
/// Validation thresholds scale with the precision of the type: the `f64`
/// values are the contract thresholds, the `f32` values are loosened to what
/// single precision can resolve after a dense eigensolve.
pub trait Real: Float + FromPrimitive + Debug + Display + LowerExp + Sum + Send + Sync + 'static {
    /// Hermiticity, unit trace, positivity and Kraus completeness threshold.
    const STATE_TOL: f64;
    /// Largest anti-Hermitian drift repaired by symmetrization.
    const HERMITIAN_DRIFT_TOL: f64;
    /// Eigenvalues at or below this count as zero (rank and `0 log 0`).
    const RANK_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn state_tol() -> Self {
        Self::lit(Self::STATE_TOL)
    }

    fn hermitian_drift_tol() -> Self {
        Self::lit(Self::HERMITIAN_DRIFT_TOL)
    }

    fn rank_tol() -> Self {
        Self::lit(Self::RANK_TOL)
    }
}

impl Real for f64 {
    const STATE_TOL: f64 = 1e-10;
    const HERMITIAN_DRIFT_TOL: f64 = 1e-8;
    const RANK_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const STATE_TOL: f64 = 1e-5;
    const HERMITIAN_DRIFT_TOL: f64 = 1e-4;
    const RANK_TOL: f64 = 1e-6;
}

pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}
