//! Floating-point scalars the numeric layers are generic over.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{Float, FloatConst, FromPrimitive};

/// A real floating-point type usable by the solver and the dilogarithm.
///
/// Implemented for `f32` and `f64`. The associated tolerances scale the
/// solver's convergence test and the series truncation with the precision
/// of the type.
pub trait Real:
    Float + FloatConst + FromPrimitive + RealField + Copy + Debug + Display + Default + Send + Sync + 'static
{
    /// Residual below which Newton iteration is considered converged.
    const NEWTON_TOLERANCE: Self;
    /// Series terms smaller than this are dropped.
    const SERIES_CUTOFF: Self;
    /// Radius of the exclusion discs around 0 and 1.
    const DEGENERACY_RADIUS: Self;

    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const NEWTON_TOLERANCE: Self = 1e-12;
    const SERIES_CUTOFF: Self = 1e-18;
    const DEGENERACY_RADIUS: Self = 1e-8;
}

impl Real for f32 {
    const NEWTON_TOLERANCE: Self = 2e-5;
    const SERIES_CUTOFF: Self = 1e-9;
    const DEGENERACY_RADIUS: Self = 1e-4;
}
