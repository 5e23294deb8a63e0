//! Scalar abstraction for the closed-form analytics.
//!
//! Everything that is pure arithmetic (curves, survival formulas, CDS legs)
//! is written against [`Real`] so it runs in `f32` or `f64`. Calibration and
//! simulation are `f64` only.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

// fdlibm-derived rational approximations (s_erf.c): < 1 ulp over the real line.
impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}
