//! Numerical tolerances used across the crate, kept in one record.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Amplitudes with modulus below this are dropped from sparse states.
    pub prune: f64,
    /// Allowed deviation of a state's squared norm from 1.
    pub norm: f64,
    /// Allowed per-layer growth of the norm deviation.
    pub norm_drift_per_layer: f64,
    /// Elementwise agreement expected between two exact executors.
    pub exact: f64,
    /// Largest register width the exact-distribution executor accepts.
    pub exact_width_cap: usize,
}

impl Tolerances {
    pub const F64: Tolerances = Tolerances {
        prune: 1e-14,
        norm: 1e-9,
        norm_drift_per_layer: 1e-9,
        exact: 1e-10,
        exact_width_cap: 22,
    };

    pub const F32: Tolerances = Tolerances {
        prune: 1e-7,
        norm: 1e-4,
        norm_drift_per_layer: 1e-5,
        exact: 1e-4,
        exact_width_cap: 22,
    };

    /// Tolerances appropriate for the precision of `T`.
    pub fn for_scalar<T: Scalar>() -> Tolerances {
        if T::epsilon().to_f64_lossy() < 1e-10 {
            Self::F64
        } else {
            Self::F32
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::F64
    }
}
