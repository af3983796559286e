//! Experiments on the exact step function: sign changes, threshold
//! exceedance, the kernel-smoothing test, short-interval mean squares,
//! moments and the Ω witness.
//!
//! Unless stated otherwise, `T` is in the normalised variable `x` of
//! `S(q1q2 x)` for moment and mean-square quantities, and in the raw argument
//! `t` of `S(t)` for the sign-change and exceedance scans. Logarithms are
//! natural.

mod exceed;
mod kernel;
mod moments;
mod msq;
mod quad;
mod scan;
mod window;

pub use exceed::{exceedance_measure, single_sign_runs, RunStats, RunsReport};
pub use kernel::{
    kernel_grid, kernel_test, kernel_test_single_term, kernel_weight, KernelResult, KernelSpec,
};
pub use moments::{
    f_k, moment, moment_with_reference, omega_detector, omega_witness, sign_part_energy, DetectorPoint,
    MomentReport, OmegaOptions, OmegaOutcome, OmegaWitness,
};
pub use msq::{max_increment_msq, short_interval_msq, MaxIncrement, ShortIntervalMsq};
pub use quad::{adaptive_simpson, adaptive_simpson_panels};
pub use scan::{scan_sign_changes, ScanOptions, ScanReport};
pub use window::window_extrema;

use serde::{Deserialize, Serialize};

/// Which part of `S` an experiment looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `S₊` or `S₋` of a value.
    pub fn part(self, s: f64) -> f64 {
        (self.factor() * s).max(0.0)
    }
}

/// Default calibrated constants.
pub mod defaults {
    pub const C1: f64 = 0.05;
    pub const C5: f64 = 0.05;
    pub const C4: f64 = 1.0;
    pub const ALPHA: f64 = 50.0;
    /// Absolute tolerance of the kernel quadrature.
    pub const KERNEL_TOL: f64 = 1e-8;
}
