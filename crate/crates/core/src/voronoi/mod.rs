//! Truncated Voronoi-type expansion of `S(q1q2 x)` and the Bessel double
//! series, used as a slow independent check of the exact engine.
//!
//! For `T <= x <= 2T`,
//!
//! ```text
//! S(q1q2 x) ≈ R0(x; y) + R12(x) + R21(x)
//! R0(x; y) = q1q2 x^{1/4} / (4√2 π) · Σ_{n <= y} Δd₂(n) cos(4π√(nx) - 3π/4) / n^{3/4}
//! ```
//!
//! with `R12`, `R21` the same oscillatory shape over `y < n <= 2^{J+1} H²`
//! carrying `Δd₂,₁`, `Δd₂,₂`. The remaining terms of the expansion are only
//! known as bounds and are not evaluated.

mod bessel;
mod berndt;
mod series;
mod truncation;

pub use bessel::j1;
pub use berndt::{bessel_identity_eval, BesselEval, BesselPath, BesselSeriesConfig};
pub use series::{
    r0_eval, r12_eval, r21_eval, residual_mean_square, voronoi_approx, MeanSquare, RangeInfo, VoronoiSeries,
    DEFAULT_TERM_CAP, HARD_TERM_CAP,
};
pub use truncation::{derive_truncation, j_for, TruncationMode, TruncationParams};
