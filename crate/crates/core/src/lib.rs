//! Exact computation and empirical verification for the weighted divisor sum
//!
//! ```text
//! S(x; a1/q1, a2/q2) = Σ'_{mn ≤ x} cos(2π m a1/q1) · sin(2π n a2/q2)
//! ```
//!
//! where the primed sum gives weight ½ to terms with `mn = x`.
//!
//! The crate is organised in four layers:
//!
//! * [`arith`]: parameter validation, residue weight tables, the signed
//!   residue divisor counts `Δd₂`, `Δd₂,₁`, `Δd₂,₂` and the batch jump sieve.
//! * [`exactsum`]: the step-function engine (`JumpTable`), point evaluation,
//!   the normalised `S*`, positive/negative parts and exact piecewise
//!   integration of powers of `S`.
//! * [`voronoi`]: the truncated Voronoi-type expansion, parameter derivation,
//!   `J₁` and the Bessel double series used as a slow independent oracle.
//! * [`analysis`]: sign-change scans, exceedance measures, the kernel
//!   smoothing test, short-interval mean squares, moments and the Ω witness.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and a plain sequential loop otherwise. Block
//! boundaries are fixed independently of the thread count so results are
//! bit-identical between the two paths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod arith;
pub mod compensated;
mod error;
pub mod exactsum;
pub mod par;
pub mod voronoi;

pub use arith::{Params, ResidueWeightTables, WeightKind};
pub use error::{Error, Result};
pub use exactsum::{Domain, JumpTable, StepFunctionView};

/// Library version embedded into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
