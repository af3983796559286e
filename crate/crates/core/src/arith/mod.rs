//! Exact arithmetic coefficient functions.
//!
//! Everything here depends on the residues of the summation variables only:
//! the trigonometric weights are periodic in `m mod q1` and `n mod q2`, and
//! the Voronoi coefficients count factorisations in prescribed residue
//! classes.

mod divisors;
mod params;
mod sieve;
mod weights;

pub use divisors::{
    delta_d2, delta_d21, delta_d21_range, delta_d22, delta_d22_range, delta_d2_table, divisors,
    n0_index, residue_divisor_count, HalfInt,
};
pub use params::{Params, WeightKind};
pub use sieve::{
    jump_block, prefix_by_hyperbola, sieve_jumps, sieve_jumps_with, SieveConfig,
    DEFAULT_MEMORY_BUDGET,
};
pub use weights::{sin_cos_turns, ResidueWeightTables};
