//! The exact step-function engine for `S`.
//!
//! `S` is constant on every open interval `(N, N + 1)` and jumps by `c(N)` at
//! each integer `N`. A [`JumpTable`] stores the jumps and their compensated
//! prefix sums `P(N)`, so that `S(x) = P(⌊x⌋)` off the integers and
//! `S(N) = P(N) - c(N)/2` at them (the primed-sum half weight).

mod cache;
mod integrate;
mod stream;
mod table;
mod view;

pub use cache::{read_cache, read_cache_from, write_cache, write_cache_to, CACHE_MAGIC};
pub use integrate::{integrate_power, integrate_power_capped, raw_integral, DEFAULT_MAX_POWER};
pub use stream::{stream_power_integral, BlockSieve, JumpBlock};
pub use table::{s_plus_minus_of, JumpTable, SpotCheck};
pub use view::{Domain, StepFunctionView};
