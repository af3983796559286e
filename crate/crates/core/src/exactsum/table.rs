use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{prefix_by_hyperbola, Params, ResidueWeightTables};
use crate::compensated::NeumaierSum;
use crate::{par, Error, Result};

/// Jump coefficients `c(N)` and prefix sums `P(N)` for `0 <= N <= X`.
///
/// Index 0 holds `c(0) = P(0) = 0`. The table is immutable once built.
#[derive(Debug, Clone)]
pub struct JumpTable {
    params: Params,
    jumps: Vec<f64>,
    prefix: Vec<f64>,
}

impl JumpTable {
    /// Builds the prefix sums for `jumps` (index 0 must be the `N = 0`
    /// placeholder). Block totals are computed independently, the carries are
    /// fixed up sequentially, then each block is scanned from its carry.
    pub fn from_jumps(params: Params, mut jumps: Vec<f64>, block: u64) -> JumpTable {
        assert!(!jumps.is_empty(), "jump vector needs the N = 0 slot");
        jumps[0] = 0.0;
        let block = block.max(1) as usize;
        let body = &jumps[1..];
        let totals: Vec<NeumaierSum> = par::map_items(body.chunks(block).collect(), |c: &[f64]| {
            c.iter().copied().sum::<NeumaierSum>()
        });
        let mut carries = Vec::with_capacity(totals.len());
        let mut carry = NeumaierSum::ZERO;
        for t in &totals {
            carries.push(carry);
            carry.merge(*t);
        }
        let mut prefix = vec![0.0f64; jumps.len()];
        par::for_chunks_mut(&mut prefix[1..], block, |start, out| {
            let mut acc = carries[start / block];
            let len = out.len();
            for (o, &c) in out.iter_mut().zip(&body[start..start + len]) {
                acc.add(c);
                *o = acc.value();
            }
        });
        JumpTable { params, jumps, prefix }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Largest index `X` covered.
    pub fn x_max(&self) -> u64 {
        (self.jumps.len() - 1) as u64
    }

    /// `c(N)`; zero for `N = 0`.
    #[inline]
    pub fn jump(&self, n: u64) -> f64 {
        self.jumps[n as usize]
    }

    /// `P(N) = Σ_{M <= N} c(M)`, which is also the value of `S` on `(N, N+1)`.
    #[inline]
    pub fn prefix(&self, n: u64) -> f64 {
        self.prefix[n as usize]
    }

    /// Jumps for `N = 1..=X`.
    pub fn jumps(&self) -> &[f64] {
        &self.jumps[1..]
    }

    /// Prefix sums indexed by `N` (slot 0 included).
    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix
    }

    pub(crate) fn check_raw(&self, x: f64) -> Result<()> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!("argument {x} must be a finite nonnegative real")));
        }
        if x > self.x_max() as f64 {
            return Err(Error::OutOfRange { arg: x, max: self.x_max() });
        }
        Ok(())
    }

    /// `S(x)` with the half weight on `mn = x`.
    pub fn s_eval(&self, x: f64) -> Result<f64> {
        self.check_raw(x)?;
        Ok(self.s_unchecked(x))
    }

    #[inline]
    pub(crate) fn s_unchecked(&self, x: f64) -> f64 {
        let n = x.floor();
        let i = n as usize;
        if n == x {
            self.prefix[i] - 0.5 * self.jumps[i]
        } else {
            self.prefix[i]
        }
    }

    /// Normalised value
    /// `4√2π (q1q2)⁻¹ t^{-1/2} (S(q1q2 t²) + f(q1q2 t²))` with the
    /// perturbation `f(u) = f_coeff · u^{1/4}`.
    pub fn s_star(&self, t: f64, f_coeff: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("s_star needs t >= 1, got {t}")));
        }
        let q = self.params.modulus_product() as f64;
        let arg = q * t * t;
        let s = self.s_eval(arg)?;
        Ok(4.0 * 2f64.sqrt() * PI / q / t.sqrt() * (s + f_coeff * arg.powf(0.25)))
    }

    /// `(S₊(t), S₋(t))`.
    pub fn s_plus_minus(&self, t: f64) -> Result<(f64, f64)> {
        Ok(s_plus_minus_of(self.s_eval(t)?))
    }

    /// Recomputes `count` randomly chosen prefix sums with the hyperbola
    /// method and reports the worst deviation, relative to `max(1, |P(N)|)`.
    pub fn spot_check(&self, count: usize, seed: u64) -> SpotCheck {
        let tables = ResidueWeightTables::new(&self.params);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut worst_index = 0;
        for _ in 0..count {
            let n = rng.gen_range(1..=self.x_max());
            let reference = prefix_by_hyperbola(n, &tables);
            let err = (self.prefix(n) - reference).abs() / reference.abs().max(1.0);
            if err > worst {
                worst = err;
                worst_index = n;
            }
        }
        SpotCheck { checked: count, max_rel_error: worst, worst_index }
    }
}

/// Result of [`JumpTable::spot_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpotCheck {
    pub checked: usize,
    pub max_rel_error: f64,
    pub worst_index: u64,
}

/// Positive and negative parts `(½(|s| + s), ½(|s| - s))`.
pub fn s_plus_minus_of(s: f64) -> (f64, f64) {
    if s > 0.0 {
        (s, 0.0)
    } else if s < 0.0 {
        (0.0, -s)
    } else {
        (0.0, 0.0)
    }
}
