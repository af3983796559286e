//! Batch computation of the jump coefficients
//! `c(N) = Σ_{uv = N} w1(u) · w2(v)`.

use super::{Params, ResidueWeightTables};
use crate::compensated::NeumaierSum;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

/// 2 GiB: jumps and prefix sums together, 16 bytes per index.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Bytes allowed for an in-core table.
    pub memory_budget: u64,
    /// Indices per sieve block; also the streaming block size.
    pub block: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { memory_budget: DEFAULT_MEMORY_BUDGET, block: 1 << 18 }
    }
}

impl SieveConfig {
    pub fn bytes_for(x_max: u64) -> u64 {
        (x_max + 1).saturating_mul(16)
    }
}

/// Jump coefficients for every `N <= x_max`, with the default configuration.
pub fn sieve_jumps(x_max: u64, params: &Params) -> Result<JumpTable> {
    sieve_jumps_with(x_max, params, &SieveConfig::default())
}

pub fn sieve_jumps_with(x_max: u64, params: &Params, config: &SieveConfig) -> Result<JumpTable> {
    if x_max == 0 {
        return Err(Error::Domain("sieve_jumps needs X >= 1".into()));
    }
    let need = SieveConfig::bytes_for(x_max);
    if need > config.memory_budget {
        return Err(Error::Resource(format!(
            "X = {x_max} needs {need} bytes, over the {} byte budget; use block-streaming mode \
             (exactsum::BlockSieve) or raise the memory budget",
            config.memory_budget
        )));
    }
    let tables = ResidueWeightTables::new(params);
    let mut jumps = vec![0.0f64; x_max as usize + 1];
    let block = config.block.max(1) as usize;
    // index 0 is a placeholder for N = 0
    par::for_chunks_mut(&mut jumps[1..], block, |start, chunk| {
        let lo = start as u64 + 1;
        fill_block(lo, chunk, &tables);
    });
    Ok(JumpTable::from_jumps(*params, jumps, block as u64))
}

/// Jump coefficients for `N` in `[lo, hi)` as a fresh vector.
pub fn jump_block(lo: u64, hi: u64, tables: &ResidueWeightTables) -> Vec<f64> {
    assert!(lo >= 1 && hi >= lo);
    let mut out = vec![0.0; (hi - lo) as usize];
    fill_block(lo, &mut out, tables);
    out
}

/// Writes `c(N)` for `N = lo .. lo + out.len()` into `out`.
///
/// Each `N` is visited once per divisor pair `d <= e`, `de = N`: the pair
/// contributes `w1(d)w2(e) + w1(e)w2(d)`, or `w1(d)w2(d)` on the diagonal.
/// Work is `O(len · log hi + sqrt(hi))` and independent of other blocks.
fn fill_block(lo: u64, out: &mut [f64], t: &ResidueWeightTables) {
    let hi = lo + out.len() as u64;
    let mut acc = vec![NeumaierSum::ZERO; out.len()];
    let q1 = t.first().len() as u64;
    let q2 = t.second().len() as u64;
    let (w1, w2) = (t.first(), t.second());
    let mut d = 1u64;
    while d * d < hi {
        let (w1d, w2d) = (w1[(d % q1) as usize], w2[(d % q2) as usize]);
        // smallest e >= d with d·e >= lo
        let e0 = d.max(lo.div_ceil(d));
        let mut e = e0;
        let (mut r1, mut r2) = ((e % q1) as usize, (e % q2) as usize);
        let (q1u, q2u) = (q1 as usize, q2 as usize);
        let mut n = d * e;
        while n < hi {
            let v = if e == d { w1d * w2d } else { w1d * w2[r2] + w1[r1] * w2d };
            acc[(n - lo) as usize].add(v);
            e += 1;
            n += d;
            r1 += 1;
            if r1 == q1u {
                r1 = 0;
            }
            r2 += 1;
            if r2 == q2u {
                r2 = 0;
            }
        }
        d += 1;
    }
    for (o, a) in out.iter_mut().zip(acc) {
        *o = a.value();
    }
}

/// `P(N) = Σ_{uv <= N} w1(u) w2(v)` by the Dirichlet hyperbola method, in
/// `O(sqrt N)` steps with compensated accumulation. Independent of the sieve.
pub fn prefix_by_hyperbola(n: u64, t: &ResidueWeightTables) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let s = n.isqrt();
    let mut acc = NeumaierSum::ZERO;
    for u in 1..=s {
        let k = n / u;
        acc.add(t.w1(u) * t.w2_prefix(k));
        acc.add(t.w2(u) * t.w1_prefix(k));
    }
    acc.add(-(t.w1_prefix(s) * t.w2_prefix(s)));
    acc.value()
}
