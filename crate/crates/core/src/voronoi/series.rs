use std::f64::consts::PI;

use serde::Serialize;

use super::TruncationParams;
use crate::arith::{delta_d21_range, delta_d22_range, delta_d2_table, Params};
use crate::compensated::NeumaierSum;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

/// Default number of `n` values kept in each of `R12`, `R21`.
pub const DEFAULT_TERM_CAP: u64 = 1_000_000;

/// Caps above this are refused.
pub const HARD_TERM_CAP: u64 = 100_000_000;

/// Nonzero terms `(n, a_n n^{-3/4})` of one oscillatory sum.
#[derive(Debug, Clone, Default)]
struct Terms {
    n: Vec<f64>,
    weight: Vec<f64>,
}

impl Terms {
    fn push(&mut self, n: u64, coef: f64) {
        if coef != 0.0 {
            self.n.push(n as f64);
            self.weight.push(coef * (n as f64).powf(-0.75));
        }
    }

    /// `Σ w_n cos(4π√(nx) - 3π/4)`, with the phase reduced through the
    /// fractional part of `2√(nx)` before multiplying by 2π.
    fn sum(&self, x: f64) -> f64 {
        let mut acc = NeumaierSum::ZERO;
        for (&n, &w) in self.n.iter().zip(&self.weight) {
            let turns = 2.0 * (n * x).sqrt();
            let phase = 2.0 * PI * (turns - turns.floor()) - 0.75 * PI;
            acc.add(w * phase.cos());
        }
        acc.value()
    }

    fn abs_weight(&self) -> f64 {
        self.weight.iter().map(|w| w.abs()).sum()
    }
}

/// Ranges actually summed for `R12`/`R21`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeInfo {
    /// `2^{J+1} H²`.
    pub nominal_upper: f64,
    /// Largest `n` included after applying the cap.
    pub used_upper: u64,
    pub cap: u64,
    pub capped: bool,
}

/// Precomputed coefficients of `R0`, `R12`, `R21` for one truncation.
#[derive(Debug, Clone)]
pub struct VoronoiSeries {
    params: Params,
    trunc: TruncationParams,
    r0: Terms,
    r12: Terms,
    r21: Terms,
    range: RangeInfo,
}

impl VoronoiSeries {
    /// Builds all three sums; `R12`/`R21` run over `y < n <= min(2^{J+1}H², y + cap)`.
    pub fn new(params: &Params, trunc: &TruncationParams, cap: u64) -> Result<Self> {
        let mut s = Self::r0_only(params, trunc);
        let y = trunc.y.floor() as u64;
        if cap > HARD_TERM_CAP {
            return Err(Error::Resource(format!(
                "term cap {cap} exceeds the hard limit {HARD_TERM_CAP}; choose a smaller exploration cap"
            )));
        }
        let nominal = trunc.split_upper();
        let limit = y.saturating_add(cap);
        let used = if nominal >= limit as f64 { limit } else { nominal.floor() as u64 };
        let used = used.max(y);
        s.range = RangeInfo { nominal_upper: nominal, used_upper: used, cap, capped: nominal > used as f64 };
        if s.range.capped {
            log::info!("R12/R21 capped at n <= {used} (nominal {nominal:.3e})");
        }
        let d21 = delta_d21_range(y, used, trunc.h_cap, trunc.j, params)?;
        let d22 = delta_d22_range(y, used, trunc.h_cap, trunc.j, params)?;
        for (i, (a, b)) in d21.iter().zip(&d22).enumerate() {
            let n = y + 1 + i as u64;
            s.r12.push(n, a.to_f64());
            s.r21.push(n, b.to_f64());
        }
        Ok(s)
    }

    /// Only the `R0` part; `R12` and `R21` are empty.
    pub fn r0_only(params: &Params, trunc: &TruncationParams) -> Self {
        let y = trunc.y.floor() as u64;
        let mut r0 = Terms::default();
        for (n, &d) in delta_d2_table(y, params).iter().enumerate().skip(1) {
            r0.push(n as u64, d as f64);
        }
        let range = RangeInfo { nominal_upper: trunc.split_upper(), used_upper: y, cap: 0, capped: true };
        VoronoiSeries { params: *params, trunc: trunc.clone(), r0, r12: Terms::default(), r21: Terms::default(), range }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn truncation(&self) -> &TruncationParams {
        &self.trunc
    }

    pub fn range(&self) -> RangeInfo {
        self.range
    }

    fn scale(&self, x: f64) -> f64 {
        self.params.modulus_product() as f64 * x.powf(0.25) / (4.0 * 2f64.sqrt() * PI)
    }

    pub fn r0(&self, x: f64) -> f64 {
        self.scale(x) * self.r0.sum(x)
    }

    pub fn r12(&self, x: f64) -> f64 {
        self.scale(x) * self.r12.sum(x)
    }

    pub fn r21(&self, x: f64) -> f64 {
        self.scale(x) * self.r21.sum(x)
    }

    /// `R0 + R12 + R21`.
    pub fn approx(&self, x: f64) -> f64 {
        self.scale(x) * (self.r0.sum(x) + self.r12.sum(x) + self.r21.sum(x))
    }

    /// Triangle-inequality bound on `|R0(x)|`.
    pub fn r0_envelope(&self, x: f64) -> f64 {
        self.scale(x) * self.r0.abs_weight()
    }
}

pub fn r0_eval(x: f64, trunc: &TruncationParams, params: &Params) -> f64 {
    VoronoiSeries::r0_only(params, trunc).r0(x)
}

pub fn r12_eval(x: f64, trunc: &TruncationParams, params: &Params) -> Result<f64> {
    Ok(VoronoiSeries::new(params, trunc, DEFAULT_TERM_CAP)?.r12(x))
}

pub fn r21_eval(x: f64, trunc: &TruncationParams, params: &Params) -> Result<f64> {
    Ok(VoronoiSeries::new(params, trunc, DEFAULT_TERM_CAP)?.r21(x))
}

/// `R0 + R12 + R21` at `x`. The expansion also has terms known only through
/// bounds, so this differs from `S(q1q2 x)` pointwise.
pub fn voronoi_approx(x: f64, trunc: &TruncationParams, params: &Params) -> Result<f64> {
    Ok(VoronoiSeries::new(params, trunc, DEFAULT_TERM_CAP)?.approx(x))
}

/// Sample means of `(S(q1q2 x) - F(x))²` and `S(q1q2 x)²` over `[t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSquare {
    pub residual: f64,
    pub signal: f64,
    pub ratio: f64,
    pub samples: usize,
}

/// Mean squares at `samples` points of the golden-ratio sequence in
/// `[t_lo, t_hi]`. Equidistributed points avoid resonance with the
/// oscillation that a regular grid can hit.
pub fn residual_mean_square<F>(table: &JumpTable, t_lo: f64, t_hi: f64, samples: usize, approx: F) -> Result<MeanSquare>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if samples == 0 || !(t_hi > t_lo) {
        return Err(Error::Domain("need a nonempty window and at least one sample".into()));
    }
    let q = table.params().modulus_product() as f64;
    table.check_raw(q * t_hi)?;
    table.check_raw(q * t_lo)?;
    let step = (5f64.sqrt() - 1.0) / 2.0;
    let parts = par::map_blocks(0..samples as u64, 1024, |r| {
        let mut res = NeumaierSum::ZERO;
        let mut sig = NeumaierSum::ZERO;
        for i in r {
            let u = (0.5 + i as f64 * step).fract();
            let x = t_lo + (t_hi - t_lo) * u;
            let s = table.s_unchecked(q * x);
            let d = s - approx(x);
            res.add(d * d);
            sig.add(s * s);
        }
        (res, sig)
    });
    let (mut res, mut sig) = (NeumaierSum::ZERO, NeumaierSum::ZERO);
    for (a, b) in parts {
        res.merge(a);
        sig.merge(b);
    }
    let n = samples as f64;
    let (residual, signal) = (res.value() / n, sig.value() / n);
    Ok(MeanSquare { residual, signal, ratio: residual / signal, samples })
}
