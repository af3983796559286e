use serde::Serialize;

use super::window::window_extrema;
use super::Sign;
use crate::compensated::NeumaierSum;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

const BLOCK: u64 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortIntervalMsq {
    pub t: f64,
    pub h: f64,
    /// `∫_1^T (S(q1q2(x+h)) - S(q1q2 x))² dx`.
    pub value: f64,
    pub warnings: Vec<String>,
}

/// Adds `weight · overlap((a, b), (lo, hi))`.
#[inline]
fn clipped(acc: &mut NeumaierSum, a: f64, b: f64, lo: f64, hi: f64, weight: f64) {
    let len = b.min(hi) - a.max(lo);
    if len > 0.0 && weight != 0.0 {
        acc.add(weight * len);
    }
}

/// `I(T, h) = ∫_1^T (S(q1q2(x+h)) - S(q1q2 x))² dx`, exact.
///
/// In the raw variable the integrand is constant between consecutive points
/// of `ℤ ∪ (ℤ - q1q2 h)`, so each unit segment splits into two pieces.
pub fn short_interval_msq(t: f64, h: f64, table: &JumpTable) -> Result<ShortIntervalMsq> {
    if !(t >= 1.0) || !(h >= 0.0) {
        return Err(Error::Domain(format!("need T >= 1 and h >= 0, got T = {t}, h = {h}")));
    }
    let mut warnings = Vec::new();
    if h < 1.0 || h > 0.5 * t.sqrt() {
        let w = format!("h = {h} outside [1, √T/2] = [1, {}]", 0.5 * t.sqrt());
        log::warn!("{w}");
        warnings.push(w);
    }
    let q = table.params().modulus_product() as f64;
    let d = q * h;
    let (lo, hi) = (q, q * t);
    table.check_raw(hi + d + 1.0)?;
    let (whole, frac) = (d.floor() as usize, d - d.floor());
    let prefix = table.prefix_sums();
    let parts = par::map_blocks(lo.floor() as u64..hi.ceil() as u64, BLOCK, |r| {
        let mut acc = NeumaierSum::ZERO;
        for n in r {
            let i = n as usize;
            let base = prefix[i];
            let nf = n as f64;
            // t in (N, N+1-frac): S(t+D) = P(N+d); t in (N+1-frac, N+1): P(N+d+1)
            let a = prefix[i + whole] - base;
            clipped(&mut acc, nf, nf + 1.0 - frac, lo, hi, a * a);
            if frac > 0.0 {
                let b = prefix[i + whole + 1] - base;
                clipped(&mut acc, nf + 1.0 - frac, nf + 1.0, lo, hi, b * b);
            }
        }
        acc
    });
    let value = parts.into_iter().sum::<NeumaierSum>().value() / q;
    Ok(ShortIntervalMsq { t, h, value, warnings })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxIncrement {
    pub t: f64,
    pub h0: f64,
    /// `∫_T^{2T} max_{0<=h<=H0} (S₊(q1q2(t+h)) - S₊(q1q2 t))² dt`.
    pub plus: f64,
    pub minus: f64,
}

/// The windowed maximal squared increments of `S₊` and `S₋` over `[T, 2T]`,
/// exact. For raw `u` in a unit segment the window `[u, u + q1q2 H0]` meets
/// either `w + 1` or `w + 2` segments, so two sliding extrema passes cover
/// every case.
pub fn max_increment_msq(t: f64, h0: f64, table: &JumpTable) -> Result<MaxIncrement> {
    if !(t > 0.0) || !(h0 >= 0.0) {
        return Err(Error::Domain(format!("need T > 0 and H0 >= 0, got T = {t}, H0 = {h0}")));
    }
    if h0 < 2.0 || h0 > t.sqrt() {
        log::warn!("H0 = {h0} outside [2, √T]");
    }
    let q = table.params().modulus_product() as f64;
    let width = q * h0;
    let (lo, hi) = (q * t, 2.0 * q * t);
    table.check_raw(hi + width + 2.0)?;
    let (w, frac) = (width.floor() as usize, width - width.floor());
    let prefix = table.prefix_sums();
    let parts = par::map_blocks(lo.floor() as u64..hi.ceil() as u64, BLOCK, |r| {
        let (start, end) = (r.start as usize, r.end as usize);
        let mut out = [NeumaierSum::ZERO; 2];
        for (slot, sign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            let v: Vec<f64> = prefix[start..end + w + 1].iter().map(|&p| sign.part(p)).collect();
            let (max1, min1) = window_extrema(&v, w + 1);
            let (max2, min2) = window_extrema(&v, w + 2);
            for (k, n) in (start..end).enumerate() {
                let base = v[k];
                let m1 = (max1[k] - base).max(base - min1[k]);
                let m2 = (max2[k] - base).max(base - min2[k]);
                let nf = n as f64;
                clipped(&mut out[slot], nf, nf + 1.0 - frac, lo, hi, m1 * m1);
                if frac > 0.0 {
                    clipped(&mut out[slot], nf + 1.0 - frac, nf + 1.0, lo, hi, m2 * m2);
                }
            }
        }
        out
    });
    let mut acc = [NeumaierSum::ZERO; 2];
    for p in parts {
        acc[0].merge(p[0]);
        acc[1].merge(p[1]);
    }
    Ok(MaxIncrement { t, h0, plus: acc[0].value() / q, minus: acc[1].value() / q })
}
