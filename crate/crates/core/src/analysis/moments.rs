use serde::{Deserialize, Serialize};

use super::exceed::threshold_runs;
use super::{defaults, Sign};
use crate::exactsum::{integrate_power, raw_integral, Domain, JumpTable};
use crate::{Error, Result};

/// Moment `∫_1^T S^k(q1q2 x) dx` and derived scalings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub t: f64,
    pub k: u32,
    pub integral: f64,
    /// `Ĉ_k = (q1q2)^{-k} integral / ∫_1^T x^{k/4} dx`; zero when `T = 1`.
    pub c_hat: f64,
    /// `|integral| / (q1q2 T^{3/4})`, for `k = 1` only.
    pub first_moment_ratio: Option<f64>,
    /// `F_k(T)` when a reference constant is supplied.
    pub f_k: Option<f64>,
}

pub fn moment(t: f64, k: u32, table: &JumpTable) -> Result<MomentReport> {
    moment_with_reference(t, k, table, None)
}

pub fn moment_with_reference(t: f64, k: u32, table: &JumpTable, c_ref: Option<f64>) -> Result<MomentReport> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("T = {t} must be at least 1")));
    }
    let q = table.params().modulus_product() as f64;
    let integral = integrate_power(table, 1.0, t, k, Domain::Normalized)?;
    let e = 1.0 + k as f64 / 4.0;
    let weight = (t.powf(e) - 1.0) / e;
    let scaled = integral / q.powi(k as i32);
    let c_hat = if weight > 0.0 { scaled / weight } else { 0.0 };
    Ok(MomentReport {
        t,
        k,
        integral,
        c_hat,
        first_moment_ratio: (k == 1).then(|| integral.abs() / (q * t.powf(0.75))),
        f_k: c_ref.map(|c| scaled - c * t.powf(e)),
    })
}

/// `F_k(T) = (q1q2)^{-k} ∫_1^T S^k(q1q2 x) dx - C_k T^{1+k/4}`.
pub fn f_k(t: f64, k: u32, c_ref: f64, table: &JumpTable) -> Result<f64> {
    Ok(moment_with_reference(t, k, table, Some(c_ref))?.f_k.unwrap_or_default())
}

/// `∫_T^{2T} S_±²(q1q2 t) dt` for both signs.
pub fn sign_part_energy(t: f64, table: &JumpTable) -> Result<(f64, f64)> {
    let q = table.params().modulus_product() as f64;
    let plus = raw_integral(table, q * t, 2.0 * q * t, |s| Sign::Plus.part(s).powi(2))? / q;
    let minus = raw_integral(table, q * t, 2.0 * q * t, |s| Sign::Minus.part(s).powi(2))? / q;
    Ok((plus, minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaOptions {
    pub c4: f64,
    pub c5: f64,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        OmegaOptions { c4: defaults::C4, c5: defaults::C5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaWitness {
    pub delta: i8,
    /// Start of the window, normalised variable.
    pub t: f64,
    pub h0: f64,
    /// `(q1q2)^{-k} ∫_t^{t+H0} S^k(q1q2 u) du`.
    pub increment: f64,
    /// `δ · increment / (H0 t^{k/4})`, at least `c5^k` by construction.
    pub scaled_increment: f64,
    /// `F_k(t + H0) - F_k(t)` from the moment increment.
    pub f_increment: f64,
    /// `C_k* = c5^k - δ^k C_k (1 + k/4)`.
    pub c_star: f64,
    /// `C_k* H0 t^{k/4}`.
    pub lower_bound: f64,
    /// `|f_increment| >= lower_bound`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OmegaOutcome {
    Found(OmegaWitness),
    NotFound { delta: i8, h0: f64, runs_examined: usize, longest_run: f64 },
}

/// Looks for `t ∈ [T, 2T]` with `δ S(q1q2 u) > c5 q1q2 t^{1/4}` on
/// `[t, t + H0]`, `H0 = c4 √T (log T)^{-7}`, and evaluates the moment
/// increment over that window (normalised variable).
pub fn omega_witness(t: f64, k: u32, c_ref: f64, table: &JumpTable, opts: &OmegaOptions) -> Result<OmegaOutcome> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("k = {k} must be an odd integer >= 3")));
    }
    if !(t > std::f64::consts::E) || !c_ref.is_finite() {
        return Err(Error::Domain(format!("need T > e and finite C_k, got T = {t}, C_k = {c_ref}")));
    }
    let q = table.params().modulus_product() as f64;
    table.check_raw(2.0 * q * t)?;
    let delta: i8 = if c_ref >= 0.0 { -1 } else { 1 };
    let h0 = opts.c4 * t.sqrt() * t.ln().powi(-7);
    let sign = if delta > 0 { Sign::Plus } else { Sign::Minus };
    // raw form of the condition: δS(v) > c5 q^{3/4} v^{1/4}
    let runs = threshold_runs(q * t, table, opts.c5 * q.powf(0.75), sign);
    let longest_run = runs.iter().map(|(a, b)| (b - a) / q).fold(0.0, f64::max);
    let Some(&(start, _)) = runs.iter().find(|(a, b)| (b - a) / q >= h0) else {
        return Ok(OmegaOutcome::NotFound { delta, h0, runs_examined: runs.len(), longest_run });
    };
    let u = start / q;
    let increment = integrate_power(table, u, u + h0, k, Domain::Normalized)? / q.powi(k as i32);
    let e = 1.0 + k as f64 / 4.0;
    let f_increment = increment - c_ref * ((u + h0).powf(e) - u.powf(e));
    let c_star = opts.c5.powi(k as i32) - delta as f64 * c_ref * e;
    let lower_bound = c_star * h0 * u.powf(k as f64 / 4.0);
    Ok(OmegaOutcome::Found(OmegaWitness {
        delta,
        t: u,
        h0,
        increment,
        scaled_increment: delta as f64 * increment / (h0 * u.powf(k as f64 / 4.0)),
        f_increment,
        c_star,
        lower_bound,
        holds: f_increment.abs() >= lower_bound,
    }))
}

/// One evaluation of
/// `ω(t) = S_±²(q1q2 t) - 4 max_{h<=H0} (S_±(q1q2(t+h)) - S_±(q1q2 t))² - (δ q1q2 t^{1/4})²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorPoint {
    pub t: f64,
    pub value: f64,
    pub max_sq_increment: f64,
    pub omega: f64,
}

pub fn omega_detector(t: f64, h0: f64, delta: f64, sign: Sign, table: &JumpTable) -> Result<DetectorPoint> {
    if !(t > 0.0) || !(h0 >= 0.0) {
        return Err(Error::Domain(format!("need t > 0 and H0 >= 0, got t = {t}, H0 = {h0}")));
    }
    let q = table.params().modulus_product() as f64;
    let (a, b) = (q * t, q * (t + h0));
    table.check_raw(b)?;
    let value = sign.part(table.s_unchecked(a));
    let mut worst = 0.0f64;
    // unit segments meeting (a, b], then integer points in (a, b]
    let mut n = a.floor() as u64;
    while (n as f64) < b {
        worst = worst.max((sign.part(table.prefix(n)) - value).powi(2));
        n += 1;
    }
    let mut m = a.floor() as u64 + 1;
    while m as f64 <= b {
        worst = worst.max((sign.part(table.s_unchecked(m as f64)) - value).powi(2));
        m += 1;
    }
    let omega = value * value - 4.0 * worst - (delta * q * t.powf(0.25)).powi(2);
    Ok(DetectorPoint { t, value, max_sq_increment: worst, omega })
}
