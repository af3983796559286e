use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{adaptive_simpson_panels, defaults};
use crate::arith::{delta_d2, n0_index, Params};
use crate::compensated::NeumaierSum;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

const MAX_DEPTH: u32 = 40;

/// The smoothing kernel `K_ζ(u) = (1 - |u|)(1 + ζ sin(4πα√n₀ u))` and the
/// data of its predicted main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub alpha: f64,
    pub zeta: i8,
    pub n0: u64,
    /// `Δd₂(n₀)`.
    pub delta_n0: i64,
    /// `ζ' = -Δd₂(n₀) ζ`; ±1 except for `q1 = 2`, where it can be ±2.
    pub zeta_prime: i64,
}

impl KernelSpec {
    pub fn new(alpha: f64, zeta: i8, params: &Params) -> Result<Self> {
        let n0 = n0_index(params)?;
        Self::from_parts(alpha, zeta, n0, delta_d2(n0, params)?)
    }

    pub fn from_parts(alpha: f64, zeta: i8, n0: u64, delta_n0: i64) -> Result<Self> {
        if zeta != 1 && zeta != -1 {
            return Err(Error::Domain(format!("ζ = {zeta} must be ±1")));
        }
        if n0 == 0 || !(alpha > (n0 as f64).sqrt()) || !alpha.is_finite() {
            return Err(Error::Domain(format!("need α > √n₀, got α = {alpha}, n₀ = {n0}")));
        }
        Ok(KernelSpec { alpha, zeta, n0, delta_n0, zeta_prime: -delta_n0 * zeta as i64 })
    }

    fn frequency(&self) -> f64 {
        4.0 * PI * self.alpha * (self.n0 as f64).sqrt()
    }

    #[inline]
    fn weight(&self, u: f64) -> f64 {
        (1.0 - u.abs()) * (1.0 + self.zeta as f64 * (self.frequency() * u).sin())
    }

    /// `ζ' / (2 n₀^{3/4}) · sin(4πt√n₀ - 3π/4)`.
    pub fn predicted(&self, t: f64) -> f64 {
        let n0 = self.n0 as f64;
        self.zeta_prime as f64 / (2.0 * n0.powf(0.75)) * (4.0 * PI * t * n0.sqrt() - 0.75 * PI).sin()
    }
}

pub fn kernel_weight(u: f64, spec: &KernelSpec) -> Result<f64> {
    if !(u.abs() <= 1.0) {
        return Err(Error::Domain(format!("kernel argument {u} outside [-1, 1]")));
    }
    Ok(spec.weight(u))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelResult {
    pub t: f64,
    pub lhs: f64,
    pub predicted: f64,
    pub residual: f64,
}

impl KernelResult {
    fn new(t: f64, lhs: f64, spec: &KernelSpec) -> Self {
        let predicted = spec.predicted(t);
        KernelResult { t, lhs, predicted, residual: lhs - predicted }
    }
}

/// `∫_{-1}^{1} S*(t + αu) K_ζ(u) du` with the perturbation
/// `f(v) = f_coeff v^{1/4}` inside `S*`.
///
/// `S(q1q2 (t+αu)²)` is constant between the points where `q1q2 (t+αu)²`
/// is an integer; those points and the kink at `u = 0` are forced nodes and
/// each piece is integrated by adaptive Simpson. The perturbation
/// contributes exactly `4√2π (q1q2)^{-3/4} f_coeff` because the kernel has
/// unit mass.
pub fn kernel_test(t: f64, spec: &KernelSpec, table: &JumpTable, f_coeff: f64) -> Result<KernelResult> {
    kernel_test_tol(t, spec, table, f_coeff, defaults::KERNEL_TOL)
}

fn kernel_test_tol(t: f64, spec: &KernelSpec, table: &JumpTable, f_coeff: f64, tol: f64) -> Result<KernelResult> {
    let alpha = spec.alpha;
    if !(t - alpha >= 1.0) {
        return Err(Error::Domain(format!("need t - α >= 1, got t = {t}, α = {alpha}")));
    }
    let q = table.params().modulus_product() as f64;
    let top = q * (t + alpha) * (t + alpha);
    table.check_raw(top)?;
    let h = |u: f64| spec.weight(u) / (t + alpha * u).sqrt();
    let jump_u = |n: u64| ((n as f64 / q).sqrt() - t) / alpha;
    let quarter_periods = 2.0 * spec.frequency() / PI;
    let mut acc = NeumaierSum::ZERO;
    let mut n = (q * (t - alpha) * (t - alpha)).floor() as u64;
    let mut u = -1.0f64;
    while u < 1.0 {
        let next_jump = jump_u(n + 1);
        let mut next = next_jump.min(1.0);
        let mut crosses = next_jump <= 1.0;
        if u < 0.0 && next > 0.0 {
            next = 0.0;
            crosses = next_jump == 0.0;
        }
        if next > u {
            let p = table.prefix(n);
            if p != 0.0 {
                let piece_tol = (tol * 0.5 * (next - u)).max(f64::MIN_POSITIVE);
                let panels = ((next - u) * quarter_periods).ceil() as usize;
                acc.add(p * adaptive_simpson_panels(&h, u, next, panels, piece_tol, MAX_DEPTH)?);
            }
            u = next;
        }
        if crosses && next_jump <= u {
            n += 1;
        }
    }
    let lhs = 4.0 * 2f64.sqrt() * PI / q * acc.value() + 4.0 * 2f64.sqrt() * PI * q.powf(-0.75) * f_coeff;
    Ok(KernelResult::new(t, lhs, spec))
}

/// Kernel test where `S` is replaced by the single Voronoi term at `n₀`,
/// i.e. `S*(s) = Δd₂(n₀) n₀^{-3/4} cos(4π√n₀ s - 3π/4)`.
pub fn kernel_test_single_term(t: f64, spec: &KernelSpec, tol: f64) -> Result<KernelResult> {
    let n0 = spec.n0 as f64;
    let amp = spec.delta_n0 as f64 * n0.powf(-0.75);
    let w = 4.0 * PI * n0.sqrt();
    let f = |u: f64| amp * (w * (t + spec.alpha * u) - 0.75 * PI).cos() * spec.weight(u);
    // quarter-period panels for the fastest component, frequency w α + A
    let fastest = w * spec.alpha + spec.frequency();
    let panels = (2.0 * fastest / PI).ceil() as usize + 1;
    let lhs = adaptive_simpson_panels(&f, -1.0, 0.0, panels, 0.5 * tol, MAX_DEPTH)?
        + adaptive_simpson_panels(&f, 0.0, 1.0, panels, 0.5 * tol, MAX_DEPTH)?;
    Ok(KernelResult::new(t, lhs, spec))
}

/// [`kernel_test`] over many `t`, in parallel.
pub fn kernel_grid(ts: &[f64], spec: &KernelSpec, table: &JumpTable, f_coeff: f64) -> Result<Vec<KernelResult>> {
    par::map_items(ts.to_vec(), |t| kernel_test(t, spec, table, f_coeff)).into_iter().collect()
}
