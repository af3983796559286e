use serde::Serialize;

use super::Sign;
use crate::compensated::NeumaierSum;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

const BLOCK: u64 = 1 << 16;

fn check_window(t: f64, table: &JumpTable) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("T = {t} must be positive")));
    }
    table.check_raw(2.0 * t)
}

/// Largest `t` with `σ P > κ t^{1/4}`, i.e. the end of the part of a
/// segment above the threshold (the set is an initial piece of it).
#[inline]
fn threshold_end(p: f64, sign: Sign, kappa: f64) -> f64 {
    let v = sign.factor() * p;
    if v <= 0.0 {
        f64::NEG_INFINITY
    } else if kappa == 0.0 {
        f64::INFINITY
    } else {
        (v / kappa).powi(4)
    }
}

/// Exact Lebesgue measure of `{t ∈ [T, 2T] : ±S(t) > c5 (q1q2)^{3/4} t^{1/4}}`
/// for both signs (raw argument). Each unit segment is solved in closed form.
pub fn exceedance_measure(t: f64, table: &JumpTable, c5: f64) -> Result<(f64, f64)> {
    check_window(t, table)?;
    if !(c5 >= 0.0) {
        return Err(Error::Domain(format!("c5 = {c5} must be nonnegative")));
    }
    let kappa = c5 * (table.params().modulus_product() as f64).powf(0.75);
    let (a, b) = (t, 2.0 * t);
    let prefix = table.prefix_sums();
    let parts = par::map_blocks(a.floor() as u64..b.ceil() as u64, BLOCK, |r| {
        let (mut plus, mut minus) = (NeumaierSum::ZERO, NeumaierSum::ZERO);
        for n in r {
            let lo = (n as f64).max(a);
            let hi = ((n + 1) as f64).min(b);
            let p = prefix[n as usize];
            let end = threshold_end(p, Sign::Plus, kappa).min(hi);
            if end > lo {
                plus.add(end - lo);
            }
            let end = threshold_end(p, Sign::Minus, kappa).min(hi);
            if end > lo {
                minus.add(end - lo);
            }
        }
        (plus, minus)
    });
    let (mut plus, mut minus) = (NeumaierSum::ZERO, NeumaierSum::ZERO);
    for (p, m) in parts {
        plus.merge(p);
        minus.merge(m);
    }
    Ok((plus.value(), minus.value()))
}

/// Maximal runs of one sign above the threshold and how many disjoint
/// subintervals of length `L` they hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunStats {
    /// `Σ ⌊len / L⌋` over maximal runs (greedy packing is optimal per run).
    pub count: u64,
    pub longest: f64,
    /// Maximal runs `(start, end)` in increasing order.
    pub runs: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunsReport {
    pub length: f64,
    pub plus: RunStats,
    pub minus: RunStats,
}

/// Maximal intervals in `[T, 2T]` on which `σS(t) > κ t^{1/4}` (raw).
pub(crate) fn threshold_runs(t: f64, table: &JumpTable, kappa: f64, sign: Sign) -> Vec<(f64, f64)> {
    let (a, b) = (t, 2.0 * t);
    let prefix = table.prefix_sums();
    let blocks = par::map_blocks(a.floor() as u64..b.ceil() as u64, BLOCK, |r| {
        let mut runs: Vec<(f64, f64)> = Vec::new();
        for n in r {
            let lo = (n as f64).max(a);
            let hi = ((n + 1) as f64).min(b);
            let end = threshold_end(prefix[n as usize], sign, kappa).min(hi);
            if end > lo {
                push_run(&mut runs, (lo, end));
            }
        }
        runs
    });
    let mut out = Vec::new();
    for block in blocks {
        for r in block {
            push_run(&mut out, r);
        }
    }
    out
}

fn push_run(runs: &mut Vec<(f64, f64)>, r: (f64, f64)) {
    match runs.last_mut() {
        Some(last) if last.1 == r.0 => last.1 = r.1,
        _ => runs.push(r),
    }
}

fn stats(runs: Vec<(f64, f64)>, l: f64) -> RunStats {
    let count = runs.iter().map(|(s, e)| ((e - s) / l).floor() as u64).sum();
    let longest = runs.iter().map(|(s, e)| e - s).fold(0.0, f64::max);
    RunStats { count, longest, runs }
}

/// Disjoint subintervals of length `L` of `[T, 2T]` on which
/// `±S(t) > c5 (q1q2)^{3/4} t^{1/4}` throughout, for both signs.
pub fn single_sign_runs(t: f64, table: &JumpTable, c5: f64, l: f64) -> Result<RunsReport> {
    check_window(t, table)?;
    if !(l > 0.0) || !(c5 >= 0.0) {
        return Err(Error::Domain(format!("need L > 0 and c5 >= 0, got L = {l}, c5 = {c5}")));
    }
    let kappa = c5 * (table.params().modulus_product() as f64).powf(0.75);
    Ok(RunsReport {
        length: l,
        plus: stats(threshold_runs(t, table, kappa, Sign::Plus), l),
        minus: stats(threshold_runs(t, table, kappa, Sign::Minus), l),
    })
}
