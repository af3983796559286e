use serde::{Deserialize, Serialize};

use super::defaults;
use crate::exactsum::JumpTable;
use crate::{par, Error, Result};

const BLOCK: u64 = 1 << 16;

/// Perturbation and threshold for a sign-change scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Threshold for the witness search, `S(t₁) >= c1 t₁^{1/4}`.
    pub c1: f64,
    /// The scanned function is `S(t) + f_coeff · t^{1/4}`; needs `|f_coeff| <= c1`.
    pub f_coeff: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { c1: defaults::C1, f_coeff: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub window: (f64, f64),
    /// Raw arguments where the new sign starts; integers when `f_coeff = 0`.
    pub crossings: Vec<f64>,
    /// Largest distance between consecutive entries of
    /// `[t_lo, crossings…, t_hi]`.
    pub max_gap: f64,
    /// `max_gap / √(q1q2 t_lo)`.
    pub gap_ratio: f64,
    /// `(t₁, t₂)` with `S(t₁) >= c1 t₁^{1/4}` and `S(t₂) <= -c1 t₂^{1/4}`,
    /// the first of each in the window; only searched when `c1 > 0`.
    pub witnesses: Option<(f64, f64)>,
    pub options: ScanOptions,
}

/// Summary of one block of segments, mergeable left to right.
#[derive(Debug, Default)]
struct BlockScan {
    first_sign: i8,
    first_pos: f64,
    last_sign: i8,
    crossings: Vec<f64>,
    t1: Option<f64>,
    t2: Option<f64>,
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign changes of `S(t) + f_coeff t^{1/4}` in `[t_lo, t_hi]` (raw argument).
/// Runs of exact zeros are skipped: a change is recorded only between
/// nonzero values of opposite sign, at the start of the new sign.
pub fn scan_sign_changes(t_lo: f64, t_hi: f64, table: &JumpTable, opts: &ScanOptions) -> Result<ScanReport> {
    table.check_raw(t_lo)?;
    table.check_raw(t_hi)?;
    if !(t_hi > t_lo) {
        return Err(Error::Domain(format!("empty window [{t_lo}, {t_hi}]")));
    }
    if !(opts.c1 >= 0.0) || !(opts.f_coeff.abs() <= opts.c1) {
        return Err(Error::Domain(format!("need c1 >= 0 and |f_coeff| <= c1, got {opts:?}")));
    }
    let first = t_lo.floor() as u64;
    let last = (t_hi.ceil() as u64).max(first + 1);
    let prefix = table.prefix_sums();
    let blocks = par::map_blocks(first..last, BLOCK, |r| {
        let mut b = BlockScan::default();
        let mut feed = |pos: f64, s: i8| {
            if s == 0 {
                return;
            }
            if b.first_sign == 0 {
                b.first_sign = s;
                b.first_pos = pos;
            } else if s != b.last_sign {
                b.crossings.push(pos);
            }
            b.last_sign = s;
        };
        for n in r {
            let lo = (n as f64).max(t_lo);
            let hi = ((n + 1) as f64).min(t_hi);
            if hi <= lo {
                continue;
            }
            let p = prefix[n as usize];
            if opts.c1 > 0.0 {
                let mid = 0.5 * (lo + hi);
                let thr = opts.c1 * mid.powf(0.25);
                if b.t1.is_none() && p >= thr {
                    b.t1 = Some(mid);
                }
                if b.t2.is_none() && p <= -thr {
                    b.t2 = Some(mid);
                }
            }
            if opts.f_coeff == 0.0 {
                feed(lo, sign_of(p));
                continue;
            }
            // S + f is monotone on the segment; it vanishes at most once
            let root = -p / opts.f_coeff;
            let t_star = if root > 0.0 { root.powi(4) } else { f64::NAN };
            let g = |t: f64| p + opts.f_coeff * t.powf(0.25);
            if t_star > lo && t_star < hi {
                feed(lo, sign_of(g(0.5 * (lo + t_star))));
                feed(t_star, sign_of(g(0.5 * (t_star + hi))));
            } else {
                feed(lo, sign_of(g(0.5 * (lo + hi))));
            }
        }
        b
    });
    let mut crossings = Vec::new();
    let mut last_sign = 0i8;
    let (mut t1, mut t2) = (None, None);
    for b in blocks {
        if b.first_sign != 0 {
            if last_sign != 0 && b.first_sign != last_sign {
                crossings.push(b.first_pos);
            }
            crossings.extend(b.crossings);
            last_sign = b.last_sign;
        }
        t1 = t1.or(b.t1);
        t2 = t2.or(b.t2);
    }
    let mut max_gap = 0.0f64;
    let mut prev = t_lo;
    for &c in crossings.iter().chain(std::iter::once(&t_hi)) {
        max_gap = max_gap.max(c - prev);
        prev = c;
    }
    let q = table.params().modulus_product() as f64;
    let witnesses = match (t1, t2) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    Ok(ScanReport {
        window: (t_lo, t_hi),
        crossings,
        max_gap,
        gap_ratio: max_gap / (q * t_lo).sqrt(),
        witnesses,
        options: *opts,
    })
}
