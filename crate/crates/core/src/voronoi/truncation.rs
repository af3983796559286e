use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which experiment the truncation is tuned for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    /// `H = T`, `y = √T`.
    SignLemma,
    /// `H = T`, `y = min(T / 2h, T / log⁶ T)`.
    MsqLemma,
}

/// Truncation of the Voronoi-type expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    /// Cutoff of the main sum `R0`.
    pub y: f64,
    /// Cap on the small factor `h` in `R12`/`R21`; at least 2.
    pub h_cap: u64,
    /// Dyadic depth: `R12`/`R21` run over `y < n <= 2^{J+1} H²`.
    pub j: u32,
    /// Scale the parameters were derived for.
    pub t: f64,
    /// Violated admissibility conditions, if any. Not fatal.
    pub warnings: Vec<String>,
}

impl TruncationParams {
    /// Explicit parameters; `h_cap` must be at least 2.
    pub fn new(y: f64, h_cap: u64, j: u32, t: f64) -> Result<Self> {
        if !(y >= 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("y = {y} must be finite and nonnegative")));
        }
        if h_cap < 2 {
            return Err(Error::Domain(format!("H = {h_cap} must be at least 2")));
        }
        Ok(TruncationParams { y, h_cap, j, t, warnings: Vec::new() })
    }

    /// Nominal upper end `2^{J+1} H²` of the `R12`/`R21` ranges.
    pub fn split_upper(&self) -> f64 {
        2f64.powi(self.j as i32 + 1) * (self.h_cap as f64).powi(2)
    }
}

/// `J = ⌊(log T + 2 log q - 4 log log T) / log 2⌋`, clamped at zero.
pub fn j_for(t: f64, q: u64) -> u32 {
    let l = t.ln();
    let v = ((l + 2.0 * (q as f64).ln() - 4.0 * l.ln()) / 2f64.ln()).floor();
    if v > 0.0 {
        v as u32
    } else {
        0
    }
}

/// Derives `(y, H, J)` from the scale `T` and modulus product `q = q1q2`.
pub fn derive_truncation(t: f64, q: u64, mode: TruncationMode, h: Option<f64>) -> Result<TruncationParams> {
    let t_min = 100f64.max((q as f64).powf(1.01));
    if !(t >= t_min) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} must be at least {t_min}")));
    }
    let l = t.ln();
    let mut warnings = Vec::new();
    let y = match mode {
        TruncationMode::SignLemma => t.sqrt(),
        TruncationMode::MsqLemma => {
            let h = h.ok_or_else(|| Error::Domain("msq_lemma mode needs h".into()))?;
            if !(h > 0.0) {
                return Err(Error::Domain(format!("h = {h} must be positive")));
            }
            if h < 1.0 || h > 0.5 * t.sqrt() {
                warnings.push(format!("h = {h} outside [1, √T/2]"));
            }
            (t / (2.0 * h)).min(t / l.powi(6))
        }
    };
    let h_cap = t.ceil() as u64;
    let qf = q as f64;
    let y_max = (h_cap as f64).powi(2).min(qf * qf * t) / l.powi(4);
    if y > y_max {
        warnings.push(format!("y = {y} above the admissible bound {y_max}"));
    }
    if y <= 1.0 {
        warnings.push(format!("y = {y} is not above T^ε"));
    }
    for w in &warnings {
        log::warn!("truncation: {w}");
    }
    Ok(TruncationParams { y, h_cap, j: j_for(t, q), t, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_lemma_at_one_million() {
        let tp = derive_truncation(1e6, 12, TruncationMode::SignLemma, None).unwrap();
        assert_eq!(tp.h_cap, 1_000_000);
        assert!((tp.y - 1000.0).abs() < 1e-9);
        let l = 1e6f64.ln();
        let expect = ((l + 2.0 * 12f64.ln() - 4.0 * l.ln()) / 2f64.ln()).floor() as u32;
        assert_eq!(tp.j, expect);
        assert_eq!(tp.j, 11);
        assert!(tp.warnings.is_empty(), "{:?}", tp.warnings);
    }

    #[test]
    fn msq_lemma_takes_the_smaller_candidate() {
        let t: f64 = 1e6;
        let tp = derive_truncation(t, 12, TruncationMode::MsqLemma, Some(t.sqrt())).unwrap();
        let log6 = t / t.ln().powi(6);
        assert!(log6 < t.sqrt() / 2.0);
        assert!((tp.y - log6).abs() < 1e-12);
        let tp = derive_truncation(1e4, 12, TruncationMode::MsqLemma, Some(4.0)).unwrap();
        let expect = (1e4 / 8.0f64).min(1e4 / 1e4f64.ln().powi(6));
        assert!((tp.y - expect).abs() < 1e-15);
        assert!(tp.y < 1.0 && !tp.warnings.is_empty());
        let tp = derive_truncation(t, 12, TruncationMode::MsqLemma, Some(1e6)).unwrap();
        assert!((tp.y - log6).abs() < 1e-12);
        assert!(!tp.warnings.is_empty());
    }

    #[test]
    fn window_warning_matches_inequality() {
        for t in [150.0, 1e3, 1e5, 1e8] {
            for q in [6u64, 12, 35] {
                if t < (q as f64).powf(1.01) {
                    continue;
                }
                let tp = derive_truncation(t, q, TruncationMode::SignLemma, None).unwrap();
                let bound = (tp.h_cap as f64).powi(2).min((q * q) as f64 * t) / t.ln().powi(4);
                let warned = tp.warnings.iter().any(|w| w.contains("admissible"));
                assert_eq!(warned, tp.y > bound, "T = {t}, q = {q}");
            }
        }
    }

    #[test]
    fn rejects_small_scale_and_missing_h() {
        assert!(derive_truncation(99.0, 12, TruncationMode::SignLemma, None).is_err());
        assert!(derive_truncation(1e4, 12, TruncationMode::MsqLemma, None).is_err());
        assert!(TruncationParams::new(10.0, 1, 0, 100.0).is_err());
        assert_eq!(j_for(100.0, 1), 0);
    }
}
