use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::{sin_cos_turns, Params};
use crate::compensated::NeumaierSum;
use crate::{par, Error, Result};

/// Term count above which a series evaluation is refused.
const MAX_TERMS: f64 = 4e8;

/// Rational shifts `θ1 = a1/q1`, `θ2 = a2/q2` in `(0, 1)` and the radius
/// `R`: lattice points with `(m + θ*)(n + θ*) x <= R` are summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselSeriesConfig {
    pub theta1: (u64, u64),
    pub theta2: (u64, u64),
    pub radius: f64,
}

impl BesselSeriesConfig {
    pub fn new(theta1: (u64, u64), theta2: (u64, u64), radius: f64) -> Result<Self> {
        for (a, q) in [theta1, theta2] {
            if a == 0 || a >= q {
                return Err(Error::Domain(format!("θ = {a}/{q} must lie strictly between 0 and 1")));
            }
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        Ok(BesselSeriesConfig { theta1, theta2, radius })
    }

    pub fn from_params(params: &Params, radius: f64) -> Result<Self> {
        Self::new((params.a1(), params.q1()), (params.a2(), params.q2()), radius)
    }

    /// `-cot(πθ2)/4`, from the reduced fraction so that e.g. `θ2 = 1/4`
    /// gives exactly `-0.25`.
    pub fn constant_term(&self) -> f64 {
        let (a, q) = self.theta2;
        let (s, c) = sin_cos_turns(a, 2 * q);
        -c / s / 4.0
    }
}

/// A partial sum of the Bessel series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselEval {
    pub value: f64,
    pub terms: u64,
}

/// All partial sums of the series up to some radius, in order of
/// increasing product.
#[derive(Debug, Clone)]
pub struct BesselPath {
    constant: f64,
    /// `(m + θ*)(n + θ*) x` for each included term, sorted.
    radii: Vec<f64>,
    /// Series value after including the term at the same index.
    values: Vec<f64>,
}

impl BesselPath {
    /// Sums every lattice point with `(m + θ*)(n + θ*) x <= cfg.radius`.
    pub fn build(x: f64, cfg: &BesselSeriesConfig) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} must be positive")));
        }
        let m_max = cfg.radius / x;
        let t1 = cfg.theta1.0 as f64 / cfg.theta1.1 as f64;
        let t2 = cfg.theta2.0 as f64 / cfg.theta2.1 as f64;
        let shortest = t1.min(1.0 - t1).min(t2).min(1.0 - t2);
        let estimate = 4.0 * m_max * ((m_max / shortest).max(1.0).ln() + 1.0 / shortest + 1.0);
        if estimate > MAX_TERMS {
            return Err(Error::Resource(format!(
                "radius {} needs about {estimate:.2e} terms; use a smaller radius",
                cfg.radius
            )));
        }
        let branches = [(t1, t2, 1.0), (1.0 - t1, t2, 1.0), (t1, 1.0 - t2, -1.0), (1.0 - t1, 1.0 - t2, -1.0)];
        // (product, sign, branch, m) with a total order for reproducible ties
        let mut keys: Vec<(f64, f64, u8, u32)> = Vec::new();
        for (b, &(a1, a2, sign)) in branches.iter().enumerate() {
            let mut m = 0u32;
            while (m as f64 + a1) * a2 <= m_max {
                let u = m as f64 + a1;
                let mut n = 0u32;
                loop {
                    let p = u * (n as f64 + a2);
                    if p > m_max {
                        break;
                    }
                    keys.push((p, sign, b as u8, m));
                    n += 1;
                }
                m += 1;
            }
        }
        keys.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
        let mut terms = vec![0.0f64; keys.len()];
        par::for_chunks_mut(&mut terms, 1 << 14, |start, out| {
            for (o, k) in out.iter_mut().zip(&keys[start..]) {
                let z = 4.0 * PI * (k.0 * x).sqrt();
                *o = k.1 * libm::j1(z) / k.0.sqrt();
            }
        });
        let scale = x.sqrt() / 4.0;
        let constant = cfg.constant_term();
        let mut acc = NeumaierSum::ZERO;
        let values = terms
            .iter()
            .map(|&t| {
                acc.add(t);
                constant + scale * acc.value()
            })
            .collect();
        let radii = keys.iter().map(|k| k.0 * x).collect();
        Ok(BesselPath { constant, radii, values })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Partial sum over terms with radius `<= r`.
    pub fn value_at(&self, r: f64) -> BesselEval {
        let k = self.radii.partition_point(|&p| p <= r);
        let value = if k == 0 { self.constant } else { self.values[k - 1] };
        BesselEval { value, terms: k as u64 }
    }

    /// Root mean square of `partial_sum(R) - reference` for `R` uniform in
    /// `[r_lo, r_hi]`; the partial sum is a step function of `R`.
    pub fn rms_deviation(&self, r_lo: f64, r_hi: f64, reference: f64) -> f64 {
        assert!(r_hi > r_lo);
        let mut acc = NeumaierSum::ZERO;
        let mut left = r_lo;
        let mut current = self.value_at(r_lo).value;
        let start = self.radii.partition_point(|&p| p <= r_lo);
        for (&p, &v) in self.radii[start..].iter().zip(&self.values[start..]) {
            if p >= r_hi {
                break;
            }
            acc.add((current - reference).powi(2) * (p - left));
            left = p;
            current = v;
        }
        acc.add((current - reference).powi(2) * (r_hi - left));
        (acc.value() / (r_hi - r_lo)).sqrt()
    }
}

/// Bessel double-series value of `S(x)` truncated at `cfg.radius`. The
/// series converges only conditionally; partial sums oscillate around the
/// limit.
pub fn bessel_identity_eval(x: f64, cfg: &BesselSeriesConfig) -> Result<BesselEval> {
    let path = BesselPath::build(x, cfg)?;
    Ok(path.value_at(cfg.radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_term_is_exact() {
        let cfg = BesselSeriesConfig::new((1, 3), (1, 4), 10.0).unwrap();
        assert_eq!(cfg.constant_term(), -0.25);
        let cfg = BesselSeriesConfig::new((1, 3), (1, 2), 10.0).unwrap();
        assert_eq!(cfg.constant_term(), 0.0);
        // below the smallest product only the constant remains
        let e = bessel_identity_eval(5.5, &BesselSeriesConfig::new((1, 3), (1, 4), 0.1).unwrap()).unwrap();
        assert_eq!(e, BesselEval { value: -0.25, terms: 0 });
    }

    #[test]
    fn term_count_matches_lattice_enumeration() {
        let cfg = BesselSeriesConfig::new((2, 5), (3, 7), 400.0).unwrap();
        let x = 3.0;
        let e = bessel_identity_eval(x, &cfg).unwrap();
        let (t1, t2) = (0.4, 3.0 / 7.0);
        let mut count = 0;
        for (a, b) in [(t1, t2), (1.0 - t1, t2), (t1, 1.0 - t2), (1.0 - t1, 1.0 - t2)] {
            for m in 0..2000 {
                for n in 0..2000 {
                    if (m as f64 + a) * (n as f64 + b) * x <= 400.0 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(e.terms, count);
    }

    #[test]
    fn theta2_reflection_negates() {
        let a = bessel_identity_eval(7.25, &BesselSeriesConfig::new((1, 3), (1, 4), 5000.0).unwrap()).unwrap();
        let b = bessel_identity_eval(7.25, &BesselSeriesConfig::new((1, 3), (3, 4), 5000.0).unwrap()).unwrap();
        assert_eq!(a.terms, b.terms);
        assert!((a.value + b.value).abs() < 1e-12, "{a:?} {b:?}");
    }

    #[test]
    fn rejects_bad_config() {
        assert!(BesselSeriesConfig::new((0, 3), (1, 4), 1.0).is_err());
        assert!(BesselSeriesConfig::new((1, 3), (4, 4), 1.0).is_err());
        assert!(BesselSeriesConfig::new((1, 3), (1, 4), -1.0).is_err());
        let huge = BesselSeriesConfig::new((1, 3), (1, 4), 1e12).unwrap();
        assert!(matches!(bessel_identity_eval(1.0, &huge), Err(Error::Resource(_))));
        assert!(bessel_identity_eval(0.0, &BesselSeriesConfig::new((1, 3), (1, 4), 1.0).unwrap()).is_err());
    }
}
