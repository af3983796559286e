//! Exact integration of functions of the step function `S`.

use super::{Domain, JumpTable};
use crate::compensated::NeumaierSum;
use crate::{par, Error, Result};

pub const DEFAULT_MAX_POWER: u32 = 9;

const SEGMENT_BLOCK: u64 = 1 << 16;

/// `∫_a^b S^k` over the raw or normalised argument, exactly as a sum over the
/// constant pieces of `S`. Powers above [`DEFAULT_MAX_POWER`] are rejected.
pub fn integrate_power(table: &JumpTable, a: f64, b: f64, k: u32, domain: Domain) -> Result<f64> {
    integrate_power_capped(table, a, b, k, domain, DEFAULT_MAX_POWER)
}

pub fn integrate_power_capped(
    table: &JumpTable,
    a: f64,
    b: f64,
    k: u32,
    domain: Domain,
    max_k: u32,
) -> Result<f64> {
    if k == 0 || k > max_k {
        return Err(Error::Domain(format!("power k = {k} must lie in [1, {max_k}]")));
    }
    let scale = match domain {
        Domain::Raw => 1.0,
        Domain::Normalized => table.params().modulus_product() as f64,
    };
    let v = raw_integral(table, a * scale, b * scale, |s| s.powi(k as i32))? / scale;
    if !v.is_finite() {
        return Err(Error::Numerical(format!("∫S^{k} overflowed on [{a}, {b}]")));
    }
    Ok(v)
}

/// `∫_a^b g(S(t)) dt` over the raw argument for any `g`, exact up to
/// compensated rounding: `S` equals `P(N)` on `(N, N+1)`, so each unit
/// segment contributes `g(P(N))` times its overlap with `[a, b]`.
pub fn raw_integral<G>(table: &JumpTable, a: f64, b: f64, g: G) -> Result<f64>
where
    G: Fn(f64) -> f64 + Sync + Send,
{
    table.check_raw(a)?;
    table.check_raw(b)?;
    if a > b {
        return Err(Error::Domain(format!("integration bounds reversed: {a} > {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let first = a.floor() as u64;
    let last = (b.ceil() as u64).max(first + 1); // exclusive
    let prefix = table.prefix_sums();
    let parts = par::map_blocks(first..last, SEGMENT_BLOCK, |r| {
        let mut acc = NeumaierSum::ZERO;
        for n in r {
            let lo = (n as f64).max(a);
            let hi = ((n + 1) as f64).min(b);
            if hi > lo {
                acc.add(g(prefix[n as usize]) * (hi - lo));
            }
        }
        acc
    });
    Ok(parts.into_iter().sum::<NeumaierSum>().value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_jumps;
    use crate::Params;

    fn tab() -> JumpTable {
        sieve_jumps(5000, &Params::cos_sin(1, 3, 1, 4).unwrap()).unwrap()
    }

    /// Midpoint Riemann sum with step `h`, evaluating S pointwise.
    fn riemann(t: &JumpTable, a: f64, b: f64, k: i32, h: f64) -> f64 {
        let n = ((b - a) / h).round() as usize;
        (0..n).map(|i| t.s_eval(a + (i as f64 + 0.5) * h).unwrap().powi(k)).sum::<f64>() * h
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate_power(&tab(), 3.0, 3.0, 2, Domain::Raw).unwrap(), 0.0);
    }

    #[test]
    fn first_power_matches_riemann_sum() {
        let t = tab();
        let exact = integrate_power(&t, 1.0, 3.0, 1, Domain::Raw).unwrap();
        assert!((exact - riemann(&t, 1.0, 3.0, 1, 1e-4)).abs() < 1e-3);
        // S = -0.5 on (1,2) and -1.0 on (2,3)
        assert!((exact + 1.5).abs() < 1e-14);
    }

    #[test]
    fn non_integer_bounds() {
        let t = tab();
        let exact = integrate_power(&t, 10.3, 57.85, 3, Domain::Raw).unwrap();
        assert!((exact - riemann(&t, 10.3, 57.85, 3, 1e-4)).abs() < 1e-3 * exact.abs().max(1.0));
    }

    #[test]
    fn normalised_domain_rescales() {
        let t = tab();
        let raw = integrate_power(&t, 12.0, 600.0, 2, Domain::Raw).unwrap();
        let norm = integrate_power(&t, 1.0, 50.0, 2, Domain::Normalized).unwrap();
        assert!((raw / 12.0 - norm).abs() < 1e-12 * raw.abs());
    }

    #[test]
    fn even_powers_nonnegative_and_errors() {
        let t = tab();
        assert!(integrate_power(&t, 0.0, 4999.0, 2, Domain::Raw).unwrap() >= 0.0);
        assert!(integrate_power(&t, 0.0, 10.0, 0, Domain::Raw).is_err());
        assert!(integrate_power(&t, 0.0, 10.0, 10, Domain::Raw).is_err());
        assert!(integrate_power(&t, 5.0, 4.0, 1, Domain::Raw).is_err());
        assert!(integrate_power(&t, 0.0, 6000.0, 1, Domain::Raw).is_err());
        assert!(integrate_power_capped(&t, 0.0, 10.0, 12, Domain::Raw, 12).is_ok());
    }
}
