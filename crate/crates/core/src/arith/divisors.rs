//! Residue-constrained divisor counts and the Voronoi coefficients.
//!
//! With `f(u) = [u ≡ a1] + [u ≡ -a1] (mod q1)` and
//! `g(v) = [v ≡ a2] - [v ≡ -a2] (mod q2)`:
//!
//! * `Δd₂(n)    = Σ_{uv = n} f(u) g(v)`
//! * `Δd₂,₁(n) = Σ′_{n = hl, h ≤ H, h ≤ l ≤ 2^{J+1} h} g(h) f(l)`
//! * `Δd₂,₂(n) = Σ′_{n = hl, h ≤ H, h ≤ l ≤ 2^{J+1} h} f(h) g(l)`
//!
//! In the primed sums the boundary factorisations `l = h` and
//! `l = 2^{J+1} h` carry weight ½, so the values are half-integers.

use std::fmt;
use std::ops::{Add, AddAssign, Neg};

use serde::{Deserialize, Serialize};

use super::Params;
use crate::{Error, Result};

/// An exact multiple of ½, stored as twice its value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.0 += rhs.0;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[inline]
fn residue(b: i64, q: u64) -> u64 {
    b.rem_euclid(q as i64) as u64
}

/// Class indicators for a fixed parameter set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Classes {
    q1: u64,
    plus1: u64,
    minus1: u64,
    q2: u64,
    plus2: u64,
    minus2: u64,
}

impl Classes {
    pub(crate) fn new(p: &Params) -> Self {
        Classes {
            q1: p.q1(),
            plus1: p.a1() % p.q1(),
            minus1: residue(-(p.a1() as i64), p.q1()),
            q2: p.q2(),
            plus2: p.a2() % p.q2(),
            minus2: residue(-(p.a2() as i64), p.q2()),
        }
    }

    /// `[u ≡ a1] + [u ≡ -a1] (mod q1)`.
    #[inline]
    pub(crate) fn unsigned(&self, u: u64) -> i64 {
        let r = u % self.q1;
        (r == self.plus1) as i64 + (r == self.minus1) as i64
    }

    /// `[v ≡ a2] - [v ≡ -a2] (mod q2)`.
    #[inline]
    pub(crate) fn signed(&self, v: u64) -> i64 {
        let r = v % self.q2;
        (r == self.plus2) as i64 - (r == self.minus2) as i64
    }
}

/// `#{(u, v) : uv = n, u ≡ b1 (mod q1), v ≡ b2 (mod q2)}`.
pub fn residue_divisor_count(n: u64, b1: i64, b2: i64, params: &Params) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("residue_divisor_count needs n >= 1".into()));
    }
    let (q1, q2) = (params.q1(), params.q2());
    let (r1, r2) = (residue(b1, q1), residue(b2, q2));
    Ok(divisors(n)
        .into_iter()
        .filter(|&u| u % q1 == r1 && (n / u) % q2 == r2)
        .count() as u64)
}

/// The main Voronoi coefficient `Δd₂(n)`.
pub fn delta_d2(n: u64, params: &Params) -> Result<i64> {
    if n == 0 {
        return Err(Error::Domain("delta_d2 needs n >= 1".into()));
    }
    let c = Classes::new(params);
    Ok(divisors(n).into_iter().map(|u| c.unsigned(u) * c.signed(n / u)).sum())
}

/// `Δd₂(n)` for every `n <= y` (index 0 unused and zero), by a divisor sieve
/// over the admissible classes only.
pub fn delta_d2_table(y: u64, params: &Params) -> Vec<i64> {
    let c = Classes::new(params);
    let mut out = vec![0i64; y as usize + 1];
    for u in 1..=y {
        let fu = c.unsigned(u);
        if fu == 0 {
            continue;
        }
        let mut v = 1;
        while u * v <= y {
            let gv = c.signed(v);
            if gv != 0 {
                out[(u * v) as usize] += fu * gv;
            }
            v += 1;
        }
    }
    out
}

/// Index of the first nonzero `Δd₂`:
/// `n0 = min{a1, q1 - a1} · min{a2, q2 - a2}` (positive representatives).
pub fn n0_index(params: &Params) -> Result<u64> {
    if params.kind() != super::WeightKind::CosSin {
        return Err(Error::Domain(format!("n0 is defined for cos_sin weights, got {}", params.kind())));
    }
    if params.q2() <= 2 {
        return Err(Error::Degenerate(format!(
            "q2 = {} <= 2 makes Δd₂ vanish identically; no n0 exists",
            params.q2()
        )));
    }
    Ok(least_rep(params.a1(), params.q1()) * least_rep(params.a2(), params.q2()))
}

/// Smallest positive integer in the classes `±a (mod q)`.
fn least_rep(a: u64, q: u64) -> u64 {
    let r = a % q;
    let s = (q - r) % q;
    let pos = |x: u64| if x == 0 { q } else { x };
    pos(r).min(pos(s))
}

fn check_cutoffs(h_cap: u64) -> Result<()> {
    if h_cap < 2 {
        return Err(Error::Domain(format!("H = {h_cap} must be >= 2")));
    }
    Ok(())
}

/// `2^{J+1}`, saturating.
fn ratio_cap(j: u32) -> u64 {
    1u64.checked_shl(j + 1).unwrap_or(u64::MAX)
}

/// Weight (in halves) of the factorisation `n = h·l` under the primed sum,
/// or `None` when it falls outside the constraint region.
#[inline]
fn boundary_twice(h: u64, l: u64, h_cap: u64, ratio: u64) -> Option<i64> {
    if h == 0 || h > h_cap || l < h {
        return None;
    }
    let top = h.saturating_mul(ratio);
    if l > top {
        return None;
    }
    Some(if l == h || l == top { 1 } else { 2 })
}

/// `Δd₂,₁(n, H, J)`: `h` carries the signed `±a2` classes, `l` the unsigned
/// `±a1` classes.
pub fn delta_d21(n: u64, h_cap: u64, j: u32, params: &Params) -> Result<HalfInt> {
    delta_split(n, h_cap, j, params, false)
}

/// `Δd₂,₂(n, H, J)`: `h` carries the unsigned `±a1` classes, `l` the signed
/// `±a2` classes.
pub fn delta_d22(n: u64, h_cap: u64, j: u32, params: &Params) -> Result<HalfInt> {
    delta_split(n, h_cap, j, params, true)
}

fn delta_split(n: u64, h_cap: u64, j: u32, params: &Params, swapped: bool) -> Result<HalfInt> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    check_cutoffs(h_cap)?;
    let c = Classes::new(params);
    let ratio = ratio_cap(j);
    let mut twice = 0i64;
    for h in divisors(n) {
        let l = n / h;
        if let Some(w) = boundary_twice(h, l, h_cap, ratio) {
            let coef = if swapped { c.unsigned(h) * c.signed(l) } else { c.signed(h) * c.unsigned(l) };
            twice += w * coef;
        }
    }
    Ok(HalfInt(twice))
}

/// `Δd₂,₁(n)` for every `n` in `(lo, hi]`; element `i` holds `n = lo + 1 + i`.
pub fn delta_d21_range(lo: u64, hi: u64, h_cap: u64, j: u32, params: &Params) -> Result<Vec<HalfInt>> {
    split_range(lo, hi, h_cap, j, params, false)
}

/// `Δd₂,₂(n)` for every `n` in `(lo, hi]`.
pub fn delta_d22_range(lo: u64, hi: u64, h_cap: u64, j: u32, params: &Params) -> Result<Vec<HalfInt>> {
    split_range(lo, hi, h_cap, j, params, true)
}

fn split_range(lo: u64, hi: u64, h_cap: u64, j: u32, params: &Params, swapped: bool) -> Result<Vec<HalfInt>> {
    check_cutoffs(h_cap)?;
    if hi <= lo {
        return Ok(Vec::new());
    }
    let c = Classes::new(params);
    let ratio = ratio_cap(j);
    let mut out = vec![0i64; (hi - lo) as usize];
    let mut h = 1u64;
    // l >= h forces h^2 <= n <= hi
    while h <= h_cap && h.saturating_mul(h) <= hi {
        let ch = if swapped { c.unsigned(h) } else { c.signed(h) };
        if ch != 0 {
            let l_min = h.max(lo / h + 1);
            let l_max = (hi / h).min(h.saturating_mul(ratio));
            for l in l_min..=l_max {
                let cl = if swapped { c.signed(l) } else { c.unsigned(l) };
                if cl != 0 {
                    let w = if l == h || l == h.saturating_mul(ratio) { 1 } else { 2 };
                    out[(h * l - lo - 1) as usize] += w * ch * cl;
                }
            }
        }
        h += 1;
    }
    Ok(out.into_iter().map(HalfInt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::WeightKind;

    fn p(a1: u64, q1: u64, a2: u64, q2: u64) -> Params {
        Params::cos_sin(a1, q1, a2, q2).unwrap()
    }

    /// All ordered pairs (u, v) with uv = n, by scanning u = 1..=n.
    fn pairs(n: u64) -> Vec<(u64, u64)> {
        (1..=n).filter(|&u| n.is_multiple_of(u)).map(|u| (u, n / u)).collect()
    }

    fn brute_count(n: u64, b1: i64, b2: i64, q1: u64, q2: u64) -> u64 {
        pairs(n)
            .into_iter()
            .filter(|&(u, v)| (u as i64 - b1).rem_euclid(q1 as i64) == 0 && (v as i64 - b2).rem_euclid(q2 as i64) == 0)
            .count() as u64
    }

    #[test]
    fn residue_divisor_count_examples() {
        assert_eq!(residue_divisor_count(1, 1, 1, &p(1, 3, 1, 4)).unwrap(), 1);
        let q57 = p(2, 5, 3, 7);
        assert_eq!(brute_count(6, 2, 3, 5, 7), 1);
        assert_eq!(residue_divisor_count(6, 2, 3, &q57).unwrap(), 1);
        // only (3, 4): in (12, 1) the cofactor 1 is not divisible by 4
        let q34 = p(1, 3, 1, 4);
        let expected = brute_count(12, 0, 0, 3, 4);
        assert_eq!(expected, 1);
        assert_eq!(residue_divisor_count(12, 0, 0, &q34).unwrap(), expected);
        assert!(matches!(residue_divisor_count(0, 1, 1, &q34), Err(Error::Domain(_))));
    }

    #[test]
    fn delta_d2_is_the_four_count_combination() {
        for params in [p(1, 3, 1, 4), p(2, 5, 3, 7), p(1, 2, 1, 3), p(3, 8, 2, 9), p(1, 4, 1, 3)] {
            let (a1, a2) = (params.a1() as i64, params.a2() as i64);
            let table = delta_d2_table(10_000, &params);
            for n in 1..=10_000u64 {
                let d = |b1, b2| residue_divisor_count(n, b1, b2, &params).unwrap() as i64;
                let combo = d(a1, a2) + d(-a1, a2) - d(a1, -a2) - d(-a1, -a2);
                assert_eq!(table[n as usize], combo, "n = {n}, {params}");
                if n <= 500 {
                    assert_eq!(delta_d2(n, &params).unwrap(), combo);
                }
            }
        }
    }

    #[test]
    fn delta_d2_examples() {
        assert_eq!(delta_d2(1, &p(1, 3, 1, 4)).unwrap(), 1);
        assert_eq!(delta_d2(6, &p(2, 5, 3, 7)).unwrap(), 1);
        let q2 = p(1, 3, 1, 2);
        assert!((1..300).all(|n| delta_d2(n, &q2).unwrap() == 0));
    }

    #[test]
    fn n0_examples_and_minimality() {
        assert_eq!(n0_index(&p(1, 3, 1, 4)).unwrap(), 1);
        assert_eq!(n0_index(&p(2, 5, 3, 7)).unwrap(), 6);
        assert!(matches!(n0_index(&p(1, 3, 1, 2)), Err(Error::Degenerate(_))));
        assert!(n0_index(&p(1, 3, 1, 4).with_kind(WeightKind::CosCos)).is_err());
        for q1 in 2..=12u64 {
            for q2 in 3..=12u64 {
                for a1 in 1..=q1 {
                    for a2 in 1..=q2 {
                        let Ok(params) = Params::cos_sin(a1, q1, a2, q2) else { continue };
                        let n0 = n0_index(&params).unwrap();
                        assert!(4 * n0 < q1 * q2, "{params}");
                        for n in 1..n0 {
                            assert_eq!(delta_d2(n, &params).unwrap(), 0);
                        }
                        let v = delta_d2(n0, &params).unwrap().abs();
                        if q1 >= 3 {
                            assert_eq!(v, 1, "{params}");
                        } else {
                            assert!(v == 1 || v == 2, "{params}");
                        }
                    }
                }
            }
        }
    }

    /// Direct transcription of the primed-sum definition over all pairs.
    fn brute_split(n: u64, h_cap: u64, j: u32, params: &Params, swapped: bool) -> f64 {
        let c = Classes::new(params);
        let top_ratio = 2u64.pow(j + 1);
        let mut s = 0.0;
        for (h, l) in pairs(n) {
            if h > h_cap || l < h || l > top_ratio * h {
                continue;
            }
            let w = if l == h || l == top_ratio * h { 0.5 } else { 1.0 };
            let coef = if swapped { c.unsigned(h) * c.signed(l) } else { c.signed(h) * c.unsigned(l) };
            s += w * coef as f64;
        }
        s
    }

    #[test]
    fn split_coefficient_examples() {
        let q = p(1, 3, 1, 4);
        assert_eq!(delta_d21(1, 2, 0, &q).unwrap(), HalfInt::from_twice(1));
        assert_eq!(delta_d22(1, 2, 0, &q).unwrap(), HalfInt::from_twice(1));
        // 7 is prime: 1·7 violates l <= 2h for J = 0
        assert!(delta_d21(7, 2, 0, &q).unwrap().is_zero());
        assert!(delta_d22(7, 2, 0, &q).unwrap().is_zero());
        let q2 = p(1, 3, 1, 2);
        for n in 1..200 {
            assert!(delta_d21(n, 10, 2, &q2).unwrap().is_zero());
            assert!(delta_d22(n, 10, 2, &q2).unwrap().is_zero());
        }
        assert!(delta_d21(5, 1, 0, &q).is_err());
    }

    #[test]
    fn split_coefficients_match_brute_force() {
        for params in [p(1, 3, 1, 4), p(2, 5, 3, 7), p(1, 2, 1, 3)] {
            for h_cap in 2..=10 {
                for j in 0..=3 {
                    let r1 = delta_d21_range(0, 200, h_cap, j, &params).unwrap();
                    let r2 = delta_d22_range(0, 200, h_cap, j, &params).unwrap();
                    for n in 1..=200u64 {
                        let b1 = brute_split(n, h_cap, j, &params, false);
                        let b2 = brute_split(n, h_cap, j, &params, true);
                        assert_eq!(delta_d21(n, h_cap, j, &params).unwrap().to_f64(), b1);
                        assert_eq!(delta_d22(n, h_cap, j, &params).unwrap().to_f64(), b2);
                        assert_eq!(r1[n as usize - 1].to_f64(), b1);
                        assert_eq!(r2[n as usize - 1].to_f64(), b2);
                    }
                }
            }
        }
    }

    #[test]
    fn split_coefficients_recover_delta_d2_when_unconstrained() {
        // With H and 2^{J+1} large the two halves cover every factorisation
        // once (the diagonal h = l contributes ½ + ½).
        let params = p(2, 5, 3, 7);
        let full = delta_d2_table(3000, &params);
        let a = delta_d21_range(0, 3000, 1 << 20, 20, &params).unwrap();
        let b = delta_d22_range(0, 3000, 1 << 20, 20, &params).unwrap();
        for n in 1..=3000usize {
            assert_eq!((a[n - 1] + b[n - 1]).to_f64(), full[n] as f64, "n = {n}");
        }
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
    }
}
