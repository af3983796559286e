use std::f64::consts::PI;

use super::{Params, WeightKind};

/// `(sin 2πr/d, cos 2πr/d)` evaluated from the reduced fraction `r/d`.
///
/// The angle is folded into `[0, π/4]` with integer arithmetic before any
/// floating point work, so quarter-turn values are exact (`sin π = 0`,
/// `cos π/2 = 0`) and the tables satisfy their reflection symmetries
/// bit-for-bit.
pub fn sin_cos_turns(r: u64, d: u64) -> (f64, f64) {
    assert!(d > 0, "denominator must be positive");
    let d4 = 4 * d;
    let p = (4 * (r % d)) % d4;
    (sin_quarter_units(p, d), sin_quarter_units((p + d) % d4, d))
}

/// `sin(2π p / 4d)` for `p` in `[0, 4d)`.
fn sin_quarter_units(p: u64, d: u64) -> f64 {
    if p > 2 * d {
        return -sin_quarter_units(4 * d - p, d);
    }
    let p = if p > d { 2 * d - p } else { p };
    // p in [0, d]: angle in [0, π/2]
    if 2 * p > d {
        (PI * (d - p) as f64 / (2 * d) as f64).cos()
    } else {
        (PI * p as f64 / (2 * d) as f64).sin()
    }
}

/// Per-residue weight values.
///
/// `first[r]` is the weight of a summation variable `m ≡ r (mod q1)` and
/// `second[r]` that of `n ≡ r (mod q2)`. For the `cos_sin` kind these are the
/// cosine table `cos(2π r a1/q1)` and the sine table `sin(2π r a2/q2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueWeightTables {
    first: Vec<f64>,
    second: Vec<f64>,
    /// `first_partial[j] = Σ_{u=1..j} first[u mod q1]` for `j < q1`.
    first_partial: Vec<f64>,
    second_partial: Vec<f64>,
    first_period: f64,
    second_period: f64,
}

impl ResidueWeightTables {
    pub fn new(params: &Params) -> Self {
        let (use_sin1, use_sin2) = match params.kind() {
            WeightKind::CosSin => (false, true),
            WeightKind::SinSin => (true, true),
            WeightKind::CosCos => (false, false),
        };
        let first = table(params.a1(), params.q1(), use_sin1);
        let second = table(params.a2(), params.q2(), use_sin2);
        let (first_partial, first_period) = partials(&first);
        let (second_partial, second_period) = partials(&second);
        ResidueWeightTables { first, second, first_partial, second_partial, first_period, second_period }
    }

    pub fn first(&self) -> &[f64] {
        &self.first
    }

    pub fn second(&self) -> &[f64] {
        &self.second
    }

    #[inline]
    pub fn w1(&self, m: u64) -> f64 {
        self.first[(m % self.first.len() as u64) as usize]
    }

    #[inline]
    pub fn w2(&self, n: u64) -> f64 {
        self.second[(n % self.second.len() as u64) as usize]
    }

    /// `Σ_{m=1..k} w1(m)`, in O(1) from the period structure.
    pub fn w1_prefix(&self, k: u64) -> f64 {
        periodic_prefix(k, &self.first_partial, self.first_period)
    }

    /// `Σ_{n=1..k} w2(n)`.
    pub fn w2_prefix(&self, k: u64) -> f64 {
        periodic_prefix(k, &self.second_partial, self.second_period)
    }
}

fn table(a: u64, q: u64, sine: bool) -> Vec<f64> {
    (0..q)
        .map(|r| {
            // reduce r·a before touching floating point
            let num = ((r as u128 * a as u128) % q as u128) as u64;
            let (s, c) = sin_cos_turns(num, q);
            if sine {
                s
            } else {
                c
            }
        })
        .collect()
}

fn partials(tab: &[f64]) -> (Vec<f64>, f64) {
    let q = tab.len();
    let mut partial = Vec::with_capacity(q);
    let mut acc = crate::compensated::NeumaierSum::ZERO;
    partial.push(0.0);
    for u in 1..q {
        acc.add(tab[u % q]);
        partial.push(acc.value());
    }
    // A complete period of a nontrivial character-like weight sums to zero
    // exactly; only q = 1 (constant weight) has a nonzero period sum.
    let period = if q == 1 { tab[0] } else { 0.0 };
    (partial, period)
}

fn periodic_prefix(k: u64, partial: &[f64], period: f64) -> f64 {
    let q = partial.len() as u64;
    let full = k / q;
    let rem = (k % q) as usize;
    full as f64 * period + partial[rem]
}
