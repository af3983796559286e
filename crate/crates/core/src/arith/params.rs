use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which trigonometric weight is attached to each summation variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `cos(2π m a1/q1) · sin(2π n a2/q2)`, the main object.
    CosSin,
    /// `sin(2π m a1/q1) · sin(2π n a2/q2)`.
    SinSin,
    /// `cos(2π m a1/q1) · cos(2π n a2/q2)`.
    CosCos,
}

impl WeightKind {
    /// Integer tag used by the binary cache format.
    pub fn code(self) -> u64 {
        match self {
            WeightKind::CosSin => 0,
            WeightKind::SinSin => 1,
            WeightKind::CosCos => 2,
        }
    }

    pub fn from_code(code: u64) -> Result<Self> {
        match code {
            0 => Ok(WeightKind::CosSin),
            1 => Ok(WeightKind::SinSin),
            2 => Ok(WeightKind::CosCos),
            other => Err(Error::Format(format!("unknown weight kind code {other}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightKind::CosSin => "cos_sin",
            WeightKind::SinSin => "sin_sin",
            WeightKind::CosCos => "cos_cos",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos_sin" | "cos-sin" => Ok(WeightKind::CosSin),
            "sin_sin" | "sin-sin" => Ok(WeightKind::SinSin),
            "cos_cos" | "cos-cos" => Ok(WeightKind::CosCos),
            other => Err(Error::Domain(format!("unknown weight kind '{other}'"))),
        }
    }
}

/// The residues `a1/q1`, `a2/q2` and the weight kind.
///
/// Invariants: `1 <= a_i <= q_i` and `gcd(a_i, q_i) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    a1: u64,
    q1: u64,
    a2: u64,
    q2: u64,
    kind: WeightKind,
}

/// Largest modulus accepted; keeps `4·q` and `q1·q2` comfortably in range.
const MAX_MODULUS: u64 = 1 << 30;

impl Params {
    pub fn new(a1: u64, q1: u64, a2: u64, q2: u64, kind: WeightKind) -> Result<Self> {
        for (name, a, q) in [("1", a1, q1), ("2", a2, q2)] {
            if q == 0 || q > MAX_MODULUS {
                return Err(Error::Domain(format!("q{name} = {q} must lie in [1, 2^30]")));
            }
            if a == 0 || a > q {
                return Err(Error::Domain(format!("a{name} = {a} must satisfy 1 <= a{name} <= q{name} = {q}")));
            }
            if gcd(a, q) != 1 {
                return Err(Error::Domain(format!("gcd(a{name}, q{name}) = gcd({a}, {q}) != 1")));
            }
        }
        Ok(Params { a1, q1, a2, q2, kind })
    }

    /// Shorthand for the `cos_sin` kind.
    pub fn cos_sin(a1: u64, q1: u64, a2: u64, q2: u64) -> Result<Self> {
        Params::new(a1, q1, a2, q2, WeightKind::CosSin)
    }

    pub fn a1(&self) -> u64 {
        self.a1
    }
    pub fn q1(&self) -> u64 {
        self.q1
    }
    pub fn a2(&self) -> u64 {
        self.a2
    }
    pub fn q2(&self) -> u64 {
        self.q2
    }
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// `q1 · q2`, the scale between the raw and normalised arguments.
    pub fn modulus_product(&self) -> u64 {
        self.q1 * self.q2
    }

    pub fn theta1(&self) -> f64 {
        self.a1 as f64 / self.q1 as f64
    }

    pub fn theta2(&self) -> f64 {
        self.a2 as f64 / self.q2 as f64
    }

    /// Same parameters with `a1` replaced by `q1 - a1` (kept in `[1, q1]`).
    pub fn mirror_a1(&self) -> Params {
        Params { a1: mirror(self.a1, self.q1), ..*self }
    }

    /// Same parameters with `a2` replaced by `q2 - a2` (kept in `[1, q2]`).
    pub fn mirror_a2(&self) -> Params {
        Params { a2: mirror(self.a2, self.q2), ..*self }
    }

    pub fn with_kind(&self, kind: WeightKind) -> Params {
        Params { kind, ..*self }
    }

    /// Conditions under which the sign-change theorems are stated. The sum is
    /// still well defined outside them, so these are warnings only.
    pub fn theorem_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.kind == WeightKind::CosSin {
            if self.q1 < 2 {
                out.push(format!("q1 = {} < 2: outside the theorem range", self.q1));
            }
            if self.q2 < 3 {
                out.push(format!("q2 = {} < 3: S vanishes identically", self.q2));
            }
        }
        for w in &out {
            log::warn!("{w}");
        }
        out
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.a1, self.q1, self.a2, self.q2, self.kind)
    }
}

fn mirror(a: u64, q: u64) -> u64 {
    if a < q {
        q - a
    } else {
        q
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
