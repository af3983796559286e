use serde::{Deserialize, Serialize};

use super::{integrate_power, JumpTable};
use crate::Result;

/// Argument convention for a query: the raw argument `t` of `S(t)`, or the
/// normalised `x` with `S(q1q2 x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Raw,
    Normalized,
}

/// A jump table seen through one fixed argument convention.
#[derive(Debug, Clone, Copy)]
pub struct StepFunctionView<'a> {
    table: &'a JumpTable,
    domain: Domain,
}

impl<'a> StepFunctionView<'a> {
    pub fn new(table: &'a JumpTable, domain: Domain) -> Self {
        StepFunctionView { table, domain }
    }

    pub fn table(&self) -> &'a JumpTable {
        self.table
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Raw argument corresponding to `arg` in this view's domain.
    pub fn raw_arg(&self, arg: f64) -> f64 {
        match self.domain {
            Domain::Raw => arg,
            Domain::Normalized => arg * self.table.params().modulus_product() as f64,
        }
    }

    /// Largest admissible argument in this view's domain.
    pub fn max_arg(&self) -> f64 {
        let x = self.table.x_max() as f64;
        match self.domain {
            Domain::Raw => x,
            Domain::Normalized => x / self.table.params().modulus_product() as f64,
        }
    }

    pub fn value(&self, arg: f64) -> Result<f64> {
        self.table.s_eval(self.raw_arg(arg))
    }

    pub fn integrate_power(&self, a: f64, b: f64, k: u32) -> Result<f64> {
        integrate_power(self.table, a, b, k, self.domain)
    }
}
