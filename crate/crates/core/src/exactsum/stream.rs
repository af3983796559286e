//! Block-streaming mode for ranges too large to hold in memory.

use crate::arith::{jump_block, Params, ResidueWeightTables};
use crate::compensated::NeumaierSum;
use crate::{Error, Result};

/// One block of consecutive jumps with its prefix sums.
#[derive(Debug, Clone)]
pub struct JumpBlock {
    /// First index `N` in the block.
    pub start: u64,
    pub jumps: Vec<f64>,
    /// `P(start + i)` for each `i`.
    pub prefix: Vec<f64>,
    /// `P(start - 1)`, the value of `S` on `(start - 1, start)`.
    pub prefix_before: f64,
}

/// Iterator over the jump table in blocks, carrying the prefix sum across
/// block boundaries. With the same block size it reproduces
/// [`JumpTable`](super::JumpTable) prefix sums bit for bit.
#[derive(Debug)]
pub struct BlockSieve {
    tables: ResidueWeightTables,
    next: u64,
    x_max: u64,
    block: u64,
    carry: NeumaierSum,
}

impl BlockSieve {
    pub fn new(params: &Params, x_max: u64, block: u64) -> Result<Self> {
        if block == 0 {
            return Err(Error::Domain("block size must be positive".into()));
        }
        Ok(BlockSieve { tables: ResidueWeightTables::new(params), next: 1, x_max, block, carry: NeumaierSum::ZERO })
    }
}

impl Iterator for BlockSieve {
    type Item = JumpBlock;

    fn next(&mut self) -> Option<JumpBlock> {
        if self.next > self.x_max {
            return None;
        }
        let start = self.next;
        let end = (start + self.block).min(self.x_max + 1);
        let jumps = jump_block(start, end, &self.tables);
        let prefix_before = self.carry.value();
        let mut acc = self.carry;
        let prefix = jumps
            .iter()
            .map(|&c| {
                acc.add(c);
                acc.value()
            })
            .collect();
        self.carry.merge(jumps.iter().copied().sum::<NeumaierSum>());
        self.next = end;
        Some(JumpBlock { start, jumps, prefix, prefix_before })
    }
}

/// `∫_a^b S(t)^k dt` over the raw argument without materialising the table.
pub fn stream_power_integral(params: &Params, a: f64, b: f64, k: u32, block: u64) -> Result<f64> {
    if !(a >= 0.0) || !(b >= a) || !b.is_finite() {
        return Err(Error::Domain(format!("bad integration range [{a}, {b}]")));
    }
    if k == 0 {
        return Err(Error::Domain("power must be >= 1".into()));
    }
    let x_max = b.ceil() as u64;
    let mut acc = NeumaierSum::ZERO;
    // S on (0, 1) is zero
    let mut segment = |n: u64, value: f64| {
        let lo = (n as f64).max(a);
        let hi = ((n + 1) as f64).min(b);
        if hi > lo {
            acc.add(value.powi(k as i32) * (hi - lo));
        }
    };
    segment(0, 0.0);
    for blk in BlockSieve::new(params, x_max, block)? {
        for (i, &p) in blk.prefix.iter().enumerate() {
            segment(blk.start + i as u64, p);
        }
    }
    Ok(acc.value())
}
