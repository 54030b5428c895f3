//! Linear-space batched range-minimum queries: block minima with per-block
//! prefix/suffix minima, plus a doubling sparse table over the block-minimum
//! sequence. Valid queries must span at least one full block boundary
//! (`l + t <= r`); narrower ranges are the caller's local-scan case.

use crate::mpc::{PrimitiveKind, RoundLedger};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RmqIndex {
    pub n: usize,
    /// block width `t = ceil(log2 n)`, clamped to >= 1
    pub t: usize,
    block_min: Vec<i64>,
    /// prefix minima within each block: `lef[i]` covers `((j-1)t, i]`
    lef: Vec<i64>,
    /// suffix minima within each block: `rig[i]` covers `[i, min(jt, n)]`
    rig: Vec<i64>,
    /// sparse[k][b] = min of blocks b .. b + 2^k - 1
    sparse: Vec<Vec<i64>>,
}

fn block_width(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

pub fn rmq_preprocess(a: &[i64], ledger: &mut RoundLedger) -> Result<RmqIndex> {
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let t = block_width(n).max(1);
    let nblocks = n.div_ceil(t);
    let mut block_min = vec![i64::MAX; nblocks];
    let mut lef = vec![0i64; n];
    let mut rig = vec![0i64; n];
    for b in 0..nblocks {
        let lo = b * t;
        let hi = ((b + 1) * t).min(n);
        let mut m = i64::MAX;
        for i in lo..hi {
            m = m.min(a[i]);
            lef[i] = m;
        }
        block_min[b] = m;
        let mut m = i64::MAX;
        for i in (lo..hi).rev() {
            m = m.min(a[i]);
            rig[i] = m;
        }
    }
    let levels = block_width(nblocks.max(1)).max(1);
    let mut sparse = vec![block_min.clone()];
    for k in 1..=levels {
        let half = 1usize << (k - 1);
        let prev = &sparse[k - 1];
        let row: Vec<i64> = (0..nblocks)
            .map(|b| {
                let other = (b + half).min(nblocks - 1);
                prev[b].min(prev[other])
            })
            .collect();
        sparse.push(row);
    }
    // one sort to lay out blocks, one local pass for the block tables
    ledger.charge(PrimitiveKind::Sort, n as u64);
    ledger.charge(PrimitiveKind::LocalRound, (n + nblocks * (levels + 1)) as u64);
    Ok(RmqIndex {
        n,
        t,
        block_min,
        lef,
        rig,
        sparse,
    })
}

impl RmqIndex {
    /// Total stored entries; the linear-space claim bounds this by C * n.
    pub fn storage_entries(&self) -> usize {
        2 * self.n + self.sparse.len() * self.block_min.len()
    }

    /// Minimum over the inclusive 0-based block range `lo..=hi`.
    fn blocks_min(&self, lo: usize, hi: usize) -> i64 {
        let span = hi - lo + 1;
        let k = span.ilog2() as usize;
        self.sparse[k][lo].min(self.sparse[k][hi + 1 - (1 << k)])
    }
}

/// Answers every 1-based query `(l, r)` with `l + t <= r` exactly, charging
/// the whole batch as one multi-query.
pub fn rmq_batch(
    index: &RmqIndex,
    queries: &[(usize, usize)],
    ledger: &mut RoundLedger,
) -> Result<Vec<i64>> {
    let (n, t) = (index.n, index.t);
    let mut out = Vec::with_capacity(queries.len());
    for &(l, r) in queries {
        if l < 1 || r > n || l > r {
            return Err(Error::RangeBounds(l, r, n));
        }
        if l + t > r {
            return Err(Error::NarrowRange { l, r, t });
        }
        // smallest multiple of t >= l and largest multiple of t <= r
        let lp = l.div_ceil(t) * t;
        let rp = (r / t) * t;
        debug_assert!(lp <= rp);
        let mid = if lp == rp {
            i64::MAX
        } else {
            // blocks lp/t + 1 ..= rp/t, 1-based; 0-based lp/t .. rp/t - 1
            index.blocks_min(lp / t, rp / t - 1)
        };
        out.push(index.rig[l - 1].min(mid).min(index.lef[r - 1]));
    }
    ledger.charge(
        PrimitiveKind::MultiQuery,
        (index.n + queries.len()) as u64,
    );
    Ok(out)
}
