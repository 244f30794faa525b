//! Streaming enumeration of `NC(p)` and `NC_2(p)`.
//!
//! The block containing 1, `{1 = b_1 < … < b_k}`, cuts the rest of `[p]` into
//! the gaps `(b_i, b_{i+1})` and `(b_k, p]`. Any noncrossing partition is that
//! block together with an independent noncrossing partition of every gap, so
//! the stream is a cartesian product of smaller streams, one choice of the
//! first block at a time. Nothing beyond the current choice is held in memory.

use crate::error::{Error, Result};
use crate::nc::partition::NcPartition;

/// Default upper bound on `p` for full enumeration (`C_16 ≈ 3.5·10^7`).
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

/// First-block choices are bitmasks over `{2, …, p}`.
const HARD_LIMIT: usize = 63;

/// Every noncrossing partition of `[p]`, each once, in a fixed order.
pub fn enumerate_nc(p: usize) -> Result<NcIter> {
    enumerate_nc_with_limit(p, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_nc_with_limit(p: usize, limit: usize) -> Result<NcIter> {
    let limit = limit.min(HARD_LIMIT);
    if p > limit {
        return Err(Error::LimitExceeded {
            what: "partition size p",
            value: p as u128,
            limit: limit as u128,
        });
    }
    Ok(NcIter::new(p, false))
}

/// Every noncrossing pairing of `[p]`; empty for odd `p`.
pub fn enumerate_nc_pairings(p: usize) -> Result<NcIter> {
    if p > HARD_LIMIT {
        return Err(Error::LimitExceeded {
            what: "partition size p",
            value: p as u128,
            limit: HARD_LIMIT as u128,
        });
    }
    Ok(NcIter::new(p, true))
}

/// Streaming iterator over noncrossing partitions (or pairings) of `[p]`.
#[derive(Debug, Clone)]
pub struct NcIter {
    p: usize,
    pairings: bool,
    /// Bits `k - 2` for the elements `k > 1` sharing a block with 1; `None` once exhausted.
    mask: Option<u64>,
    gaps: Vec<(usize, usize)>,
    subs: Vec<NcIter>,
    current: Vec<NcPartition>,
    started: bool,
}

impl NcIter {
    fn new(p: usize, pairings: bool) -> Self {
        let mut it = Self {
            p,
            pairings,
            mask: None,
            gaps: Vec::new(),
            subs: Vec::new(),
            current: Vec::new(),
            started: false,
        };
        if p == 0 {
            // One (empty) partition.
            it.mask = Some(0);
        } else {
            let first = if pairings {
                it.next_pairing_mask(None)
            } else {
                Some(0)
            };
            it.load_mask(first);
        }
        it
    }

    fn next_pairing_mask(&self, after: Option<u64>) -> Option<u64> {
        if self.p % 2 == 1 {
            return None;
        }
        // 1 pairs with an even j; the bit for j is j - 2.
        let j = match after {
            None => 2,
            Some(m) => m.trailing_zeros() as usize + 2 + 2,
        };
        (j <= self.p).then(|| 1u64 << (j - 2))
    }

    fn advance_mask(&mut self) {
        let next = match self.mask {
            None => None,
            Some(_) if self.p == 0 => None,
            Some(m) if self.pairings => self.next_pairing_mask(Some(m)),
            Some(m) => {
                let next = m + 1;
                (next < 1u64 << (self.p - 1)).then_some(next)
            }
        };
        self.load_mask(next);
    }

    /// Installs a first-block choice and restarts the gap streams.
    fn load_mask(&mut self, mask: Option<u64>) {
        self.mask = mask;
        self.gaps.clear();
        self.subs.clear();
        self.current.clear();
        let Some(mask) = mask else { return };
        let mut prev = 1;
        for k in 2..=self.p {
            if mask >> (k - 2) & 1 == 1 {
                if k > prev + 1 {
                    self.gaps.push((prev, k - prev - 1));
                }
                prev = k;
            }
        }
        if self.p > prev {
            self.gaps.push((prev, self.p - prev));
        }
        for &(_, len) in &self.gaps {
            let mut sub = NcIter::new(len, self.pairings);
            let first = sub
                .next()
                .expect("gap lengths admit at least one partition");
            self.subs.push(sub);
            self.current.push(first);
        }
    }

    fn compose(&self) -> NcPartition {
        let mask = self.mask.expect("compose requires an active mask");
        if self.p == 0 {
            return NcPartition::coarsest(0);
        }
        let mut first = vec![1];
        first.extend((2..=self.p).filter(|k| mask >> (k - 2) & 1 == 1));
        let mut blocks = Vec::with_capacity(self.p);
        blocks.push(first);
        for (&(offset, _), sub) in self.gaps.iter().zip(&self.current) {
            for block in sub.blocks() {
                blocks.push(block.iter().map(|x| x + offset).collect());
            }
        }
        NcPartition::from_canonical(self.p, blocks)
    }

    /// Steps the odometer of gap streams; false when every gap is exhausted.
    fn advance_gaps(&mut self) -> bool {
        for idx in (0..self.subs.len()).rev() {
            if let Some(next) = self.subs[idx].next() {
                self.current[idx] = next;
                for later in idx + 1..self.subs.len() {
                    let mut fresh = NcIter::new(self.gaps[later].1, self.pairings);
                    self.current[later] = fresh.next().expect("non-empty gap stream");
                    self.subs[later] = fresh;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for NcIter {
    type Item = NcPartition;

    fn next(&mut self) -> Option<NcPartition> {
        self.mask?;
        if self.started && !self.advance_gaps() {
            self.advance_mask();
            self.mask?;
        }
        self.started = true;
        Some(self.compose())
    }
}
