//! Entry-level free cumulants of the Brown-algebra generators and the block
//! kernel interface for R-cyclic families.
//!
//! For an R-cyclic family, a joint cumulant of entries vanishes unless the
//! indices close up cyclically (`j_1 = i_2, …, j_r = i_1`). When the cyclic
//! value does not depend on the indices themselves, the whole family is
//! described by one number per label sequence: a [`BlockKernel`].
//!
//! For `{u, u*}` that number is `n^{1−r} (−1)^{r/2−1} C_{r/2−1}` when `r` is
//! even and the star labels alternate, and zero otherwise.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::arith::{integer, LaurentPoly};
use crate::error::{Error, Result};
use crate::nc::NcPartition;

/// `ε ∈ {∅, *}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarLabel {
    Plain,
    Star,
}

impl StarLabel {
    pub fn flip(self) -> Self {
        match self {
            StarLabel::Plain => StarLabel::Star,
            StarLabel::Star => StarLabel::Plain,
        }
    }

    pub fn is_star(self) -> bool {
        self == StarLabel::Star
    }

    pub const BOTH: [StarLabel; 2] = [StarLabel::Plain, StarLabel::Star];
}

impl fmt::Display for StarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_star() { "*" } else { "" })
    }
}

/// The entry `(u^ε)_{row, col}`; note `(u*)_{ij} = (u_{ji})*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryLabel {
    pub star: StarLabel,
    pub row: u32,
    pub col: u32,
}

impl EntryLabel {
    pub fn new(star: StarLabel, row: u32, col: u32) -> Self {
        Self { star, row, col }
    }

    pub fn plain(row: u32, col: u32) -> Self {
        Self::new(StarLabel::Plain, row, col)
    }

    pub fn star(row: u32, col: u32) -> Self {
        Self::new(StarLabel::Star, row, col)
    }
}

impl fmt::Display for EntryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.star {
            StarLabel::Plain => write!(f, "u_{}{}", self.row, self.col),
            StarLabel::Star => write!(f, "(u*)_{}{}", self.row, self.col),
        }
    }
}

/// `C_k = (2k)! / ((k+1)! k!)`.
pub fn catalan(k: usize) -> BigUint {
    // C_{i+1} = C_i · 2(2i+1) / (i+2), exact at every step.
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

/// Small Catalan numbers as machine integers, exact for `k ≤ 60`.
pub(crate) fn catalan_i128(k: usize) -> i128 {
    let mut c: i128 = 1;
    for i in 0..k {
        c = c * (2 * (2 * i as i128 + 1)) / (i as i128 + 2);
    }
    c
}

/// True iff consecutive labels differ: `λ_1 ≠ λ_2 ≠ … ≠ λ_r`.
fn alternates<L: PartialEq>(labels: &[L]) -> bool {
    labels.windows(2).all(|w| w[0] != w[1])
}

/// The common value of `κ_r((u^{λ_1})_{i_1 j_1}, …, (u^{λ_r})_{i_r j_r})` over
/// cyclic index patterns.
pub fn brown_block_value(labels: &[StarLabel]) -> LaurentPoly {
    let r = labels.len();
    if r == 0 || r % 2 == 1 || !alternates(labels) {
        return LaurentPoly::zero();
    }
    debug_assert_ne!(
        labels[0],
        labels[r - 1],
        "even alternating word closes cyclically"
    );
    let half = r / 2;
    let sign = if (half - 1).is_multiple_of(2) { 1 } else { -1 };
    LaurentPoly::monomial(integer(sign * catalan_i128(half - 1)), 1 - r as i32)
}

/// Whether the indices of `entries` are cyclic: `j_{l−1} = i_l` and `j_r = i_1`.
pub fn indices_cyclic(entries: &[EntryLabel]) -> bool {
    let r = entries.len();
    (0..r).all(|l| entries[l].col == entries[(l + 1) % r].row)
}

/// `κ_r` of the given Brown-algebra entries under the free Haar trace.
pub fn brown_entry_cumulant(entries: &[EntryLabel]) -> LaurentPoly {
    if entries.is_empty() || !indices_cyclic(entries) {
        return LaurentPoly::zero();
    }
    let stars: SmallVec<[StarLabel; 16]> = entries.iter().map(|e| e.star).collect();
    brown_block_value(&stars)
}

/// Evaluates the common cyclic-index cumulant of one block from its label
/// subsequence (labels listed in increasing element order).
pub trait BlockKernel<L>: Sync {
    fn block_value(&self, labels: &[L]) -> LaurentPoly;
}

impl<L, F> BlockKernel<L> for F
where
    F: Fn(&[L]) -> LaurentPoly + Sync,
{
    fn block_value(&self, labels: &[L]) -> LaurentPoly {
        self(labels)
    }
}

/// The kernel of `{u, u*}` under the free Haar trace.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrownKernel;

impl BlockKernel<StarLabel> for BrownKernel {
    fn block_value(&self, labels: &[StarLabel]) -> LaurentPoly {
        brown_block_value(labels)
    }
}

fn check_len(pi: &NcPartition, len: usize) -> Result<()> {
    if pi.size() != len {
        return Err(Error::SizeMismatch {
            expected: pi.size(),
            actual: len,
        });
    }
    Ok(())
}

/// `π` is λ-adapted: every block has even size and consecutive labels along
/// the block differ.
pub fn is_adapted<L: PartialEq>(pi: &NcPartition, labels: &[L]) -> Result<bool> {
    check_len(pi, labels.len())?;
    Ok(pi.blocks().iter().all(|block| {
        block.len() % 2 == 0
            && block
                .windows(2)
                .all(|w| labels[w[0] - 1] != labels[w[1] - 1])
    }))
}

/// `κ_π[λ] = ∏_{V∈π} κ_V`.
pub fn kappa_pi<L, K>(pi: &NcPartition, kernel: &K, labels: &[L]) -> Result<LaurentPoly>
where
    L: Clone,
    K: BlockKernel<L> + ?Sized,
{
    check_len(pi, labels.len())?;
    let mut values: SmallVec<[LaurentPoly; 8]> = SmallVec::new();
    for block in pi.blocks() {
        let sub: SmallVec<[L; 16]> = block.iter().map(|&v| labels[v - 1].clone()).collect();
        let value = kernel.block_value(&sub);
        if value.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        values.push(value);
    }
    Ok(values.into_iter().product())
}
