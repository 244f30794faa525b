use crate::error::Result;
use crate::nc::complement::{kreweras_permutation, separates};
use crate::nc::enumerate::enumerate_nc_with_limit;
use crate::nc::partition::NcPartition;

/// `NC(p)` materialized together with the cycle labels of `γ ∘ σ_π^{-1}`,
/// so the connecting test for a composition costs `O(s)` per partition.
#[derive(Debug, Clone)]
pub struct NcTable {
    p: usize,
    partitions: Vec<NcPartition>,
    twist_labels: Vec<u8>,
}

/// A partition of an [`NcTable`] with its precomputed twist labels.
#[derive(Debug, Clone, Copy)]
pub struct NcRow<'a> {
    pub partition: &'a NcPartition,
    twist_labels: &'a [u8],
}

impl<'a> NcRow<'a> {
    pub(crate) fn new(partition: &'a NcPartition, twist_labels: &'a [u8]) -> Self {
        Self {
            partition,
            twist_labels,
        }
    }

    /// `π ∨ γ_c = 1_p` via the separation criterion.
    pub fn connects(&self, marked_points: &[usize]) -> bool {
        separates(self.twist_labels, marked_points)
    }
}

/// Labels the cycles of `γ ∘ σ_π^{-1}`.
pub fn twist_labels(pi: &NcPartition) -> Vec<u8> {
    kreweras_permutation(pi)
        .cycle_labels()
        .into_iter()
        .map(|l| l as u8)
        .collect()
}

impl NcTable {
    pub fn build(p: usize, limit: usize) -> Result<Self> {
        let mut partitions = Vec::new();
        let mut labels = Vec::new();
        for pi in enumerate_nc_with_limit(p, limit)? {
            labels.extend(twist_labels(&pi));
            partitions.push(pi);
        }
        Ok(Self {
            p,
            partitions,
            twist_labels: labels,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn row(&self, idx: usize) -> NcRow<'_> {
        NcRow {
            partition: &self.partitions[idx],
            twist_labels: &self.twist_labels[idx * self.p..(idx + 1) * self.p],
        }
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = NcRow<'_>> + '_ {
        (0..self.len()).map(|i| self.row(i))
    }
}
