use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set partition of `[p] = {1, …, p}` in canonical form: every block is
/// strictly increasing and blocks are ordered by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes `blocks` as a partition of `[size]`.
    pub fn new(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > size {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside [1, {size}]"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears twice"
                    )));
                }
            }
        }
        if let Some(missing) = (1..=size).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { size, blocks })
    }

    /// Builds a partition from a block label per element (`labels[i]` is the
    /// label of element `i + 1`). Labels are arbitrary.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut index_of = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in labels.iter().enumerate() {
            let idx = *index_of.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(i + 1);
        }
        // Blocks were opened in order of their minimum, and filled in increasing order.
        Self {
            size: labels.len(),
            blocks,
        }
    }

    pub(crate) fn from_canonical(size: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(Self::new(size, blocks.clone()).as_ref().map(|c| &c.blocks) == Ok(&blocks));
        Self { size, blocks }
    }

    /// `0_p`: all singletons.
    pub fn finest(size: usize) -> Self {
        Self {
            size,
            blocks: (1..=size).map(|x| vec![x]).collect(),
        }
    }

    /// `1_p`: a single block (empty for `p = 0`).
    pub fn coarsest(size: usize) -> Self {
        let blocks = if size == 0 {
            vec![]
        } else {
            vec![(1..=size).collect()]
        };
        Self { size, blocks }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index (into [`blocks`](Self::blocks)) of each element, 0-based by element.
    pub fn block_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.size];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x - 1] = b;
            }
        }
        out
    }

    pub fn is_coarsest(&self) -> bool {
        self.size == 0 || self.blocks.len() == 1
    }

    /// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let block_of = self.block_index();
        let last: Vec<usize> = self.blocks.iter().map(|b| *b.last().unwrap()).collect();
        let mut stack: Vec<usize> = Vec::new();
        for x in 1..=self.size {
            let b = block_of[x - 1];
            if self.blocks[b][0] == x {
                stack.push(b);
            } else {
                // Every block opened since b's previous element must already be closed.
                while let Some(&top) = stack.last() {
                    if top == b {
                        break;
                    }
                    if last[top] > x {
                        return false;
                    }
                    stack.pop();
                }
            }
            if last[b] == x {
                // b is on top here: either just pushed or reached above.
                stack.pop();
            }
        }
        true
    }

    /// Lattice join: the finest partition coarser than both arguments.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                actual: other.size,
            });
        }
        let mut sets = DisjointSets::new(self.size);
        for block in self.blocks.iter().chain(&other.blocks) {
            for pair in block.windows(2) {
                sets.union(pair[0] - 1, pair[1] - 1);
            }
        }
        let labels: Vec<usize> = (0..self.size).map(|i| sets.find(i)).collect();
        Ok(SetPartition::from_labels(&labels))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// A noncrossing partition of `[p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionJson", into = "PartitionJson")]
pub struct NcPartition(SetPartition);

impl NcPartition {
    pub fn new(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::try_from(SetPartition::new(size, blocks)?)
    }

    pub(crate) fn from_canonical(size: usize, blocks: Vec<Vec<usize>>) -> Self {
        let inner = SetPartition::from_canonical(size, blocks);
        debug_assert!(inner.is_noncrossing());
        Self(inner)
    }

    pub fn finest(size: usize) -> Self {
        Self(SetPartition::finest(size))
    }

    pub fn coarsest(size: usize) -> Self {
        Self(SetPartition::coarsest(size))
    }

    pub fn as_set_partition(&self) -> &SetPartition {
        &self.0
    }

    pub fn into_set_partition(self) -> SetPartition {
        self.0
    }
}

impl Deref for NcPartition {
    type Target = SetPartition;

    fn deref(&self) -> &SetPartition {
        &self.0
    }
}

impl TryFrom<SetPartition> for NcPartition {
    type Error = Error;

    fn try_from(p: SetPartition) -> Result<Self> {
        if p.is_noncrossing() {
            Ok(Self(p))
        } else {
            Err(Error::InvalidPartition(format!("{p} is crossing")))
        }
    }
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Wire form: `{"p": 4, "blocks": [[1,2],[3,4]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionJson {
    pub p: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl From<NcPartition> for PartitionJson {
    fn from(pi: NcPartition) -> Self {
        Self {
            p: pi.0.size,
            blocks: pi.0.blocks,
        }
    }
}

impl TryFrom<PartitionJson> for NcPartition {
    type Error = Error;

    fn try_from(j: PartitionJson) -> Result<Self> {
        NcPartition::new(j.p, j.blocks)
    }
}

/// An ordered list of positive parts `(p_1, …, p_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidComposition("zero part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// First element of each interval: `1, p_1 + 1, …, p − p_s + 1`.
    pub fn marked_points(&self) -> Vec<usize> {
        let mut start = 1;
        self.parts
            .iter()
            .map(|&part| {
                let m = start;
                start += part;
                m
            })
            .collect()
    }

    /// `γ_c`: consecutive intervals of lengths `p_1, …, p_s`.
    pub fn interval_partition(&self) -> NcPartition {
        let mut start = 1;
        let blocks = self
            .parts
            .iter()
            .map(|&part| {
                let block = (start..start + part).collect();
                start += part;
                block
            })
            .collect();
        NcPartition::from_canonical(self.total(), blocks)
    }

    /// All compositions of `p ≥ 1`, in lexicographic order of their parts.
    pub fn all(p: usize) -> Vec<Composition> {
        fn rec(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition {
                    parts: prefix.clone(),
                });
                return;
            }
            for first in 1..=rest {
                prefix.push(first);
                rec(rest - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if p > 0 {
            rec(p, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}
