use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `[p]`, stored by images: `images[i - 1] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let p = images.len();
        let mut hit = vec![false; p + 1];
        for &y in &images {
            if y == 0 || y > p || std::mem::replace(&mut hit[y], true) {
                return Err(Error::InvalidPartition(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            images: (1..=p).collect(),
        }
    }

    /// `γ = (1, 2, …, p)`.
    pub fn full_cycle(p: usize) -> Self {
        Self {
            images: (1..=p).map(|i| if i == p { 1 } else { i + 1 }).collect(),
        }
    }

    /// Builds the permutation whose cycles are the given disjoint lists,
    /// each read `c_0 → c_1 → … → c_0`. Points not listed are fixed.
    pub fn from_cycles(p: usize, cycles: &[Vec<usize>]) -> Self {
        let mut images: Vec<usize> = (1..=p).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                images[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &y) in self.images.iter().enumerate() {
            inv[y - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different degree"
        );
        Self {
            images: other.images.iter().map(|&y| self.images[y - 1]).collect(),
        }
    }

    /// Cycle label per point (`labels[i - 1]`), labels numbered by first point.
    pub fn cycle_labels(&self) -> Vec<usize> {
        let p = self.images.len();
        let mut labels = vec![usize::MAX; p];
        let mut next = 0;
        for start in 0..p {
            if labels[start] != usize::MAX {
                continue;
            }
            let mut x = start;
            while labels[x] == usize::MAX {
                labels[x] = next;
                x = self.images[x] - 1;
            }
            next += 1;
        }
        labels
    }

    /// Cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let p = self.images.len();
        let mut seen = vec![false; p];
        let mut out = Vec::new();
        for start in 1..=p {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x - 1] {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let items: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

/// `#σ`.
pub fn cycle_count(sigma: &Permutation) -> usize {
    sigma.cycle_count()
}
