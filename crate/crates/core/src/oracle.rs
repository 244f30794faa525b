//! Fixed-`n` brute-force reference for the free Haar trace `h`.
//!
//! The only inputs are the entry cumulants of `{u, u*}` and the
//! moment-cumulant formula `h(a_1 ⋯ a_r) = Σ_{π∈NC(r)} κ_π[a_1, …, a_r]`.
//! Moments of trace words are summed over explicit index tuples, and their
//! free cumulants are recovered by inverting the moment-cumulant formula.
//! Nothing here touches the symbolic engine.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::kernel::{brown_entry_cumulant, EntryLabel, StarLabel};
use crate::nc::{enumerate_nc, Composition, NcPartition};
use crate::word::{Factor, TraceWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Longest entry word whose moment may be expanded over `NC(r)`.
    pub max_entry_len: usize,
    /// Cap on `n^p` index tuples per trace moment.
    pub max_tuples: u128,
    /// Most variables a moment inversion may involve.
    pub max_factors: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_entry_len: 12,
            max_tuples: 1_000_000,
            max_factors: 8,
        }
    }
}

/// A product of entries `(u^{ε_1})_{i_1 j_1} ⋯ (u^{ε_r})_{i_r j_r}` at dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntryWord {
    entries: Vec<EntryLabel>,
    n: u32,
}

impl EntryWord {
    pub fn new(entries: Vec<EntryLabel>, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = entries
            .iter()
            .find(|e| !(1..=n).contains(&e.row) || !(1..=n).contains(&e.col))
        {
            return Err(Error::Parse(format!("{bad} has an index outside [1, {n}]")));
        }
        Ok(Self { entries, n })
    }

    pub fn entries(&self) -> &[EntryLabel] {
        &self.entries
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

type PatternKey = Vec<(StarLabel, u8, u8)>;

/// Relabels indices by first occurrence; `h` only sees which indices coincide.
fn canonical_pattern(entries: &[EntryLabel]) -> PatternKey {
    let mut seen: Vec<u32> = Vec::with_capacity(2 * entries.len());
    let mut relabel = |x: u32| -> u8 {
        match seen.iter().position(|&y| y == x) {
            Some(i) => i as u8,
            None => {
                seen.push(x);
                (seen.len() - 1) as u8
            }
        }
    };
    entries
        .iter()
        .map(|e| {
            let r = relabel(e.row);
            let c = relabel(e.col);
            (e.star, r, c)
        })
        .collect()
}

/// Memoized entry moments at a fixed dimension, keyed by index pattern.
#[derive(Debug, Default)]
pub struct MomentTable {
    values: RwLock<HashMap<PatternKey, Rational>>,
}

impl MomentTable {
    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, key: &PatternKey) -> Option<Rational> {
        self.values.read().unwrap().get(key).cloned()
    }

    fn insert(&self, key: PatternKey, value: Rational) {
        self.values.write().unwrap().insert(key, value);
    }
}

/// Brute-force evaluator of `h` and its free cumulants at one dimension `n`.
#[derive(Debug)]
pub struct Oracle {
    n: u32,
    budget: OracleBudget,
    entry_moments: MomentTable,
    trace_moments: RwLock<HashMap<Vec<Factor>, Rational>>,
    partitions: RwLock<HashMap<usize, Arc<Vec<NcPartition>>>>,
}

impl Oracle {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_budget(n, OracleBudget::default())
    }

    pub fn with_budget(n: u32, budget: OracleBudget) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            n,
            budget,
            entry_moments: MomentTable::default(),
            trace_moments: RwLock::default(),
            partitions: RwLock::default(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn moment_table(&self) -> &MomentTable {
        &self.entry_moments
    }

    fn nc(&self, r: usize) -> Arc<Vec<NcPartition>> {
        if let Some(list) = self.partitions.read().unwrap().get(&r) {
            return list.clone();
        }
        let list = Arc::new(enumerate_nc(r).expect("budgeted size").collect::<Vec<_>>());
        self.partitions.write().unwrap().insert(r, list.clone());
        list
    }

    /// `κ_{|V|}` of the entries listed, evaluated at this oracle's `n`.
    fn entry_cumulant(&self, entries: &[EntryLabel]) -> Rational {
        brown_entry_cumulant(entries)
            .eval(self.n as u64)
            .expect("n is positive")
    }

    /// `h(a_1 ⋯ a_r) = Σ_{π ∈ NC(r)} ∏_{V ∈ π} κ_V` for entries `a_i`.
    pub fn entry_moment(&self, entries: &[EntryLabel]) -> Result<Rational> {
        let r = entries.len();
        if r > self.budget.max_entry_len {
            return Err(Error::LimitExceeded {
                what: "entry word length",
                value: r as u128,
                limit: self.budget.max_entry_len as u128,
            });
        }
        if r == 0 {
            return Ok(Rational::one());
        }
        let key = canonical_pattern(entries);
        if let Some(v) = self.entry_moments.get(&key) {
            return Ok(v);
        }
        let mut total = Rational::zero();
        let mut block_entries: Vec<EntryLabel> = Vec::with_capacity(r);
        'partitions: for pi in self.nc(r).iter() {
            let mut product = Rational::one();
            for block in pi.blocks() {
                block_entries.clear();
                block_entries.extend(block.iter().map(|&v| entries[v - 1]));
                let k = self.entry_cumulant(&block_entries);
                if k.is_zero() {
                    continue 'partitions;
                }
                product *= k;
            }
            total += product;
        }
        self.entry_moments.insert(key, total.clone());
        Ok(total)
    }

    pub fn entry_word_moment(&self, word: &EntryWord) -> Result<Rational> {
        if word.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n as usize,
                actual: word.n as usize,
            });
        }
        self.entry_moment(&word.entries)
    }

    /// `h(χ(u^{p_1})^{e_1} ⋯ χ(u^{p_s})^{e_s})` with the unnormalized trace
    /// `χ(A) = Σ_i A_{ii}`, summed over all `n^p` index tuples.
    pub fn trace_moment(&self, factors: &[Factor]) -> Result<Rational> {
        if let Some(v) = self.trace_moments.read().unwrap().get(factors) {
            return Ok(v.clone());
        }
        let p: usize = factors.iter().map(|f| f.power).sum();
        let n = self.n as u128;
        let tuples = n
            .checked_pow(p as u32)
            .filter(|&t| t <= self.budget.max_tuples)
            .ok_or(Error::LimitExceeded {
                what: "index tuples n^p",
                value: n.saturating_pow(p as u32),
                limit: self.budget.max_tuples,
            })?;

        // Position j holds (u^{e})_{i_j, i_next(j)}, next(j) cycling inside its own factor.
        let mut star = Vec::with_capacity(p);
        let mut next = Vec::with_capacity(p);
        let mut start = 0;
        for f in factors {
            for k in 0..f.power {
                star.push(f.star);
                next.push(if k + 1 == f.power {
                    start
                } else {
                    start + k + 1
                });
            }
            start += f.power;
        }

        let mut index = vec![1u32; p];
        let mut entries = vec![EntryLabel::plain(1, 1); p];
        let mut total = Rational::zero();
        for _ in 0..tuples {
            for j in 0..p {
                entries[j] = EntryLabel::new(star[j], index[j], index[next[j]]);
            }
            total += self.entry_moment(&entries)?;
            for slot in index.iter_mut() {
                *slot += 1;
                if *slot <= self.n {
                    break;
                }
                *slot = 1;
            }
        }
        self.trace_moments
            .write()
            .unwrap()
            .insert(factors.to_vec(), total.clone());
        Ok(total)
    }

    /// Free cumulant `κ_s` of the trace factors of `word`, from moments only.
    pub fn trace_cumulant(&self, word: &TraceWord) -> Result<Rational> {
        let factors = word.factors();
        self.check_factors(factors.len())?;
        cumulants_from_moments(factors.len(), |subset| {
            let sub: Vec<Factor> = subset.iter().map(|&i| factors[i]).collect();
            self.trace_moment(&sub)
        })
    }

    fn check_factors(&self, s: usize) -> Result<()> {
        if s > self.budget.max_factors {
            return Err(Error::LimitExceeded {
                what: "number of variables",
                value: s as u128,
                limit: self.budget.max_factors as u128,
            });
        }
        Ok(())
    }

    /// Both sides of the product formula for the grouping `c` of `entries`:
    /// the cumulant of the grouped products (by moment inversion), and
    /// `Σ_{π ∈ NC(p), π ∨ γ_c = 1_p} κ_π[entries]` (by the lattice join).
    pub fn product_formula_sides(
        &self,
        c: &Composition,
        entries: &[EntryLabel],
    ) -> Result<(Rational, Rational)> {
        if c.total() != entries.len() {
            return Err(Error::SizeMismatch {
                expected: c.total(),
                actual: entries.len(),
            });
        }
        self.check_factors(c.len())?;
        let bounds: Vec<(usize, usize)> = c
            .marked_points()
            .into_iter()
            .zip(c.parts())
            .map(|(m, &len)| (m - 1, m - 1 + len))
            .collect();
        let grouped = cumulants_from_moments(c.len(), |subset| {
            let word: Vec<EntryLabel> = subset
                .iter()
                .flat_map(|&g| entries[bounds[g].0..bounds[g].1].iter().copied())
                .collect();
            self.entry_moment(&word)
        })?;

        let gamma = c.interval_partition();
        let mut direct = Rational::zero();
        let mut block_entries = Vec::new();
        'partitions: for pi in self.nc(entries.len()).iter() {
            if !pi.join(&gamma)?.is_coarsest() {
                continue;
            }
            let mut product = Rational::one();
            for block in pi.blocks() {
                block_entries.clear();
                block_entries.extend(block.iter().map(|&v| entries[v - 1]));
                let k = self.entry_cumulant(&block_entries);
                if k.is_zero() {
                    continue 'partitions;
                }
                product *= k;
            }
            direct += product;
        }
        Ok((grouped, direct))
    }

    pub fn check_product_formula(&self, c: &Composition, word: &EntryWord) -> Result<bool> {
        if word.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n as usize,
                actual: word.n as usize,
            });
        }
        let (lhs, rhs) = self.product_formula_sides(c, &word.entries)?;
        Ok(lhs == rhs)
    }

    /// Pairs `(i, j)` where `Σ_k h(u*_{ki} u_{kj})` or `Σ_k h(u_{ik} u*_{jk})`
    /// differs from `δ_{ij}`, computed from entry moments alone.
    pub fn unitarity_defects(&self) -> Result<Vec<(u32, u32)>> {
        let mut defects = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let delta = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                let mut left = Rational::zero();
                let mut right = Rational::zero();
                for k in 1..=self.n {
                    // u*_{ki} = (u*)_{ik}
                    left +=
                        self.entry_moment(&[EntryLabel::star(i, k), EntryLabel::plain(k, j)])?;
                    right +=
                        self.entry_moment(&[EntryLabel::plain(i, k), EntryLabel::star(k, j)])?;
                }
                if left != delta || right != delta {
                    defects.push((i, j));
                }
            }
        }
        Ok(defects)
    }
}

/// Inverts the moment-cumulant formula for `s` variables:
/// `κ_s = m(1..s) − Σ_{π ∈ NC(s), π ≠ 1_s} ∏_{V ∈ π} κ_V`.
///
/// `moment` receives the (increasing, 0-based) positions of a nonempty
/// sub-family and returns the moment of their product in that order.
pub fn cumulants_from_moments<F>(s: usize, mut moment: F) -> Result<Rational>
where
    F: FnMut(&[usize]) -> Result<Rational>,
{
    if s == 0 {
        return Err(Error::InvalidComposition("no variables".into()));
    }
    if s > 63 {
        return Err(Error::LimitExceeded {
            what: "number of variables",
            value: s as u128,
            limit: 63,
        });
    }
    let lattices: Vec<Vec<NcPartition>> = (0..=s)
        .map(|k| enumerate_nc(k).map(Iterator::collect))
        .collect::<Result<_>>()?;
    let mut memo: HashMap<u64, Rational> = HashMap::new();
    let full = (1u64 << s) - 1;
    cumulant_of_subset(full, &lattices, &mut moment, &mut memo)
}

fn cumulant_of_subset<F>(
    mask: u64,
    lattices: &[Vec<NcPartition>],
    moment: &mut F,
    memo: &mut HashMap<u64, Rational>,
) -> Result<Rational>
where
    F: FnMut(&[usize]) -> Result<Rational>,
{
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let members: Vec<usize> = (0..64).filter(|&i| mask >> i & 1 == 1).collect();
    let k = members.len();
    let mut value = moment(&members)?;
    for pi in &lattices[k] {
        if pi.block_count() == 1 {
            continue;
        }
        let mut product = Rational::one();
        for block in pi.blocks() {
            let sub = block.iter().fold(0u64, |m, &v| m | 1 << members[v - 1]);
            let kappa = cumulant_of_subset(sub, lattices, moment, memo)?;
            if kappa.is_zero() {
                product = Rational::zero();
                break;
            }
            product *= kappa;
        }
        value -= product;
    }
    memo.insert(mask, value.clone());
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{integer, rational};
    use proptest::prelude::*;

    fn w(text: &str) -> TraceWord {
        text.parse().unwrap()
    }

    #[test]
    fn entry_moment_examples() {
        let o1 = Oracle::new(1).unwrap();
        assert!(o1
            .entry_moment(&[EntryLabel::plain(1, 1)])
            .unwrap()
            .is_zero());
        let o2 = Oracle::new(2).unwrap();
        assert_eq!(
            o2.entry_moment(&[EntryLabel::plain(1, 2), EntryLabel::star(2, 1)])
                .unwrap(),
            rational(1, 2)
        );
        let o3 = Oracle::new(3).unwrap();
        assert!(o3
            .entry_moment(&[EntryLabel::plain(1, 2), EntryLabel::star(3, 1)])
            .unwrap()
            .is_zero());
        assert_eq!(o3.entry_moment(&[]).unwrap(), rational(1, 1));
    }

    #[test]
    fn entry_word_validation() {
        assert!(EntryWord::new(vec![EntryLabel::plain(1, 3)], 2).is_err());
        assert!(EntryWord::new(vec![EntryLabel::plain(1, 2)], 0).is_err());
        let word = EntryWord::new(vec![EntryLabel::plain(1, 2)], 2).unwrap();
        assert!(Oracle::new(3).unwrap().entry_word_moment(&word).is_err());
    }

    #[test]
    fn memo_is_transparent() {
        let o = Oracle::new(3).unwrap();
        let word = [
            EntryLabel::plain(1, 2),
            EntryLabel::star(2, 3),
            EntryLabel::plain(3, 3),
            EntryLabel::star(3, 1),
        ];
        let first = o.entry_moment(&word).unwrap();
        // Same index pattern under a relabeling of [n]: a memo hit.
        let relabeled = [
            EntryLabel::plain(3, 1),
            EntryLabel::star(1, 2),
            EntryLabel::plain(2, 2),
            EntryLabel::star(2, 3),
        ];
        assert_eq!(o.entry_moment(&relabeled).unwrap(), first);
        assert_eq!(o.moment_table().len(), 1);
        let fresh = Oracle::new(3).unwrap();
        assert_eq!(fresh.entry_moment(&relabeled).unwrap(), first);
    }

    #[test]
    fn trace_moment_examples() {
        let o = Oracle::new(2).unwrap();
        assert_eq!(
            o.trace_moment(w("u, u*").factors()).unwrap(),
            rational(1, 1)
        );
        assert!(o.trace_moment(w("u, u").factors()).unwrap().is_zero());
        for n in 1..=3 {
            let o = Oracle::new(n).unwrap();
            assert!(o.trace_moment(w("u").factors()).unwrap().is_zero());
        }
    }

    #[test]
    fn trace_cumulant_examples() {
        let o = Oracle::new(2).unwrap();
        for p in 1..=3 {
            assert!(o
                .trace_cumulant(&TraceWord::new(vec![Factor::plain(p)]).unwrap())
                .unwrap()
                .is_zero());
        }
        assert_eq!(o.trace_cumulant(&w("u, u*")).unwrap(), rational(1, 1));
        // κ_4(χ(u), χ(u)*, χ(u), χ(u)*) = −n^{-2}: at n = 2, −1/4.
        assert_eq!(
            o.trace_cumulant(&w("u, u*, u, u*")).unwrap(),
            rational(-1, 4)
        );
    }

    #[test]
    fn budget_guards() {
        let o = Oracle::with_budget(
            3,
            OracleBudget {
                max_entry_len: 4,
                max_tuples: 100,
                max_factors: 3,
            },
        )
        .unwrap();
        assert!(o.trace_moment(w("u^5").factors()).is_err());
        assert!(o.entry_moment(&[EntryLabel::plain(1, 1); 5]).is_err());
        assert!(o.trace_cumulant(&w("u, u, u, u")).is_err());
        assert!(Oracle::new(0).is_err());
    }

    #[test]
    fn product_formula_examples() {
        let o = Oracle::new(2).unwrap();
        let word = vec![
            EntryLabel::plain(1, 2),
            EntryLabel::star(2, 1),
            EntryLabel::plain(1, 1),
            EntryLabel::star(1, 1),
        ];
        let ew = EntryWord::new(word.clone(), 2).unwrap();
        assert!(o
            .check_product_formula(&Composition::new(vec![2, 2]).unwrap(), &ew)
            .unwrap());
        // All parts 1: both sides are the plain joint cumulant κ_4.
        let (lhs, rhs) = o
            .product_formula_sides(&Composition::new(vec![1; 4]).unwrap(), &word)
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, brown_entry_cumulant(&word).eval(2).unwrap());
        // One part: κ_1 of the product is its moment.
        let (lhs, rhs) = o
            .product_formula_sides(&Composition::new(vec![4]).unwrap(), &word)
            .unwrap();
        assert_eq!(lhs, o.entry_moment(&word).unwrap());
        assert_eq!(lhs, rhs);
        assert!(o
            .product_formula_sides(&Composition::new(vec![3]).unwrap(), &word)
            .is_err());
    }

    #[test]
    fn trace_property_of_entry_moments() {
        for n in [2u32, 3] {
            let o = Oracle::new(n).unwrap();
            // Words built from a few structured families, all lengths ≤ 6.
            let mut words: Vec<Vec<EntryLabel>> = Vec::new();
            for r in 1..=6usize {
                for bits in 0..1u32 << r {
                    let seq: Vec<EntryLabel> = (0..r)
                        .map(|k| {
                            let star = if bits >> k & 1 == 1 {
                                StarLabel::Star
                            } else {
                                StarLabel::Plain
                            };
                            let row = (k as u32 * 7 + bits) % n + 1;
                            let col = (k as u32 * 5 + 2 * bits + 1) % n + 1;
                            EntryLabel::new(star, row, col)
                        })
                        .collect();
                    words.push(seq);
                }
            }
            for word in words {
                let base = o.entry_moment(&word).unwrap();
                let mut rotated = word.clone();
                rotated.rotate_right(1);
                assert_eq!(o.entry_moment(&rotated).unwrap(), base, "{word:?}");
            }
        }
    }

    #[test]
    fn unitarity_holds() {
        for n in 1..=3 {
            assert!(Oracle::new(n)
                .unwrap()
                .unitarity_defects()
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn inversion_of_single_variable() {
        let k = cumulants_from_moments(1, |_| Ok(rational(3, 7))).unwrap();
        assert_eq!(k, rational(3, 7));
        assert!(cumulants_from_moments(0, |_| Ok(rational(1, 1))).is_err());
    }

    proptest! {
        // Random cumulants on every sub-family → moments by the NC sum → inversion recovers them.
        #[test]
        fn moment_cumulant_roundtrip(s in 1usize..=6, seed in prop::collection::vec(-20i64..=20, 64)) {
            let kappa = |mask: u64| integer(seed[(mask as usize * 2654435761) % 64] as i128) / integer(1 + (mask % 5) as i128);
            let lattices: Vec<Vec<NcPartition>> = (0..=s).map(|k| enumerate_nc(k).unwrap().collect()).collect();
            let moment = |members: &[usize]| -> Result<Rational> {
                let mut m = Rational::zero();
                for pi in &lattices[members.len()] {
                    let mut prod = Rational::one();
                    for block in pi.blocks() {
                        let sub = block.iter().fold(0u64, |acc, &v| acc | 1 << members[v - 1]);
                        prod *= kappa(sub);
                    }
                    m += prod;
                }
                Ok(m)
            };
            let full = (1u64 << s) - 1;
            prop_assert_eq!(cumulants_from_moments(s, moment).unwrap(), kappa(full));
        }
    }
}
