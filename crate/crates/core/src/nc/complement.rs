//! Permutation encoding of noncrossing partitions, the Kreweras complement,
//! and the criterion for `π ∨ γ_c = 1_p`.

use crate::error::{Error, Result};
use crate::nc::partition::{Composition, NcPartition, SetPartition};
use crate::nc::permutation::Permutation;

/// Default cap on `n^p` for [`count_index_tuples`].
pub const DEFAULT_TUPLE_BOUND: u128 = 50_000_000;

/// `σ_π`: each block `{v_1 < … < v_r}` becomes the cycle `v_1 → … → v_r → v_1`.
pub fn to_permutation(pi: &NcPartition) -> Permutation {
    Permutation::from_cycles(pi.size(), pi.blocks())
}

/// `γ ∘ σ_π^{-1}`, the Kreweras complement of `π` conjugated by `γ`.
pub fn kreweras_permutation(pi: &NcPartition) -> Permutation {
    let gamma = Permutation::full_cycle(pi.size());
    gamma.compose(&to_permutation(pi).inverse())
}

/// `K(π)`, read off as the cycles of `γ^{-1} ∘ (γ ∘ σ_π^{-1}) ∘ γ = σ_π^{-1} ∘ γ`.
pub fn kreweras(pi: &NcPartition) -> NcPartition {
    let gamma = Permutation::full_cycle(pi.size());
    let conjugated = gamma
        .inverse()
        .compose(&kreweras_permutation(pi))
        .compose(&gamma);
    let labels = conjugated.cycle_labels();
    let complement = SetPartition::from_labels(&labels);
    debug_assert!(pi.size() == 0 || complement.block_count() == pi.size() + 1 - pi.block_count());
    NcPartition::try_from(complement).expect("Kreweras complement is noncrossing")
}

fn check_sizes(pi: &NcPartition, c: &Composition) -> Result<()> {
    if pi.size() != c.total() {
        return Err(Error::SizeMismatch {
            expected: c.total(),
            actual: pi.size(),
        });
    }
    Ok(())
}

/// Whether every marked point of `c` lies in a different cycle, given the
/// cycle label of each point of `γ ∘ σ_π^{-1}`.
pub(crate) fn separates(cycle_labels: &[u8], marked_points: &[usize]) -> bool {
    let mut seen = 0u64;
    for &m in marked_points {
        let bit = 1u64 << cycle_labels[m - 1];
        if seen & bit != 0 {
            return false;
        }
        seen |= bit;
    }
    true
}

/// `π ∨ γ_c = 1_p`, decided by checking that `1, p_1 + 1, …, p − p_s + 1`
/// lie in distinct cycles of `γ ∘ σ_π^{-1}`.
pub fn is_connecting(pi: &NcPartition, c: &Composition) -> Result<bool> {
    check_sizes(pi, c)?;
    let labels: Vec<u8> = kreweras_permutation(pi)
        .cycle_labels()
        .into_iter()
        .map(|l| l as u8)
        .collect();
    Ok(separates(&labels, &c.marked_points()))
}

/// `π ∨ γ_c = 1_p` straight from the lattice join.
pub fn is_connecting_by_join(pi: &NcPartition, c: &Composition) -> Result<bool> {
    check_sizes(pi, c)?;
    Ok(pi.join(&c.interval_partition())?.is_coarsest())
}

/// Brute-force `c_π`: the number of `i ∈ [n]^p` with
/// `i_1 = i_{p_1+1} = … = i_{p−p_s+1}` and `i_j = i_{γ∘σ_π^{-1}(j)}` for every `j`.
pub fn count_index_tuples(
    pi: &NcPartition,
    c: &Composition,
    n_value: u64,
    bound: u128,
) -> Result<u128> {
    check_sizes(pi, c)?;
    if n_value == 0 {
        return Err(Error::ZeroDimension);
    }
    let p = pi.size();
    let total = (n_value as u128)
        .checked_pow(p as u32)
        .filter(|&t| t <= bound)
        .ok_or(Error::LimitExceeded {
            what: "index tuples n^p",
            value: (n_value as u128).saturating_pow(p as u32),
            limit: bound,
        })?;
    let twist = kreweras_permutation(pi);
    let marks = c.marked_points();
    let mut tuple = vec![0u64; p];
    let mut count = 0u128;
    for _ in 0..total {
        let marks_equal = marks.iter().all(|&m| tuple[m - 1] == tuple[0]);
        if marks_equal && (1..=p).all(|j| tuple[j - 1] == tuple[twist.apply(j) - 1]) {
            count += 1;
        }
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < n_value {
                break;
            }
            *slot = 0;
        }
    }
    Ok(count)
}

/// The exponent `p + 2 − s − |π|` that `c_π` takes for a connecting `π`.
pub fn index_tuple_exponent(pi: &NcPartition, c: &Composition) -> i64 {
    pi.size() as i64 + 2 - c.len() as i64 - pi.block_count() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::enumerate::enumerate_nc;

    fn nc(size: usize, blocks: &[&[usize]]) -> NcPartition {
        NcPartition::new(size, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn permutation_encoding() {
        assert_eq!(
            to_permutation(&NcPartition::finest(4)),
            Permutation::identity(4)
        );
        assert_eq!(
            to_permutation(&NcPartition::coarsest(4)),
            Permutation::full_cycle(4)
        );
        let t = to_permutation(&nc(3, &[&[1, 2], &[3]]));
        assert_eq!(t.images(), &[2, 1, 3]);
    }

    #[test]
    fn kreweras_examples() {
        assert_eq!(kreweras(&NcPartition::coarsest(5)), NcPartition::finest(5));
        assert_eq!(kreweras(&NcPartition::finest(5)), NcPartition::coarsest(5));
        assert_eq!(kreweras(&nc(3, &[&[1, 2], &[3]])), nc(3, &[&[1], &[2, 3]]));
        let twist = kreweras_permutation(&nc(3, &[&[1, 2], &[3]]));
        assert_eq!(twist.cycles(), vec![vec![1, 3], vec![2]]);
        assert_eq!(twist.cycle_count(), 2);
    }

    #[test]
    fn kreweras_is_an_involution_up_to_rotation() {
        // K(K(π)) is π rotated by one step.
        let gamma = Permutation::full_cycle(7);
        for pi in enumerate_nc(7).unwrap() {
            let kk = kreweras(&kreweras(&pi));
            let rotated: Vec<Vec<usize>> = pi
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&x| gamma.inverse().apply(x)).collect())
                .collect();
            let rotated = NcPartition::new(7, rotated).unwrap();
            assert_eq!(kk, rotated, "π = {pi}");
        }
    }

    #[test]
    fn connecting_examples() {
        for c in [comp(&[4]), comp(&[1, 3]), comp(&[2, 1, 1])] {
            assert!(is_connecting(&NcPartition::coarsest(4), &c).unwrap());
        }
        assert!(!is_connecting(&NcPartition::finest(4), &comp(&[2, 2])).unwrap());
        assert!(is_connecting(&NcPartition::finest(4), &comp(&[4])).unwrap());
        assert!(is_connecting(&nc(4, &[&[1, 4], &[2, 3]]), &comp(&[2, 2])).unwrap());
        assert!(!is_connecting(&nc(4, &[&[1, 2], &[3, 4]]), &comp(&[2, 2])).unwrap());
        assert!(is_connecting(&NcPartition::finest(3), &comp(&[2])).is_err());
    }

    #[test]
    fn separation_agrees_with_join_small() {
        for p in 1..=6 {
            for c in Composition::all(p) {
                for pi in enumerate_nc(p).unwrap() {
                    assert_eq!(
                        is_connecting(&pi, &c).unwrap(),
                        is_connecting_by_join(&pi, &c).unwrap(),
                        "π = {pi}, c = {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn index_tuple_examples() {
        let bound = DEFAULT_TUPLE_BOUND;
        for n in 1..=3u64 {
            let p = 4;
            let one = NcPartition::coarsest(p);
            assert_eq!(
                count_index_tuples(&one, &comp(&[p]), n, bound).unwrap(),
                (n as u128).pow(p as u32)
            );
            let zero = NcPartition::finest(p);
            assert_eq!(
                count_index_tuples(&zero, &comp(&[p]), n, bound).unwrap(),
                n as u128
            );
        }
        let nested = nc(4, &[&[1, 4], &[2, 3]]);
        assert_eq!(
            count_index_tuples(&nested, &comp(&[2, 2]), 3, bound).unwrap(),
            9
        );
        assert_eq!(index_tuple_exponent(&nested, &comp(&[2, 2])), 2);
        assert!(count_index_tuples(&nested, &comp(&[2, 2]), 10, 100).is_err());
        assert!(count_index_tuples(&nested, &comp(&[2, 2]), 0, bound).is_err());
    }
}
