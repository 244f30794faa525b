//! Noncrossing partitions: enumeration, lattice join, permutation encoding,
//! the Kreweras complement, and the connecting criterion `π ∨ γ_c = 1_p`.

mod complement;
mod enumerate;
mod partition;
mod permutation;
mod table;

pub use complement::{
    count_index_tuples, index_tuple_exponent, is_connecting, is_connecting_by_join, kreweras,
    kreweras_permutation, to_permutation, DEFAULT_TUPLE_BOUND,
};
pub use enumerate::{
    enumerate_nc, enumerate_nc_pairings, enumerate_nc_with_limit, NcIter, DEFAULT_ENUMERATION_LIMIT,
};
pub use partition::{Composition, NcPartition, PartitionJson, SetPartition};
pub use permutation::{cycle_count, Permutation};
pub use table::{twist_labels, NcRow, NcTable};

/// `π ∨ σ` in the full partition lattice.
pub fn join(a: &SetPartition, b: &SetPartition) -> crate::Result<SetPartition> {
    a.join(b)
}

/// `γ_c` for a composition `c`.
pub fn interval_partition(c: &Composition) -> NcPartition {
    c.interval_partition()
}

pub fn is_noncrossing(pi: &SetPartition) -> bool {
    pi.is_noncrossing()
}
