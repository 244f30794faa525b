//! Joint free cumulants of traces of powers, as Laurent polynomials in `n`.
//!
//! For an R-cyclic family whose cyclic entry cumulants do not depend on the
//! indices,
//!
//! ```text
//! κ_s(χ(A_{l_1}^{p_1}), …, χ(A_{l_s}^{p_s}))
//!     = Σ_{π ∈ NC(p), π ∨ γ_c = 1_p} n^{p+2−s−|π|} κ_π[λ]
//! ```
//!
//! with `c = (p_1, …, p_s)` and `λ` the label of each factor repeated `p_i`
//! times. For `{u, u*}` this collapses to
//!
//! ```text
//! n^{2−s} (−1)^{p/2} Σ_{π connecting, ε-adapted} (−1)^{|π|} ∏_{V∈π} C_{#V/2−1}.
//! ```
//!
//! [`Engine::trace_cumulant_general`] evaluates the first sum for any
//! [`BlockKernel`]; [`Engine::trace_cumulant_brown`] evaluates the second with
//! integer arithmetic. The two are kept separate so they can be checked
//! against each other.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{integer, LaurentPoly, Limit, Rational};
use crate::error::{Error, Result};
use crate::kernel::{catalan_i128, kappa_pi, BlockKernel};
use crate::nc::{enumerate_nc_with_limit, twist_labels, Composition, NcPartition, NcRow, NcTable};
use crate::word::TraceWord;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 14;
pub const DEFAULT_CACHE_LIMIT: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest total power `p` the engine will enumerate `NC(p)` for.
    pub enumeration_limit: usize,
    /// `NC(p)` is materialized and kept for `p` up to this size; larger sizes are streamed.
    pub cache_limit: usize,
    /// Worker threads for partition reductions; `0` picks the rayon default, `1` runs inline.
    pub workers: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            cache_limit: DEFAULT_CACHE_LIMIT,
            workers: 1,
        }
    }
}

/// Result of [`Engine::trace_cumulant_brown`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CumulantReport {
    pub word: TraceWord,
    #[serde(rename = "laurent")]
    pub value: LaurentPoly,
    pub limit: Limit,
    /// Partitions with a nonzero term in the sum.
    #[serde(rename = "contributing")]
    pub contributing_partitions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircularityViolation {
    pub word: TraceWord,
    pub value: LaurentPoly,
    pub limit: Limit,
    #[serde(serialize_with = "serialize_rational")]
    pub expected: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircularityReport {
    pub max_p: usize,
    pub max_s: usize,
    pub checked: usize,
    pub violations: Vec<CircularityViolation>,
}

impl CircularityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(&crate::arith::format_rational(q))
}

/// The limiting cumulant of a `*`-free family of circular elements of
/// covariance 1: `κ_2(c, c*) = κ_2(c*, c) = 1` for equal powers, else 0.
pub fn circular_limit(word: &TraceWord) -> Rational {
    match word.factors() {
        [a, b] if a.power == b.power && a.star != b.star => Rational::one(),
        _ => Rational::zero(),
    }
}

pub struct Engine {
    config: EngineConfig,
    tables: Vec<OnceLock<Result<Arc<NcTable>>>>,
    pool: Option<rayon::ThreadPool>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("config", &self.config)
            .finish()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        let cached = config.cache_limit.min(config.enumeration_limit);
        let pool = (config.workers != 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.workers)
                .build()
                .expect("failed to start worker pool")
        });
        Self {
            config,
            tables: (0..=cached).map(|_| OnceLock::new()).collect(),
            pool,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn check_budget(&self, p: usize) -> Result<()> {
        if p > self.config.enumeration_limit {
            return Err(Error::LimitExceeded {
                what: "total power p",
                value: p as u128,
                limit: self.config.enumeration_limit as u128,
            });
        }
        Ok(())
    }

    fn table(&self, p: usize) -> Option<Result<Arc<NcTable>>> {
        let slot = self.tables.get(p)?;
        Some(
            slot.get_or_init(|| NcTable::build(p, self.config.enumeration_limit).map(Arc::new))
                .clone(),
        )
    }

    /// Folds `f` over every partition of `NC(p)`, in parallel when a worker
    /// pool is configured. `merge` must be associative and commutative.
    fn reduce_partitions<A, I, F, M>(&self, p: usize, init: I, f: F, merge: M) -> Result<A>
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, NcRow<'_>) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        self.check_budget(p)?;
        if let Some(table) = self.table(p) {
            let table = table?;
            return Ok(match &self.pool {
                None => {
                    let mut acc = init();
                    for row in table.rows() {
                        f(&mut acc, row);
                    }
                    acc
                }
                Some(pool) => pool.install(|| {
                    (0..table.len())
                        .into_par_iter()
                        .fold(&init, |mut acc, i| {
                            f(&mut acc, table.row(i));
                            acc
                        })
                        .reduce(&init, &merge)
                }),
            });
        }
        let stream = enumerate_nc_with_limit(p, self.config.enumeration_limit)?;
        let visit = |acc: &mut A, pi: NcPartition| {
            let labels = twist_labels(&pi);
            f(acc, NcRow::new(&pi, &labels));
        };
        Ok(match &self.pool {
            None => {
                let mut acc = init();
                for pi in stream {
                    visit(&mut acc, pi);
                }
                acc
            }
            Some(pool) => pool.install(|| {
                stream
                    .par_bridge()
                    .fold(&init, |mut acc, pi| {
                        visit(&mut acc, pi);
                        acc
                    })
                    .reduce(&init, &merge)
            }),
        })
    }

    /// `Σ_{π ∈ NC(p), π ∨ γ_c = 1_p} n^{p+2−s−|π|} κ_π[λ]` for a block kernel
    /// whose cyclic-index cumulants are index-independent.
    pub fn trace_cumulant_general<L, K>(
        &self,
        kernel: &K,
        composition: &Composition,
        family_labels: &[L],
    ) -> Result<LaurentPoly>
    where
        L: Clone + Sync,
        K: BlockKernel<L> + ?Sized,
    {
        Ok(self.general_sum(kernel, composition, family_labels)?.0)
    }

    fn general_sum<L, K>(
        &self,
        kernel: &K,
        composition: &Composition,
        family_labels: &[L],
    ) -> Result<(LaurentPoly, u64)>
    where
        L: Clone + Sync,
        K: BlockKernel<L> + ?Sized,
    {
        let s = composition.len();
        if family_labels.len() != s {
            return Err(Error::SizeMismatch {
                expected: s,
                actual: family_labels.len(),
            });
        }
        let p = composition.total();
        let expanded: Vec<L> = composition
            .parts()
            .iter()
            .zip(family_labels)
            .flat_map(|(&part, label)| std::iter::repeat_n(label.clone(), part))
            .collect();
        let marks = composition.marked_points();
        self.reduce_partitions(
            p,
            || (LaurentPoly::zero(), 0u64),
            |acc, row| {
                if !row.connects(&marks) {
                    return;
                }
                let pi = row.partition;
                let kappa = kappa_pi(pi, kernel, &expanded).expect("label length matches p");
                if kappa.is_zero() {
                    return;
                }
                let exponent = p as i32 + 2 - s as i32 - pi.block_count() as i32;
                acc.0 += kappa.shift(exponent);
                acc.1 += 1;
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        )
    }

    /// `κ_s(χ(u^{p_1})^{e_1}, …, χ(u^{p_s})^{e_s})` under the free Haar trace.
    pub fn trace_cumulant_brown(&self, word: &TraceWord) -> Result<CumulantReport> {
        let p = word.total();
        let s = word.len();
        let labels = word.labels();
        let marks = word.composition().marked_points();
        let catalans: Vec<i128> = (0..=p / 2).map(catalan_i128).collect();

        let (sum, contributing) = self.reduce_partitions(
            p,
            || (0i128, 0u64),
            |acc, row| {
                // Cheapest test first: connecting, then adapted, then the weight.
                if !row.connects(&marks) {
                    return;
                }
                let mut weight = 1i128;
                for block in row.partition.blocks() {
                    if block.len() % 2 == 1 {
                        return;
                    }
                    if block
                        .windows(2)
                        .any(|w| labels[w[0] - 1] == labels[w[1] - 1])
                    {
                        return;
                    }
                    weight *= catalans[block.len() / 2 - 1];
                }
                if row.partition.block_count() % 2 == 1 {
                    weight = -weight;
                }
                acc.0 += weight;
                acc.1 += 1;
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        )?;

        let value = if p % 2 == 1 {
            debug_assert_eq!(
                contributing, 0,
                "odd total power admits no adapted partition"
            );
            LaurentPoly::zero()
        } else {
            let signed = if (p / 2).is_multiple_of(2) { sum } else { -sum };
            LaurentPoly::monomial(integer(signed), 2 - s as i32)
        };
        Ok(CumulantReport {
            word: word.clone(),
            limit: value.limit(),
            value,
            contributing_partitions: contributing,
        })
    }

    /// The same cumulant routed through the generic kernel path.
    pub fn trace_cumulant_brown_general(&self, word: &TraceWord) -> Result<LaurentPoly> {
        self.trace_cumulant_general(
            &crate::kernel::BrownKernel,
            &word.composition(),
            &word.factor_stars(),
        )
    }

    /// `lim_{n→∞}` of the cumulant; always finite since the exponent is `2 − s`
    /// and the `s = 1` cumulant vanishes.
    pub fn asymptotic_distribution(&self, word: &TraceWord) -> Result<Rational> {
        match self.trace_cumulant_brown(word)?.limit {
            Limit::Finite(q) => Ok(q),
            Limit::Divergent => {
                unreachable!("exponent 2 − s is positive only for s = 1, where the value is 0")
            }
        }
    }

    /// Checks the limiting cumulants of every word with at most `max_s`
    /// factors and total power at most `max_p` against a `*`-free circular
    /// family of covariance 1.
    pub fn circularity_report(&self, max_p: usize, max_s: usize) -> Result<CircularityReport> {
        self.check_budget(max_p)?;
        let words = TraceWord::enumerate(max_p, max_s);
        let mut violations = Vec::new();
        for word in &words {
            let report = self.trace_cumulant_brown(word)?;
            let expected = circular_limit(word);
            if report.limit != Limit::Finite(expected.clone()) {
                violations.push(CircularityViolation {
                    word: word.clone(),
                    value: report.value,
                    limit: report.limit,
                    expected,
                });
            }
        }
        Ok(CircularityReport {
            max_p,
            max_s,
            checked: words.len(),
            violations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::kernel::{BrownKernel, StarLabel};

    fn word(text: &str) -> TraceWord {
        text.parse().unwrap()
    }

    fn engine() -> Engine {
        Engine::default()
    }

    #[test]
    fn general_path_examples() {
        let e = engine();
        let zero_kernel = |_: &[StarLabel]| LaurentPoly::zero();
        let c = Composition::new(vec![3]).unwrap();
        assert!(e
            .trace_cumulant_general(&zero_kernel, &c, &[StarLabel::Plain])
            .unwrap()
            .is_zero());

        let c = Composition::new(vec![1, 1]).unwrap();
        let v = e
            .trace_cumulant_general(&BrownKernel, &c, &[StarLabel::Plain, StarLabel::Star])
            .unwrap();
        assert_eq!(v, LaurentPoly::one());

        let c = Composition::new(vec![1]).unwrap();
        assert!(e
            .trace_cumulant_general(&BrownKernel, &c, &[StarLabel::Plain])
            .unwrap()
            .is_zero());
        assert!(e.trace_cumulant_general(&BrownKernel, &c, &[]).is_err());
    }

    #[test]
    fn brown_examples() {
        let e = engine();
        for p in 1..=6 {
            assert!(e
                .trace_cumulant_brown(&TraceWord::new(vec![crate::word::Factor::plain(p)]).unwrap())
                .unwrap()
                .value
                .is_zero());
        }
        for p in 1..=3 {
            let w = word(&format!("u^{p}, u^{p}*"));
            assert_eq!(
                e.trace_cumulant_brown(&w).unwrap().value,
                LaurentPoly::one()
            );
        }
        assert!(e
            .trace_cumulant_brown(&word("u^2, u^3*"))
            .unwrap()
            .value
            .is_zero());
        assert!(e
            .trace_cumulant_brown(&word("u, u*, u"))
            .unwrap()
            .value
            .is_zero());
    }

    #[test]
    fn fourth_cumulant_of_alternating_word() {
        // Adapted connecting partitions of (+,-,+,-) for c = (1,1,1,1):
        // only 1_4, since every pair partition leaves a block disconnected.
        let r = engine()
            .trace_cumulant_brown(&word("u, u*, u, u*"))
            .unwrap();
        assert_eq!(r.value, LaurentPoly::monomial(rational(-1, 1), -2));
        assert_eq!(r.contributing_partitions, 1);
        assert_eq!(r.limit, Limit::Finite(rational(0, 1)));
    }

    #[test]
    fn asymptotics() {
        let e = engine();
        assert_eq!(
            e.asymptotic_distribution(&word("u^4, u^4*")).unwrap(),
            rational(1, 1)
        );
        assert_eq!(
            e.asymptotic_distribution(&word("u, u")).unwrap(),
            rational(0, 1)
        );
        assert_eq!(
            e.asymptotic_distribution(&word("u, u*, u^2")).unwrap(),
            rational(0, 1)
        );
    }

    #[test]
    fn circularity_examples() {
        let e = engine();
        let r = e.circularity_report(4, 4).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let r = e.circularity_report(2, 1).unwrap();
        assert_eq!(r.checked, 4);
        assert!(r.passed());
        assert!(e.circularity_report(15, 2).is_err());
    }

    #[test]
    fn budget_guard() {
        let e = Engine::new(EngineConfig {
            enumeration_limit: 6,
            ..EngineConfig::default()
        });
        assert!(e.trace_cumulant_brown(&word("u^4, u^3*")).is_err());
        assert!(e.trace_cumulant_brown(&word("u^3, u^3*")).is_ok());
    }

    #[test]
    fn streaming_matches_cached_and_parallel() {
        let cached = Engine::default();
        let streamed = Engine::new(EngineConfig {
            cache_limit: 0,
            ..EngineConfig::default()
        });
        let parallel = Engine::new(EngineConfig {
            workers: 3,
            ..EngineConfig::default()
        });
        let parallel_streamed = Engine::new(EngineConfig {
            workers: 2,
            cache_limit: 0,
            ..EngineConfig::default()
        });
        for w in TraceWord::enumerate(6, 4) {
            let expected = cached.trace_cumulant_brown(&w).unwrap();
            assert_eq!(streamed.trace_cumulant_brown(&w).unwrap(), expected);
            assert_eq!(parallel.trace_cumulant_brown(&w).unwrap(), expected);
            assert_eq!(
                parallel_streamed.trace_cumulant_brown(&w).unwrap(),
                expected
            );
            assert_eq!(
                parallel.trace_cumulant_brown_general(&w).unwrap(),
                expected.value
            );
        }
    }
}
