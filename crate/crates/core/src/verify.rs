//! Cross-checks between the symbolic engine and the fixed-`n` oracle.

use serde::Serialize;

use crate::arith::Rational;
use crate::engine::{serialize_rational, Engine};
use crate::error::Result;
use crate::oracle::{Oracle, OracleBudget};
use crate::word::TraceWord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub word: TraceWord,
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub engine: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub oracle: Rational,
}

/// One engine-vs-oracle evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub word: TraceWord,
    pub n: u32,
    pub engine: Rational,
    pub oracle: Rational,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.engine == self.oracle
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    pub comparisons: Vec<Comparison>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluates the engine's Laurent polynomial at each `n` and compares it with
/// the oracle's moment-inversion cumulant, for every word of total power
/// `≤ max_total_p`.
pub fn compare_engine_oracle(
    engine: &Engine,
    max_total_p: usize,
    n_values: &[u32],
    budget: OracleBudget,
) -> Result<ComparisonReport> {
    let words = TraceWord::enumerate(max_total_p, usize::MAX);
    let symbolic = words
        .iter()
        .map(|w| engine.trace_cumulant_brown(w).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let mut comparisons = Vec::with_capacity(words.len() * n_values.len());
    for &n in n_values {
        let oracle = Oracle::with_budget(n, budget)?;
        for (word, value) in words.iter().zip(&symbolic) {
            comparisons.push(Comparison {
                word: word.clone(),
                n,
                engine: value.eval(n as u64)?,
                oracle: oracle.trace_cumulant(word)?,
            });
        }
    }
    let mismatches = comparisons
        .iter()
        .filter(|c| !c.agrees())
        .map(|c| Mismatch {
            word: c.word.clone(),
            n: c.n,
            engine: c.engine.clone(),
            oracle: c.oracle.clone(),
        })
        .collect();
    Ok(ComparisonReport {
        checked: comparisons.len(),
        mismatches,
        comparisons,
    })
}
