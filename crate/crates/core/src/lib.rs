//! Exact free cumulants of traces of powers of the unitary `u = (u_ij)`
//! generating the Brown algebra, under the free Haar trace.
//!
//! * [`arith`]: exact rationals and Laurent polynomials in the dimension `n`.
//! * [`nc`]: noncrossing partitions, Kreweras complement, connecting criterion.
//! * [`kernel`]: entry cumulants of `{u, u*}` and the block-kernel interface.
//! * [`engine`]: symbolic cumulants `κ_s(χ(u^{p_1})^{e_1}, …)` as Laurent polynomials.
//! * [`oracle`]: an independent brute-force evaluator at fixed `n`.
//! * [`verify`]: engine-versus-oracle comparison.
//!
//! ```
//! use freetrace::{Engine, TraceWord};
//!
//! let engine = Engine::default();
//! let word: TraceWord = "u^2, u^2*".parse()?;
//! assert_eq!(engine.trace_cumulant_brown(&word)?.value.to_string(), "1");
//!
//! let word: TraceWord = "u, u*, u, u*".parse()?;
//! assert_eq!(engine.trace_cumulant_brown(&word)?.value.to_string(), "-n^-2");
//! # Ok::<(), freetrace::Error>(())
//! ```

pub mod arith;
pub mod engine;
pub mod error;
pub mod kernel;
pub mod nc;
pub mod oracle;
pub mod verify;
pub mod word;

pub use arith::{format_rational, parse_rational, LaurentPoly, Limit, Rational};
pub use engine::{circular_limit, CircularityReport, CumulantReport, Engine, EngineConfig};
pub use error::{Error, Result};
pub use kernel::{
    brown_block_value, brown_entry_cumulant, catalan, is_adapted, kappa_pi, BlockKernel,
    BrownKernel, EntryLabel, StarLabel,
};
pub use nc::{Composition, NcPartition, Permutation, SetPartition};
pub use oracle::{cumulants_from_moments, EntryWord, Oracle, OracleBudget};
pub use verify::{compare_engine_oracle, ComparisonReport};
pub use word::{Factor, TraceWord};
