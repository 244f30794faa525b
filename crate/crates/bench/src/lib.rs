//! Shared inputs for the criterion benches.

use freetrace::{Factor, TraceWord};

/// `χ(u^k) χ(u^k)*`, the covariance word of total power `2k`.
pub fn covariance_word(k: usize) -> TraceWord {
    TraceWord::new(vec![Factor::plain(k), Factor::star(k)]).expect("k ≥ 1")
}

/// `(χ(u) χ(u)*)^m`, alternating single powers: `2m` factors of power 1.
pub fn alternating_word(m: usize) -> TraceWord {
    let factors = (0..2 * m)
        .map(|i| {
            if i % 2 == 0 {
                Factor::plain(1)
            } else {
                Factor::star(1)
            }
        })
        .collect();
    TraceWord::new(factors).expect("m ≥ 1")
}
