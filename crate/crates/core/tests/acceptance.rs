//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Every check is exact (structural Laurent-polynomial or rational equality).

use std::process::ExitCode;
use std::time::Instant;

use freetrace::arith::LaurentPoly;
use freetrace::kernel::{EntryLabel, StarLabel};
use freetrace::nc::{
    count_index_tuples, cycle_count, enumerate_nc, index_tuple_exponent, is_connecting,
    is_connecting_by_join, kreweras, kreweras_permutation, Composition, DEFAULT_TUPLE_BOUND,
};
use freetrace::oracle::{Oracle, OracleBudget};
use freetrace::verify::compare_engine_oracle;
use freetrace::{Engine, Factor, TraceWord};
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn mean_zero(engine: &Engine) -> Outcome {
    let mut checked = 0;
    for p in 1..=8 {
        for star in StarLabel::BOTH {
            let w = TraceWord::new(vec![Factor::new(p, star)]).unwrap();
            let value = engine
                .trace_cumulant_brown(&w)
                .map_err(|e| e.to_string())?
                .value;
            if !value.is_zero() {
                return Err(format!("κ_1({w}) = {value}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} first cumulants are exactly 0"))
}

fn covariance(engine: &Engine) -> Outcome {
    let mut checked = 0;
    for p in 1..=5 {
        for q in 1..=5 {
            for e in StarLabel::BOTH {
                for f in StarLabel::BOTH {
                    let w = TraceWord::new(vec![Factor::new(p, e), Factor::new(q, f)]).unwrap();
                    let value = engine
                        .trace_cumulant_brown(&w)
                        .map_err(|e| e.to_string())?
                        .value;
                    let expected = if p == q && e != f {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    };
                    if value != expected {
                        return Err(format!("κ_2({w}) = {value}, expected {expected}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} second cumulants match the circular covariance exactly"
    ))
}

fn higher_vanish(engine: &Engine) -> Outcome {
    let mut checked = 0;
    let mut nonzero = 0;
    for w in TraceWord::enumerate(8, 4)
        .into_iter()
        .filter(|w| w.len() >= 3)
    {
        let value = engine
            .trace_cumulant_brown(&w)
            .map_err(|e| e.to_string())?
            .value;
        let shape_ok = value.is_zero()
            || matches!(value.as_monomial(), Some((k, c)) if k == 2 - w.len() as i32 && c.is_integer());
        if !shape_ok {
            return Err(format!(
                "κ({w}) = {value} is not an integer multiple of n^{}",
                2 - w.len() as i32
            ));
        }
        let limit = engine
            .asymptotic_distribution(&w)
            .map_err(|e| e.to_string())?;
        if !limit.is_zero() {
            return Err(format!("lim κ({w}) = {limit}"));
        }
        nonzero += usize::from(!value.is_zero());
        checked += 1;
    }
    Ok(format!(
        "{checked} words with s ∈ {{3,4}} ({nonzero} nonzero at finite n), all limits 0"
    ))
}

fn engine_oracle(engine: &Engine) -> Outcome {
    let report = compare_engine_oracle(engine, 6, &[1, 2, 3], OracleBudget::default())
        .map_err(|e| e.to_string())?;
    if let Some(m) = report.mismatches.first() {
        return Err(format!(
            "{} mismatches, first: {} at n = {}: engine {} vs oracle {}",
            report.mismatches.len(),
            m.word,
            m.n,
            m.engine,
            m.oracle
        ));
    }
    Ok(format!("{} (word, n) evaluations agree", report.checked))
}

fn kreweras_identity() -> Outcome {
    let mut checked = 0;
    for p in 1..=9 {
        for pi in enumerate_nc(p).unwrap() {
            let k = kreweras(&pi);
            if k.block_count() != p + 1 - pi.block_count() {
                return Err(format!("|K({pi})| = {}", k.block_count()));
            }
            if !k.is_noncrossing() {
                return Err(format!("K({pi}) = {k} is crossing"));
            }
            let twist = cycle_count(&kreweras_permutation(&pi));
            if twist != k.block_count() {
                return Err(format!("#(γσ^-1) = {twist} ≠ |K({pi})|"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} partitions satisfy #(γσ_π^-1) = |K(π)| = p + 1 − |π|"
    ))
}

fn index_tuple_count() -> Outcome {
    let mut checked = 0;
    for p in 1..=7 {
        let partitions: Vec<_> = enumerate_nc(p).unwrap().collect();
        for c in Composition::all(p) {
            for pi in &partitions {
                if !is_connecting(pi, &c).unwrap() {
                    continue;
                }
                let exponent = index_tuple_exponent(pi, &c);
                for n in [2u64, 3] {
                    let count = count_index_tuples(pi, &c, n, DEFAULT_TUPLE_BOUND)
                        .map_err(|e| e.to_string())?;
                    let closed = (n as u128).pow(exponent as u32);
                    if exponent < 0 || count != closed {
                        return Err(format!(
                            "c_π for π = {pi}, c = {c}, n = {n}: {count} ≠ n^{exponent}"
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} brute-force counts equal n^(p+2−s−|π|)"))
}

fn separation_vs_join() -> Outcome {
    let mut checked = 0;
    for p in 1..=9 {
        let partitions: Vec<_> = enumerate_nc(p).unwrap().collect();
        for c in Composition::all(p) {
            for pi in &partitions {
                let by_cycles = is_connecting(pi, &c).unwrap();
                let by_join = is_connecting_by_join(pi, &c).unwrap();
                if by_cycles != by_join {
                    return Err(format!(
                        "π = {pi}, c = {c}: separation {by_cycles}, join {by_join}"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (π, c) pairs agree"))
}

fn path_equivalence(engine: &Engine) -> Outcome {
    let words = TraceWord::enumerate(10, usize::MAX);
    for w in &words {
        let special = engine
            .trace_cumulant_brown(w)
            .map_err(|e| e.to_string())?
            .value;
        let general = engine
            .trace_cumulant_brown_general(w)
            .map_err(|e| e.to_string())?;
        if special != general {
            return Err(format!("{w}: closed form {special} vs general {general}"));
        }
    }
    Ok(format!("{} words agree structurally", words.len()))
}

fn product_formula() -> Outcome {
    let oracle = Oracle::new(2).unwrap();
    let mut checked = 0;
    for r in 1..=5usize {
        let compositions = Composition::all(r);
        // Each entry: 1 star bit + 2 index bits.
        for code in 0..1u32 << (3 * r) {
            let entries: Vec<EntryLabel> = (0..r)
                .map(|k| {
                    let bits = code >> (3 * k) & 0b111;
                    let star = if bits & 1 == 1 {
                        StarLabel::Star
                    } else {
                        StarLabel::Plain
                    };
                    EntryLabel::new(star, (bits >> 1 & 1) + 1, (bits >> 2 & 1) + 1)
                })
                .collect();
            for c in &compositions {
                let (lhs, rhs) = oracle
                    .product_formula_sides(c, &entries)
                    .map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("{entries:?} grouped by {c}: {lhs} vs {rhs}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (entry word, composition) pairs satisfy the product formula"
    ))
}

fn unitarity() -> Outcome {
    for n in [2u32, 3] {
        let defects = Oracle::new(n)
            .unwrap()
            .unitarity_defects()
            .map_err(|e| e.to_string())?;
        if !defects.is_empty() {
            return Err(format!("n = {n}: defects at {defects:?}"));
        }
    }
    Ok("Σ_k h(u*_ki u_kj) = δ_ij = Σ_k h(u_ik u*_jk) for n = 2, 3".into())
}

fn main() -> ExitCode {
    let engine = Engine::default();
    let criteria: Vec<Criterion> = vec![
        ("1 mean zero", Box::new(|| mean_zero(&engine))),
        ("2 covariance", Box::new(|| covariance(&engine))),
        (
            "3 higher cumulants vanish",
            Box::new(|| higher_vanish(&engine)),
        ),
        (
            "4 engine-oracle agreement",
            Box::new(|| engine_oracle(&engine)),
        ),
        ("5 Kreweras identity", Box::new(kreweras_identity)),
        ("6 c_pi closed form", Box::new(index_tuple_count)),
        ("7 separation = join", Box::new(separation_vs_join)),
        ("8 path equivalence", Box::new(|| path_equivalence(&engine))),
        ("9 product formula", Box::new(product_formula)),
        ("10 unitarity", Box::new(unitarity)),
    ];
    let mut failures = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<28} {detail} ({secs:.1}s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name:<28} {detail} ({secs:.1}s)");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
