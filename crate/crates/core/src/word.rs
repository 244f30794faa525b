//! Trace words `χ(u^{p_1})^{e_1} ⋯ χ(u^{p_s})^{e_s}`.
//!
//! Text form: comma-separated factors `u^<p>` with an optional trailing `*`;
//! a bare `u` means `u^1`. Example: `"u^2, u^3*, u^2*"`.

use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::StarLabel;
use crate::nc::Composition;

/// One factor `χ(u^power)^star`, equal to `χ((u^star)^power)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub power: usize,
    pub star: StarLabel,
}

impl Factor {
    pub fn new(power: usize, star: StarLabel) -> Self {
        Self { power, star }
    }

    pub fn plain(power: usize) -> Self {
        Self::new(power, StarLabel::Plain)
    }

    pub fn star(power: usize) -> Self {
        Self::new(power, StarLabel::Star)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{}{}", self.power, self.star)
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Factor", 2)?;
        s.serialize_field("power", &self.power)?;
        s.serialize_field("star", &self.star.is_star())?;
        s.end()
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = |why: &str| Error::Parse(format!("bad factor {t:?}: {why}"));
        let (body, star) = match t.strip_suffix('*') {
            Some(body) => (body.trim_end(), StarLabel::Star),
            None => (t, StarLabel::Plain),
        };
        let rest = body.strip_prefix('u').ok_or_else(|| bad("expected `u`"))?;
        let power = if rest.is_empty() {
            1
        } else {
            let digits = rest
                .trim_start()
                .strip_prefix('^')
                .ok_or_else(|| bad("expected `^`"))?;
            digits
                .trim()
                .parse::<usize>()
                .map_err(|_| bad("power is not a positive integer"))?
        };
        if power == 0 {
            return Err(bad("power must be at least 1"));
        }
        Ok(Factor::new(power, star))
    }
}

/// A nonempty product of trace factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TraceWord {
    factors: Vec<Factor>,
}

impl TraceWord {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse(
                "a trace word needs at least one factor".into(),
            ));
        }
        if factors.iter().any(|f| f.power == 0) {
            return Err(Error::Parse("factor powers must be at least 1".into()));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of factors `s`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `p = Σ p_i`.
    pub fn total(&self) -> usize {
        self.factors.iter().map(|f| f.power).sum()
    }

    pub fn composition(&self) -> Composition {
        Composition::new(self.factors.iter().map(|f| f.power).collect())
            .expect("trace words have positive powers")
    }

    /// `ε = (e_1, …, e_1, e_2, …, e_s)`, each `e_i` repeated `p_i` times.
    pub fn labels(&self) -> Vec<StarLabel> {
        self.factors
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.star, f.power))
            .collect()
    }

    pub fn factor_stars(&self) -> Vec<StarLabel> {
        self.factors.iter().map(|f| f.star).collect()
    }

    pub fn rotate_left(&self, k: usize) -> Self {
        let mut factors = self.factors.clone();
        let len = factors.len();
        factors.rotate_left(k % len);
        Self { factors }
    }

    /// Every word with `1 ≤ s ≤ max_s` factors and total power `≤ max_p`,
    /// ordered by total, then powers, then star pattern.
    pub fn enumerate(max_p: usize, max_s: usize) -> Vec<TraceWord> {
        let mut out = Vec::new();
        for total in 1..=max_p {
            for c in Composition::all(total) {
                if c.len() > max_s {
                    continue;
                }
                let s = c.len();
                for bits in 0..1u64 << s {
                    let factors = c
                        .parts()
                        .iter()
                        .enumerate()
                        .map(|(i, &power)| {
                            let star = if bits >> (s - 1 - i) & 1 == 1 {
                                StarLabel::Star
                            } else {
                                StarLabel::Plain
                            };
                            Factor::new(power, star)
                        })
                        .collect();
                    out.push(TraceWord { factors });
                }
            }
        }
        out
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let factors = text
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Factor>>>()?;
        TraceWord::new(factors)
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}
