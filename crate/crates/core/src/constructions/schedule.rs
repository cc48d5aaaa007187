//! Recursive interval scheduling for the cutoff envelope.
//!
//! Intervals `I_n = [β_{n-1}, β_n]` tile `[0, β_K]` with `I_1 = [0, 1]`. Each
//! new right end is the smallest integer past the previous one that strictly
//! satisfies the step inequality for its parity:
//!
//! * even `n = 2k`: `(β_{2k} - α_{2k} - 1/5 - 2) / β_{2k} > 3/4`;
//! * odd `n = 2k+1 ≥ 3`: `β_{2k} / β_{2k+1} < 1/5` under [`Rule::Corrected`],
//!   `α_{2k} / β_{2k+1} < 1/5` under [`Rule::Literal`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EapError, Result};
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Rule {
    /// Odd steps compare the previous right end `β_{2k}` with `β_{2k+1}`.
    #[default]
    #[serde(rename = "corrected")]
    Corrected,
    /// Odd steps compare the previous left end `α_{2k}` with `β_{2k+1}`.
    #[serde(rename = "paper-literal")]
    Literal,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Corrected => "corrected",
            Rule::Literal => "paper-literal",
        })
    }
}

impl FromStr for Rule {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Rule::Corrected),
            "paper-literal" => Ok(Rule::Literal),
            other => Err(EapError::config(
                "rule",
                format!("expected `corrected` or `paper-literal`, got `{other}`"),
            )),
        }
    }
}

/// A violated step inequality, reported by [`IntervalSequence::violations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepViolation {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawSequence", into = "RawSequence")]
pub struct IntervalSequence {
    rule: Rule,
    /// `β_0 = 0, β_1 = 1, …, β_K`
    bounds: Vec<BigInt>,
    cache: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    rule: Rule,
    #[serde(with = "rational::serde_bigint_vec")]
    bounds: Vec<BigInt>,
}

impl From<RawSequence> for IntervalSequence {
    fn from(raw: RawSequence) -> Self {
        IntervalSequence::from_bounds(raw.rule, raw.bounds)
    }
}

impl From<IntervalSequence> for RawSequence {
    fn from(seq: IntervalSequence) -> Self {
        RawSequence { rule: seq.rule, bounds: seq.bounds }
    }
}

/// Slack subtracted in the even-step inequality: `1/5 + 2`.
fn even_slack() -> Rational {
    ratio(11, 5)
}

impl IntervalSequence {
    /// Builds `K` intervals with minimal integer right ends.
    pub fn build(k: usize, rule: Rule) -> Result<Self> {
        if k == 0 {
            return Err(EapError::config("k", "K must be ≥ 1"));
        }
        let mut bounds = vec![BigInt::zero(), BigInt::one()];
        for n in 2..=k {
            let prev = &bounds[n - 1];
            let threshold = if n % 2 == 0 {
                // β > 4 (α + 11/5)
                int(4) * (rational::from_big(prev) + even_slack())
            } else {
                let reference = match rule {
                    Rule::Corrected => &bounds[n - 1],
                    Rule::Literal => &bounds[n - 2],
                };
                int(5) * rational::from_big(reference)
            };
            let candidate = rational::floor(&threshold) + 1;
            let next = if &candidate > prev { candidate } else { prev + 1 };
            bounds.push(next);
        }
        Ok(Self::from_bounds(rule, bounds))
    }

    /// Wraps explicit bounds without checking the step inequalities.
    pub fn from_bounds(rule: Rule, bounds: Vec<BigInt>) -> Self {
        let cache = bounds.iter().map(rational::from_big).collect();
        IntervalSequence { rule, bounds, cache }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// Number of intervals `K`.
    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bounds(&self) -> &[BigInt] {
        &self.bounds
    }

    pub(crate) fn bounds_q(&self) -> &[Rational] {
        &self.cache
    }

    /// `α_n`, 1-based.
    pub fn alpha(&self, n: usize) -> &BigInt {
        &self.bounds[n - 1]
    }

    /// `β_n`, 1-based.
    pub fn beta(&self, n: usize) -> &BigInt {
        &self.bounds[n]
    }

    /// Final right end `β_K`; the envelope vanishes beyond it.
    pub fn horizon(&self) -> &BigInt {
        self.bounds.last().unwrap()
    }

    /// 1-based index `n` with `α_n <= t < β_n`, if `0 <= t < β_K`.
    pub fn interval_of(&self, t: &Rational) -> Option<usize> {
        let b = self.bounds_q();
        if t < &b[0] || t >= b.last().unwrap() {
            return None;
        }
        Some(b.partition_point(|x| x <= t))
    }

    /// Even-indexed intervals `(α, β)` in increasing order.
    pub fn even_intervals(&self) -> impl Iterator<Item = (usize, &Rational, &Rational)> + '_ {
        let b = self.bounds_q();
        (2..=self.len()).step_by(2).map(move |n| (n, &b[n - 1], &b[n]))
    }

    /// All violated step inequalities, checked in exact arithmetic.
    pub fn violations(&self) -> Vec<StepViolation> {
        let mut out = Vec::new();
        let b = &self.bounds;
        if b.len() < 2 || !b[0].is_zero() || !b[1].is_one() {
            out.push(StepViolation { index: 1, message: "first interval must be [0, 1]".into() });
            return out;
        }
        for n in 2..b.len() {
            if b[n] <= b[n - 1] {
                out.push(StepViolation {
                    index: n,
                    message: format!("bounds not increasing: β_{} = {} ≤ {}", n, b[n], b[n - 1]),
                });
                continue;
            }
            let beta = rational::from_big(&b[n]);
            let alpha = rational::from_big(&b[n - 1]);
            if n % 2 == 0 {
                if !even_step_holds(&alpha, &beta) {
                    out.push(StepViolation {
                        index: n,
                        message: format!(
                            "(β−α−11/5)/β = {} is not > 3/4",
                            rational::to_pq(&((&beta - &alpha - even_slack()) / &beta))
                        ),
                    });
                }
            } else {
                let reference = match self.rule {
                    Rule::Corrected => alpha.clone(),
                    Rule::Literal => rational::from_big(&b[n - 2]),
                };
                let q = &reference / &beta;
                if q >= ratio(1, 5) {
                    out.push(StepViolation {
                        index: n,
                        message: format!("odd-step ratio {} is not < 1/5", rational::to_pq(&q)),
                    });
                }
            }
        }
        out
    }
}

fn even_step_holds(alpha: &Rational, beta: &Rational) -> bool {
    (beta - alpha - even_slack()) / beta > ratio(3, 4)
}

/// Corrected-rule odd-step check for an arbitrary pair, used by callers that
/// want to compare both rules on one sequence.
pub fn corrected_odd_step_holds(prev_beta: &BigInt, beta: &BigInt) -> bool {
    rational::from_big(prev_beta) / rational::from_big(beta) < ratio(1, 5)
}
