//! Finite convex combinations of translates with a certified uniform bound.
//!
//! For times `c_1 < … < c_q` and weights `θ_j`, the combination
//! `g(t) = Σ θ_j f(c_j + t)` is materialized exactly on a unit window and its
//! squared-norm profile is maximized with [`pp_sup`].
//!
//! * Two-sided tent train: shifting `t` by 1 shifts every basis index by 1,
//!   so `‖g‖` is 1-periodic and `[0, 1]` is a complete window.
//! * Other kinds: their coordinates are non-negative and dominated by the
//!   two-sided ones, so the two-sided sup is an upper bound. The lower bound
//!   comes from the kind's own profile on a unit window where every
//!   translate sits on an envelope plateau (or on `[0, 1]` when none fits).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{ramp_width, segment_stream, ConstructionFn, Domain, Kind};
use crate::error::{EapError, Result};
use crate::hilbert::BasisIndex;
use crate::piecewise::{pp_sup, sup_tolerance, PiecewisePoly, Poly, PolySegment, SupBound};
use crate::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakNullCertificate {
    #[serde(with = "rational::serde_pq::vec")]
    pub times: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub weights: Vec<Rational>,
    /// Rational upper bound on `sup_t ‖Σ θ_j f(c_j + t)‖`.
    #[serde(with = "rational::serde_pq")]
    pub bound: Rational,
    #[serde(with = "rational::serde_pq")]
    pub epsilon: Rational,
    pub valid: bool,
    #[serde(with = "rational::serde_pq")]
    pub sup_sq_lower: Rational,
    #[serde(with = "rational::serde_pq")]
    pub sup_sq_upper: Rational,
}

/// Enclosure of `sup_t ‖g(t)‖²` and the verdict `upper ≤ ε²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub sup_sq: SupBound,
    pub valid: bool,
}

fn check_times(times: &[Rational]) -> Result<()> {
    let first = times.first().ok_or_else(|| EapError::precondition("no translate times"))?;
    if first < &Rational::one() {
        return Err(EapError::precondition(format!("first time {first} is below 1")));
    }
    for w in times.windows(2) {
        if &w[1] - &w[0] <= Rational::one() {
            return Err(EapError::precondition(format!(
                "times {} and {} are not more than 1 apart",
                rational::to_pq(&w[0]),
                rational::to_pq(&w[1])
            )));
        }
    }
    Ok(())
}

fn check_weights(times: &[Rational], weights: &[Rational]) -> Result<()> {
    if weights.len() != times.len() {
        return Err(EapError::precondition(format!(
            "{} weights for {} times",
            weights.len(),
            times.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(EapError::precondition(format!("negative weight {w}")));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(EapError::precondition(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

fn check_kind(f: &ConstructionFn) -> Result<()> {
    if f.kind() == Kind::Cutoff {
        return Err(EapError::domain("the scalar cutoff has no weakly null translates"));
    }
    Ok(())
}

/// Exact `‖Σ θ_j f(c_j + t)‖²` for `t ∈ [lo, hi]`.
pub fn combination_profile(
    f: &ConstructionFn,
    times: &[Rational],
    weights: &[Rational],
    lo: &Rational,
    hi: &Rational,
) -> Result<PiecewisePoly> {
    // each translate's pieces, moved back to the t axis
    let mut streams = Vec::with_capacity(times.len());
    let mut cuts = vec![lo.clone(), hi.clone()];
    for (c, w) in times.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        let segs = segment_stream(f, &(c + lo), &(c + hi))?;
        let moved: Vec<_> = segs
            .into_iter()
            .map(|s| {
                let comps: BTreeMap<BasisIndex, Poly> =
                    s.components.iter().map(|(n, p)| (n.clone(), p.shift(c).scale(w))).collect();
                (&s.a - c, &s.b - c, comps)
            })
            .collect();
        cuts.extend(moved.iter().map(|(a, _, _)| a.clone()));
        streams.push(moved);
    }
    cuts.sort();
    cuts.dedup();
    let mut cursor = vec![0usize; streams.len()];
    let mut pieces = Vec::new();
    for win in cuts.windows(2) {
        let (a, b) = (&win[0], &win[1]);
        let mut sum: BTreeMap<BasisIndex, Poly> = BTreeMap::new();
        for (s, k) in streams.iter().zip(cursor.iter_mut()) {
            while &s[*k].1 <= a {
                *k += 1;
            }
            for (n, p) in &s[*k].2 {
                let e = sum.entry(n.clone()).or_insert_with(Poly::zero);
                *e = &*e + p;
            }
        }
        let norm = sum.values().fold(Poly::zero(), |acc, c| &acc + &(c * c));
        if !norm.is_zero() {
            pieces.push(PolySegment::new(a.clone(), b.clone(), norm)?);
        }
    }
    PiecewisePoly::new(pieces)
}

fn sup_of(f: &ConstructionFn, times: &[Rational], weights: &[Rational], lo: &Rational) -> Result<SupBound> {
    let hi = lo + Rational::one();
    pp_sup(&combination_profile(f, times, weights, lo, &hi)?, lo, &hi)
}

/// Start of a unit window on which every translate sits on an envelope plateau.
fn plateau_window(f: &ConstructionFn, times: &[Rational]) -> Option<Rational> {
    let seq = f.schedule()?;
    let (first, last) = (times.first()?, times.last()?);
    let w = ramp_width();
    seq.even_intervals().find_map(|(_, alpha, beta)| {
        let m = rational::from_big(&rational::ceil(&(alpha + &w - first)));
        let m = rational::max(&m, &Rational::zero());
        (last + &m + Rational::one() <= beta - &w && first + &m >= alpha + &w).then_some(m)
    })
}

/// Certified enclosure of `sup_t ‖Σ θ_j f(c_j + t)‖²` over the domain.
pub fn sup_sq_enclosure(f: &ConstructionFn, times: &[Rational], weights: &[Rational]) -> Result<SupBound> {
    check_kind(f)?;
    check_times(times)?;
    check_weights(times, weights)?;
    let zero = Rational::zero();
    let periodic = ConstructionFn::two_sided(Domain::HalfLine);
    let upper_part = sup_of(&periodic, times, weights, &zero)?;
    let lower_part = match f.kind() {
        Kind::TwoSided => return Ok(upper_part),
        Kind::Tent => sup_of(f, times, weights, &zero)?,
        _ => {
            let start = plateau_window(f, times).unwrap_or_else(Rational::zero);
            sup_of(f, times, weights, &start)?
        }
    };
    Ok(SupBound {
        lower: lower_part.lower,
        upper: upper_part.upper,
        location: lower_part.location,
    })
}

pub fn verify_certificate(f: &ConstructionFn, cert: &WeakNullCertificate) -> Result<Verification> {
    if !cert.epsilon.is_positive() {
        return Err(EapError::precondition(format!("epsilon {} is not positive", cert.epsilon)));
    }
    let sup_sq = sup_sq_enclosure(f, &cert.times, &cert.weights)?;
    let valid = sup_sq.upper <= &cert.epsilon * &cert.epsilon;
    Ok(Verification { sup_sq, valid })
}

/// Equal-weight certificate on the given times.
///
/// Requires `1/q < ε²`, the count at which equal weights can reach `ε`.
pub fn make_certificate(f: &ConstructionFn, times: &[Rational], epsilon: &Rational) -> Result<WeakNullCertificate> {
    if !epsilon.is_positive() {
        return Err(EapError::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    check_times(times)?;
    let q = times.len() as i64;
    if ratio(1, q) >= epsilon * epsilon {
        return Err(EapError::precondition(format!(
            "q = {q} is too small for epsilon {epsilon}: need 1/q < ε²"
        )));
    }
    let weights = vec![ratio(1, q); times.len()];
    let sup_sq = sup_sq_enclosure(f, times, &weights)?;
    Ok(build(times.to_vec(), weights, epsilon.clone(), sup_sq))
}

fn build(times: Vec<Rational>, weights: Vec<Rational>, epsilon: Rational, sup_sq: SupBound) -> WeakNullCertificate {
    let valid = sup_sq.upper <= &epsilon * &epsilon;
    WeakNullCertificate {
        times,
        weights,
        bound: rational::sqrt_upper(&sup_sq.upper),
        epsilon,
        valid,
        sup_sq_lower: sup_sq.lower,
        sup_sq_upper: sup_sq.upper,
    }
}

/// Certificate with explicit weights, valid or not.
pub fn certificate_with_weights(
    f: &ConstructionFn,
    times: &[Rational],
    weights: &[Rational],
    epsilon: &Rational,
) -> Result<WeakNullCertificate> {
    if !epsilon.is_positive() {
        return Err(EapError::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let sup_sq = sup_sq_enclosure(f, times, weights)?;
    Ok(build(times.to_vec(), weights.to_vec(), epsilon.clone(), sup_sq))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    /// `shift + n`, `n = 1, 2, …`
    Integers {
        #[serde(with = "rational::serde_pq")]
        shift: Rational,
    },
    /// `start + k·step`, `k = 0, 1, …`
    Arithmetic {
        #[serde(with = "rational::serde_pq")]
        start: Rational,
        #[serde(with = "rational::serde_pq")]
        step: Rational,
    },
    /// Gaps drawn uniformly from `(1, 2]` on a `2^-16` grid, first time in `[1, 2)`.
    Random { seed: u64 },
    Custom {
        #[serde(with = "rational::serde_pq::vec")]
        times: Vec<Rational>,
    },
}

impl Default for Generator {
    fn default() -> Self {
        Generator::Integers { shift: Rational::zero() }
    }
}

impl std::str::FromStr for Generator {
    type Err = EapError;

    /// `integers`, `integers:1/2`, `arithmetic:1,11/10`, `random:7`, `custom:1,5/2,4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| EapError::config("generator", m);
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<Rational>> {
            tail.split(',').map(rational::parse).collect::<Result<_>>().map_err(|e| bad(e.to_string()))
        };
        match head {
            "integers" if tail.is_empty() => Ok(Generator::default()),
            "integers" => Ok(Generator::Integers { shift: rational::parse(tail).map_err(|e| bad(e.to_string()))? }),
            "arithmetic" => match nums()?.as_slice() {
                [start, step] => Ok(Generator::Arithmetic { start: start.clone(), step: step.clone() }),
                _ => Err(bad("arithmetic needs `start,step`".into())),
            },
            "random" => tail
                .parse()
                .map(|seed| Generator::Random { seed })
                .map_err(|_| bad(format!("bad seed `{tail}`"))),
            "custom" => Ok(Generator::Custom { times: nums()? }),
            _ => Err(bad(format!("unknown generator `{s}`"))),
        }
    }
}

impl Generator {
    /// First `q` admissible times: greedily keeps candidates that are `≥ 1`
    /// and more than 1 past the previously kept one.
    pub fn times(&self, q: usize) -> Result<Vec<Rational>> {
        let mut out: Vec<Rational> = Vec::with_capacity(q);
        let keep = |out: &mut Vec<Rational>, c: Rational| {
            if c >= Rational::one() && out.last().map_or(true, |l| &c - l > Rational::one()) {
                out.push(c);
            }
        };
        match self {
            Generator::Integers { shift } => {
                let mut n = 1i64;
                while out.len() < q {
                    keep(&mut out, shift + int(n));
                    n += 1;
                }
            }
            Generator::Arithmetic { start, step } => {
                if !step.is_positive() {
                    return Err(EapError::domain(format!("step must be positive, got {step}")));
                }
                let mut c = start.clone();
                while out.len() < q {
                    keep(&mut out, c.clone());
                    c += step;
                }
            }
            Generator::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let grid = int(1 << 16);
                let mut c = Rational::one() + int(rng.gen_range(0..1 << 16)) / &grid;
                for _ in 0..q {
                    keep(&mut out, c.clone());
                    c += Rational::one() + int(rng.gen_range(1..=1 << 16)) / &grid;
                }
            }
            Generator::Custom { times } => {
                for c in times {
                    if out.len() == q {
                        break;
                    }
                    keep(&mut out, c.clone());
                }
                if out.len() < q {
                    return Err(EapError::domain(format!(
                        "custom times yield only {} admissible translates, {q} requested",
                        out.len()
                    )));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub q: usize,
    #[serde(with = "rational::serde_pq")]
    pub sup_sq_lower: Rational,
    #[serde(with = "rational::serde_pq")]
    pub sup_sq_upper: Rational,
    #[serde(with = "rational::serde_pq")]
    pub inverse_q: Rational,
    pub holds: bool,
}

/// Equal-weight certificates on the first `q` admissible generator times.
pub fn translate_family_probe(f: &ConstructionFn, generator: &Generator, q_list: &[usize]) -> Result<Vec<ProbeRow>> {
    q_list
        .iter()
        .map(|&q| {
            if q == 0 {
                return Err(EapError::domain("q must be at least 1"));
            }
            let times = generator.times(q)?;
            let weights = vec![ratio(1, q as i64); q];
            let s = sup_sq_enclosure(f, &times, &weights)?;
            let inverse_q = ratio(1, q as i64);
            Ok(ProbeRow {
                q,
                holds: s.upper <= inverse_q && s.width() <= sup_tolerance(),
                sup_sq_lower: s.lower,
                sup_sq_upper: s.upper,
                inverse_q,
            })
        })
        .collect()
}
