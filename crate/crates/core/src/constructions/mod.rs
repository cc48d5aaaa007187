//! The tent-train functions and their cutoff envelope.
//!
//! * [`Kind::Tent`]: `h(n) = e_n` for `n ≥ 1`, linear on `[n-1/2, n]` and
//!   `[n, n+1/2]`, zero at half-integers and on `(-∞, 1/2]`.
//! * [`Kind::Cutoff`]: the scalar envelope `φ`, zero on `(-∞, 0]` and on odd
//!   intervals, `1` on `[α_{2k} + 1/10, β_{2k} - 1/10]`, linear ramps between.
//!   Reported as `φ(t)·e_0`.
//! * [`Kind::CutTent`]: `f = φ·h`.
//! * [`Kind::TwoSided`]: `f(n) = e_n` for every `n ∈ ℤ`, same linear pieces.
//!
//! Beyond `β_K` of a finite schedule the envelope is taken to be zero.
//! Every value is a non-negative multiple of a single basis vector.

mod schedule;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use schedule::{corrected_odd_step_holds, IntervalSequence, Rule, StepViolation};

use crate::error::{EapError, Result};
use crate::hilbert::{BasisIndex, SparseVec};
use crate::piecewise::{PiecewisePoly, PolySegment, Poly, VecSegment};
use crate::rational::{self, int, ratio, Rational};

/// Largest window that may be materialized segment by segment.
pub const MAX_WINDOW: i64 = 100_000;

/// Width of each envelope ramp.
pub fn ramp_width() -> Rational {
    ratio(1, 10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Tent,
    Cutoff,
    CutTent,
    TwoSided,
}

impl Kind {
    pub fn needs_schedule(self) -> bool {
        matches!(self, Kind::Cutoff | Kind::CutTent)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Tent => "tent",
            Kind::Cutoff => "cutoff",
            Kind::CutTent => "cut-tent",
            Kind::TwoSided => "two-sided",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tent" => Ok(Kind::Tent),
            "cutoff" => Ok(Kind::Cutoff),
            "cut-tent" => Ok(Kind::CutTent),
            "two-sided" => Ok(Kind::TwoSided),
            other => Err(EapError::config(
                "kind",
                format!("expected tent|cutoff|cut-tent|two-sided, got `{other}`"),
            )),
        }
    }
}

/// Time domain `J`: the half line `[0, ∞)` or the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Domain {
    #[default]
    #[serde(rename = "half-line")]
    HalfLine,
    #[serde(rename = "line")]
    Line,
}

impl Domain {
    pub fn contains(self, t: &Rational) -> bool {
        match self {
            Domain::HalfLine => !t.is_negative(),
            Domain::Line => true,
        }
    }
}

impl FromStr for Domain {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-line" | "R+" => Ok(Domain::HalfLine),
            "line" | "R" => Ok(Domain::Line),
            other => Err(EapError::config("domain", format!("unknown domain `{other}`"))),
        }
    }
}

/// One of the four functions, with its schedule when it has an envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionFn {
    kind: Kind,
    schedule: Option<Arc<IntervalSequence>>,
    domain: Domain,
}

impl ConstructionFn {
    pub fn new(kind: Kind, schedule: Option<Arc<IntervalSequence>>, domain: Domain) -> Result<Self> {
        if kind.needs_schedule() && schedule.is_none() {
            return Err(EapError::precondition(format!("{kind} requires an interval schedule")));
        }
        let schedule = if kind.needs_schedule() { schedule } else { None };
        Ok(ConstructionFn { kind, schedule, domain })
    }

    pub fn tent(domain: Domain) -> Self {
        ConstructionFn { kind: Kind::Tent, schedule: None, domain }
    }

    pub fn cutoff(schedule: Arc<IntervalSequence>, domain: Domain) -> Self {
        ConstructionFn { kind: Kind::Cutoff, schedule: Some(schedule), domain }
    }

    pub fn cut_tent(schedule: Arc<IntervalSequence>, domain: Domain) -> Self {
        ConstructionFn { kind: Kind::CutTent, schedule: Some(schedule), domain }
    }

    pub fn two_sided(domain: Domain) -> Self {
        ConstructionFn { kind: Kind::TwoSided, schedule: None, domain }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn schedule(&self) -> Option<&IntervalSequence> {
        self.schedule.as_deref()
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        ConstructionFn { domain, ..self.clone() }
    }

    /// Exact value `f(t)`; at most one non-zero coordinate.
    pub fn eval(&self, t: &Rational) -> SparseVec {
        match self.kind {
            Kind::TwoSided => tent_value(t),
            Kind::Tent => {
                if t <= &ratio(1, 2) {
                    SparseVec::zero()
                } else {
                    tent_value(t)
                }
            }
            Kind::Cutoff => SparseVec::scaled_basis(0, self.envelope(t)),
            Kind::CutTent => {
                let phi = self.envelope(t);
                if phi.is_zero() || t <= &ratio(1, 2) {
                    return SparseVec::zero();
                }
                tent_value(t).scale(&phi)
            }
        }
    }

    /// `φ(t)`; zero for kinds without an envelope.
    pub fn envelope(&self, t: &Rational) -> Rational {
        let Some(seq) = self.schedule() else {
            return Rational::zero();
        };
        match seq.interval_of(t) {
            Some(n) if n % 2 == 0 => {
                let alpha = rational::from_big(seq.alpha(n));
                let beta = rational::from_big(seq.beta(n));
                let w = ramp_width();
                let ten = int(10);
                if t < &(&alpha + &w) {
                    (t - &alpha) * ten
                } else if t > &(&beta - &w) {
                    (&beta - t) * ten
                } else {
                    Rational::one()
                }
            }
            _ => Rational::zero(),
        }
    }

    /// Where the function may be non-zero inside `[a, b]`, as sorted disjoint ranges.
    fn active_ranges(&self, a: &Rational, b: &Rational) -> Vec<(Rational, Rational)> {
        let clip = |lo: &Rational, hi: &Rational| -> Option<(Rational, Rational)> {
            let lo = rational::max(lo, a);
            let hi = rational::min(hi, b);
            (lo < hi).then_some((lo, hi))
        };
        match self.kind {
            Kind::TwoSided => vec![(a.clone(), b.clone())],
            Kind::Tent => clip(&ratio(1, 2), &rational::max(b, &ratio(1, 2)))
                .into_iter()
                .collect(),
            Kind::Cutoff | Kind::CutTent => {
                let seq = self.schedule().expect("schedule present");
                seq.even_intervals()
                    .filter_map(|(_, alpha, beta)| clip(alpha, beta))
                    .collect()
            }
        }
    }

    /// Breakpoints of the polynomial pieces inside an active range.
    fn breakpoints_in(&self, lo: &Rational, hi: &Rational, out: &mut Vec<Rational>) {
        if matches!(self.kind, Kind::Tent | Kind::TwoSided | Kind::CutTent) {
            // multiples of 1/2 strictly inside (lo, hi)
            let two = int(2);
            let first: BigInt = rational::floor(&(lo * &two)) + 1;
            let last: BigInt = rational::ceil(&(hi * &two)) - 1;
            let mut k = first;
            while k <= last {
                out.push(Rational::new(k.clone(), BigInt::from(2)));
                k += 1;
            }
        }
        if matches!(self.kind, Kind::Cutoff | Kind::CutTent) {
            let seq = self.schedule().expect("schedule present");
            let w = ramp_width();
            for (_, alpha, beta) in seq.even_intervals() {
                for x in [alpha + &w, beta - &w] {
                    if &x > lo && &x < hi {
                        out.push(x);
                    }
                }
            }
        }
    }

    /// Component polynomials on the piece containing `mid` (no breakpoint inside).
    fn piece_at(&self, mid: &Rational) -> BTreeMap<BasisIndex, Poly> {
        let mut out = BTreeMap::new();
        let tent = || {
            let n = rational::round_nearest(mid);
            let nn = rational::from_big(&n);
            let p = if mid < &nn {
                Poly::linear(int(1) - int(2) * &nn, int(2))
            } else {
                Poly::linear(int(1) + int(2) * &nn, int(-2))
            };
            (BasisIndex(n), p)
        };
        let envelope = || -> Poly {
            let seq = self.schedule().expect("schedule present");
            match seq.interval_of(mid) {
                Some(n) if n % 2 == 0 => {
                    let alpha = rational::from_big(seq.alpha(n));
                    let beta = rational::from_big(seq.beta(n));
                    let w = ramp_width();
                    if mid < &(&alpha + &w) {
                        Poly::linear(-&alpha * int(10), int(10))
                    } else if mid > &(&beta - &w) {
                        Poly::linear(&beta * int(10), int(-10))
                    } else {
                        Poly::constant(Rational::one())
                    }
                }
                _ => Poly::zero(),
            }
        };
        match self.kind {
            Kind::TwoSided => {
                let (n, p) = tent();
                out.insert(n, p);
            }
            Kind::Tent => {
                if mid > &ratio(1, 2) {
                    let (n, p) = tent();
                    out.insert(n, p);
                }
            }
            Kind::Cutoff => {
                let e = envelope();
                if !e.is_zero() {
                    out.insert(BasisIndex::from(0), e);
                }
            }
            Kind::CutTent => {
                let e = envelope();
                if !e.is_zero() && mid > &ratio(1, 2) {
                    let (n, p) = tent();
                    out.insert(n, &e * &p);
                }
            }
        }
        out
    }
}

/// Two-sided tent train value at `t`.
fn tent_value(t: &Rational) -> SparseVec {
    let n = rational::round_nearest(t);
    let r = Rational::one() - int(2) * (t - rational::from_big(&n)).abs();
    SparseVec::scaled_basis(BasisIndex(n), r)
}

fn check_window(a: &Rational, b: &Rational) -> Result<()> {
    if a >= b {
        return Err(EapError::domain(format!("empty window [{a}, {b}]")));
    }
    if b - a > int(MAX_WINDOW) {
        return Err(EapError::Resource(format!(
            "window of width {} exceeds {MAX_WINDOW}; use the closed-form mean path instead",
            rational::to_decimal(&(b - a), 6)
        )));
    }
    Ok(())
}

/// Contiguous polynomial pieces exactly reproducing `f` on `[a, b]`.
/// Adjacent zero pieces are merged.
pub fn segment_stream(f: &ConstructionFn, a: &Rational, b: &Rational) -> Result<Vec<VecSegment>> {
    check_window(a, b)?;
    let mut cuts = vec![a.clone(), b.clone()];
    for (lo, hi) in f.active_ranges(a, b) {
        cuts.push(lo.clone());
        cuts.push(hi.clone());
        f.breakpoints_in(&lo, &hi, &mut cuts);
    }
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<VecSegment> = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let components = f.piece_at(&mid);
        if components.is_empty() {
            if let Some(last) = out.last_mut() {
                if last.is_zero() {
                    last.b = w[1].clone();
                    continue;
                }
            }
        }
        out.push(VecSegment { a: w[0].clone(), b: w[1].clone(), components });
    }
    Ok(out)
}

/// Exact profile of `‖f(t)‖^power` on `[a, b]`; zero stretches are left as gaps.
pub fn norm_profile(f: &ConstructionFn, power: u32, a: &Rational, b: &Rational) -> Result<PiecewisePoly> {
    if !(1..=2).contains(&power) {
        return Err(EapError::domain(format!("norm power must be 1 or 2, got {power}")));
    }
    let segs = segment_stream(f, a, b)?;
    let mut out = Vec::with_capacity(segs.len());
    for s in segs {
        if s.is_zero() {
            continue;
        }
        let poly = if power == 2 {
            s.norm_sq_poly()
        } else {
            // coefficients are non-negative, so the axial profile is the norm
            s.axial_profile().ok_or_else(|| {
                EapError::precondition("norm of a non-monoaxial segment is not polynomial")
            })?
        };
        out.push(PolySegment::new(s.a, s.b, poly)?);
    }
    PiecewisePoly::new(out)
}

/// Pairwise squared distances `‖f(m) − f(n)‖²` over integer sample points.
pub fn range_compactness_probe(f: &ConstructionFn, indices: &[BigInt]) -> Result<Vec<Vec<Rational>>> {
    let points: Vec<Rational> = indices.iter().map(rational::from_big).collect();
    if let Some(bad) = points.iter().find(|t| !f.domain().contains(t)) {
        return Err(EapError::domain(format!("index {bad} outside the domain")));
    }
    let values: Vec<SparseVec> = points.iter().map(|t| f.eval(t)).collect();
    let minus = -Rational::one();
    let one = Rational::one();
    Ok(values
        .iter()
        .map(|u| {
            values
                .iter()
                .map(|v| crate::hilbert::sv_combine([(&one, u), (&minus, v)]).norm_sq())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::pp_integral;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};

    fn seq5() -> Arc<IntervalSequence> {
        Arc::new(IntervalSequence::build(5, Rule::Corrected).unwrap())
    }

    #[test]
    fn pointwise_examples() {
        let h = ConstructionFn::tent(Domain::HalfLine);
        assert_eq!(h.eval(&int(3)), SparseVec::basis(3));
        assert!(h.eval(&ratio(5, 2)).is_zero());
        assert!(h.eval(&ratio(1, 4)).is_zero());
        let phi = ConstructionFn::cutoff(seq5(), Domain::HalfLine);
        assert_eq!(phi.eval(&ratio(21, 20)), SparseVec::scaled_basis(0, ratio(1, 2)));
        let g = ConstructionFn::two_sided(Domain::Line);
        assert_eq!(g.eval(&int(-2)), SparseVec::basis(-2));
    }

    #[test]
    fn segment_counts() {
        let g = ConstructionFn::two_sided(Domain::Line);
        assert_eq!(segment_stream(&g, &int(0), &int(2)).unwrap().len(), 4);
        let h = ConstructionFn::tent(Domain::Line);
        let s = segment_stream(&h, &int(-1), &int(0)).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].is_zero());
        let f = ConstructionFn::cut_tent(seq5(), Domain::HalfLine);
        let s = segment_stream(&f, &int(0), &int(1)).unwrap();
        assert!(s.iter().all(VecSegment::is_zero));
    }

    #[test]
    fn oversize_window_is_a_resource_error() {
        let g = ConstructionFn::two_sided(Domain::Line);
        let err = segment_stream(&g, &int(0), &int(100_001)).unwrap_err();
        assert!(matches!(err, EapError::Resource(_)));
        assert!(err.to_string().contains("closed-form"));
    }

    #[test]
    fn profiles() {
        let g = ConstructionFn::two_sided(Domain::Line);
        let p = norm_profile(&g, 1, &int(0), &int(1)).unwrap();
        assert_eq!(p.eval(&int(0)), int(1));
        assert_eq!(p.eval(&ratio(1, 2)), int(0));
        assert_eq!(p.eval(&int(1)), int(1));
        assert!(p.is_continuous());
        let h = ConstructionFn::tent(Domain::HalfLine);
        let sq = norm_profile(&h, 2, &ratio(13, 2), &ratio(15, 2)).unwrap();
        assert_eq!(pp_integral(&sq, &ratio(13, 2), &ratio(15, 2)).unwrap(), ratio(1, 3));
        let f = ConstructionFn::cut_tent(seq5(), Domain::HalfLine);
        assert!(norm_profile(&f, 1, &int(0), &int(1)).unwrap().segments().is_empty());
        let whole = norm_profile(&f, 2, &int(0), &int(1400)).unwrap();
        assert!(whole.is_continuous());
        assert!(whole.segments().iter().all(|s| s.poly().degree().unwrap_or(0) <= 4));
    }

    #[test]
    fn two_sided_profile_has_period_one() {
        let g = ConstructionFn::two_sided(Domain::Line);
        for a in [ratio(0, 1), ratio(1, 3), ratio(-7, 4)] {
            let here = norm_profile(&g, 1, &a, &(&a + int(1))).unwrap();
            let next = norm_profile(&g, 1, &(&a + int(1)), &(&a + int(2))).unwrap();
            assert_eq!(here.translate(&int(1)), next);
        }
    }

    #[test]
    fn range_probe() {
        let g = ConstructionFn::two_sided(Domain::Line);
        let idx: Vec<BigInt> = [0, 1, 2].into_iter().map(BigInt::from).collect();
        let m = range_compactness_probe(&g, &idx).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                assert_eq!(*d, if i == j { int(0) } else { int(2) });
            }
        }
        assert_eq!(range_compactness_probe(&g, &[BigInt::from(5)]).unwrap(), vec![vec![int(0)]]);
        let f = ConstructionFn::cut_tent(seq5(), Domain::HalfLine);
        let m = range_compactness_probe(&f, &[BigInt::from(100), BigInt::from(101)]).unwrap();
        assert_eq!(m[0][1], int(2));
        let h = ConstructionFn::tent(Domain::HalfLine);
        assert!(range_compactness_probe(&h, &[BigInt::from(-1)]).is_err());
    }

    fn random_t(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
        ratio(rng.gen_range(lo * 240..hi * 240), 240)
    }

    #[test]
    fn stream_matches_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let seq = seq5();
        let fns = [
            ConstructionFn::tent(Domain::Line),
            ConstructionFn::cutoff(seq.clone(), Domain::HalfLine),
            ConstructionFn::cut_tent(seq, Domain::HalfLine),
            ConstructionFn::two_sided(Domain::Line),
        ];
        for f in &fns {
            let (a, b) = (int(-3), int(1400));
            let segs = segment_stream(f, &a, &b).unwrap();
            for w in segs.windows(2) {
                assert_eq!(w[0].b, w[1].a, "contiguous");
            }
            assert_eq!(segs[0].a, a);
            assert_eq!(segs.last().unwrap().b, b);
            for _ in 0..1000 {
                let t = random_t(&mut rng, -3, 1400);
                let k = segs.partition_point(|s| s.a <= t) - 1;
                assert_eq!(segs[k].eval(&t), f.eval(&t), "{} at {t}", f.kind());
                assert!(segs[k].is_monoaxial());
            }
        }
    }

    #[test]
    fn factorisation_and_bounds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let seq = seq5();
        let f = ConstructionFn::cut_tent(seq.clone(), Domain::HalfLine);
        let phi = ConstructionFn::cutoff(seq, Domain::HalfLine);
        let h = ConstructionFn::tent(Domain::HalfLine);
        let g = ConstructionFn::two_sided(Domain::Line);
        for _ in 0..1000 {
            let t = random_t(&mut rng, -5, 1500);
            let want = h.eval(&t).scale(&phi.envelope(&t));
            assert_eq!(f.eval(&t), want);
            for v in [f.eval(&t), phi.eval(&t), h.eval(&t), g.eval(&t)] {
                assert!(v.support_len() <= 1);
                assert!(v.norm_sq() <= int(1));
                assert!(v.entries().values().all(|c| !c.is_negative()));
            }
        }
    }

    #[test]
    fn uniform_continuity_modulus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = ConstructionFn::two_sided(Domain::Line);
        let h = ConstructionFn::tent(Domain::Line);
        for _ in 0..1000 {
            let t = random_t(&mut rng, -50, 50);
            let s = &t + ratio(rng.gen_range(-120..=120), 240);
            for f in [&g, &h] {
                let one = Rational::one();
                let minus = -Rational::one();
                let d = crate::hilbert::sv_combine([(&one, &f.eval(&t)), (&minus, &f.eval(&s))]);
                let bound = int(4) * (&t - &s).abs();
                assert!(d.norm_sq() <= &bound * &bound);
            }
        }
    }
}
