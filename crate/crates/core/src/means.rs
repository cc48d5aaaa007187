//! Window means of `‖f‖`, `‖f‖²` and `φ`, and the reports built on them.
//!
//! Two independent routes compute the same exact rational:
//!
//! * the streamed route materializes the norm profile on the window and
//!   integrates it piece by piece (only for windows up to
//!   [`STREAM_LIMIT`]);
//! * the closed-form route evaluates an antiderivative built from per-cell
//!   tent masses plus exact ramp corrections, and costs `O(K)` for a
//!   `K`-interval schedule regardless of the horizon.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::{norm_profile, ramp_width, ConstructionFn, Domain, Kind};
use crate::error::{EapError, Result};
use crate::piecewise::{pp_integral, Poly};
use crate::rational::{self, int, ratio, Rational};

/// Largest horizon served by the streamed route in [`window_mean`].
pub const STREAM_LIMIT: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// `‖f(t)‖`
    #[serde(rename = "normF")]
    Norm,
    /// `‖f(t)‖²`
    #[serde(rename = "normF_sq")]
    NormSq,
    /// the envelope `φ(t)`
    #[serde(rename = "phi")]
    Envelope,
}

impl std::str::FromStr for Quantity {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normF" => Ok(Quantity::Norm),
            "normF_sq" => Ok(Quantity::NormSq),
            "phi" => Ok(Quantity::Envelope),
            other => Err(EapError::config(
                "quantity",
                format!("expected normF|normF_sq|phi, got `{other}`"),
            )),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::Norm => "normF",
            Quantity::NormSq => "normF_sq",
            Quantity::Envelope => "phi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `(1/T) ∫_s^{s+T}`
    #[default]
    Plus,
    /// `(1/2T) ∫_{s-T}^{s+T}`
    Sym,
}

impl std::str::FromStr for Normalization {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(Normalization::Plus),
            "sym" => Ok(Normalization::Sym),
            other => Err(EapError::config(
                "normalization",
                format!("expected plus|sym, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeanQuery {
    pub f: ConstructionFn,
    pub quantity: Quantity,
    pub normalization: Normalization,
    /// Window start `s` (plus) or centre (sym).
    pub offset: Rational,
}

impl MeanQuery {
    pub fn new(f: ConstructionFn, quantity: Quantity, normalization: Normalization) -> Self {
        MeanQuery { f, quantity, normalization, offset: Rational::zero() }
    }

    pub fn at_offset(&self, offset: Rational) -> Self {
        MeanQuery { offset, ..self.clone() }
    }

    fn validate(&self, horizon: &Rational) -> Result<()> {
        if !horizon.is_positive() {
            return Err(EapError::domain(format!("horizon must be positive, got {horizon}")));
        }
        if self.quantity == Quantity::Envelope && self.f.schedule().is_none() {
            return Err(EapError::domain(format!("{} has no envelope", self.f.kind())));
        }
        let start = match self.normalization {
            Normalization::Plus => self.offset.clone(),
            Normalization::Sym => {
                if self.f.domain() == Domain::HalfLine {
                    return Err(EapError::domain(
                        "symmetric normalization needs the whole-line domain",
                    ));
                }
                &self.offset - horizon
            }
        };
        if !self.f.domain().contains(&start) {
            return Err(EapError::domain(format!("window start {start} outside the domain")));
        }
        Ok(())
    }

    fn window(&self, horizon: &Rational) -> (Rational, Rational, Rational) {
        match self.normalization {
            Normalization::Plus => (self.offset.clone(), &self.offset + horizon, horizon.clone()),
            Normalization::Sym => {
                (&self.offset - horizon, &self.offset + horizon, horizon * int(2))
            }
        }
    }
}

/// Closed-form description of the integrand `c(t)^p · φ(t)^p`.
struct Integrand {
    power: u32,
    tents: bool,
    envelope: bool,
    /// tent train switched off on `(-∞, 1/2]`
    masked: bool,
}

impl Integrand {
    fn of(f: &ConstructionFn, q: Quantity) -> Integrand {
        let power = if q == Quantity::NormSq { 2 } else { 1 };
        match (f.kind(), q) {
            (_, Quantity::Envelope) => Integrand { power: 1, tents: false, envelope: true, masked: false },
            (Kind::TwoSided, _) => Integrand { power, tents: true, envelope: false, masked: false },
            (Kind::Tent, _) => Integrand { power, tents: true, envelope: false, masked: true },
            (Kind::Cutoff, _) => Integrand { power, tents: false, envelope: true, masked: false },
            (Kind::CutTent, _) => Integrand { power, tents: true, envelope: true, masked: false },
        }
    }

    /// `∫_0^x c^p` for the unmasked carrier.
    fn carrier_primitive(&self, x: &Rational) -> Rational {
        if !self.tents {
            return x.clone();
        }
        let p1 = int(self.power as i64 + 1);
        let cell = Rational::one() / &p1;
        let half_cell = &cell / int(2);
        let n = rational::floor(x);
        let s = x - rational::from_big(&n);
        let partial = if s <= ratio(1, 2) {
            (Rational::one() - pow(&(Rational::one() - int(2) * &s), self.power + 1)) / (int(2) * &p1)
        } else {
            &half_cell + pow(&(int(2) * &s - Rational::one()), self.power + 1) / (int(2) * &p1)
        };
        rational::from_big(&n) * cell + partial
    }

    /// `∫_0^w (1 − φ^p) c^p` measured from an interval end into the ramp.
    fn ramp_correction(&self, w: &Rational) -> Rational {
        let v = Poly::t();
        let one = Poly::constant(Rational::one());
        let ramp = v.scale(&int(10));
        let carrier = if self.tents { &one - &v.scale(&int(2)) } else { one.clone() };
        let mut phi_p = one.clone();
        let mut c_p = one.clone();
        for _ in 0..self.power {
            phi_p = &phi_p * &ramp;
            c_p = &c_p * &carrier;
        }
        (&(&one - &phi_p) * &c_p).integrate(&Rational::zero(), w)
    }

    /// `∫_0^x` of the integrand (signed for `x < 0`).
    fn primitive(&self, f: &ConstructionFn, x: &Rational) -> Rational {
        if !self.envelope {
            if self.masked {
                let half = ratio(1, 2);
                if x <= &half {
                    return Rational::zero();
                }
                return self.carrier_primitive(x) - self.carrier_primitive(&half);
            }
            return self.carrier_primitive(x);
        }
        if !x.is_positive() {
            return Rational::zero();
        }
        let seq = f.schedule().expect("envelope needs a schedule");
        let w = ramp_width();
        let full_ramp = self.ramp_correction(&w);
        let mut acc = Rational::zero();
        for (_, alpha, beta) in seq.even_intervals() {
            if alpha >= x {
                break;
            }
            let end = rational::min(x, beta);
            acc += self.carrier_primitive(&end) - self.carrier_primitive(alpha);
            acc -= self.ramp_correction(&rational::min(&(&end - alpha), &w));
            let right_ramp = beta - &w;
            if end > right_ramp {
                acc -= &full_ramp - self.ramp_correction(&(beta - &end));
            }
            if &end < beta {
                break;
            }
        }
        acc
    }
}

fn pow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// Antiderivative `∫_0^x` of the queried quantity, in closed form.
pub fn prefix_integral(f: &ConstructionFn, quantity: Quantity, x: &Rational) -> Rational {
    Integrand::of(f, quantity).primitive(f, x)
}

/// Exact window mean through the closed-form antiderivative; any horizon.
pub fn window_mean_closed_form(q: &MeanQuery, horizon: &Rational) -> Result<Rational> {
    q.validate(horizon)?;
    let (lo, hi, len) = q.window(horizon);
    let integrand = Integrand::of(&q.f, q.quantity);
    Ok((integrand.primitive(&q.f, &hi) - integrand.primitive(&q.f, &lo)) / len)
}

/// Exact window mean by materializing the profile; windows up to `10^5` wide.
pub fn window_mean_streamed(q: &MeanQuery, horizon: &Rational) -> Result<Rational> {
    q.validate(horizon)?;
    let (lo, hi, len) = q.window(horizon);
    let (f, power) = match q.quantity {
        Quantity::Envelope => (
            ConstructionFn::cutoff(
                std::sync::Arc::new(q.f.schedule().expect("validated").clone()),
                q.f.domain(),
            ),
            1,
        ),
        Quantity::Norm => (q.f.clone(), 1),
        Quantity::NormSq => (q.f.clone(), 2),
    };
    let profile = norm_profile(&f, power, &lo, &hi)?;
    Ok(pp_integral(&profile, &lo, &hi)? / len)
}

/// Streamed route for horizons up to [`STREAM_LIMIT`], closed form beyond.
pub fn window_mean(q: &MeanQuery, horizon: &Rational) -> Result<Rational> {
    if horizon <= &int(STREAM_LIMIT) {
        window_mean_streamed(q, horizon)
    } else {
        window_mean_closed_form(q, horizon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeanRow {
    #[serde(rename = "T", with = "rational::serde_pq")]
    pub horizon: Rational,
    #[serde(with = "rational::serde_pq")]
    pub mean: Rational,
    pub mean_float: String,
}

impl MeanRow {
    pub fn new(horizon: Rational, mean: Rational) -> Self {
        let mean_float = rational::to_decimal(&mean, 15);
        MeanRow { horizon, mean, mean_float }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct WindowMeanSeries {
    pub rows: Vec<MeanRow>,
}

impl WindowMeanSeries {
    pub fn means(&self) -> impl Iterator<Item = &Rational> {
        self.rows.iter().map(|r| &r.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Horizons {
    /// `T = β_{2k}` for `k` in the inclusive range.
    BetaEven { from: usize, to: usize },
    /// `T = β_{2k+1}` for `k` in the inclusive range.
    BetaOdd { from: usize, to: usize },
    Explicit(Vec<Rational>),
}

impl std::str::FromStr for Horizons {
    type Err = EapError;

    /// `beta_even:1..10`, `beta_odd:3` (= `1..3`) or `list:1,5/2,100`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| EapError::config("horizons", m.to_string());
        let (head, tail) = s.split_once(':').ok_or_else(|| bad("expected `kind:args`"))?;
        let range = |tail: &str| -> Result<(usize, usize)> {
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad("bad range bound"));
            match tail.split_once("..") {
                Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
                None => Ok((1, parse(tail)?)),
            }
        };
        match head {
            "beta_even" => range(tail).map(|(from, to)| Horizons::BetaEven { from, to }),
            "beta_odd" => range(tail).map(|(from, to)| Horizons::BetaOdd { from, to }),
            "list" => tail
                .split(',')
                .map(rational::parse)
                .collect::<Result<Vec<_>>>()
                .map(Horizons::Explicit)
                .map_err(|e| bad(&e.to_string())),
            _ => Err(bad("expected beta_even, beta_odd or list")),
        }
    }
}

impl Horizons {
    pub fn resolve(&self, f: &ConstructionFn) -> Result<Vec<Rational>> {
        let from_schedule = |from: usize, to: usize, odd: bool| -> Result<Vec<Rational>> {
            let seq = f
                .schedule()
                .ok_or_else(|| EapError::domain(format!("{} has no interval schedule", f.kind())))?;
            if from == 0 || from > to {
                return Err(EapError::domain(format!("empty or invalid range {from}..{to}")));
            }
            (from..=to)
                .map(|k| {
                    let n = 2 * k + usize::from(odd);
                    if n > seq.len() {
                        Err(EapError::domain(format!(
                            "β_{n} requested but the schedule has only {} intervals",
                            seq.len()
                        )))
                    } else {
                        Ok(rational::from_big(seq.beta(n)))
                    }
                })
                .collect()
        };
        let mut out = match self {
            Horizons::BetaEven { from, to } => from_schedule(*from, *to, false)?,
            Horizons::BetaOdd { from, to } => from_schedule(*from, *to, true)?,
            Horizons::Explicit(v) => v.clone(),
        };
        if out.is_empty() {
            return Err(EapError::domain("no horizons requested"));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Exact means at each horizon, ordered by `T`.
pub fn mean_series(q: &MeanQuery, horizons: &Horizons) -> Result<WindowMeanSeries> {
    let rows = horizons
        .resolve(&q.f)?
        .into_iter()
        .map(|t| window_mean(q, &t).map(|m| MeanRow::new(t, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WindowMeanSeries { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "mean does not exist")]
    MeanDoesNotExist,
    #[serde(rename = "no contradiction found")]
    NoContradictionFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OscillationReport {
    #[serde(with = "rational::serde_pq")]
    pub liminf_bound: Rational,
    #[serde(with = "rational::serde_pq")]
    pub limsup_bound: Rational,
    #[serde(with = "rational::serde_pq")]
    pub gap: Rational,
    pub verdict: Verdict,
}

/// Compares the largest of the low-side means with the smallest of the
/// high-side means. A strictly positive gap shows that two horizon
/// subsequences keep their means apart.
pub fn oscillation_report(low: &WindowMeanSeries, high: &WindowMeanSeries) -> Result<OscillationReport> {
    let liminf_bound = low
        .means()
        .max()
        .cloned()
        .ok_or_else(|| EapError::domain("low series is empty"))?;
    let limsup_bound = high
        .means()
        .min()
        .cloned()
        .ok_or_else(|| EapError::domain("high series is empty"))?;
    let gap = &limsup_bound - &liminf_bound;
    let verdict = if gap.is_positive() {
        Verdict::MeanDoesNotExist
    } else {
        Verdict::NoContradictionFound
    };
    Ok(OscillationReport { liminf_bound, limsup_bound, gap, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformProbe {
    #[serde(rename = "T", with = "rational::serde_pq")]
    pub horizon: Rational,
    #[serde(with = "rational::serde_pq")]
    pub candidate_limit: Rational,
    #[serde(with = "rational::serde_pq")]
    pub sup_deviation: Rational,
    /// largest minus smallest window mean over the offsets
    #[serde(with = "rational::serde_pq")]
    pub spread: Rational,
    pub rows: Vec<MeanRow>,
}

/// Window means over `[s, s+T]` for each offset `s`, against a candidate limit.
///
/// Without a supplied candidate, the limit is the offset-0 mean at the
/// schedule's final right end `β_K` (functions with an envelope) or at `T`
/// itself (pure tent trains, whose means are known at every horizon).
/// `rows` carry the offset in the `T` column.
pub fn uniform_mean_probe(
    q: &MeanQuery,
    horizon: &Rational,
    offsets: &[Rational],
    candidate: Option<Rational>,
) -> Result<UniformProbe> {
    if offsets.is_empty() {
        return Err(EapError::domain("no offsets supplied"));
    }
    let candidate_limit = match candidate {
        Some(c) => c,
        None => {
            let base = q.at_offset(Rational::zero());
            match q.f.schedule() {
                Some(seq) => window_mean(&base, &rational::from_big(seq.horizon()))?,
                None => window_mean(&base, horizon)?,
            }
        }
    };
    let mut rows = Vec::with_capacity(offsets.len());
    for s in offsets {
        let m = window_mean(&q.at_offset(s.clone()), horizon)?;
        rows.push(MeanRow::new(s.clone(), m));
    }
    let sup_deviation = rows
        .iter()
        .map(|r| (&r.mean - &candidate_limit).abs())
        .max()
        .expect("non-empty");
    let hi = rows.iter().map(|r| &r.mean).max().unwrap();
    let lo = rows.iter().map(|r| &r.mean).min().unwrap();
    let spread = hi - lo;
    Ok(UniformProbe { horizon: horizon.clone(), candidate_limit, sup_deviation, spread, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{IntervalSequence, Rule};
    use std::sync::Arc;

    fn seq(k: usize, rule: Rule) -> Arc<IntervalSequence> {
        Arc::new(IntervalSequence::build(k, rule).unwrap())
    }

    fn q(f: ConstructionFn, quantity: Quantity) -> MeanQuery {
        MeanQuery::new(f, quantity, Normalization::Plus)
    }

    #[test]
    fn spot_values() {
        let g = ConstructionFn::two_sided(Domain::HalfLine);
        assert_eq!(window_mean(&q(g.clone(), Quantity::Norm), &int(1)).unwrap(), ratio(1, 2));
        let s5 = seq(5, Rule::Corrected);
        let f = ConstructionFn::cut_tent(s5.clone(), Domain::HalfLine);
        let phi = q(f.clone(), Quantity::Envelope);
        assert_eq!(window_mean(&phi, &int(66)).unwrap(), ratio(119, 660));
        assert_eq!(window_mean(&phi, &int(1)).unwrap(), int(0));
        // (119/10 + 2069/10) / 1366
        assert_eq!(window_mean(&phi, &int(1366)).unwrap(), ratio(2188, 13660));
        let lit = ConstructionFn::cut_tent(seq(3, Rule::Literal), Domain::HalfLine);
        assert_eq!(window_mean(&q(lit, Quantity::Envelope), &int(14)).unwrap(), ratio(119, 140));
    }

    #[test]
    fn bad_queries() {
        let g = ConstructionFn::two_sided(Domain::HalfLine);
        assert!(window_mean(&q(g.clone(), Quantity::Norm), &int(0)).is_err());
        assert!(window_mean(&q(g.clone(), Quantity::Envelope), &int(3)).is_err());
        let sym = MeanQuery::new(g, Quantity::Norm, Normalization::Sym);
        assert!(matches!(window_mean(&sym, &int(3)), Err(EapError::Domain(_))));
    }

    #[test]
    fn closed_form_matches_stream() {
        let s5 = seq(5, Rule::Corrected);
        let fns = [
            ConstructionFn::cut_tent(s5.clone(), Domain::Line),
            ConstructionFn::cutoff(s5, Domain::Line),
            ConstructionFn::tent(Domain::Line),
            ConstructionFn::two_sided(Domain::Line),
        ];
        let horizons = [ratio(1, 3), ratio(7, 10), int(1), ratio(131, 10), ratio(2731, 10), ratio(27295, 20), int(1400)];
        let offsets = [int(0), ratio(-5, 3), ratio(1, 20), int(65), ratio(2729, 10)];
        for f in &fns {
            for quantity in [Quantity::Norm, Quantity::NormSq, Quantity::Envelope] {
                if quantity == Quantity::Envelope && f.schedule().is_none() {
                    continue;
                }
                for norm in [Normalization::Plus, Normalization::Sym] {
                    for s in &offsets {
                        let query = MeanQuery::new(f.clone(), quantity, norm).at_offset(s.clone());
                        for t in &horizons {
                            assert_eq!(
                                window_mean_closed_form(&query, t).unwrap(),
                                window_mean_streamed(&query, t).unwrap(),
                                "{} {quantity} {norm:?} s={s} T={t}",
                                f.kind()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sym_is_half_plus_for_right_supported() {
        let f = ConstructionFn::cut_tent(seq(7, Rule::Corrected), Domain::Line);
        for t in [int(13), int(66), int(273), int(5000), int(7000)] {
            for quantity in [Quantity::Norm, Quantity::NormSq] {
                let plus = window_mean_closed_form(&MeanQuery::new(f.clone(), quantity, Normalization::Plus), &t).unwrap();
                let sym = window_mean_closed_form(&MeanQuery::new(f.clone(), quantity, Normalization::Sym), &t).unwrap();
                assert_eq!(sym, plus / int(2));
            }
        }
    }

    #[test]
    fn domination_chain_and_unit_range() {
        let f = ConstructionFn::cut_tent(seq(9, Rule::Corrected), Domain::HalfLine);
        for k in 1..400 {
            let t = ratio(k * k * 7 + 3, 9);
            let sq = window_mean_closed_form(&q(f.clone(), Quantity::NormSq), &t).unwrap();
            let n = window_mean_closed_form(&q(f.clone(), Quantity::Norm), &t).unwrap();
            let phi = window_mean_closed_form(&q(f.clone(), Quantity::Envelope), &t).unwrap();
            assert!(sq <= n && n <= phi, "T={t}");
            assert!(!sq.is_negative() && phi <= int(1));
        }
    }

    #[test]
    fn series_and_oscillation() {
        let f = ConstructionFn::cut_tent(seq(5, Rule::Corrected), Domain::HalfLine);
        let odd = mean_series(&q(f.clone(), Quantity::Envelope), &Horizons::BetaOdd { from: 1, to: 2 }).unwrap();
        assert_eq!(odd.rows.len(), 2);
        assert_eq!(odd.rows[0].mean, ratio(119, 660));
        assert_eq!(odd.rows[1].mean, ratio(2188, 13660));
        assert!(odd.means().all(|m| m <= &ratio(1, 5)));
        let even = mean_series(&q(f.clone(), Quantity::NormSq), &Horizons::BetaEven { from: 1, to: 2 }).unwrap();
        assert_eq!(even.rows.iter().map(|r| r.horizon.clone()).collect::<Vec<_>>(), vec![int(13), int(273)]);
        assert!(even.means().all(|m| m >= &ratio(1, 4)));
        let low = mean_series(&q(f.clone(), Quantity::NormSq), &Horizons::BetaOdd { from: 1, to: 2 }).unwrap();
        let rep = oscillation_report(&low, &even).unwrap();
        assert!(rep.gap >= ratio(1, 20));
        assert_eq!(rep.verdict, Verdict::MeanDoesNotExist);
        let one = mean_series(&q(f.clone(), Quantity::Envelope), &Horizons::Explicit(vec![int(1)])).unwrap();
        assert_eq!(one.rows, vec![MeanRow::new(int(1), int(0))]);
        assert!(mean_series(&q(f, Quantity::Envelope), &Horizons::BetaOdd { from: 1, to: 3 }).is_err());
    }

    #[test]
    fn flat_series_has_no_gap() {
        let g = ConstructionFn::two_sided(Domain::HalfLine);
        let s = mean_series(&q(g, Quantity::Norm), &Horizons::Explicit(vec![int(1), int(2), int(7)])).unwrap();
        assert!(s.means().all(|m| m == &ratio(1, 2)));
        let rep = oscillation_report(&s, &s).unwrap();
        assert_eq!(rep.gap, int(0));
        assert_eq!(rep.verdict, Verdict::NoContradictionFound);
        let single = WindowMeanSeries { rows: vec![MeanRow::new(int(1), ratio(1, 3))] };
        assert_eq!(oscillation_report(&single, &single).unwrap().gap, int(0));
        assert!(oscillation_report(&WindowMeanSeries::default(), &single).is_err());
    }

    #[test]
    fn uniform_probe() {
        let g = ConstructionFn::two_sided(Domain::HalfLine);
        let offsets = [int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4)];
        for t in [int(10), ratio(21, 2), ratio(77, 3)] {
            let p = uniform_mean_probe(&q(g.clone(), Quantity::Norm), &t, &offsets, Some(ratio(1, 2))).unwrap();
            assert!(p.sup_deviation <= Rational::one() / (int(2) * &t), "T={t}");
        }
        // plateau window of the envelope: constant 1
        let f = ConstructionFn::cut_tent(seq(5, Rule::Corrected), Domain::HalfLine);
        let p = uniform_mean_probe(&q(f, Quantity::Envelope), &int(10), &[int(100), ratio(201, 2)], Some(int(1))).unwrap();
        assert_eq!(p.sup_deviation, int(0));
    }

    #[test]
    fn horizon_parsing() {
        assert_eq!("beta_even:1..10".parse::<Horizons>().unwrap(), Horizons::BetaEven { from: 1, to: 10 });
        assert_eq!("beta_odd:3".parse::<Horizons>().unwrap(), Horizons::BetaOdd { from: 1, to: 3 });
        assert_eq!(
            "list:1,5/2".parse::<Horizons>().unwrap(),
            Horizons::Explicit(vec![int(1), ratio(5, 2)])
        );
        assert!("nope:1".parse::<Horizons>().is_err());
    }
}
