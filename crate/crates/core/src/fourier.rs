//! Bohr–Fourier coefficients `a(λ; T) = (1/T) ∫_0^T f(t) e^{-iλt} dt`.
//!
//! Each coordinate is a sum of closed-form oscillatory integrals of the
//! polynomial pieces of `f`. Frequencies given as rational multiples of `2π`
//! have their phases reduced exactly, so large `t` costs no accuracy. At
//! `λ = 0` the coefficient is the exact rational `(1/T) ∫ c_n`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::constructions::{segment_stream, ConstructionFn};
use crate::error::{EapError, Result};
use crate::hilbert::BasisIndex;
use crate::means::{window_mean, MeanQuery, Normalization, Quantity};
use crate::piecewise::Poly;
use crate::rational::{self, int, Rational};

/// Coordinates below this modulus are dropped.
const PRUNE: f64 = 8.673617379884035e-19; // 2^-60
/// Per-coordinate rounding allowance in `norm_sq_upper`.
const ROUNDING: f64 = 9.094947017729282e-13; // 2^-40

#[derive(Debug, Clone, PartialEq)]
pub enum Lambda {
    /// `λ = 2π·ν`
    Cycles(Rational),
    /// any other real frequency
    Real(f64),
}

impl Lambda {
    pub fn zero() -> Self {
        Lambda::Cycles(Rational::zero())
    }

    pub fn two_pi(k: i64) -> Self {
        Lambda::Cycles(int(k))
    }

    pub fn value(&self) -> f64 {
        match self {
            Lambda::Cycles(nu) => TAU * rational::to_f64(nu),
            Lambda::Real(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Lambda::Cycles(nu) => nu.is_zero(),
            Lambda::Real(x) => *x == 0.0,
        }
    }

    /// `e^{-iλx}` with the phase reduced exactly when possible.
    fn phase(&self, x: &Rational) -> Complex64 {
        let angle = match self {
            Lambda::Cycles(nu) => {
                let turns = nu * x;
                let frac = &turns - rational::from_big(&rational::floor(&turns));
                TAU * rational::to_f64(&frac)
            }
            Lambda::Real(l) => l * rational::to_f64(x),
        };
        Complex64::from_polar(1.0, -angle)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Cycles(nu) if nu.is_zero() => f.write_str("0"),
            Lambda::Cycles(nu) if nu.is_negative() => write!(f, "-2pi*{}", rational::to_pq(&-nu)),
            Lambda::Cycles(nu) => write!(f, "2pi*{}", rational::to_pq(nu)),
            Lambda::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Lambda {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Lambda {
    type Err = EapError;

    /// `2pi*3/2`, `-2pi*1`, `pi*1/3`, or a plain real such as `0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let signed = |r: Rational| if neg { -r } else { r };
        if let Some(nu) = body.strip_prefix("2pi*") {
            return Ok(Lambda::Cycles(signed(rational::parse(nu)?)));
        }
        if body == "2pi" {
            return Ok(Lambda::Cycles(signed(int(1))));
        }
        if let Some(x) = body.strip_prefix("pi*") {
            return Ok(Lambda::Cycles(signed(rational::parse(x)? / int(2))));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| EapError::Parse(format!("bad frequency `{s}`")))?;
        if x == 0.0 {
            Ok(Lambda::zero())
        } else {
            Ok(Lambda::Real(x))
        }
    }
}

/// `{2πk : |k| ≤ 8}`, zero included.
pub fn default_lambda_grid() -> Vec<Lambda> {
    (-8..=8).map(Lambda::two_pi).collect()
}

/// Parses `default` or a comma-separated list of frequencies.
pub fn parse_lambda_grid(s: &str) -> Result<Vec<Lambda>> {
    if s.trim() == "default" {
        return Ok(default_lambda_grid());
    }
    s.split(',')
        .map(|x| x.parse())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| EapError::config("lambda_grid", e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coordinate {
    pub n: String,
    pub re: f64,
    pub im: f64,
    /// the exact value, present for `λ = 0`
    #[serde(skip_serializing_if = "Option::is_none", with = "rational::serde_pq::option")]
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierCoefficient {
    pub lambda: Lambda,
    #[serde(rename = "T", with = "rational::serde_pq")]
    pub horizon: Rational,
    #[serde(with = "rational::serde_pq")]
    pub offset: Rational,
    #[serde(skip)]
    pub coords: BTreeMap<BasisIndex, Complex64>,
    #[serde(skip)]
    pub exact: Option<BTreeMap<BasisIndex, Rational>>,
    /// `Σ |coord|²` plus the rounding allowance
    pub norm_sq_upper: f64,
    #[serde(rename = "coords")]
    rows: Vec<Coordinate>,
}

impl FourierCoefficient {
    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_upper(&self) -> f64 {
        self.norm_sq_upper.sqrt()
    }

    /// Exact `Σ c_n²` when `λ = 0`.
    pub fn exact_norm_sq(&self) -> Option<Rational> {
        self.exact.as_ref().map(|m| m.values().map(|c| c * c).sum())
    }
}

/// `∫_0^w q(u) e^{-iλu} du`, `q` given by its f64 coefficients.
fn oscillatory(q: &[f64], lambda: f64, w: f64) -> Complex64 {
    if (lambda * w).abs() < 0.5 {
        // Σ_k q_k Σ_m (-iλ)^m w^{k+m+1} / (m! (k+m+1))
        let mut acc = Complex64::zero();
        for (k, &qk) in q.iter().enumerate() {
            if qk == 0.0 {
                continue;
            }
            let mut coef = Complex64::new(w.powi(k as i32 + 1), 0.0);
            let step = Complex64::new(0.0, -lambda * w);
            for m in 0..60 {
                let term = coef / (k + m + 1) as f64;
                acc += qk * term;
                if term.norm() < 1e-22 {
                    break;
                }
                coef = coef * step / (m + 1) as f64;
            }
        }
        return acc;
    }
    // antiderivative e^{-iλu} Σ_k (-1)^k q^{(k)}(u) / (-iλ)^{k+1}
    let z = Complex64::new(0.0, -lambda);
    let primitive = |u: f64| -> Complex64 {
        let mut derivs: Vec<f64> = q.to_vec();
        let mut sum = Complex64::zero();
        let mut zpow = z;
        let mut sign = 1.0;
        while !derivs.is_empty() {
            let v = derivs.iter().rev().fold(0.0, |acc, c| acc * u + c);
            sum += sign * v / zpow;
            derivs = derivs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
            zpow *= z;
            sign = -sign;
        }
        Complex64::from_polar(1.0, -lambda * u) * sum
    };
    primitive(w) - primitive(0.0)
}

/// `(1/T) ∫_s^{s+T} f(t) e^{-iλ(t−s)} dt`.
pub fn fourier_coeff_on(f: &ConstructionFn, lambda: &Lambda, s: &Rational, horizon: &Rational) -> Result<FourierCoefficient> {
    if !horizon.is_positive() {
        return Err(EapError::domain(format!("T must be positive, got {horizon}")));
    }
    let end = s + horizon;
    let segs = segment_stream(f, s, &end)?;
    let inv_t = Rational::from_integer(1.into()) / horizon;
    let mut exact: BTreeMap<BasisIndex, Rational> = BTreeMap::new();
    let mut coords: BTreeMap<BasisIndex, Complex64> = BTreeMap::new();
    let lam = lambda.value();
    for seg in &segs {
        for (n, p) in &seg.components {
            if lambda.is_zero() {
                *exact.entry(n.clone()).or_insert_with(Rational::zero) += p.integrate(&seg.a, &seg.b);
                continue;
            }
            let q: Vec<f64> = p.shift(&seg.a).coeffs().iter().map(rational::to_f64).collect();
            let w = rational::to_f64(&(&seg.b - &seg.a));
            let v = lambda.phase(&(&seg.a - s)) * oscillatory(&q, lam, w);
            *coords.entry(n.clone()).or_insert_with(Complex64::zero) += v;
        }
    }
    let exact = if lambda.is_zero() {
        let m: BTreeMap<_, _> = exact
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (n, v * &inv_t))
            .collect();
        coords = m.iter().map(|(n, v)| (n.clone(), Complex64::new(rational::to_f64(v), 0.0))).collect();
        Some(m)
    } else {
        let scale = rational::to_f64(&inv_t);
        coords = coords
            .into_iter()
            .map(|(n, v)| (n, v * scale))
            .filter(|(_, v)| v.norm() >= PRUNE)
            .collect();
        None
    };
    let norm_sq_upper = coords.values().map(|c| c.norm_sqr()).sum::<f64>() + ROUNDING * coords.len() as f64;
    let rows = coords
        .iter()
        .map(|(n, c)| Coordinate {
            n: n.to_string(),
            re: c.re,
            im: c.im,
            exact: exact.as_ref().map(|m| m[n].clone()),
        })
        .collect();
    Ok(FourierCoefficient {
        lambda: lambda.clone(),
        horizon: horizon.clone(),
        offset: s.clone(),
        coords,
        exact,
        norm_sq_upper,
        rows,
    })
}

/// `(1/T) ∫_0^T f(t) e^{-iλt} dt`.
pub fn fourier_coeff(f: &ConstructionFn, lambda: &Lambda, horizon: &Rational) -> Result<FourierCoefficient> {
    fourier_coeff_on(f, lambda, &Rational::zero(), horizon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub lambda: Lambda,
    #[serde(rename = "T", with = "rational::serde_pq")]
    pub horizon: Rational,
    pub norm_upper: f64,
}

pub fn coeff_decay_series(f: &ConstructionFn, lambda: &Lambda, horizons: &[Rational]) -> Result<Vec<DecayRow>> {
    if horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EapError::domain("horizons must be strictly increasing"));
    }
    horizons
        .iter()
        .map(|t| {
            let a = fourier_coeff(f, lambda, t)?;
            Ok(DecayRow { lambda: lambda.clone(), horizon: t.clone(), norm_upper: a.norm_upper() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalReport {
    #[serde(rename = "T", with = "rational::serde_pq")]
    pub horizon: Rational,
    /// window mean of `‖f‖²` on `[0, T]`
    #[serde(with = "rational::serde_pq")]
    pub energy: Rational,
    /// `Σ_λ ‖a(λ; T)‖²` over the grid
    pub coeff_energy: f64,
    pub defect: f64,
}

pub fn parseval_defect(f: &ConstructionFn, grid: &[Lambda], horizon: &Rational) -> Result<ParsevalReport> {
    let energy = window_mean(&MeanQuery::new(f.clone(), Quantity::NormSq, Normalization::Plus), horizon)?;
    let mut coeff_energy = 0.0;
    for lambda in grid {
        let a = fourier_coeff(f, lambda, horizon)?;
        coeff_energy += match a.exact_norm_sq() {
            Some(e) => rational::to_f64(&e),
            None => a.coords.values().map(|c| c.norm_sqr()).sum(),
        };
    }
    let defect = rational::to_f64(&energy) - coeff_energy;
    Ok(ParsevalReport { horizon: horizon.clone(), energy, coeff_energy, defect })
}

/// Exact `(1/T) ∫ c_n` on `[0, T]` straight from the scalar pieces, for
/// cross-checking the `λ = 0` coordinates.
pub fn mean_coordinates(f: &ConstructionFn, horizon: &Rational) -> Result<BTreeMap<BasisIndex, Rational>> {
    let segs = segment_stream(f, &Rational::zero(), horizon)?;
    let mut out: BTreeMap<BasisIndex, Rational> = BTreeMap::new();
    for s in segs {
        for (n, p) in s.components {
            let prim: Poly = p.antiderivative();
            *out.entry(n).or_insert_with(Rational::zero) += prim.eval(&s.b) - prim.eval(&s.a);
        }
    }
    Ok(out.into_iter().filter(|(_, v)| !v.is_zero()).map(|(n, v)| (n, v / horizon)).collect())
}
