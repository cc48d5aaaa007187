//! Exact calculus on scalar piecewise polynomials, plus polynomial vector
//! segments used to materialize Hilbert-valued functions on finite windows.

mod poly;
mod sup;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use poly::Poly;
pub use sup::SupBound;

use crate::error::{EapError, Result};
use crate::hilbert::{BasisIndex, SparseVec};
use crate::rational::{self, Rational};

pub const MAX_DEGREE: usize = 4;

/// Width target for certified suprema: `2^-40`.
pub fn sup_tolerance() -> Rational {
    rational::two_pow_neg(40)
}

/// One polynomial piece on `[a, b]`, written in the global variable `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySegment {
    a: Rational,
    b: Rational,
    poly: Poly,
}

impl PolySegment {
    pub fn new(a: Rational, b: Rational, poly: Poly) -> Result<Self> {
        if a >= b {
            return Err(EapError::domain(format!(
                "segment endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if poly.degree().unwrap_or(0) > MAX_DEGREE {
            return Err(EapError::domain(format!(
                "segment degree {} exceeds {MAX_DEGREE}",
                poly.degree().unwrap()
            )));
        }
        Ok(PolySegment { a, b, poly })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.poly.eval(t)
    }

    pub fn integral(&self) -> Rational {
        self.poly.integrate(&self.a, &self.b)
    }

    /// The same piece moved right by `dx`.
    pub fn translate(&self, dx: &Rational) -> PolySegment {
        PolySegment {
            a: &self.a + dx,
            b: &self.b + dx,
            poly: self.poly.shift(&-dx),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawSegment {
    #[serde(with = "rational::serde_pq")]
    a: Rational,
    #[serde(with = "rational::serde_pq")]
    b: Rational,
    #[serde(with = "rational::serde_pq::vec")]
    coeffs: Vec<Rational>,
}

/// Scalar piecewise polynomial. Regions not covered by a segment are
/// identically zero. Cumulative segment integrals are cached so that
/// [`pp_integral`] is logarithmic in the number of segments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiecewisePoly {
    segments: Vec<PolySegment>,
    prefix: Vec<Rational>,
}

impl PiecewisePoly {
    pub fn zero() -> Self {
        PiecewisePoly::default()
    }

    /// Segments must be sorted with non-overlapping interiors.
    pub fn new(segments: Vec<PolySegment>) -> Result<Self> {
        for w in segments.windows(2) {
            if w[1].a < w[0].b {
                return Err(EapError::domain(format!(
                    "segments overlap or are unsorted at [{}, {}] / [{}, {}]",
                    w[0].a, w[0].b, w[1].a, w[1].b
                )));
            }
        }
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut acc = Rational::zero();
        prefix.push(acc.clone());
        for s in &segments {
            acc += s.integral();
            prefix.push(acc.clone());
        }
        Ok(PiecewisePoly { segments, prefix })
    }

    pub fn segments(&self) -> &[PolySegment] {
        &self.segments
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        match self.locate(t) {
            Some(i) if t <= &self.segments[i].b => self.segments[i].eval(t),
            _ => Rational::zero(),
        }
    }

    /// Index of the last segment with `a <= t`.
    fn locate(&self, t: &Rational) -> Option<usize> {
        let k = self.segments.partition_point(|s| &s.a <= t);
        k.checked_sub(1)
    }

    /// `∫_{-∞}^x`
    fn cumulative(&self, x: &Rational) -> Rational {
        match self.locate(x) {
            None => Rational::zero(),
            Some(i) => {
                let s = &self.segments[i];
                let end = rational::min(x, &s.b);
                &self.prefix[i] + s.poly.integrate(&s.a, &end)
            }
        }
    }

    /// Whether adjacent segments agree at shared endpoints and vanish next to gaps.
    pub fn is_continuous(&self) -> bool {
        let ends_at_zero = |s: &PolySegment, left: bool| {
            let t = if left { &s.a } else { &s.b };
            s.eval(t).is_zero()
        };
        for w in self.segments.windows(2) {
            if w[0].b == w[1].a {
                if w[0].eval(&w[0].b) != w[1].eval(&w[1].a) {
                    return false;
                }
            } else if !ends_at_zero(&w[0], false) || !ends_at_zero(&w[1], true) {
                return false;
            }
        }
        true
    }

    /// Moves every breakpoint right by `dx`.
    pub fn translate(&self, dx: &Rational) -> PiecewisePoly {
        PiecewisePoly::new(self.segments.iter().map(|s| s.translate(dx)).collect())
            .expect("translation preserves ordering")
    }
}

impl Serialize for PiecewisePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<RawSegment> = self
            .segments
            .iter()
            .map(|seg| RawSegment {
                a: seg.a.clone(),
                b: seg.b.clone(),
                coeffs: seg.poly.coeffs().to_vec(),
            })
            .collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewisePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<RawSegment>::deserialize(d)?;
        let segs = raw
            .into_iter()
            .map(|r| PolySegment::new(r.a, r.b, Poly::new(r.coeffs)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PiecewisePoly::new(segs).map_err(D::Error::custom)
    }
}

/// Exact `∫_a^b p(t) dt`; gaps contribute zero.
pub fn pp_integral(p: &PiecewisePoly, a: &Rational, b: &Rational) -> Result<Rational> {
    if a > b {
        return Err(EapError::domain(format!("reversed integration bounds [{a}, {b}]")));
    }
    Ok(p.cumulative(b) - p.cumulative(a))
}

/// Certified enclosure of `sup_{t ∈ [a, b]} p(t)` of width at most `2^-40`.
pub fn pp_sup(p: &PiecewisePoly, a: &Rational, b: &Rational) -> Result<SupBound> {
    if a >= b {
        return Err(EapError::domain(format!("empty sup window [{a}, {b}]")));
    }
    let tol = sup_tolerance() / rational::int(4);
    let mut best: Option<SupBound> = None;
    let mut covered_to = a.clone();
    let mut gap_at: Option<Rational> = None;
    let start = p.locate(a).unwrap_or(0);
    for s in &p.segments[start..] {
        if &s.a >= b {
            break;
        }
        if s.b <= *a {
            continue;
        }
        let lo = rational::max(&s.a, a);
        let hi = rational::min(&s.b, b);
        if lo > covered_to && gap_at.is_none() {
            gap_at = Some(covered_to.clone());
        }
        covered_to = rational::max(&covered_to, &hi);
        let here = sup::sup_on_interval(&s.poly, &lo, &hi, &tol);
        best = Some(match best {
            Some(prev) => prev.join(here),
            None => here,
        });
    }
    if covered_to < *b && gap_at.is_none() {
        gap_at = Some(covered_to);
    }
    if let Some(t) = gap_at {
        let zero = SupBound::exact(Rational::zero(), t);
        best = Some(match best {
            Some(prev) => prev.join(zero),
            None => zero,
        });
    }
    Ok(best.expect("non-empty window yields a candidate"))
}

/// Vector-valued polynomial piece `t ↦ Σ_n c_n(t) e_n` on `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecSegment {
    pub a: Rational,
    pub b: Rational,
    pub components: BTreeMap<BasisIndex, Poly>,
}

impl VecSegment {
    pub fn zero(a: Rational, b: Rational) -> Self {
        VecSegment { a, b, components: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// At most one basis direction is active on the segment.
    pub fn is_monoaxial(&self) -> bool {
        self.components.len() <= 1
    }

    pub fn eval(&self, t: &Rational) -> SparseVec {
        SparseVec::from_pairs(self.components.iter().map(|(n, c)| (n.clone(), c.eval(t))))
    }

    /// `‖v(t)‖²` as a polynomial (valid for any segment).
    pub fn norm_sq_poly(&self) -> Poly {
        self.components.values().fold(Poly::zero(), |acc, c| &acc + &(c * c))
    }

    /// Coefficient polynomial of a monoaxial segment (`None` otherwise).
    pub fn axial_profile(&self) -> Option<Poly> {
        match self.components.len() {
            0 => Some(Poly::zero()),
            1 => self.components.values().next().cloned(),
            _ => None,
        }
    }
}
