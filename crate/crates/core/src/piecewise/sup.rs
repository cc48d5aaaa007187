//! Certified maxima of polynomials on closed intervals.
//!
//! Degree ≤ 2 is exact (endpoints plus the vertex). Higher degrees isolate
//! the critical points with a Sturm sequence of the derivative and bisect each
//! one until a rational enclosure of the maximum is narrow enough.

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use crate::rational::{self, Rational};

/// Rational enclosure `[lower, upper]` of a supremum together with a point
/// where `lower` is attained exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupBound {
    pub lower: Rational,
    pub upper: Rational,
    pub location: Rational,
}

impl SupBound {
    pub fn exact(value: Rational, location: Rational) -> Self {
        SupBound { lower: value.clone(), upper: value, location }
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Merge two enclosures of sups over adjoining sets.
    pub fn join(self, other: SupBound) -> SupBound {
        let (lower, location) = if other.lower > self.lower {
            (other.lower, other.location)
        } else {
            (self.lower, self.location)
        };
        let upper = rational::max(&self.upper, &other.upper);
        SupBound { lower, upper, location }
    }
}

pub(crate) fn sup_on_interval(p: &Poly, a: &Rational, b: &Rational, tol: &Rational) -> SupBound {
    let pa = p.eval(a);
    let pb = p.eval(b);
    let mut best = if pb > pa {
        SupBound::exact(pb, b.clone())
    } else {
        SupBound::exact(pa, a.clone())
    };
    if a >= b {
        return best;
    }
    let mut d = p.derivative();
    match d.degree() {
        None | Some(0) => return best,
        Some(1) => {
            let c = d.coeffs();
            let r = -&c[0] / &c[1];
            if &r > a && &r < b {
                best = best.join(SupBound::exact(p.eval(&r), r));
            }
            return best;
        }
        Some(_) => {}
    }
    // strip exact endpoint roots so Sturm counts on (a, b] are well defined
    for end in [a, b] {
        while d.degree().unwrap_or(0) > 0 && d.eval(end).is_zero() {
            d = deflate(&d, end);
        }
    }
    'restart: loop {
        if d.degree().unwrap_or(0) == 0 {
            return best;
        }
        let chain = sturm_chain(&d);
        let mut stack = vec![(a.clone(), b.clone(), count(&chain, a) - count(&chain, b))];
        while let Some((l, r, n)) = stack.pop() {
            if n == 0 {
                continue;
            }
            if n == 1 {
                match refine(p, &d, &chain, l, r, tol) {
                    Ok(bound) => {
                        best = best.join(bound);
                        continue;
                    }
                    Err(root) => {
                        best = best.join(SupBound::exact(p.eval(&root), root.clone()));
                        d = deflate_all(&d, &root);
                        continue 'restart;
                    }
                }
            }
            let m = (&l + &r) / rational::int(2);
            if d.eval(&m).is_zero() {
                best = best.join(SupBound::exact(p.eval(&m), m.clone()));
                d = deflate_all(&d, &m);
                continue 'restart;
            }
            let vm = count(&chain, &m);
            let vl = count(&chain, &l);
            let vr = count(&chain, &r);
            stack.push((l, m.clone(), vl - vm));
            stack.push((m, r, vm - vr));
        }
        return best;
    }
}

/// Bisects `(l, r]` holding exactly one critical point. `Err(root)` reports
/// a midpoint that is an exact root of the derivative.
fn refine(
    p: &Poly,
    d: &Poly,
    chain: &[Poly],
    mut l: Rational,
    mut r: Rational,
    tol: &Rational,
) -> Result<SupBound, Rational> {
    for _ in 0..400 {
        let pl = p.eval(&l);
        let pr = p.eval(&r);
        let (lower, location) = if pr > pl { (pr, r.clone()) } else { (pl, l.clone()) };
        let upper = upper_bound_on(p, &l, &r);
        if &upper - &lower <= *tol {
            return Ok(SupBound { lower, upper, location });
        }
        let m = (&l + &r) / rational::int(2);
        if d.eval(&m).is_zero() {
            return Err(m);
        }
        if count(chain, &l) - count(chain, &m) == 1 {
            r = m;
        } else {
            l = m;
        }
    }
    unreachable!("bisection failed to converge")
}

/// `p(l + x) <= q_0 + Σ_{k≥1} max(q_k, 0) w^k` for `x ∈ [0, w]`.
fn upper_bound_on(p: &Poly, l: &Rational, r: &Rational) -> Rational {
    let w = r - l;
    let q = p.shift(l);
    let mut acc = Rational::zero();
    let mut wk = Rational::one();
    for (k, c) in q.coeffs().iter().enumerate() {
        if k == 0 {
            acc += c;
        } else if c.is_positive() {
            acc += c * &wk;
        }
        wk *= &w;
    }
    acc
}

fn sturm_chain(d: &Poly) -> Vec<Poly> {
    let mut chain = vec![d.clone(), d.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        if chain[n - 1].degree() == Some(0) {
            break;
        }
        let next = -&chain[n - 2].rem(&chain[n - 1]);
        chain.push(next);
    }
    chain
}

fn count(chain: &[Poly], x: &Rational) -> i64 {
    let mut changes = 0;
    let mut prev: Option<bool> = None;
    for s in chain {
        let v = s.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(pp) = prev {
            if pp != pos {
                changes += 1;
            }
        }
        prev = Some(pos);
    }
    changes
}

/// Quotient of `d / (t - r)`; `r` must be a root.
fn deflate(d: &Poly, r: &Rational) -> Poly {
    let cs = d.coeffs();
    let n = cs.len();
    let mut q = vec![Rational::zero(); n - 1];
    let mut carry = Rational::zero();
    for k in (1..n).rev() {
        carry = &cs[k] + &carry * r;
        q[k - 1] = carry.clone();
    }
    Poly::new(q)
}

fn deflate_all(d: &Poly, r: &Rational) -> Poly {
    let mut d = deflate(d, r);
    while d.degree().unwrap_or(0) > 0 && d.eval(r).is_zero() {
        d = deflate(&d, r);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, two_pow_neg};

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn deflation() {
        // (t-1)(t-2) = t² - 3t + 2
        assert_eq!(deflate(&p(&[2, -3, 1]), &int(1)), p(&[-2, 1]));
    }

    #[test]
    fn quadratic_vertex_is_exact() {
        // 1 - (t - 3)² on [2, 4]
        let q = p(&[-8, 6, -1]);
        let s = sup_on_interval(&q, &int(2), &int(4), &two_pow_neg(40));
        assert!(s.is_exact());
        assert_eq!(s.upper, int(1));
        assert_eq!(s.location, int(3));
    }

    #[test]
    fn quartic_with_irrational_maximiser() {
        // -t⁴ + 2t² + t: derivative -4t³ + 4t + 1 has roots near -0.8, -0.26, 1.11
        let q = p(&[0, 1, 2, 0, -1]);
        let tol = two_pow_neg(40);
        let s = sup_on_interval(&q, &int(0), &int(2), &tol);
        assert!(s.width() <= tol);
        // compare with a dense float scan
        let best = (0..=200_000)
            .map(|i| {
                let t = 2.0 * i as f64 / 200_000.0;
                -t.powi(4) + 2.0 * t * t + t
            })
            .fold(f64::MIN, f64::max);
        let up = rational::to_f64(&s.upper);
        assert!(up >= best - 1e-12 && up - best < 1e-8, "{up} vs {best}");
    }

    #[test]
    fn cubic_double_root_and_exact_midpoint_root() {
        // p' = (t - 1)² (t - 3) => p has a saddle at 1 and a min at 3
        let d = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-3, 1]);
        let q = d.antiderivative();
        let s = sup_on_interval(&q, &int(0), &int(2), &two_pow_neg(40));
        // increasing? p' <= 0 on [0,3] so max is at t = 0
        assert_eq!(s.upper, int(0));
        assert_eq!(s.lower, int(0));
        let s = sup_on_interval(&(-&q), &int(0), &int(4), &two_pow_neg(40));
        assert_eq!(s.location, int(3));
        assert!(s.is_exact());
    }
}
