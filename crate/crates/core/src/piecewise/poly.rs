use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{int, Rational};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
/// Trailing zero coefficients are never stored, so the zero polynomial is `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 t`
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Poly::new(vec![c0, c1])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Poly::linear(Rational::zero(), Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn scale(&self, w: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * w).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c / int(k as i64 + 1));
        }
        Poly::new(out)
    }

    /// `∫_a^b p(t) dt`
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// `q(x) = p(x + c)`
    pub fn shift(&self, c: &Rational) -> Poly {
        // Horner in polynomial arithmetic: p(x + c) = (...(a_n (x+c) + a_{n-1})(x+c) ...)
        let base = Poly::linear(c.clone(), Rational::one());
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &base) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Remainder of Euclidean division by a non-zero divisor.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    r[idx] = &r[idx] - &q * d;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn calculus() {
        // ∫_0^1 (1 + 2t + 3t²) = 3
        let q = p(&[1, 2, 3]);
        assert_eq!(q.integrate(&int(0), &int(1)), int(3));
        assert_eq!(q.derivative(), p(&[2, 6]));
    }

    #[test]
    fn remainder() {
        // t³ - 1 = (t - 1)(t² + t + 1); (t³ + 2) mod (t - 1) = 3
        assert_eq!(p(&[2, 0, 0, 1]).rem(&p(&[-1, 1])), p(&[3]));
        assert_eq!(p(&[-1, 0, 0, 1]).rem(&p(&[1, 1, 1])), Poly::zero());
    }

    proptest! {
        #[test]
        fn shift_matches_eval(cs in prop::collection::vec(-9i64..9, 0..6), c in -20i64..20, x in -20i64..20) {
            let q = p(&cs);
            let c = ratio(c, 3);
            let x = ratio(x, 7);
            prop_assert_eq!(q.shift(&c).eval(&x), q.eval(&(&x + &c)));
        }

        #[test]
        fn product_evaluates_pointwise(a in prop::collection::vec(-9i64..9, 0..4), b in prop::collection::vec(-9i64..9, 0..4), x in -20i64..20) {
            let (a, b) = (p(&a), p(&b));
            let x = ratio(x, 5);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
