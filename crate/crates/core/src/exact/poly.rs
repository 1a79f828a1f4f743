//! Dense univariate polynomials over [`Rational`].
//!
//! The variable symbol is not stored. Callers know whether a given `Poly` is
//! in the oscillator variable, the Gegenbauer variable or the auxiliary `u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial has a nonzero x^{power} coefficient but was declared parity {parity}")]
    ParityViolation { power: usize, parity: usize },
    #[error("scaling constant must be positive, got {0}")]
    NonPositiveScale(Rational),
    #[error("polynomial degree {degree} exceeds the declared order {order}")]
    DegreeExceedsOrder { degree: usize, order: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Coefficients in ascending powers, trailing zeros trimmed. The zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
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

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn differentiate(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * rational::int(k as i64))
                .collect(),
        )
    }

    /// Exact Horner evaluation.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    /// Floating-point Horner evaluation, used by the numeric engine.
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + rational::to_f64(a))
    }

    /// True when every nonzero coefficient sits at a power `k ≡ parity (mod 2)`.
    pub fn has_parity(&self, parity: usize) -> bool {
        self.check_parity(parity).is_ok()
    }

    pub fn check_parity(&self, parity: usize) -> Result<(), PolyError> {
        match self
            .coeffs
            .iter()
            .enumerate()
            .find(|(k, a)| (k + parity) % 2 == 1 && !a.is_zero())
        {
            Some((power, _)) => Err(PolyError::ParityViolation { power, parity }),
            None => Ok(()),
        }
    }

    /// Exact value of `(√c)^parity · p(√c·x)`.
    ///
    /// Each term `a_k x^k` becomes `a_k c^{(parity+k)/2} x^k`. The exponent is an
    /// integer only because `p` has the declared parity, so that claim is
    /// validated rather than trusted.
    pub fn scaled_compose(&self, c: &Rational, parity: usize) -> Result<Poly, PolyError> {
        if !c.is_positive() {
            return Err(PolyError::NonPositiveScale(c.clone()));
        }
        self.check_parity(parity)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if a.is_zero() {
                    Rational::zero()
                } else {
                    a * rational::pow(c, ((parity + k) / 2) as i32)
                }
            })
            .collect();
        Ok(Poly::new(coeffs))
    }

    /// `p(q(x))`
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, a| {
            &(&acc * inner) + &Poly::constant(a.clone())
        })
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Largest absolute coefficient, as an exact rational.
    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    #[test]
    fn additive_inverse_is_canonical_zero() {
        let p = Poly::from_ints(&[1]) + Poly::from_ints(&[-1]);
        assert!(p.is_zero());
        assert_eq!(p.coeffs().len(), 0);
        assert_eq!(p, Poly::zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn monomial_product() {
        let two_x = Poly::from_ints(&[0, 2]);
        assert_eq!(&two_x * &two_x, Poly::from_ints(&[0, 0, 4]));
    }

    #[test]
    fn scalar_multiple_of_second_member() {
        // 4(1 + 1/(2N))x^2 - 2 at N = 1, halved.
        let n = int(1);
        let lead = int(4) * (int(1) + (int(2) * &n).recip());
        let p = Poly::new(vec![int(-2), int(0), lead]);
        assert_eq!(p.scale(&ratio(1, 2)), Poly::from_ints(&[-1, 0, 3]));
        assert!(p.scale(&int(0)).is_zero());
    }

    #[test]
    fn degree_of_product_is_sum() {
        let a = Poly::from_ints(&[1, 2, 3]);
        let b = Poly::from_ints(&[0, 0, 0, 5]);
        assert_eq!((&a * &b).degree(), Some(5));
        assert!((&a * &Poly::zero()).is_zero());
    }

    #[test]
    fn differentiate_power_rule() {
        assert!(Poly::from_ints(&[1]).differentiate().is_zero());
        assert_eq!(
            Poly::from_ints(&[0, 2]).differentiate(),
            Poly::from_ints(&[2])
        );
        assert_eq!(
            Poly::from_ints(&[-2, 0, 6]).differentiate(),
            Poly::from_ints(&[0, 12])
        );
        assert!(Poly::zero().differentiate().is_zero());
    }

    #[test]
    fn horner_evaluation() {
        assert_eq!(Poly::from_ints(&[0, 2]).evaluate(&int(3)), int(6));
        let p = Poly::from_ints(&[-2, 0, 6]);
        assert_eq!(p.evaluate(&int(0)), int(-2));
        assert_eq!(p.evaluate(&ratio(1, 3)), ratio(-4, 3));
        assert!((p.evaluate_f64(0.5) - -0.5).abs() < 1e-15);
    }

    #[test]
    fn scaled_compose_examples() {
        assert_eq!(
            Poly::from_ints(&[0, 2]).scaled_compose(&int(4), 1).unwrap(),
            Poly::from_ints(&[0, 8])
        );
        assert_eq!(
            Poly::from_ints(&[0, 0, 1])
                .scaled_compose(&int(9), 2)
                .unwrap(),
            Poly::from_ints(&[0, 0, 81])
        );
        assert_eq!(
            Poly::from_ints(&[-2, 0, 6])
                .scaled_compose(&ratio(1, 2), 2)
                .unwrap(),
            Poly::new(vec![int(-1), int(0), ratio(3, 2)])
        );
    }

    #[test]
    fn scaled_compose_rejects_bad_input() {
        let mixed = Poly::from_ints(&[1, 1]);
        assert_eq!(
            mixed.scaled_compose(&int(2), 0),
            Err(PolyError::ParityViolation {
                power: 1,
                parity: 0
            })
        );
        assert_eq!(
            Poly::from_ints(&[0, 2]).scaled_compose(&int(0), 1),
            Err(PolyError::NonPositiveScale(int(0)))
        );
        assert!(Poly::from_ints(&[0, 2])
            .scaled_compose(&int(-1), 1)
            .is_err());
    }

    #[test]
    fn div_rem_and_gcd() {
        // (x - 1)(x + 2) = x^2 + x - 2
        let p = Poly::from_ints(&[-2, 1, 1]);
        let (q, r) = p.div_rem(&Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(q, Poly::from_ints(&[2, 1]));
        assert!(r.is_zero());
        let (q, r) = p.div_rem(&Poly::from_ints(&[0, 2])).unwrap();
        assert_eq!(q, Poly::new(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(r, Poly::from_ints(&[-2]));
        assert_eq!(p.div_rem(&Poly::zero()), Err(PolyError::DivisionByZero));

        let a = Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[3, 1]);
        let g = a.gcd(&a.differentiate());
        assert_eq!(g, Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn compose_and_pow() {
        let one_plus_x2 = Poly::from_ints(&[1, 0, 1]);
        assert_eq!(one_plus_x2.pow(2), Poly::from_ints(&[1, 0, 2, 0, 1]));
        let p = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(
            p.compose(&Poly::from_ints(&[1, 1])),
            Poly::from_ints(&[1, 2, 1])
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Poly::from_ints(&[-2, 0, 6]).to_string(), "6x^2 - 2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(
            Poly::new(vec![int(0), ratio(-1, 2), int(1)]).to_string(),
            "x^2 - (1/2)x"
        );
    }
}
