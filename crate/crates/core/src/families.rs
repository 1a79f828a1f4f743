//! Generators for the three polynomial families.
//!
//! `F_n^N` (ABNS) is produced by its own raising ladder, `C_n^α` (Gegenbauer)
//! by the classical three-term recurrence in the degree and `H_n` (physicists'
//! Hermite) by its three-term recurrence. Nothing here checks that the
//! outputs solve their differential equations; [`crate::identities`] does.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rational::{self, int, Rational};
use crate::exact::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter N must be positive, got {0}")]
    NonPositiveN(Rational),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degree and parameter of an ABNS function `F_n^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbnsParams {
    pub n: usize,
    pub big_n: Rational,
}

impl AbnsParams {
    pub fn new(n: usize, big_n: Rational) -> Result<Self, FamilyError> {
        if !big_n.is_positive() {
            return Err(FamilyError::NonPositiveN(big_n));
        }
        Ok(AbnsParams { n, big_n })
    }

    pub fn generate(&self) -> Poly {
        abns_sequence(self.n, &self.big_n)
            .expect("validated parameters")
            .pop()
            .expect("nonempty sequence")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GegenbauerParams {
    pub n: usize,
    pub alpha: Rational,
}

impl GegenbauerParams {
    pub fn generate(&self) -> Poly {
        gegenbauer(self.n, &self.alpha)
    }
}

/// The raising operator of the degree ladder, `A_n^+ = (1 + ξ²/N) d/dξ − 2(1 + n/N) ξ`,
/// returned as its two coefficient polynomials `(f, g)`.
pub fn abns_raising_coefficients(n: usize, big_n: &Rational) -> (Poly, Poly) {
    let inv = big_n.recip();
    let f = Poly::new(vec![Rational::one(), Rational::zero(), inv.clone()]);
    let g = Poly::monomial(int(-2) * (Rational::one() + int(n as i64) * inv), 1);
    (f, g)
}

fn raise(p: &Poly, n: usize, big_n: &Rational) -> Poly {
    let (f, g) = abns_raising_coefficients(n, big_n);
    &f * &p.differentiate() + &g * p
}

/// `F_0^N, …, F_{n_max}^N`, built with `F_{k+1} = −A_k^+ F_k` from `F_0 = 1`.
pub fn abns_sequence(n_max: usize, big_n: &Rational) -> Result<Vec<Poly>, FamilyError> {
    if !big_n.is_positive() {
        return Err(FamilyError::NonPositiveN(big_n.clone()));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Poly::one());
    for k in 0..n_max {
        let next = -raise(&out[k], k, big_n);
        out.push(next);
    }
    Ok(out)
}

/// The ABNS function `F_n^N(ξ)`.
pub fn abns(n: usize, big_n: &Rational) -> Result<Poly, FamilyError> {
    Ok(abns_sequence(n, big_n)?.pop().expect("nonempty"))
}

/// Members of the rescaled ABNS family obtained from the alternative r-pair
/// `r_n^+ = −(n+1)`, `r_{n+1}^- = (2N+n)/N`. Every member equals `F_n^N / n!`.
pub fn abns_rescaled_sequence(n_max: usize, big_n: &Rational) -> Result<Vec<Poly>, FamilyError> {
    if !big_n.is_positive() {
        return Err(FamilyError::NonPositiveN(big_n.clone()));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Poly::one());
    for k in 0..n_max {
        let r_plus = -int(k as i64 + 1);
        let next = raise(&out[k], k, big_n).scale(&r_plus.recip());
        out.push(next);
    }
    Ok(out)
}

/// `C_0^α, …, C_{n_max}^α` from `n·C_n = 2x(n+α−1)·C_{n−1} − (n+2α−2)·C_{n−2}`.
pub fn gegenbauer_sequence(n_max: usize, alpha: &Rational) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(n_max + 1);
    out.push(Poly::one());
    if n_max == 0 {
        return out;
    }
    out.push(Poly::monomial(int(2) * alpha, 1));
    for n in 2..=n_max {
        let nr = int(n as i64);
        let a = int(2) * (&nr + alpha - int(1));
        let b = &nr + int(2) * alpha - int(2);
        let next = Poly::monomial(a, 1) * &out[n - 1] - out[n - 2].scale(&b);
        out.push(next.scale(&nr.recip()));
    }
    out
}

pub fn gegenbauer(n: usize, alpha: &Rational) -> Poly {
    gegenbauer_sequence(n, alpha).pop().expect("nonempty")
}

/// Physicists' Hermite polynomials `H_0, …, H_{n_max}`.
pub fn hermite_sequence(n_max: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    if n_max == 0 {
        return out;
    }
    out.push(Poly::from_ints(&[0, 2]));
    for n in 1..n_max {
        let next = Poly::from_ints(&[0, 2]) * &out[n] - out[n - 1].scale(&int(2 * n as i64));
        out.push(next);
    }
    out
}

pub fn hermite(n: usize) -> Poly {
    hermite_sequence(n).pop().expect("nonempty")
}

/// `(1+u²)^{n/2} · p(u/√(1+u²))` as an exact polynomial in `u`.
///
/// A term `b_k x^k` contributes `b_k u^k (1+u²)^{(n−k)/2}`; `p` must have parity
/// `n` and degree at most `n` for all of those exponents to be nonnegative
/// integers.
pub fn unball(p: &Poly, n: usize) -> Result<Poly, FamilyError> {
    p.check_parity(n)?;
    if let Some(d) = p.degree() {
        if d > n {
            return Err(PolyError::DegreeExceedsOrder {
                degree: d,
                order: n,
            }
            .into());
        }
    }
    let one_plus_u2 = Poly::from_ints(&[1, 0, 1]);
    let mut out = Poly::zero();
    for (k, b) in p.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let term = Poly::monomial(b.clone(), k) * one_plus_u2.pow(((n - k) / 2) as u32);
        out = out + term;
    }
    Ok(out)
}

/// Leading coefficient of `F_n^N`, which tends to `2^n` as `N → ∞`.
pub fn abns_leading(n: usize, big_n: &Rational) -> Result<Rational, FamilyError> {
    Ok(abns(n, big_n)?
        .leading()
        .cloned()
        .unwrap_or_else(Rational::zero))
}

/// Max-norm distance between the coefficient vectors of `F_n^N` and `H_n`.
pub fn hermite_distance(n: usize, big_n: &Rational) -> Result<Rational, FamilyError> {
    let diff = abns(n, big_n)? - hermite(n);
    Ok(diff.max_abs_coeff())
}

#[doc(hidden)]
pub fn two_pow(n: usize) -> Rational {
    rational::pow(&int(2), n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn alpha_grid() -> Vec<Rational> {
        vec![ratio(1, 2), int(1), int(2), int(5), int(10)]
    }

    #[test]
    fn abns_seeds() {
        for big_n in [int(1), ratio(3, 2), int(137)] {
            assert_eq!(abns(0, &big_n).unwrap(), Poly::one());
            assert_eq!(abns(1, &big_n).unwrap(), Poly::from_ints(&[0, 2]));
        }
    }

    #[test]
    fn abns_second_member() {
        assert_eq!(abns(2, &int(1)).unwrap(), Poly::from_ints(&[-2, 0, 6]));
        // 4(1 + 1/(2N))ξ² − 2 at N = 3/2 gives (16/3)ξ² − 2
        assert_eq!(
            abns(2, &ratio(3, 2)).unwrap(),
            Poly::new(vec![int(-2), int(0), ratio(16, 3)])
        );
    }

    #[test]
    fn abns_rejects_nonpositive_n() {
        assert_eq!(abns(3, &int(0)), Err(FamilyError::NonPositiveN(int(0))));
        assert!(abns(3, &int(-2)).is_err());
        assert!(AbnsParams::new(1, ratio(-1, 2)).is_err());
        assert_eq!(
            AbnsParams::new(2, int(1)).unwrap().generate(),
            Poly::from_ints(&[-2, 0, 6])
        );
    }

    #[test]
    fn abns_parity_and_degree() {
        for big_n in [int(1), ratio(3, 2), int(10)] {
            for (n, p) in abns_sequence(30, &big_n).unwrap().iter().enumerate() {
                assert_eq!(p.degree(), Some(n));
                assert!(p.has_parity(n));
            }
        }
    }

    #[test]
    fn rescaled_family_is_factorial_rescaling() {
        let big_n = int(2);
        let f = abns_sequence(8, &big_n).unwrap();
        let g = abns_rescaled_sequence(8, &big_n).unwrap();
        for n in 0..=8 {
            assert_eq!(g[n], f[n].scale(&rational::factorial(n).recip()));
        }
    }

    #[test]
    fn gegenbauer_low_members() {
        for a in alpha_grid() {
            assert_eq!(gegenbauer(0, &a), Poly::one());
            assert_eq!(gegenbauer(1, &a), Poly::monomial(int(2) * &a, 1));
            let lead = int(2) * &a * (&a + int(1));
            assert_eq!(gegenbauer(2, &a), Poly::new(vec![-a.clone(), int(0), lead]));
        }
        assert_eq!(gegenbauer(2, &int(1)), Poly::from_ints(&[-1, 0, 4]));
    }

    #[test]
    fn gegenbauer_parity_and_degree() {
        for a in alpha_grid() {
            for (n, p) in gegenbauer_sequence(30, &a).iter().enumerate() {
                assert_eq!(p.degree(), Some(n));
                assert!(p.has_parity(n));
            }
        }
    }

    #[test]
    fn hermite_low_members() {
        assert_eq!(hermite(0), Poly::one());
        assert_eq!(hermite(2), Poly::from_ints(&[-2, 0, 4]));
        assert_eq!(hermite(3), Poly::from_ints(&[0, -12, 0, 8]));
    }

    #[test]
    fn unball_examples() {
        assert_eq!(unball(&Poly::one(), 0).unwrap(), Poly::one());
        let a = int(3);
        let c1 = gegenbauer(1, &a);
        assert_eq!(unball(&c1, 1).unwrap(), Poly::monomial(int(2) * &a, 1));
        let c2 = gegenbauer(2, &a);
        let expected = Poly::new(vec![-a.clone(), int(0), &a * (int(2) * &a + int(1))]);
        assert_eq!(unball(&c2, 2).unwrap(), expected);
    }

    #[test]
    fn unball_rejects_parity_violation() {
        assert!(matches!(
            unball(&Poly::from_ints(&[1, 1]), 1),
            Err(FamilyError::Poly(PolyError::ParityViolation { .. }))
        ));
        assert!(unball(&Poly::from_ints(&[0, 0, 0, 1]), 1).is_err());
    }

    #[test]
    fn leading_coefficient_approaches_hermite() {
        let big_n = int(1_000_000);
        for n in 1..=12 {
            let lead = rational::to_f64(&abns_leading(n, &big_n).unwrap());
            let target = rational::to_f64(&two_pow(n));
            let rel = ((lead - target) / target).abs();
            assert!(rel <= 10.0 * (n * n) as f64 / 1e6, "n={n} rel={rel}");
        }
    }
}
