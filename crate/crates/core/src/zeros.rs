//! Real-root isolation with Sturm sequences over exact rationals.
//!
//! Sign decisions never touch floating point, so a root count is a proof,
//! not an estimate. Isolating intervals are half-open `(lo, hi]` with
//! endpoints that are never roots; refinement bisects until the width is at
//! most the requested tolerance, collapsing to a point if a midpoint hits a
//! root exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rational::{self, int, Rational};
use crate::exact::Poly;
use crate::families::{self, FamilyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(Rational),
    #[error("degree must be at least 1")]
    DegreeTooLow,
    #[error("F_{n}^{big_n} has {found} distinct real roots, expected {n}")]
    RootCountMismatch {
        n: usize,
        big_n: Rational,
        found: usize,
    },
    #[error("C_{n}^{alpha} has a real zero outside (-1, 1)")]
    ZeroOutsideUnitInterval { n: usize, alpha: Rational },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatedRoot {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational::to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Disjoint isolating intervals in increasing order, one per distinct real root.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootList {
    pub roots: Vec<IsolatedRoot>,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn midpoints_f64(&self) -> Vec<f64> {
        self.roots.iter().map(IsolatedRoot::midpoint_f64).collect()
    }

    pub fn largest(&self) -> Option<&IsolatedRoot> {
        self.roots.last()
    }

    /// Largest gap between corresponding midpoints, or `None` when the lists
    /// differ in length.
    pub fn max_midpoint_gap(&self, other: &RootList) -> Option<Rational> {
        if self.len() != other.len() {
            return None;
        }
        Some(
            self.roots
                .iter()
                .zip(&other.roots)
                .map(|(a, b)| (a.midpoint() - b.midpoint()).abs())
                .max()
                .unwrap_or_else(Rational::zero),
        )
    }
}

/// Sturm sequence of the squarefree part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Poly>,
    scaled: Vec<IntPoly>,
}

/// A polynomial times the positive common denominator of its coefficients.
/// Same signs everywhere, but evaluable with integer arithmetic only.
#[derive(Debug, Clone)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn new(p: &Poly) -> Self {
        let l = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly(
            p.coeffs()
                .iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect(),
        )
    }

    /// Sign of `p(a/d)`, from `d^deg · p(a/d)` by homogeneous Horner.
    fn sign_at(&self, x: &Rational) -> i8 {
        let (a, d) = (x.numer(), x.denom());
        let mut coeffs = self.0.iter().rev();
        let Some(lead) = coeffs.next() else {
            return 0;
        };
        let mut acc = lead.clone();
        let mut d_pow = BigInt::one();
        for c in coeffs {
            d_pow *= d;
            acc = acc * a + c * &d_pow;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self, ZeroError> {
        if p.is_zero() {
            return Err(ZeroError::ZeroPolynomial);
        }
        let dp = p.differentiate();
        let g = p.gcd(&dp);
        let (sqfree, _) = p
            .div_rem(&g)
            .expect("gcd of a nonzero polynomial is nonzero");
        let mut chain = vec![sqfree.clone(), sqfree.differentiate()];
        while !chain.last().expect("nonempty").is_zero() {
            let k = chain.len();
            let (_, r) = chain[k - 2]
                .div_rem(&chain[k - 1])
                .expect("nonzero divisor");
            chain.push(-r);
        }
        chain.pop();
        let scaled = chain.iter().map(IntPoly::new).collect();
        Ok(SturmChain { chain, scaled })
    }

    /// Squarefree part with the same real roots as the input.
    pub fn squarefree(&self) -> &Poly {
        &self.chain[0]
    }

    pub fn sign_changes(&self, x: &Rational) -> usize {
        let mut changes = 0;
        let mut prev = 0i8;
        for p in &self.scaled {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                changes += 1;
            }
            prev = s;
        }
        changes
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.sign_changes(lo).saturating_sub(self.sign_changes(hi))
    }

    /// A strict bound `B` with every real root in `(−B, B)`: ⌈1 + max|a_i/a_n|⌉.
    pub fn cauchy_bound(&self) -> Rational {
        let p = self.squarefree();
        let lead = p.leading().expect("nonzero").abs();
        let m = p.coeffs()[..p.coeffs().len() - 1]
            .iter()
            .map(|a| a.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        (m + Rational::one()).ceil() + Rational::one()
    }

    /// Number of distinct real roots, from the chain's signs at `±∞`.
    pub fn total(&self) -> usize {
        let changes = |at_neg_inf: bool| {
            let signs = self.chain.iter().map(|p| {
                let s = rational::sign(p.leading().expect("chain members are nonzero"));
                let odd = p.degree().unwrap_or(0) % 2 == 1;
                if at_neg_inf && odd {
                    -s
                } else {
                    s
                }
            });
            let signs: Vec<i8> = signs.collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(true) - changes(false)
    }

    /// A bound `B` with every real root in `(−B, B)` and `±B` not roots.
    /// Tries the Fujiwara bound `2·max |a_{d−k}/a_d|^{1/k}` (evaluated in
    /// floating point, then checked exactly against the root count) and
    /// falls back to [`cauchy_bound`](Self::cauchy_bound).
    pub fn root_bound(&self) -> Rational {
        let p = self.squarefree();
        let d = p.degree().expect("nonzero");
        let lead = p.leading().expect("nonzero");
        let fujiwara = (1..=d)
            .map(|k| {
                let ratio = rational::to_f64(&(p.coeff(d - k) / lead).abs());
                ratio.powf(1.0 / k as f64)
            })
            .fold(0.0f64, f64::max);
        let candidate = 2.0 * fujiwara * (1.0 + 1e-6) + 1.0;
        if candidate.is_finite() {
            if let Some(b) = rational::from_f64(candidate.ceil()) {
                let sq = &self.scaled[0];
                if sq.sign_at(&b) != 0
                    && sq.sign_at(&-b.clone()) != 0
                    && self.count(&-b.clone(), &b) == self.total()
                {
                    return b;
                }
            }
        }
        self.cauchy_bound()
    }

    /// Isolating intervals for all roots in `(lo, hi)`. Neither endpoint may
    /// be a root.
    pub fn isolate_in(&self, lo: &Rational, hi: &Rational) -> Vec<IsolatedRoot> {
        let sq = &self.scaled[0];
        debug_assert!(sq.sign_at(lo) != 0 && sq.sign_at(hi) != 0);
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone(), self.count(lo, hi))];
        while let Some((a, b, c)) = stack.pop() {
            match c {
                0 => {}
                1 => out.push(IsolatedRoot { lo: a, hi: b }),
                _ => {
                    let m = split_point(sq, &a, &b);
                    let left = self.count(&a, &m);
                    stack.push((m.clone(), b, c - left));
                    stack.push((a, m, left));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Bisects an isolating interval down to width `≤ tol`.
    pub fn refine(&self, root: &IsolatedRoot, tol: &Rational) -> IsolatedRoot {
        let sq = &self.scaled[0];
        let (mut lo, mut hi) = (root.lo.clone(), root.hi.clone());
        let mut s_lo = sq.sign_at(&lo);
        while &hi - &lo > *tol {
            let mid = (&lo + &hi) / int(2);
            let s = sq.sign_at(&mid);
            if s == 0 {
                return IsolatedRoot {
                    lo: mid.clone(),
                    hi: mid,
                };
            }
            if s == s_lo {
                lo = mid;
                s_lo = s;
            } else {
                hi = mid;
            }
        }
        IsolatedRoot { lo, hi }
    }
}

/// A point strictly inside `(a, b)` that is not a root; tries the midpoint
/// first, then other dyadic fractions.
fn split_point(p: &IntPoly, a: &Rational, b: &Rational) -> Rational {
    let width = b - a;
    let mut den = 2i64;
    loop {
        for num in (1..den).step_by(2) {
            let m = a + &width * rational::ratio(num, den);
            if p.sign_at(&m) != 0 {
                return m;
            }
        }
        den *= 2;
    }
}

/// Isolating intervals for every real root of `p`.
pub fn isolate_roots(p: &Poly) -> Result<RootList, ZeroError> {
    let chain = SturmChain::new(p)?;
    let b = chain.root_bound();
    Ok(RootList {
        roots: chain.isolate_in(&-b.clone(), &b),
    })
}

/// Isolating intervals refined to width `≤ tol`.
pub fn real_roots(p: &Poly, tol: &Rational) -> Result<RootList, ZeroError> {
    if !tol.is_positive() {
        return Err(ZeroError::NonPositiveTolerance(tol.clone()));
    }
    let chain = SturmChain::new(p)?;
    let b = chain.root_bound();
    let roots = chain
        .isolate_in(&-b.clone(), &b)
        .iter()
        .map(|r| chain.refine(r, tol))
        .collect();
    Ok(RootList { roots })
}

/// All zeros of `F_n^N`, refined to width `≤ tol`. Fails unless exactly `n`
/// distinct real zeros are found.
pub fn abns_zeros(n: usize, big_n: &Rational, tol: &Rational) -> Result<RootList, ZeroError> {
    if n == 0 {
        return Err(ZeroError::DegreeTooLow);
    }
    let p = families::abns(n, big_n)?;
    let roots = real_roots(&p, tol)?;
    if roots.len() != n {
        return Err(ZeroError::RootCountMismatch {
            n,
            big_n: big_n.clone(),
            found: roots.len(),
        });
    }
    Ok(roots)
}

/// Encloses `m(t) = √N·t/√(1−t²)` for `|t| < 1` in a rational interval of
/// width `2^-bits` (one-sided for nonzero `t`).
fn map_enclosure(t: &Rational, big_n: &Rational, bits: u32) -> (Rational, Rational) {
    if t.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let t2 = t * t;
    let squared = big_n * &t2 / (Rational::one() - &t2);
    let (lo, hi) = rational::sqrt_enclosure(&squared, bits);
    if t.is_negative() {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

/// Zeros of `C_n^N` pushed through `ξ = √N·t/√(1−t²)`, each enclosed in a
/// rational interval of width `≤ tol`. These must coincide with the zeros of
/// `F_n^N`.
pub fn mapped_gegenbauer_zeros(
    n: usize,
    big_n: &Rational,
    tol: &Rational,
) -> Result<RootList, ZeroError> {
    if n == 0 {
        return Err(ZeroError::DegreeTooLow);
    }
    if !tol.is_positive() {
        return Err(ZeroError::NonPositiveTolerance(tol.clone()));
    }
    if !big_n.is_positive() {
        return Err(FamilyError::NonPositiveN(big_n.clone()).into());
    }
    let c = families::gegenbauer(n, big_n);
    let chain = SturmChain::new(&c)?;
    let outside = || ZeroError::ZeroOutsideUnitInterval {
        n,
        alpha: big_n.clone(),
    };
    let one = Rational::one();
    let sq = chain.squarefree();
    if sq.evaluate(&one).is_zero() || sq.evaluate(&-one.clone()).is_zero() {
        return Err(outside());
    }
    let b = chain.root_bound();
    let total = chain.count(&-b.clone(), &b);
    let inside = chain.isolate_in(&-one.clone(), &one);
    if inside.len() != total {
        return Err(outside());
    }

    // Room for the sqrt enclosure inside the tolerance budget.
    let mut bits = 1u32;
    while rational::pow(&int(2), -(bits as i32)) * int(4) > *tol {
        bits += 1;
    }
    let mut roots = Vec::with_capacity(inside.len());
    for iso in &inside {
        let mut t = iso.clone();
        let mut step = tol.clone();
        loop {
            if t.lo.abs() >= one || t.hi.abs() >= one {
                t = chain.refine(&t, &(t.width() / int(2)));
                continue;
            }
            let (lo, _) = map_enclosure(&t.lo, big_n, bits);
            let (_, hi) = map_enclosure(&t.hi, big_n, bits);
            if &hi - &lo <= *tol {
                roots.push(IsolatedRoot { lo, hi });
                break;
            }
            step /= int(4);
            t = chain.refine(&t, &step);
        }
    }
    Ok(RootList { roots })
}

/// Whether the zeros in `lower` strictly interlace with those in `upper`
/// (one more zero in `upper`). Uses refined midpoints; empirical only.
pub fn interlaces(lower: &RootList, upper: &RootList) -> bool {
    if upper.len() != lower.len() + 1 {
        return false;
    }
    lower
        .roots
        .iter()
        .enumerate()
        .all(|(i, r)| upper.roots[i].hi < r.lo && r.hi < upper.roots[i + 1].lo)
}
