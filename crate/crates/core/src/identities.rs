//! Exact verification of ladder, recurrence-shift and bridge identities.
//!
//! Every identity is turned into a single polynomial that must vanish, and
//! the check reports that polynomial rather than a bare boolean.
//!
//! # Clearing square roots
//!
//! The shift relations and the Gegenbauer bridge involve `√N`, `√(1 ± 1/N)`
//! and `√(1+u²)`. Both sides of each relation are polynomials of parity `n`
//! (only powers `k ≡ n mod 2` occur), so multiplying through by `(√c)^n`
//! turns every `(√c)^n · p(√c·ξ)` into `Σ a_k c^{(n+k)/2} ξ^k` with integer
//! exponents. The relations below are all stated in that cleared form, which
//! makes them statements about rational coefficients and lets them be
//! checked for exact equality. See [`Poly::scaled_compose`] and
//! [`crate::families::unball`].

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rational::{self, int, Rational};
use crate::exact::{Poly, PolyError};
use crate::families::{self, FamilyError};

/// First-order differential operator `f(ξ)·d/dξ + g(ξ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderOp {
    pub f: Poly,
    pub g: Poly,
}

impl LadderOp {
    pub fn new(f: Poly, g: Poly) -> Self {
        LadderOp { f, g }
    }

    /// `d/dξ`
    pub fn derivative() -> Self {
        LadderOp::new(Poly::one(), Poly::zero())
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        &self.f * &p.differentiate() + &self.g * p
    }

    /// Degree-raising operator `A_n^+ = (1+ξ²/N)·d/dξ − 2(1+n/N)·ξ`.
    pub fn abns_raising(n: usize, big_n: &Rational) -> Self {
        let (f, g) = families::abns_raising_coefficients(n, big_n);
        LadderOp::new(f, g)
    }

    /// Degree-lowering operator `A_n^- = d/dξ`.
    pub fn abns_lowering() -> Self {
        Self::derivative()
    }

    /// `x·d/dx + (2α+n)`, raising the Gegenbauer parameter.
    pub fn gegenbauer_param_raising(n: usize, alpha: &Rational) -> Self {
        let g = int(2) * alpha + int(n as i64);
        LadderOp::new(Poly::x(), Poly::constant(g))
    }

    /// `x(1−x²)·d/dx − (2α+n−1−n·x²)`, lowering the Gegenbauer parameter.
    pub fn gegenbauer_param_lowering(n: usize, alpha: &Rational) -> Self {
        let nn = int(n as i64);
        let c0 = int(2) * alpha + &nn - int(1);
        let g = Poly::new(vec![-c0, Rational::zero(), nn]);
        LadderOp::new(Poly::from_ints(&[0, 1, 0, -1]), g)
    }

    /// `ξ(1+ξ²/N)·d/dξ − (n/N)ξ² + 2N + n`, the parameter-raising side of the
    /// ABNS shift relation.
    pub fn abns_shift_raising(n: usize, big_n: &Rational) -> Self {
        let inv = big_n.recip();
        let nn = int(n as i64);
        let f = Poly::new(vec![
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            inv.clone(),
        ]);
        let g = Poly::new(vec![int(2) * big_n + &nn, Rational::zero(), -(&nn * &inv)]);
        LadderOp::new(f, g)
    }

    /// `ξ·d/dξ − (2N+n−1)`, the parameter-lowering side of the ABNS shift
    /// relation.
    pub fn abns_shift_lowering(n: usize, big_n: &Rational) -> Self {
        let c = int(2) * big_n + int(n as i64) - int(1);
        LadderOp::new(Poly::x(), Poly::constant(-c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

/// Which of the admissible r-coefficient splits of `k_n` drives the degree
/// ladder. `Abns` is `r_n^+ = −1`; `Rescaled` is `r_n^+ = −(n+1)` and acts on
/// `F_n^N / n!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RPair {
    #[default]
    Abns,
    Rescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OdeKind {
    Abns,
    Gegenbauer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    DegreeLadder(Direction),
    ParamLadder(Direction),
    Nagel,
    Shift(Direction),
    Ode(OdeKind),
    Composition,
    CommutingPath,
}

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::DegreeLadder(Direction::Up) => "degree-up",
            IdentityId::DegreeLadder(Direction::Down) => "degree-down",
            IdentityId::ParamLadder(Direction::Up) => "param-up",
            IdentityId::ParamLadder(Direction::Down) => "param-down",
            IdentityId::Nagel => "nagel",
            IdentityId::Shift(Direction::Up) => "shift-up",
            IdentityId::Shift(Direction::Down) => "shift-down",
            IdentityId::Ode(OdeKind::Abns) => "ode-abns",
            IdentityId::Ode(OdeKind::Gegenbauer) => "ode-gegenbauer",
            IdentityId::Composition => "composition",
            IdentityId::CommutingPath => "commuting-path",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one exact identity check. `param` is `N` for ABNS identities
/// and `α` for Gegenbauer ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub n: usize,
    pub param: Rational,
    pub difference: Poly,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("the lowering relation needs n >= 1")]
    DegreeZeroLowering,
    #[error("N must be positive, got {0}")]
    NonPositiveN(Rational),
    #[error("the shift-down relation needs N > 1, got {0}")]
    ShiftDownNeedsNAboveOne(Rational),
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(Rational),
    #[error("the parameter-lowering relation divides by 2*alpha - 2 and excludes alpha = 1")]
    AlphaOneExcluded,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<FamilyError> for DomainError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::NonPositiveN(n) => DomainError::NonPositiveN(n),
            FamilyError::Poly(p) => DomainError::Poly(p),
        }
    }
}

/// Deliberate corruption of a generated family member, used to show that the
/// checks do fail when a generator is wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negate the constant term of `F_2^N`.
    FlipF2Constant,
}

type SeqCache = Mutex<HashMap<Rational, Arc<Vec<Poly>>>>;

/// Runs identity checks with memoized family sequences.
///
/// The cache only saves regeneration; results never depend on it.
#[derive(Debug, Default)]
pub struct Verifier {
    fault: Option<Fault>,
    abns: SeqCache,
    rescaled: SeqCache,
    gegenbauer: SeqCache,
}

fn cached(
    cache: &SeqCache,
    key: &Rational,
    need: usize,
    build: impl FnOnce(usize) -> Result<Vec<Poly>, DomainError>,
) -> Result<Arc<Vec<Poly>>, DomainError> {
    if let Some(seq) = cache.lock().unwrap().get(key) {
        if seq.len() > need {
            return Ok(Arc::clone(seq));
        }
    }
    // Grow geometrically so a sweep over n does not rebuild every step.
    let target = need.max(8).next_power_of_two();
    let seq = Arc::new(build(target)?);
    cache.lock().unwrap().insert(key.clone(), Arc::clone(&seq));
    Ok(seq)
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_fault(fault: Fault) -> Self {
        Verifier {
            fault: Some(fault),
            ..Self::default()
        }
    }

    /// `F_n^N`, honouring any injected fault.
    pub fn abns(&self, n: usize, big_n: &Rational) -> Result<Poly, DomainError> {
        let seq = cached(&self.abns, big_n, n, |m| {
            Ok(families::abns_sequence(m, big_n)?)
        })?;
        let mut p = seq[n].clone();
        if n == 2 && self.fault == Some(Fault::FlipF2Constant) {
            let mut c = p.into_coeffs();
            c[0] = -c[0].clone();
            p = Poly::new(c);
        }
        Ok(p)
    }

    fn degree_member(&self, pair: RPair, n: usize, big_n: &Rational) -> Result<Poly, DomainError> {
        match pair {
            RPair::Abns => self.abns(n, big_n),
            RPair::Rescaled => {
                let seq = cached(&self.rescaled, big_n, n, |m| {
                    Ok(families::abns_rescaled_sequence(m, big_n)?)
                })?;
                Ok(seq[n].clone())
            }
        }
    }

    pub fn gegenbauer(&self, n: usize, alpha: &Rational) -> Poly {
        cached(&self.gegenbauer, alpha, n, |m| {
            Ok(families::gegenbauer_sequence(m, alpha))
        })
        .expect("gegenbauer generation is infallible")[n]
            .clone()
    }

    pub fn degree_ladder_check(
        &self,
        n: usize,
        big_n: &Rational,
        direction: Direction,
    ) -> Result<IdentityReport, DomainError> {
        self.degree_ladder_check_with(n, big_n, direction, RPair::Abns)
    }

    /// Up: `A_n^+ y_n − r_n^+ y_{n+1}`. Down: `y_n′ − r_n^- y_{n−1}`.
    pub fn degree_ladder_check_with(
        &self,
        n: usize,
        big_n: &Rational,
        direction: Direction,
        pair: RPair,
    ) -> Result<IdentityReport, DomainError> {
        if !big_n.is_positive() {
            return Err(DomainError::NonPositiveN(big_n.clone()));
        }
        let nn = int(n as i64);
        let difference = match direction {
            Direction::Up => {
                let r_plus = match pair {
                    RPair::Abns => -Rational::one(),
                    RPair::Rescaled => -(&nn + int(1)),
                };
                let lhs =
                    LadderOp::abns_raising(n, big_n).apply(&self.degree_member(pair, n, big_n)?);
                lhs - self.degree_member(pair, n + 1, big_n)?.scale(&r_plus)
            }
            Direction::Down => {
                if n == 0 {
                    return Err(DomainError::DegreeZeroLowering);
                }
                let two_n_shift = int(2) * big_n + &nn - int(1);
                let r_minus = match pair {
                    RPair::Abns => &nn * &two_n_shift / big_n,
                    RPair::Rescaled => two_n_shift / big_n,
                };
                let lhs = LadderOp::abns_lowering().apply(&self.degree_member(pair, n, big_n)?);
                lhs - self.degree_member(pair, n - 1, big_n)?.scale(&r_minus)
            }
        };
        Ok(IdentityReport {
            id: IdentityId::DegreeLadder(direction),
            n,
            param: big_n.clone(),
            difference,
        })
    }

    /// Up: `[x·d/dx + (2α+n)]C_n^α − 2α·C_n^{α+1}`.
    /// Down: `[x(1−x²)·d/dx − (2α+n−1−nx²)]C_n^α + [(2α+n−1)(2α+n−2)/(2α−2)]·C_n^{α−1}`.
    pub fn param_ladder_check(
        &self,
        n: usize,
        alpha: &Rational,
        direction: Direction,
    ) -> Result<IdentityReport, DomainError> {
        if !alpha.is_positive() {
            return Err(DomainError::NonPositiveAlpha(alpha.clone()));
        }
        let c = self.gegenbauer(n, alpha);
        let nn = int(n as i64);
        let two_a = int(2) * alpha;
        let difference = match direction {
            Direction::Up => {
                let lhs = LadderOp::gegenbauer_param_raising(n, alpha).apply(&c);
                lhs - self.gegenbauer(n, &(alpha + int(1))).scale(&two_a)
            }
            Direction::Down => {
                if alpha.is_one() {
                    return Err(DomainError::AlphaOneExcluded);
                }
                let lhs = LadderOp::gegenbauer_param_lowering(n, alpha).apply(&c);
                let factor = (&two_a + &nn - int(1)) * (&two_a + &nn - int(2)) / (&two_a - int(2));
                lhs + self.gegenbauer(n, &(alpha - int(1))).scale(&factor)
            }
        };
        Ok(IdentityReport {
            id: IdentityId::ParamLadder(direction),
            n,
            param: alpha.clone(),
            difference,
        })
    }

    /// Bridge between ABNS and Gegenbauer, cleared of `√N`:
    /// `(√N)^n F_n^N(√N·u) − n!·(1+u²)^{n/2} C_n^N(u/√(1+u²))`.
    pub fn nagel_check(&self, n: usize, big_n: &Rational) -> Result<IdentityReport, DomainError> {
        let f = self.abns(n, big_n)?;
        let lhs = f.scaled_compose(big_n, n)?;
        let rhs = families::unball(&self.gegenbauer(n, big_n), n)?.scale(&rational::factorial(n));
        Ok(IdentityReport {
            id: IdentityId::Nagel,
            n,
            param: big_n.clone(),
            difference: lhs - rhs,
        })
    }

    /// Recurrence-shift relations in `N`, each cleared of `√(1 ± 1/N)`.
    ///
    /// Up: `[ξ(1+ξ²/N)d/dξ − (n/N)ξ² + 2N+n]F_n^N − 2N·S_{(N+1)/N}F_n^{N+1}`.
    /// Down: `[ξ·d/dξ − (2N+n−1)]F_n^N + [(2N+n−1)(2N+n−2)/(2N−2)]·S_{(N−1)/N}F_n^{N−1}`.
    /// Here `S_c p = (√c)^n p(√c·ξ)`.
    pub fn shift_check(
        &self,
        n: usize,
        big_n: &Rational,
        direction: Direction,
    ) -> Result<IdentityReport, DomainError> {
        if !big_n.is_positive() {
            return Err(DomainError::NonPositiveN(big_n.clone()));
        }
        let f = self.abns(n, big_n)?;
        let nn = int(n as i64);
        let two_n = int(2) * big_n;
        let difference = match direction {
            Direction::Up => {
                let lhs = LadderOp::abns_shift_raising(n, big_n).apply(&f);
                let up = big_n + int(1);
                let scaled = self.abns(n, &up)?.scaled_compose(&(&up / big_n), n)?;
                lhs - scaled.scale(&two_n)
            }
            Direction::Down => {
                if big_n <= &Rational::one() {
                    return Err(DomainError::ShiftDownNeedsNAboveOne(big_n.clone()));
                }
                let lhs = LadderOp::abns_shift_lowering(n, big_n).apply(&f);
                let down = big_n - int(1);
                let scaled = self.abns(n, &down)?.scaled_compose(&(&down / big_n), n)?;
                let factor = (&two_n + &nn - int(1)) * (&two_n + &nn - int(2)) / (&two_n - int(2));
                lhs + scaled.scale(&factor)
            }
        };
        Ok(IdentityReport {
            id: IdentityId::Shift(direction),
            n,
            param: big_n.clone(),
            difference,
        })
    }

    pub fn ode_check(
        &self,
        n: usize,
        param: &Rational,
        which: OdeKind,
    ) -> Result<IdentityReport, DomainError> {
        let p = match which {
            OdeKind::Abns => self.abns(n, param)?,
            OdeKind::Gegenbauer => self.gegenbauer(n, param),
        };
        Ok(IdentityReport {
            id: IdentityId::Ode(which),
            n,
            param: param.clone(),
            difference: ode_residual(&p, n, param, which),
        })
    }

    /// `A_{n+1}^- A_n^+ F_n − k_n F_n` with `k_n = −(n+1)(2N+n)/N`.
    pub fn composition_check(
        &self,
        n: usize,
        big_n: &Rational,
    ) -> Result<IdentityReport, DomainError> {
        let f = self.abns(n, big_n)?;
        let raised = LadderOp::abns_raising(n, big_n).apply(&f);
        let lowered = LadderOp::abns_lowering().apply(&raised);
        let k = degree_k(n, big_n);
        Ok(IdentityReport {
            id: IdentityId::Composition,
            n,
            param: big_n.clone(),
            difference: lowered - f.scale(&k),
        })
    }

    /// Raise `N` with the shift-up operator, then lower back with the
    /// shift-down operator at `N+1`. The round trip returns `F_n^N` times
    /// `2N · (−(2N+n+1)(2N+n)/(2N)) = −(2N+n+1)(2N+n)`, the product of the
    /// two r-coefficients.
    pub fn commuting_path_check(
        &self,
        n: usize,
        big_n: &Rational,
    ) -> Result<IdentityReport, DomainError> {
        if !big_n.is_positive() {
            return Err(DomainError::NonPositiveN(big_n.clone()));
        }
        let f = self.abns(n, big_n)?;
        let up = big_n + int(1);
        let down_scale = big_n / &up;
        let up_scale = &up / big_n;
        // Into the variable of F^{N+1}, lower, then back into the variable of F^N.
        let raised = LadderOp::abns_shift_raising(n, big_n).apply(&f);
        let in_upper = raised.scaled_compose(&down_scale, n)?;
        let lowered = LadderOp::abns_shift_lowering(n, &up).apply(&in_upper);
        let back = lowered.scaled_compose(&up_scale, n)?;
        let scalar = shift_round_trip_scalar(n, big_n);
        Ok(IdentityReport {
            id: IdentityId::CommutingPath,
            n,
            param: big_n.clone(),
            difference: back - f.scale(&scalar),
        })
    }
}

/// `k_n = −(n+1)(2N+n)/N`
pub fn degree_k(n: usize, big_n: &Rational) -> Rational {
    let nn = int(n as i64);
    -((&nn + int(1)) * (int(2) * big_n + &nn)) / big_n
}

/// `r^+ · r^-` for the shift round trip at `(n, N)`: `−(2N+n+1)(2N+n)`.
pub fn shift_round_trip_scalar(n: usize, big_n: &Rational) -> Rational {
    let base = int(2) * big_n + int(n as i64);
    -((&base + int(1)) * base)
}

/// Residual of the second-order equation each family member must satisfy.
///
/// ABNS: `(1+ξ²/N)p″ − (2/N)(N+n−1)ξp′ + (n/N)(2N+n−1)p`.
/// Gegenbauer (multiplied through by `x²`, with `N = α`):
/// `x²(1−x²)p″ − (2N+1)x³p′ + n(2N+n)x²p`.
pub fn ode_residual(p: &Poly, n: usize, param: &Rational, which: OdeKind) -> Poly {
    let d1 = p.differentiate();
    let d2 = d1.differentiate();
    let nn = int(n as i64);
    match which {
        OdeKind::Abns => {
            let inv = param.recip();
            let a = Poly::new(vec![Rational::one(), Rational::zero(), inv.clone()]);
            let b = Poly::monomial(-(int(2) * &inv * (param + &nn - int(1))), 1);
            let c = &nn * &inv * (int(2) * param + &nn - int(1));
            &a * &d2 + &b * &d1 + p.scale(&c)
        }
        OdeKind::Gegenbauer => {
            let a = Poly::from_ints(&[0, 0, 1, 0, -1]);
            let b = Poly::monomial(-(int(2) * param + int(1)), 3);
            let c = Poly::monomial(&nn * (int(2) * param + &nn), 2);
            &a * &d2 + &b * &d1 + &c * p
        }
    }
}

pub fn apply_ladder(op: &LadderOp, p: &Poly) -> Poly {
    op.apply(p)
}

pub fn degree_ladder_check(
    n: usize,
    big_n: &Rational,
    direction: Direction,
) -> Result<IdentityReport, DomainError> {
    Verifier::new().degree_ladder_check(n, big_n, direction)
}

pub fn param_ladder_check(
    n: usize,
    alpha: &Rational,
    direction: Direction,
) -> Result<IdentityReport, DomainError> {
    Verifier::new().param_ladder_check(n, alpha, direction)
}

pub fn nagel_check(n: usize, big_n: &Rational) -> Result<IdentityReport, DomainError> {
    Verifier::new().nagel_check(n, big_n)
}

pub fn shift_check(
    n: usize,
    big_n: &Rational,
    direction: Direction,
) -> Result<IdentityReport, DomainError> {
    Verifier::new().shift_check(n, big_n, direction)
}

/// Groups of identities that the verification suite can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Degree,
    Param,
    Nagel,
    Shift,
    Ode,
    Composition,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "degree" => Suite::Degree,
            "param" => Suite::Param,
            "nagel" => Suite::Nagel,
            "shift" => Suite::Shift,
            "ode" => Suite::Ode,
            "composition" => Suite::Composition,
            "all" => Suite::All,
            _ => return None,
        })
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// One row of a suite run: a completed check or a skip for a parameter
/// combination outside the identity's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteEntry {
    Checked(IdentityReport),
    Skipped {
        id: IdentityId,
        n: usize,
        param: Rational,
        reason: String,
    },
}

impl SuiteEntry {
    pub fn id(&self) -> IdentityId {
        match self {
            SuiteEntry::Checked(r) => r.id,
            SuiteEntry::Skipped { id, .. } => *id,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SuiteEntry::Checked(r) => r.n,
            SuiteEntry::Skipped { n, .. } => *n,
        }
    }

    pub fn param(&self) -> &Rational {
        match self {
            SuiteEntry::Checked(r) => &r.param,
            SuiteEntry::Skipped { param, .. } => param,
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, SuiteEntry::Checked(r) if !r.holds())
    }
}

impl Verifier {
    /// Runs `suite` for every `n ≤ n_max` over the `N` grid (ABNS identities)
    /// and the `α` grid (Gegenbauer identities). Degrees are spread over
    /// worker threads; rows come back sorted by `n`, then parameter, then
    /// identity, whatever the completion order.
    pub fn run_suite(
        &self,
        suite: Suite,
        n_max: usize,
        big_ns: &[Rational],
        alphas: &[Rational],
    ) -> Vec<SuiteEntry> {
        let next = AtomicUsize::new(0);
        let workers = std::thread::available_parallelism()
            .map_or(1, |w| w.get())
            .min(n_max + 1);
        let mut rows: Vec<SuiteEntry> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut rows = Vec::new();
                        loop {
                            let n = next.fetch_add(1, Ordering::Relaxed);
                            if n > n_max {
                                return rows;
                            }
                            self.suite_rows(suite, n, big_ns, alphas, &mut rows);
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite worker panicked"))
                .collect()
        });
        rows.sort_by(|a, b| (a.n(), a.param(), a.id()).cmp(&(b.n(), b.param(), b.id())));
        rows
    }

    fn suite_rows(
        &self,
        suite: Suite,
        n: usize,
        big_ns: &[Rational],
        alphas: &[Rational],
        rows: &mut Vec<SuiteEntry>,
    ) {
        let mut record =
            |id: IdentityId, param: &Rational, r: Result<IdentityReport, DomainError>| {
                rows.push(match r {
                    Ok(report) => SuiteEntry::Checked(report),
                    Err(e) => SuiteEntry::Skipped {
                        id,
                        n,
                        param: param.clone(),
                        reason: e.to_string(),
                    },
                });
            };
        for big_n in big_ns {
            if suite.includes(Suite::Degree) {
                for dir in [Direction::Up, Direction::Down] {
                    record(
                        IdentityId::DegreeLadder(dir),
                        big_n,
                        self.degree_ladder_check(n, big_n, dir),
                    );
                }
            }
            if suite.includes(Suite::Nagel) {
                record(IdentityId::Nagel, big_n, self.nagel_check(n, big_n));
            }
            if suite.includes(Suite::Shift) {
                for dir in [Direction::Up, Direction::Down] {
                    record(
                        IdentityId::Shift(dir),
                        big_n,
                        self.shift_check(n, big_n, dir),
                    );
                }
            }
            if suite.includes(Suite::Ode) {
                record(
                    IdentityId::Ode(OdeKind::Abns),
                    big_n,
                    self.ode_check(n, big_n, OdeKind::Abns),
                );
            }
            if suite.includes(Suite::Composition) {
                record(
                    IdentityId::Composition,
                    big_n,
                    self.composition_check(n, big_n),
                );
                record(
                    IdentityId::CommutingPath,
                    big_n,
                    self.commuting_path_check(n, big_n),
                );
            }
        }
        for alpha in alphas {
            if suite.includes(Suite::Param) {
                for dir in [Direction::Up, Direction::Down] {
                    record(
                        IdentityId::ParamLadder(dir),
                        alpha,
                        self.param_ladder_check(n, alpha, dir),
                    );
                }
            }
            if suite.includes(Suite::Ode) {
                let id = IdentityId::Ode(OdeKind::Gegenbauer);
                record(id, alpha, self.ode_check(n, alpha, OdeKind::Gegenbauer));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn n_grid() -> Vec<Rational> {
        vec![int(1), ratio(3, 2), int(2), int(5), int(10), int(137)]
    }

    #[test]
    fn apply_ladder_examples() {
        let two_xi = Poly::from_ints(&[0, 2]);
        assert_eq!(
            apply_ladder(&LadderOp::derivative(), &two_xi),
            Poly::from_ints(&[2])
        );
        let a1 = LadderOp::abns_raising(1, &int(1));
        assert_eq!(a1.apply(&two_xi), -Poly::from_ints(&[-2, 0, 6]));
        let alpha = ratio(7, 3);
        let op = LadderOp::new(Poly::x(), Poly::constant(int(2) * &alpha));
        assert_eq!(op.apply(&Poly::one()), Poly::constant(int(2) * &alpha));
    }

    #[test]
    fn ladder_op_is_linear() {
        let op = LadderOp::abns_shift_raising(3, &ratio(5, 2));
        let p = Poly::from_ints(&[1, -2, 3, 4]);
        let q = Poly::from_ints(&[0, 5, 0, -1, 2]);
        let (a, b) = (ratio(2, 3), int(-4));
        let lhs = op.apply(&(p.scale(&a) + q.scale(&b)));
        let rhs = op.apply(&p).scale(&a) + op.apply(&q).scale(&b);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_ladder_examples() {
        let v = Verifier::new();
        for big_n in n_grid() {
            let r = v.degree_ladder_check(0, &big_n, Direction::Up).unwrap();
            assert!(r.holds());
            let r = v.degree_ladder_check(1, &big_n, Direction::Down).unwrap();
            assert!(r.holds());
        }
        assert!(v
            .degree_ladder_check(2, &int(1), Direction::Down)
            .unwrap()
            .holds());
        assert_eq!(
            v.degree_ladder_check(0, &int(1), Direction::Down),
            Err(DomainError::DegreeZeroLowering)
        );
        assert!(v.degree_ladder_check(1, &int(0), Direction::Up).is_err());
    }

    #[test]
    fn rescaled_pair_holds_but_differs_from_abns_pair() {
        let v = Verifier::new();
        for n in 0..10 {
            for dir in [Direction::Up, Direction::Down] {
                if dir == Direction::Down && n == 0 {
                    continue;
                }
                let r = v
                    .degree_ladder_check_with(n, &int(3), dir, RPair::Rescaled)
                    .unwrap();
                assert!(r.holds(), "n={n} {dir:?}: {}", r.difference);
            }
        }
    }

    #[test]
    fn param_ladder_examples() {
        let v = Verifier::new();
        for a in [ratio(1, 2), int(2), ratio(11, 4)] {
            assert!(v.param_ladder_check(0, &a, Direction::Up).unwrap().holds());
            assert!(v.param_ladder_check(1, &a, Direction::Up).unwrap().holds());
            assert!(v
                .param_ladder_check(0, &a, Direction::Down)
                .unwrap()
                .holds());
        }
        assert_eq!(
            v.param_ladder_check(3, &int(1), Direction::Down),
            Err(DomainError::AlphaOneExcluded)
        );
        assert!(v
            .param_ladder_check(3, &int(1), Direction::Up)
            .unwrap()
            .holds());
        assert!(v.param_ladder_check(3, &int(0), Direction::Up).is_err());
    }

    #[test]
    fn nagel_examples() {
        let v = Verifier::new();
        assert!(v.nagel_check(0, &int(4)).unwrap().holds());
        assert!(v.nagel_check(1, &ratio(3, 2)).unwrap().holds());
        let r = v.nagel_check(2, &int(1)).unwrap();
        assert!(r.holds());
        // Both sides equal 6u² − 2 at n = 2, N = 1.
        let lhs = v
            .abns(2, &int(1))
            .unwrap()
            .scaled_compose(&int(1), 2)
            .unwrap();
        assert_eq!(lhs, Poly::from_ints(&[-2, 0, 6]));
    }

    #[test]
    fn shift_examples() {
        let v = Verifier::new();
        for big_n in [ratio(3, 2), int(2), int(7)] {
            assert!(v.shift_check(0, &big_n, Direction::Up).unwrap().holds());
            assert!(v.shift_check(1, &big_n, Direction::Up).unwrap().holds());
            assert!(v.shift_check(1, &big_n, Direction::Down).unwrap().holds());
        }
        assert!(v.shift_check(4, &int(1), Direction::Up).unwrap().holds());
        assert_eq!(
            v.shift_check(4, &int(1), Direction::Down),
            Err(DomainError::ShiftDownNeedsNAboveOne(int(1)))
        );
        assert!(v.shift_check(4, &ratio(1, 2), Direction::Down).is_err());
    }

    #[test]
    fn ode_residual_examples() {
        assert!(ode_residual(&Poly::one(), 0, &int(3), OdeKind::Abns).is_zero());
        assert!(ode_residual(&Poly::from_ints(&[-2, 0, 6]), 2, &int(1), OdeKind::Abns).is_zero());
        // H_2 is not an ABNS function at finite N. With p = 4ξ² − 2, n = 2:
        // (1+ξ²/N)·8 − (2/N)(N+1)ξ·8ξ + (2/N)(2N+1)(4ξ² − 2)
        // = (8 − 4(2N+1)/N) + ξ²(8/N − 16(N+1)/N + 8(2N+1)/N) = −4/N + 0·ξ².
        let h2 = families::hermite(2);
        for big_n in [int(1), int(4), ratio(5, 3)] {
            let res = ode_residual(&h2, 2, &big_n, OdeKind::Abns);
            assert_eq!(res, Poly::constant(int(-4) / &big_n));
        }
    }

    #[test]
    fn composition_constant_low_orders() {
        let v = Verifier::new();
        assert_eq!(degree_k(2, &int(1)), int(-12));
        assert_eq!(degree_k(0, &int(1)), int(-2));
        for big_n in n_grid() {
            for n in 0..6 {
                assert!(v.composition_check(n, &big_n).unwrap().holds());
            }
        }
    }

    #[test]
    fn commuting_path_scalar() {
        let v = Verifier::new();
        assert_eq!(shift_round_trip_scalar(1, &int(2)), int(-30));
        for big_n in [int(1), ratio(3, 2), int(5)] {
            for n in 0..8 {
                let r = v.commuting_path_check(n, &big_n).unwrap();
                assert!(r.holds(), "n={n} N={big_n}: {}", r.difference);
            }
        }
    }

    #[test]
    fn fault_is_detected() {
        let v = Verifier::with_fault(Fault::FlipF2Constant);
        let r = v.degree_ladder_check(1, &int(1), Direction::Up).unwrap();
        assert!(!r.holds());
        assert!(!v.ode_check(2, &int(1), OdeKind::Abns).unwrap().holds());
        let clean = Verifier::new();
        assert!(clean.ode_check(2, &int(1), OdeKind::Abns).unwrap().holds());
    }

    #[test]
    fn suite_skips_out_of_domain_rows() {
        let rows = Verifier::new().run_suite(Suite::Shift, 5, &[int(1)], &[]);
        let (skipped, checked): (Vec<_>, Vec<_>) = rows
            .iter()
            .partition(|r| matches!(r, SuiteEntry::Skipped { .. }));
        assert_eq!(skipped.len(), 6);
        assert!(skipped
            .iter()
            .all(|r| r.id() == IdentityId::Shift(Direction::Down)));
        assert_eq!(checked.len(), 6);
        assert!(checked.iter().all(|r| !r.failed()));
    }
}
