//! Numeric factorization of a family of second-order linear ODEs
//!
//! ```text
//! P(ξ) y_s″ + Q_s(ξ) y_s′ + R_s(ξ) y_s = 0
//! ```
//!
//! into first-order ladder operators `A_s^+ = f_s^+ d/dξ + g_s^+` and
//! `A_{s+1}^- = f_{s+1}^- d/dξ + g_{s+1}^-` with `A_{s+1}^- A_s^+ y_s = k_s y_s`.
//!
//! With `ΔQ = Q_{s+1} − Q_s`, `ΔR = R_{s+1} − R_s` and every antiderivative
//! anchored at the family's base point:
//!
//! ```text
//! E_s       = exp(½ ∫ ΔQ/P)
//! f_{s+1}^- = √P · E_s            f_s^+ = √P / E_s
//! W_s       = (Q_{s+1} + Q_s − P′) / (2√P)
//! J_s       = ∫ (ΔR/√P − W_s · ΔQ/(2P))
//! g_{s+1}^- = (E_s/2)(W_s + J_s + C)
//! g_s^+     = (W_s − J_s − C) / (2E_s)
//! ```
//!
//! `C` is the one free integration constant in the `g` coefficients. It
//! shifts `g^-` by a multiple of `E` and `g^+` by a multiple of `1/E`, leaves
//! the first-order conditions untouched and, unless it has the right value,
//! makes the pointwise `k` from `R_{s+1} + k = f^+ g^-′ + g^+ g^-` depend on
//! `ξ`. By default `C` is fitted so that this pointwise `k` is as flat as
//! possible over the grid (see [`IntegrationConstant`]).
//!
//! Derivatives of the constructed coefficients use a five-point stencil.
//! Integrals at the stencil points are the base integral plus a short
//! increment, so quadrature error at the base point cancels in the
//! difference quotient.

pub mod expr;
pub mod presets;
pub mod quad;

use thiserror::Error;

pub use quad::{integrate, integrate_with, QuadError, QuadOptions};

/// Coefficient evaluators of an ODE family indexed by a real parameter `s`.
pub trait OdeFamily: Send + Sync {
    fn p(&self, x: f64) -> f64;
    fn q(&self, s: f64, x: f64) -> f64;
    fn r(&self, s: f64, x: f64) -> f64;

    /// Analytic `P′`; when absent a central finite difference is used.
    fn dp(&self, _x: f64) -> Option<f64> {
        None
    }

    /// `(y_s(x), y_s′(x))`, when the family knows its solutions.
    fn solution(&self, _s: f64, _x: f64) -> Option<(f64, f64)> {
        None
    }
}

/// An ODE family together with the interval the engine samples and the
/// point where all antiderivatives vanish.
pub struct FamilySpec {
    pub name: String,
    pub family: Box<dyn OdeFamily>,
    /// Working sub-interval with `P > 0`.
    pub domain: (f64, f64),
    pub base_point: f64,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("base_point", &self.base_point)
            .finish_non_exhaustive()
    }
}

impl FamilySpec {
    /// `points` equally spaced samples covering the working interval,
    /// endpoints included.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        let (a, b) = self.domain;
        match points {
            0 => Vec::new(),
            1 => vec![0.5 * (a + b)],
            _ => (0..points)
                .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
                .collect(),
        }
    }

    fn width(&self) -> f64 {
        (self.domain.1 - self.domain.0).abs()
    }
}

/// How the free constant in the `g` coefficients is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationConstant {
    /// Least-squares choice that makes the pointwise `k` constant.
    Fit,
    /// Use this value as-is; `Fixed(0.0)` is the bare anchored antiderivative.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    pub quad: QuadOptions,
    /// Finite-difference step as a fraction of the working interval width.
    pub fd_step_factor: f64,
    /// Points with `|y_{s+1}|` below this fraction of its maximum are left
    /// out of the r-coefficient ratio.
    pub r_floor: f64,
    pub integration_constant: IntegrationConstant,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            quad: QuadOptions::default(),
            fd_step_factor: 1e-3,
            r_floor: 1e-6,
            integration_constant: IntegrationConstant::Fit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("P must be positive on the working grid, but P({x}) = {p}")]
    NonPositiveP { x: f64, p: f64 },
    #[error("the sample grid is empty")]
    EmptyGrid,
    #[error("non-finite coefficient at x = {0}")]
    NonFinite(f64),
    #[error("family `{0}` provides no solution evaluator")]
    NoSolution(String),
    #[error("every grid point is too close to a zero of y_(s+1)")]
    AllNearZeros,
}

/// Ladder coefficients and their derivatives at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderPoint {
    pub x: f64,
    pub e: f64,
    pub w: f64,
    pub f_plus: f64,
    pub f_minus: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub df_plus: f64,
    pub df_minus: f64,
    pub dg_plus: f64,
    pub dg_minus: f64,
}

/// Sampled `f_s^+, f_{s+1}^-, g_s^+, g_{s+1}^-` for one step `s → s+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericLadder {
    pub s: f64,
    pub points: Vec<LadderPoint>,
    pub integration_constant: f64,
    /// Grid mean of the pointwise `k_s`.
    pub k: f64,
    /// Largest `|k(x) − k|` over the grid.
    pub k_deviation: f64,
}

/// Five stencil samples `x + j·h`, `j = −2..=2`, of the raw quantities.
#[derive(Debug, Clone, Copy)]
struct RawPoint {
    x: f64,
    h: f64,
    sqrt_p: [f64; 5],
    e: [f64; 5],
    w: [f64; 5],
    j: [f64; 5],
}

fn fd5(v: &[f64; 5], h: f64) -> f64 {
    (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h)
}

impl RawPoint {
    fn ladder_point(&self, c: f64) -> LadderPoint {
        let mut f_plus = [0.0; 5];
        let mut f_minus = [0.0; 5];
        let mut g_plus = [0.0; 5];
        let mut g_minus = [0.0; 5];
        for i in 0..5 {
            f_minus[i] = self.sqrt_p[i] * self.e[i];
            f_plus[i] = self.sqrt_p[i] / self.e[i];
            g_minus[i] = 0.5 * self.e[i] * (self.w[i] + self.j[i] + c);
            g_plus[i] = (self.w[i] - self.j[i] - c) / (2.0 * self.e[i]);
        }
        LadderPoint {
            x: self.x,
            e: self.e[2],
            w: self.w[2],
            f_plus: f_plus[2],
            f_minus: f_minus[2],
            g_plus: g_plus[2],
            g_minus: g_minus[2],
            df_plus: fd5(&f_plus, self.h),
            df_minus: fd5(&f_minus, self.h),
            dg_plus: fd5(&g_plus, self.h),
            dg_minus: fd5(&g_minus, self.h),
        }
    }
}

/// Pointwise `k` from `R_{s+1} + k = f_s^+ g_{s+1}^-′ + g_s^+ g_{s+1}^-`.
fn pointwise_k(spec: &FamilySpec, s: f64, pt: &LadderPoint) -> f64 {
    pt.f_plus * pt.dg_minus + pt.g_plus * pt.g_minus - spec.family.r(s + 1.0, pt.x)
}

struct Context<'a> {
    spec: &'a FamilySpec,
    s: f64,
    h: f64,
    opts: &'a EngineOptions,
}

impl Context<'_> {
    fn p(&self, x: f64) -> f64 {
        self.spec.family.p(x)
    }

    fn dp(&self, x: f64) -> f64 {
        self.spec.family.dp(x).unwrap_or_else(|| {
            let h = self.h;
            let v = [
                self.p(x - 2.0 * h),
                self.p(x - h),
                0.0,
                self.p(x + h),
                self.p(x + 2.0 * h),
            ];
            fd5(&v, h)
        })
    }

    fn delta_q_over_p(&self, x: f64) -> f64 {
        let f = &self.spec.family;
        (f.q(self.s + 1.0, x) - f.q(self.s, x)) / self.p(x)
    }

    fn w(&self, x: f64) -> f64 {
        let f = &self.spec.family;
        (f.q(self.s + 1.0, x) + f.q(self.s, x) - self.dp(x)) / (2.0 * self.p(x).sqrt())
    }

    fn j_integrand(&self, x: f64) -> f64 {
        let f = &self.spec.family;
        let dr = f.r(self.s + 1.0, x) - f.r(self.s, x);
        dr / self.p(x).sqrt() - 0.5 * self.w(x) * self.delta_q_over_p(x)
    }

    /// Integrand value, replaced by its extrapolated one-sided limit when the
    /// formula is singular at `x` (e.g. `0/0` where `P` vanishes at the base
    /// point).
    fn regular(&self, f: impl Fn(f64) -> f64, x: f64, toward: f64) -> f64 {
        let v = f(x);
        if v.is_finite() {
            return v;
        }
        let scale = self.spec.width().max(x.abs()).max(1.0);
        let d = if toward >= x { 1e-7 } else { -1e-7 } * scale;
        2.0 * f(x + d) - f(x + 2.0 * d)
    }

    fn integral(&self, f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64) -> Result<f64, QuadError> {
        integrate_with(|t| self.regular(f, t, b), a, b, &self.opts.quad)
    }

    fn raw_point(&self, x: f64) -> Result<RawPoint, EngineError> {
        let base = self.spec.base_point;
        let dq = |t: f64| self.delta_q_over_p(t);
        let ji = |t: f64| self.j_integrand(t);
        let ie0 = self.integral(dq, base, x)?;
        let j0 = self.integral(ji, base, x)?;
        let mut raw = RawPoint {
            x,
            h: self.h,
            sqrt_p: [0.0; 5],
            e: [0.0; 5],
            w: [0.0; 5],
            j: [0.0; 5],
        };
        for (i, off) in (-2i32..=2).enumerate() {
            let xi = x + off as f64 * self.h;
            let p = self.p(xi);
            if p.is_nan() || p <= 0.0 {
                return Err(EngineError::NonPositiveP { x: xi, p });
            }
            let (ie, j) = if off == 0 {
                (ie0, j0)
            } else {
                (
                    ie0 + self.integral(dq, x, xi)?,
                    j0 + self.integral(ji, x, xi)?,
                )
            };
            raw.sqrt_p[i] = p.sqrt();
            raw.e[i] = (0.5 * ie).exp();
            raw.w[i] = self.w(xi);
            raw.j[i] = j;
        }
        if raw
            .e
            .iter()
            .chain(&raw.w)
            .chain(&raw.j)
            .any(|v| !v.is_finite())
        {
            return Err(EngineError::NonFinite(x));
        }
        Ok(raw)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Least-squares constant making `k0(x) + C·b(x)` as flat as possible.
fn flattening_constant(k0: &[f64], b: &[f64]) -> f64 {
    let (mk, mb) = (mean(k0), mean(b));
    let cov: f64 = k0.iter().zip(b).map(|(k, b)| (k - mk) * (b - mb)).sum();
    let var: f64 = b.iter().map(|b| (b - mb) * (b - mb)).sum();
    let scale: f64 = b.iter().map(|b| b * b).sum::<f64>() + 1.0;
    if var <= 1e-24 * scale {
        0.0
    } else {
        -cov / var
    }
}

/// Samples the ladder coefficients for the step `s → s+1` on `grid`.
pub fn build_coefficients(
    spec: &FamilySpec,
    s: f64,
    grid: &[f64],
    opts: &EngineOptions,
) -> Result<NumericLadder, EngineError> {
    if grid.is_empty() {
        return Err(EngineError::EmptyGrid);
    }
    for &x in grid {
        let p = spec.family.p(x);
        if p.is_nan() || p <= 0.0 {
            return Err(EngineError::NonPositiveP { x, p });
        }
    }
    let width = spec.width();
    let ctx = Context {
        spec,
        s,
        h: opts.fd_step_factor * if width > 0.0 { width } else { 1.0 },
        opts,
    };
    let raw = grid
        .iter()
        .map(|&x| ctx.raw_point(x))
        .collect::<Result<Vec<_>, _>>()?;

    let k_with = |c: f64| -> Vec<f64> {
        raw.iter()
            .map(|r| pointwise_k(spec, s, &r.ladder_point(c)))
            .collect()
    };
    let c = match opts.integration_constant {
        IntegrationConstant::Fixed(c) => c,
        IntegrationConstant::Fit => {
            // k(x; C) = k0(x) + C·b(x) − C²/4, so b is the odd part in C.
            let k0 = k_with(0.0);
            let (kp, km) = (k_with(1.0), k_with(-1.0));
            let b: Vec<f64> = kp.iter().zip(&km).map(|(p, m)| 0.5 * (p - m)).collect();
            flattening_constant(&k0, &b)
        }
    };
    let points: Vec<LadderPoint> = raw.iter().map(|r| r.ladder_point(c)).collect();
    let ks: Vec<f64> = points.iter().map(|p| pointwise_k(spec, s, p)).collect();
    let k = mean(&ks);
    let k_deviation = ks.iter().map(|v| (v - k).abs()).fold(0.0, f64::max);
    Ok(NumericLadder {
        s,
        points,
        integration_constant: c,
        k,
        k_deviation,
    })
}

/// Per-point residuals of the five sufficient conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResiduals {
    pub x: f64,
    /// `|P − f^+ f^-| / |P|`
    pub p_product: f64,
    /// `Q_{s+1} − (f^+ f^-′ + f^+ g^- + f^- g^+)`
    pub q_upper: f64,
    /// `Q_s − (f^- f^+′ + f^- g^+ + f^+ g^-)`
    pub q_lower: f64,
    /// `R_{s+1} + k − (f^+ g^-′ + g^+ g^-)`
    pub r_upper: f64,
    /// `R_s + k − (f^- g^+′ + g^+ g^-)`
    pub r_lower: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub points: Vec<ConditionResiduals>,
    pub max_p_product: f64,
    pub max_q_upper: f64,
    pub max_q_lower: f64,
    pub max_r_upper: f64,
    pub max_r_lower: f64,
}

impl ConditionReport {
    /// Largest absolute residual among the four derivative conditions.
    pub fn max_residual(&self) -> f64 {
        self.max_q_upper
            .max(self.max_q_lower)
            .max(self.max_r_upper)
            .max(self.max_r_lower)
    }
}

pub fn check_conditions(spec: &FamilySpec, ladder: &NumericLadder) -> ConditionReport {
    let s = ladder.s;
    let k = ladder.k;
    let f = &spec.family;
    let points: Vec<ConditionResiduals> = ladder
        .points
        .iter()
        .map(|pt| {
            let x = pt.x;
            let p = f.p(x);
            let cross = pt.f_plus * pt.g_minus + pt.f_minus * pt.g_plus;
            let gg = pt.g_plus * pt.g_minus;
            ConditionResiduals {
                x,
                p_product: ((p - pt.f_plus * pt.f_minus) / p).abs(),
                q_upper: f.q(s + 1.0, x) - (pt.f_plus * pt.df_minus + cross),
                q_lower: f.q(s, x) - (pt.f_minus * pt.df_plus + cross),
                r_upper: f.r(s + 1.0, x) + k - (pt.f_plus * pt.dg_minus + gg),
                r_lower: f.r(s, x) + k - (pt.f_minus * pt.dg_plus + gg),
            }
        })
        .collect();
    let max_of =
        |g: fn(&ConditionResiduals) -> f64| points.iter().map(|c| g(c).abs()).fold(0.0, f64::max);
    ConditionReport {
        max_p_product: max_of(|c| c.p_product),
        max_q_upper: max_of(|c| c.q_upper),
        max_q_lower: max_of(|c| c.q_lower),
        max_r_upper: max_of(|c| c.r_upper),
        max_r_lower: max_of(|c| c.r_lower),
        points,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KEstimate {
    pub k: f64,
    pub max_deviation: f64,
}

/// `k_s` averaged over the grid from the upper `R` condition, with the
/// largest pointwise departure as a constancy diagnostic.
pub fn estimate_k(spec: &FamilySpec, ladder: &NumericLadder) -> KEstimate {
    let ks: Vec<f64> = ladder
        .points
        .iter()
        .map(|p| pointwise_k(spec, ladder.s, p))
        .collect();
    let k = mean(&ks);
    KEstimate {
        k,
        max_deviation: ks.iter().map(|v| (v - k).abs()).fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct REstimate {
    pub r_plus: f64,
    pub r_minus: f64,
    pub max_deviation: f64,
    pub points_used: usize,
}

/// Empirical split of `k_s` into `r_s^+ = (A_s^+ y_s)/y_{s+1}` and
/// `r_{s+1}^- = k_s / r_s^+`. The factorization itself only fixes `k_s`;
/// this reads the raising scalar off the family's own solutions.
pub fn estimate_r(
    spec: &FamilySpec,
    ladder: &NumericLadder,
    opts: &EngineOptions,
) -> Result<REstimate, EngineError> {
    let s = ladder.s;
    let f = &spec.family;
    let mut samples = Vec::with_capacity(ladder.points.len());
    for pt in &ladder.points {
        let (y, dy) = f
            .solution(s, pt.x)
            .ok_or_else(|| EngineError::NoSolution(spec.name.clone()))?;
        let (y_next, _) = f
            .solution(s + 1.0, pt.x)
            .ok_or_else(|| EngineError::NoSolution(spec.name.clone()))?;
        samples.push((pt.f_plus * dy + pt.g_plus * y, y_next));
    }
    let peak = samples.iter().map(|(_, y)| y.abs()).fold(0.0, f64::max);
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|(_, y)| y.abs() >= opts.r_floor * peak && y.abs() > 0.0)
        .map(|(a, y)| a / y)
        .collect();
    if ratios.is_empty() {
        return Err(EngineError::AllNearZeros);
    }
    let r_plus = mean(&ratios);
    let max_deviation = ratios
        .iter()
        .map(|v| (v - r_plus).abs())
        .fold(0.0, f64::max);
    Ok(REstimate {
        r_plus,
        r_minus: ladder.k / r_plus,
        max_deviation,
        points_used: ratios.len(),
    })
}

/// Everything one engine run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoRun {
    pub ladder: NumericLadder,
    pub conditions: ConditionReport,
    pub k: KEstimate,
    /// `None` when the family has no solution evaluator.
    pub r: Option<Result<REstimate, EngineError>>,
}

pub fn run(
    spec: &FamilySpec,
    s: f64,
    grid: &[f64],
    opts: &EngineOptions,
) -> Result<FactoRun, EngineError> {
    let ladder = build_coefficients(spec, s, grid, opts)?;
    let conditions = check_conditions(spec, &ladder);
    let k = estimate_k(spec, &ladder);
    let has_solution = spec.family.solution(s, grid[0]).is_some();
    let r = has_solution.then(|| estimate_r(spec, &ladder, opts));
    Ok(FactoRun {
        ladder,
        conditions,
        k,
        r,
    })
}
