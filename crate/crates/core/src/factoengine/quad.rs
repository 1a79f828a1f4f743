//! Adaptive Simpson quadrature with absolute error control.

use std::cell::Cell;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand is not finite at {x} (sub-interval [{a}, {b}])")]
    NonFinite { x: f64, a: f64, b: f64 },
    #[error("no convergence on sub-interval [{a}, {b}] within the depth limit")]
    DepthExceeded { a: f64, b: f64 },
    #[error("evaluation budget exhausted on sub-interval [{a}, {b}]")]
    BudgetExhausted { a: f64, b: f64 },
    #[error("integration bounds must be finite, got [{a}, {b}]")]
    InfiniteBounds { a: f64, b: f64 },
}

impl QuadError {
    /// The sub-interval where quadrature gave up.
    pub fn interval(&self) -> (f64, f64) {
        match *self {
            QuadError::NonFinite { a, b, .. }
            | QuadError::DepthExceeded { a, b }
            | QuadError::BudgetExhausted { a, b }
            | QuadError::InfiniteBounds { a, b } => (a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target for the whole integral.
    pub tol: f64,
    /// Total integrand evaluations allowed.
    pub max_evals: usize,
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-10,
            max_evals: 1_000_000,
            max_depth: 60,
        }
    }
}

/// `∫_a^b f` to absolute accuracy `tol` with the default budget.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadError> {
    integrate_with(
        f,
        a,
        b,
        &QuadOptions {
            tol,
            ..QuadOptions::default()
        },
    )
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<f64, QuadError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InfiniteBounds { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_with(f, b, a, opts).map(|v| -v);
    }
    let evals = Cell::new(0usize);
    let eval = |x: f64, lo: f64, hi: f64| -> Result<f64, QuadError> {
        evals.set(evals.get() + 1);
        if evals.get() > opts.max_evals {
            return Err(QuadError::BudgetExhausted { a: lo, b: hi });
        }
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x, a: lo, b: hi })
        }
    };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (eval(a, a, b)?, eval(m, a, b)?, eval(b, a, b)?);
    let whole = simpson(a, b, fa, fm, fb);
    refine(&eval, a, m, b, fa, fm, fb, whole, opts.tol, opts.max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<E>(
    eval: &E,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError>
where
    E: Fn(f64, f64, f64) -> Result<f64, QuadError>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm, a, b)?;
    let frm = eval(rm, a, b)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // The second test stops splitting once the estimate is limited by
    // rounding rather than by the rule.
    if delta.abs() <= 15.0 * tol || delta.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs())
    {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || lm <= a || rm >= b {
        return Err(QuadError::DepthExceeded { a, b });
    }
    let l = refine(eval, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = refine(eval, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_integrals() {
        assert_eq!(integrate(|_| 0.0, 0.0, 1.0, 1e-10).unwrap(), 0.0);
        assert!((integrate(|x| 2.0 * x, 0.0, 1.0, 1e-10).unwrap() - 1.0).abs() <= 1e-10);
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn log_antiderivative() {
        let v = integrate(|t| -2.0 * t / (1.0 + t * t), 0.0, 1.0, 1e-10).unwrap();
        assert!((v + std::f64::consts::LN_2).abs() <= 1e-10, "{v}");
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let fwd = integrate(f64::exp, 0.0, 1.0, 1e-12).unwrap();
        let back = integrate(f64::exp, 1.0, 0.0, 1e-12).unwrap();
        assert!((fwd + back).abs() < 1e-15);
        assert!((fwd - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn singularity_is_reported_with_interval() {
        let err = integrate(|x| 1.0 / (x - 0.3).abs().sqrt(), 0.0, 1.0, 1e-12).unwrap_err();
        let (a, b) = err.interval();
        assert!(a - 1e-6 <= 0.3 && 0.3 <= b + 1e-6, "{err}");
    }

    #[test]
    fn non_finite_value_is_reported() {
        let err = integrate(|x| if x == 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite { x, .. } if x == 0.5));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = QuadOptions {
            tol: 1e-14,
            max_evals: 50,
            max_depth: 60,
        };
        let err = integrate_with(|x: f64| (40.0 * x).sin(), 0.0, 3.0, &opts).unwrap_err();
        assert!(matches!(err, QuadError::BudgetExhausted { .. }));
    }
}
