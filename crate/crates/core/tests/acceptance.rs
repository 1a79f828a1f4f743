//! Acceptance suite. Prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p abns --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use abns::exact::rational::{int, parse_decimal, parse_rational, ratio, to_f64};
use abns::factoengine::presets::{abns_degree, gegenbauer_param};
use abns::factoengine::{run, EngineOptions};
use abns::families::hermite_distance;
use abns::identities::{degree_k, Direction, IdentityId, OdeKind, Verifier};
use abns::zeros::{abns_zeros, mapped_gegenbauer_zeros};
use abns::Rational;

const EXACT_N_MAX: usize = 30;
const COMPOSITION_N_MAX: usize = 20;
const EXACT_BUDGET: Duration = Duration::from_secs(10);
const ENGINE_BUDGET: Duration = Duration::from_secs(30);
const ENGINE_TOL: f64 = 1e-6;
const R_TOL: f64 = 1e-6;
const LIMIT_RATIO: (f64, f64) = (5.0, 20.0);
const ZEROS_TOL: &str = "1e-9";

fn big_ns() -> Vec<Rational> {
    ["1", "3/2", "2", "5", "10", "137"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect()
}

fn alphas() -> Vec<Rational> {
    vec![ratio(1, 2), int(1), int(2), int(5), int(10)]
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Degree, parameter, Nagel and shift identities are exact zero polynomials.
fn exact_identities() -> Outcome {
    let start = Instant::now();
    let v = Verifier::new();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut note = |id: IdentityId, n: usize, p: &Rational, ok: bool| {
        checked += 1;
        if !ok {
            failures.push(format!("{id} n={n} param={p}"));
        }
    };
    for n in 0..=EXACT_N_MAX {
        for big_n in big_ns() {
            for dir in [Direction::Up, Direction::Down] {
                let id = IdentityId::DegreeLadder(dir);
                match v.degree_ladder_check(n, &big_n, dir) {
                    Ok(r) => note(id, n, &big_n, r.holds()),
                    // Lowering from degree 0 has no target.
                    Err(_) if dir == Direction::Down && n == 0 => {}
                    Err(_) => note(id, n, &big_n, false),
                }
            }
            note(
                IdentityId::Nagel,
                n,
                &big_n,
                v.nagel_check(n, &big_n).is_ok_and(|r| r.holds()),
            );
            note(
                IdentityId::Shift(Direction::Up),
                n,
                &big_n,
                v.shift_check(n, &big_n, Direction::Up)
                    .is_ok_and(|r| r.holds()),
            );
            if big_n > int(1) {
                note(
                    IdentityId::Shift(Direction::Down),
                    n,
                    &big_n,
                    v.shift_check(n, &big_n, Direction::Down)
                        .is_ok_and(|r| r.holds()),
                );
            }
        }
        for alpha in alphas() {
            for dir in [Direction::Up, Direction::Down] {
                if dir == Direction::Down && alpha == int(1) {
                    continue;
                }
                let id = IdentityId::ParamLadder(dir);
                note(
                    id,
                    n,
                    &alpha,
                    v.param_ladder_check(n, &alpha, dir)
                        .is_ok_and(|r| r.holds()),
                );
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < EXACT_BUDGET,
        format!(
            "{checked} checks, {} nonzero, {:.2?} (budget {EXACT_BUDGET:?}){}",
            failures.len(),
            elapsed,
            failures
                .first()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        ),
    )
}

fn ode_certificates() -> Outcome {
    let v = Verifier::new();
    let mut checked = 0usize;
    let mut failures = 0usize;
    for n in 0..=EXACT_N_MAX {
        let grid = big_ns()
            .into_iter()
            .map(|p| (p, OdeKind::Abns))
            .chain(alphas().into_iter().map(|a| (a, OdeKind::Gegenbauer)));
        for (param, kind) in grid {
            checked += 1;
            if !v.ode_check(n, &param, kind).is_ok_and(|r| r.holds()) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} residuals, {failures} nonzero"),
    )
}

fn composition_constant() -> Outcome {
    let v = Verifier::new();
    let mut checked = 0usize;
    let mut failures = 0usize;
    for n in 0..=COMPOSITION_N_MAX {
        for big_n in big_ns() {
            checked += 1;
            // The check itself uses degree_k; pin the closed form independently.
            let nn = int(n as i64);
            let k = -(&nn + int(1)) * (int(2) * &big_n + &nn) / &big_n;
            if degree_k(n, &big_n) != k || !v.composition_check(n, &big_n).is_ok_and(|r| r.holds())
            {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} compositions, {failures} failed"),
    )
}

fn engine_reproduction() -> Outcome {
    let start = Instant::now();
    let opts = EngineOptions::default();
    let mut worst_coeff = 0.0f64;
    let mut worst_k = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut errors = Vec::new();
    for n in 0..=2usize {
        for big_n in [1i64, 2] {
            let spec = abns_degree(n, &int(big_n)).unwrap();
            let out = match run(&spec, n as f64, &spec.grid(41), &opts) {
                Ok(o) => o,
                Err(e) => {
                    errors.push(format!("abns n={n} N={big_n}: {e}"));
                    continue;
                }
            };
            let nf = big_n as f64;
            for pt in &out.ladder.points {
                let u2 = pt.x * pt.x / nf;
                let g_plus = -2.0 * (1.0 + n as f64 / nf) * pt.x;
                worst_coeff = worst_coeff
                    .max((pt.f_minus - 1.0).abs())
                    .max((pt.f_plus - (1.0 + u2)).abs())
                    .max(pt.g_minus.abs())
                    .max((pt.g_plus - g_plus).abs());
            }
            worst_k = worst_k.max(out.k.max_deviation);
            worst_res = worst_res.max(out.conditions.max_residual());
        }
    }
    for n in 1..=3usize {
        for alpha in [0.5, 1.0, 2.0, 5.0] {
            let spec = gegenbauer_param(n);
            let out = match run(&spec, alpha, &spec.grid(41), &opts) {
                Ok(o) => o,
                Err(e) => {
                    errors.push(format!("gegenbauer n={n} alpha={alpha}: {e}"));
                    continue;
                }
            };
            for pt in &out.ladder.points {
                let x = pt.x;
                worst_coeff = worst_coeff
                    .max((pt.f_plus - x).abs())
                    .max((pt.f_minus - x * (1.0 - x * x)).abs());
            }
            worst_k = worst_k.max(out.k.max_deviation);
            worst_res = worst_res.max(out.conditions.max_residual());
        }
    }
    let elapsed = start.elapsed();
    let pass = errors.is_empty()
        && worst_coeff < ENGINE_TOL
        && worst_k < ENGINE_TOL
        && worst_res < ENGINE_TOL
        && elapsed < ENGINE_BUDGET;
    outcome(
        pass,
        format!(
            "max coeff err {worst_coeff:.1e}, k deviation {worst_k:.1e}, condition residual {worst_res:.1e} \
             (tol {ENGINE_TOL:e}), {elapsed:.2?}{}",
            errors.first().map(|e| format!("; error: {e}")).unwrap_or_default()
        ),
    )
}

fn r_recovery() -> Outcome {
    let spec = abns_degree(0, &int(1)).unwrap();
    let out = run(&spec, 0.0, &spec.grid(41), &EngineOptions::default());
    match out.ok().and_then(|o| o.r).and_then(Result::ok) {
        Some(r) => outcome(
            (r.r_plus + 1.0).abs() < R_TOL && (r.r_minus - 2.0).abs() < R_TOL,
            format!(
                "r_0^+ = {:.9}, r_1^- = {:.9} (tol {R_TOL:e})",
                r.r_plus, r.r_minus
            ),
        ),
        None => outcome(false, "no r estimate"),
    }
}

fn hermite_limit() -> Outcome {
    let sweep = [int(100), int(1000), int(10000)];
    let mut ratios = Vec::new();
    let mut bad = Vec::new();
    for n in 0..=10usize {
        let d: Vec<Rational> = sweep
            .iter()
            .map(|big_n| hermite_distance(n, big_n).unwrap())
            .collect();
        if d.iter().all(|v| *v == int(0)) {
            // Degrees 0 and 1 coincide with Hermite for every N.
            continue;
        }
        for w in d.windows(2) {
            let ratio = to_f64(&w[0]) / to_f64(&w[1]);
            ratios.push(ratio);
            if !(w[1] < w[0]) || !(LIMIT_RATIO.0..=LIMIT_RATIO.1).contains(&ratio) {
                bad.push(format!("n={n} ratio {ratio:.3}"));
            }
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(*r), hi.max(*r))
        });
    outcome(
        bad.is_empty(),
        format!(
            "{} ratios in [{lo:.3}, {hi:.3}], required [{}, {}]; n = 0, 1 identical to Hermite{}",
            ratios.len(),
            LIMIT_RATIO.0,
            LIMIT_RATIO.1,
            bad.first()
                .map(|b| format!("; first bad: {b}"))
                .unwrap_or_default()
        ),
    )
}

fn zeros() -> Outcome {
    let tol = parse_decimal(ZEROS_TOL).unwrap();
    let two_tol = int(2) * &tol;
    let mut problems = Vec::new();
    let mut worst_gap = int(0);
    for n in 1..=20usize {
        for big_n in [int(1), int(5), int(100)] {
            let direct = match abns_zeros(n, &big_n, &tol) {
                Ok(r) => r,
                Err(e) => {
                    problems.push(format!("n={n} N={big_n}: {e}"));
                    continue;
                }
            };
            if direct.len() != n || direct.roots.iter().any(|r| r.width() > tol) {
                problems.push(format!("n={n} N={big_n}: {} roots", direct.len()));
                continue;
            }
            match mapped_gegenbauer_zeros(n, &big_n, &tol) {
                Ok(mapped) => match direct.max_midpoint_gap(&mapped) {
                    Some(gap) if gap <= two_tol => worst_gap = worst_gap.max(gap),
                    _ => problems.push(format!("n={n} N={big_n}: mapped zeros disagree")),
                },
                Err(e) => problems.push(format!("n={n} N={big_n}: {e}")),
            }
        }
    }
    // ±1/√3: an interval [a, b] of positive numbers contains 1/√3 iff 3a² ≤ 1 ≤ 3b².
    let sqrt3 = match abns_zeros(2, &int(1), &tol) {
        Ok(r) if r.len() == 2 => {
            let pos = &r.roots[1];
            let neg = &r.roots[0];
            let three = int(3);
            let encloses = |lo: &Rational, hi: &Rational| {
                &three * lo * lo <= int(1) && int(1) <= &three * hi * hi
            };
            encloses(&pos.lo, &pos.hi) && encloses(&-neg.hi.clone(), &-neg.lo.clone())
        }
        _ => false,
    };
    if !sqrt3 {
        problems.push("n=2 N=1 roots do not enclose ±1/√3".into());
    }
    outcome(
        problems.is_empty(),
        format!(
            "60 root sets, worst map gap {:.2e} (allowed {:.0e}){}",
            to_f64(&worst_gap),
            to_f64(&two_tol),
            problems
                .first()
                .map(|p| format!("; {p}"))
                .unwrap_or_default()
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("exact identity suite", exact_identities),
        ("ODE certificates", ode_certificates),
        ("composition constant", composition_constant),
        ("factorization engine reproduction", engine_reproduction),
        ("r-recovery", r_recovery),
        ("Hermite limit", hermite_limit),
        ("zeros", zeros),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!(
            "{} criterion {}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
