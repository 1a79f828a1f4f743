use std::path::Path;

use abns::exact::rational::to_f64;
use abns::factoengine::expr::parse_family_file;
use abns::factoengine::presets::Preset;
use abns::factoengine::{run, EngineError, EngineOptions, IntegrationConstant, QuadOptions};
use abns::families::{self, hermite_distance};
use abns::identities::{Fault, IdentityId, OdeKind, Suite, SuiteEntry, Verifier};
use abns::zeros::{abns_zeros, mapped_gegenbauer_zeros, ZeroError};
use abns::{Poly, Rational};
use num_traits::{Signed, Zero};

use crate::args::{
    FactoArgs, FamilyName, FaultName, GenArgs, LimitArgs, PresetName, SuiteName, VerifyArgs,
    ZerosArgs,
};
use crate::output::{FactoRecord, GenRecord, LimitRecord, VerifyRecord, ZeroRecord};
use crate::CliError;

/// Records to print, plus a failure to report after printing them.
pub struct Report<R> {
    pub records: Vec<R>,
    pub failure: Option<String>,
}

fn exact_coefficients(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn unused(flag: &str, what: &str) -> CliError {
    CliError::Usage(format!("{flag} does not apply to {what}"))
}

pub fn gen(args: &GenArgs) -> Result<Report<GenRecord>, CliError> {
    let mut records = Vec::new();
    match args.family {
        FamilyName::Abns => {
            if args.alpha.is_some() {
                return Err(unused("--alpha", "gen abns"));
            }
            let big_ns = args
                .big_n
                .as_ref()
                .ok_or_else(|| CliError::Usage("gen abns requires --N".into()))?;
            let n_max = *args.n.0.last().expect("parser rejects empty lists");
            for big_n in &big_ns.0 {
                let seq = families::abns_sequence(n_max, big_n)
                    .map_err(|e| CliError::Usage(format!("--N: {e}")))?;
                for &n in &args.n.0 {
                    records.push(GenRecord {
                        family: "abns".into(),
                        n,
                        param: Some(big_n.to_string()),
                        coefficients: exact_coefficients(&seq[n]),
                    });
                }
            }
        }
        FamilyName::Gegenbauer => {
            if args.big_n.is_some() {
                return Err(unused("--N", "gen gegenbauer"));
            }
            let alphas = args
                .alpha
                .as_ref()
                .ok_or_else(|| CliError::Usage("gen gegenbauer requires --alpha".into()))?;
            let n_max = *args.n.0.last().expect("parser rejects empty lists");
            for alpha in &alphas.0 {
                let seq = families::gegenbauer_sequence(n_max, alpha);
                for &n in &args.n.0 {
                    records.push(GenRecord {
                        family: "gegenbauer".into(),
                        n,
                        param: Some(alpha.to_string()),
                        coefficients: exact_coefficients(&seq[n]),
                    });
                }
            }
        }
        FamilyName::Hermite => {
            if args.big_n.is_some() {
                return Err(unused("--N", "gen hermite"));
            }
            if args.alpha.is_some() {
                return Err(unused("--alpha", "gen hermite"));
            }
            let n_max = *args.n.0.last().expect("parser rejects empty lists");
            let seq = families::hermite_sequence(n_max);
            for &n in &args.n.0 {
                records.push(GenRecord {
                    family: "hermite".into(),
                    n,
                    param: None,
                    coefficients: exact_coefficients(&seq[n]),
                });
            }
        }
    }
    records.sort_by_key(|r| r.n);
    Ok(Report {
        records,
        failure: None,
    })
}

fn suite(name: SuiteName) -> Suite {
    match name {
        SuiteName::Degree => Suite::Degree,
        SuiteName::Param => Suite::Param,
        SuiteName::Nagel => Suite::Nagel,
        SuiteName::Shift => Suite::Shift,
        SuiteName::Ode => Suite::Ode,
        SuiteName::Composition => Suite::Composition,
        SuiteName::All => Suite::All,
    }
}

fn param_name(id: IdentityId) -> &'static str {
    match id {
        IdentityId::ParamLadder(_) | IdentityId::Ode(OdeKind::Gegenbauer) => "alpha",
        _ => "N",
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Report<VerifyRecord>, CliError> {
    let verifier = match args.inject_fault {
        Some(FaultName::F2Constant) => Verifier::with_fault(Fault::FlipF2Constant),
        None => Verifier::new(),
    };
    let rows = verifier.run_suite(suite(args.suite), args.n_max, &args.big_n.0, &args.alpha.0);
    let mut failed = 0usize;
    let records: Vec<VerifyRecord> = rows
        .into_iter()
        .map(|row| {
            let id = row.id();
            let (status, residual, note) = match &row {
                SuiteEntry::Checked(r) if r.holds() => ("pass", Vec::new(), None),
                SuiteEntry::Checked(r) => {
                    failed += 1;
                    (
                        "fail",
                        exact_coefficients(&r.difference),
                        Some(format!("residual {}", r.difference)),
                    )
                }
                SuiteEntry::Skipped { reason, .. } => (
                    "skipped",
                    Vec::new(),
                    Some(format!("skipped: out of domain ({reason})")),
                ),
            };
            VerifyRecord {
                identity: id.name().into(),
                n: row.n(),
                param_name: param_name(id).into(),
                param: row.param().to_string(),
                status: status.into(),
                residual,
                note,
            }
        })
        .collect();
    let failure = (failed > 0).then(|| format!("{failed} identity check(s) failed"));
    Ok(Report { records, failure })
}

pub fn facto(args: &FactoArgs) -> Result<Report<FactoRecord>, CliError> {
    let (spec, s) = match (args.preset, &args.expr) {
        (Some(preset), _) => {
            if args.s.is_some() {
                return Err(CliError::Usage(
                    "--s applies only to --expr families".into(),
                ));
            }
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--n is required with --preset".into()))?;
            let (preset, param) = match preset {
                PresetName::AbnsDegree => {
                    if args.alpha.is_some() {
                        return Err(unused("--alpha", "the abns-degree preset"));
                    }
                    let big_n = args.big_n.as_ref().ok_or_else(|| {
                        CliError::Usage("--N is required with --preset abns-degree".into())
                    })?;
                    (Preset::AbnsDegree, big_n)
                }
                PresetName::GegenbauerParam => {
                    if args.big_n.is_some() {
                        return Err(unused("--N", "the gegenbauer-param preset"));
                    }
                    let alpha = args.alpha.as_ref().ok_or_else(|| {
                        CliError::Usage("--alpha is required with --preset gegenbauer-param".into())
                    })?;
                    (Preset::GegenbauerParam, alpha)
                }
            };
            preset
                .build(n, param)
                .map_err(|e| CliError::Usage(format!("--preset: {e}")))?
        }
        (None, Some(path)) => {
            for (flag, set) in [
                ("--n", args.n.is_some()),
                ("--N", args.big_n.is_some()),
                ("--alpha", args.alpha.is_some()),
            ] {
                if set {
                    return Err(unused(flag, "--expr families"));
                }
            }
            let s = args
                .s
                .ok_or_else(|| CliError::Usage("--s is required with --expr".into()))?;
            (read_family(path)?, s)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --preset or --expr is required".into(),
            ))
        }
    };

    let opts = EngineOptions {
        quad: QuadOptions {
            tol: args.tol,
            ..QuadOptions::default()
        },
        integration_constant: args
            .constant
            .map_or(IntegrationConstant::Fit, IntegrationConstant::Fixed),
        ..EngineOptions::default()
    };
    let grid = spec.grid(args.points as usize);
    let out = run(&spec, s, &grid, &opts).map_err(|e| match e {
        EngineError::Quadrature(q) => {
            let (a, b) = q.interval();
            CliError::Failure(format!("quadrature failed on sub-interval [{a}, {b}]: {q}"))
        }
        other => CliError::Failure(other.to_string()),
    })?;

    let r = match &out.r {
        Some(Ok(r)) => Some(*r),
        Some(Err(e)) => {
            eprintln!("warning: no r estimate: {e}");
            None
        }
        None => None,
    };
    let max_residual = out.conditions.max_residual();
    let records = out
        .ladder
        .points
        .iter()
        .zip(&out.conditions.points)
        .map(|(pt, res)| FactoRecord {
            family: spec.name.clone(),
            s,
            x: pt.x,
            e: pt.e,
            w: pt.w,
            f_plus: pt.f_plus,
            f_minus: pt.f_minus,
            g_plus: pt.g_plus,
            g_minus: pt.g_minus,
            res_p: res.p_product,
            res_q_upper: res.q_upper,
            res_q_lower: res.q_lower,
            res_r_upper: res.r_upper,
            res_r_lower: res.r_lower,
            k: out.k.k,
            k_deviation: out.k.max_deviation,
            max_residual,
            integration_constant: out.ladder.integration_constant,
            r_plus: r.map(|r| r.r_plus),
            r_minus: r.map(|r| r.r_minus),
            r_deviation: r.map(|r| r.max_deviation),
            tol: args.tol,
        })
        .collect();
    let failure = if max_residual > args.check_tol || out.k.max_deviation > args.check_tol {
        Some(format!(
            "condition residual {max_residual:e} / k deviation {:e} exceed --check-tol {:e}",
            out.k.max_deviation, args.check_tol
        ))
    } else {
        None
    };
    Ok(Report { records, failure })
}

fn read_family(path: &Path) -> Result<abns::factoengine::FamilySpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--expr {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map_or_else(|| "expr".to_string(), |s| s.to_string_lossy().into_owned());
    parse_family_file(&name, &text)
        .map_err(|e| CliError::Usage(format!("--expr {}: {e}", path.display())))
}

pub fn zeros(args: &ZerosArgs) -> Result<Report<ZeroRecord>, CliError> {
    if args.n.0.first() == Some(&0) {
        return Err(CliError::Usage("--n: degree must be at least 1".into()));
    }
    let tol = &args.tol;
    let two_tol = tol * Rational::from_integer(2.into());
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &n in &args.n.0 {
        for big_n in &args.big_n.0 {
            let direct = match abns_zeros(n, big_n, tol) {
                Ok(r) => r,
                Err(e @ ZeroError::RootCountMismatch { .. }) => {
                    return Err(CliError::Failure(e.to_string()))
                }
                Err(e) => return Err(CliError::Failure(format!("n={n} N={big_n}: {e}"))),
            };
            let mapped = mapped_gegenbauer_zeros(n, big_n, tol)
                .map_err(|e| CliError::Failure(format!("n={n} N={big_n}: Gegenbauer map: {e}")))?;
            if mapped.len() != direct.len() {
                return Err(CliError::Failure(format!(
                    "n={n} N={big_n}: {} zeros but {} through the Gegenbauer map",
                    direct.len(),
                    mapped.len()
                )));
            }
            for (index, (d, m)) in direct.roots.iter().zip(&mapped.roots).enumerate() {
                let gap = (d.midpoint() - m.midpoint()).abs();
                if gap > two_tol {
                    failures.push(format!(
                        "n={n} N={big_n} zero {index}: map gap {}",
                        to_f64(&gap)
                    ));
                }
                records.push(ZeroRecord {
                    n,
                    big_n: big_n.to_string(),
                    index,
                    root: d.midpoint_f64(),
                    lo: to_f64(&d.lo),
                    hi: to_f64(&d.hi),
                    mapped: m.midpoint_f64(),
                    map_gap: to_f64(&gap),
                    tol: to_f64(tol),
                });
            }
        }
    }
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Report { records, failure })
}

pub fn limit(args: &LimitArgs) -> Result<Report<LimitRecord>, CliError> {
    let mut records = Vec::new();
    for &n in &args.n.0 {
        let mut prev: Option<Rational> = None;
        for big_n in &args.big_n.0 {
            let d = hermite_distance(n, big_n).map_err(|e| CliError::Usage(format!("--N: {e}")))?;
            let distance = to_f64(&d);
            let ratio = match &prev {
                Some(p) if !d.is_zero() => Some(to_f64(&(p / &d))),
                _ => None,
            };
            records.push(LimitRecord {
                n,
                big_n: big_n.to_string(),
                distance,
                distance_exact: d.to_string(),
                ratio,
                tol: distance * f64::EPSILON,
            });
            prev = Some(d);
        }
    }
    Ok(Report {
        records,
        failure: None,
    })
}
