use std::path::PathBuf;

use abns::exact::rational::{parse_decimal, parse_rational};
use abns::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;

#[derive(Parser, Debug)]
#[command(name = "abns", version)]
#[command(
    about = "Exact generation, identity checks, ladder factorization and zeros of ABNS polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print exact coefficients of family members
    Gen(GenArgs),
    /// Check the exact identity suites
    Verify(VerifyArgs),
    /// Run the numeric factorization engine
    Facto(FactoArgs),
    /// Isolate and refine real zeros
    Zeros(ZerosArgs),
    /// Coefficient distance to the Hermite polynomial over an N sweep
    Limit(LimitArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    Abns,
    Gegenbauer,
    Hermite,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub family: FamilyName,

    /// Degrees: `3`, `0..5` (inclusive) or a comma list of either
    #[arg(long, value_parser = parse_degrees)]
    pub n: Degrees,

    /// Comma-separated N values (`p/q` or integers)
    #[arg(long = "N", value_name = "N", value_parser = parse_positive_list)]
    pub big_n: Option<RationalList>,

    /// Comma-separated Gegenbauer parameters
    #[arg(long, value_parser = parse_positive_list)]
    pub alpha: Option<RationalList>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Degree,
    Param,
    Nagel,
    Shift,
    Ode,
    Composition,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultName {
    /// Flip the sign of the constant term of F_2
    F2Constant,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Identity suite to run
    #[arg(long, value_enum, default_value_t = SuiteName::All)]
    pub suite: SuiteName,

    /// Highest degree checked
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,

    /// N grid for the ABNS identities
    #[arg(long = "N", value_name = "N", value_parser = parse_positive_list, default_value = "1")]
    pub big_n: RationalList,

    /// α grid for the Gegenbauer identities
    #[arg(long, value_parser = parse_positive_list, default_value = "1/2,1,2,5,10")]
    pub alpha: RationalList,

    /// Corrupt a generated polynomial (negative control)
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultName>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetName {
    AbnsDegree,
    GegenbauerParam,
}

#[derive(Args, Debug)]
pub struct FactoArgs {
    /// Built-in family
    #[arg(
        long,
        value_enum,
        conflicts_with = "expr",
        required_unless_present = "expr"
    )]
    pub preset: Option<PresetName>,

    /// Family file with P, Q, R (and optionally y, dy, domain, base)
    #[arg(long)]
    pub expr: Option<PathBuf>,

    /// Degree for the presets
    #[arg(long)]
    pub n: Option<usize>,

    /// N for the abns-degree preset
    #[arg(long = "N", value_name = "N", value_parser = parse_positive)]
    pub big_n: Option<Rational>,

    /// α for the gegenbauer-param preset
    #[arg(long, value_parser = parse_positive)]
    pub alpha: Option<Rational>,

    /// Ladder index for an expression family
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,

    /// Grid points across the working interval
    #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive_f64)]
    pub tol: f64,

    /// Use this integration constant instead of fitting it
    #[arg(long, allow_negative_numbers = true)]
    pub constant: Option<f64>,

    /// Exit with status 1 when a condition residual or the k deviation exceeds this
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive_f64)]
    pub check_tol: f64,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    /// Degrees (each at least 1)
    #[arg(long, value_parser = parse_degrees)]
    pub n: Degrees,

    /// Comma-separated N values
    #[arg(long = "N", value_name = "N", value_parser = parse_positive_list)]
    pub big_n: RationalList,

    /// Enclosure width, read exactly (`1e-9`, `0.001`, `1/1024`)
    #[arg(long, default_value = "1e-9", value_parser = parse_tolerance)]
    pub tol: Rational,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    /// Degrees: `3`, `0..5` (inclusive) or a comma list of either
    #[arg(long, value_parser = parse_degrees)]
    pub n: Degrees,

    /// Comma-separated N values, swept in increasing order
    #[arg(long = "N", value_name = "N", value_parser = parse_positive_list)]
    pub big_n: RationalList,
}

/// Sorted, deduplicated degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees(pub Vec<usize>);

/// Sorted, deduplicated positive rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalList(pub Vec<Rational>);

pub fn parse_degrees(text: &str) -> Result<Degrees, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{s}` is not a nonnegative integer"))
        };
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(Degrees(out))
}

pub fn parse_positive(text: &str) -> Result<Rational, String> {
    let r = parse_rational(text.trim()).map_err(|e| format!("`{text}`: {e}"))?;
    if !r.is_positive() {
        return Err(format!("`{text}` must be positive"));
    }
    Ok(r)
}

pub fn parse_positive_list(text: &str) -> Result<RationalList, String> {
    let mut out = text
        .split(',')
        .map(parse_positive)
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    out.dedup();
    Ok(RationalList(out))
}

pub fn parse_tolerance(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let r = parse_decimal(t)
        .or_else(|_| parse_rational(t))
        .map_err(|e| format!("`{text}`: {e}"))?;
    if !r.is_positive() {
        return Err(format!("`{text}` must be positive"));
    }
    Ok(r)
}

pub fn parse_positive_f64(text: &str) -> Result<f64, String> {
    match text.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{text}` must be a positive number")),
    }
}
