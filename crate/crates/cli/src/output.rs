//! Record types and their JSON/CSV encodings.
//!
//! JSON output is an array of flat objects. CSV output has one fixed header
//! per command; list-valued fields are joined with spaces.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::args::Format;

pub trait Record: Serialize {
    const COLUMNS: &'static [&'static str];
    fn csv_row(&self) -> Vec<String>;
}

fn opt(v: &Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Shortest round-trip decimal, in exponent form when very small or large.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// One polynomial from `gen`. Coefficients are exact `p/q` strings in
/// increasing powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenRecord {
    pub family: String,
    pub n: usize,
    /// `N` for abns, `α` for gegenbauer, absent for hermite
    pub param: Option<String>,
    pub coefficients: Vec<String>,
}

impl Record for GenRecord {
    const COLUMNS: &'static [&'static str] = &["family", "n", "param", "coefficients"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.n.to_string(),
            self.param.clone().unwrap_or_default(),
            self.coefficients.join(" "),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub identity: String,
    pub n: usize,
    /// `N` or `alpha`
    pub param_name: String,
    pub param: String,
    /// `pass`, `fail` or `skipped`
    pub status: String,
    /// Coefficients of the nonzero difference polynomial; empty unless failed
    pub residual: Vec<String>,
    pub note: Option<String>,
}

impl Record for VerifyRecord {
    const COLUMNS: &'static [&'static str] = &[
        "identity",
        "n",
        "param_name",
        "param",
        "status",
        "residual",
        "note",
    ];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.identity.clone(),
            self.n.to_string(),
            self.param_name.clone(),
            self.param.clone(),
            self.status.clone(),
            self.residual.join(" "),
            self.note.clone().unwrap_or_default(),
        ]
    }
}

/// One grid point of a `facto` run. The run-level summary (k, largest
/// residual, r estimates) is repeated on every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoRecord {
    pub family: String,
    pub s: f64,
    pub x: f64,
    pub e: f64,
    pub w: f64,
    pub f_plus: f64,
    pub f_minus: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub res_p: f64,
    pub res_q_upper: f64,
    pub res_q_lower: f64,
    pub res_r_upper: f64,
    pub res_r_lower: f64,
    pub k: f64,
    pub k_deviation: f64,
    pub max_residual: f64,
    pub integration_constant: f64,
    pub r_plus: Option<f64>,
    pub r_minus: Option<f64>,
    pub r_deviation: Option<f64>,
    pub tol: f64,
}

impl Record for FactoRecord {
    const COLUMNS: &'static [&'static str] = &[
        "family",
        "s",
        "x",
        "e",
        "w",
        "f_plus",
        "f_minus",
        "g_plus",
        "g_minus",
        "res_p",
        "res_q_upper",
        "res_q_lower",
        "res_r_upper",
        "res_r_lower",
        "k",
        "k_deviation",
        "max_residual",
        "integration_constant",
        "r_plus",
        "r_minus",
        "r_deviation",
        "tol",
    ];

    fn csv_row(&self) -> Vec<String> {
        let mut row = vec![self.family.clone()];
        row.extend(
            [
                self.s,
                self.x,
                self.e,
                self.w,
                self.f_plus,
                self.f_minus,
                self.g_plus,
                self.g_minus,
                self.res_p,
                self.res_q_upper,
                self.res_q_lower,
                self.res_r_upper,
                self.res_r_lower,
                self.k,
                self.k_deviation,
                self.max_residual,
                self.integration_constant,
            ]
            .iter()
            .map(|v| num(*v)),
        );
        row.extend([
            opt(&self.r_plus),
            opt(&self.r_minus),
            opt(&self.r_deviation),
        ]);
        row.push(num(self.tol));
        row
    }
}

/// One zero of `F_n^N`: the exact enclosure `[lo, hi]` as decimals, its
/// midpoint, and the midpoint of the same zero reached through the
/// Gegenbauer map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: String,
    pub index: usize,
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub mapped: f64,
    pub map_gap: f64,
    pub tol: f64,
}

impl Record for ZeroRecord {
    const COLUMNS: &'static [&'static str] = &[
        "n", "N", "index", "root", "lo", "hi", "mapped", "map_gap", "tol",
    ];

    fn csv_row(&self) -> Vec<String> {
        let mut row = vec![
            self.n.to_string(),
            self.big_n.clone(),
            self.index.to_string(),
        ];
        row.extend(
            [
                self.root,
                self.lo,
                self.hi,
                self.mapped,
                self.map_gap,
                self.tol,
            ]
            .iter()
            .map(|v| num(*v)),
        );
        row
    }
}

/// `‖coeffs(F_n^N) − coeffs(H_n)‖∞` and its ratio to the previous `N` of
/// the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRecord {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: String,
    pub distance: f64,
    pub distance_exact: String,
    pub ratio: Option<f64>,
    pub tol: f64,
}

impl Record for LimitRecord {
    const COLUMNS: &'static [&'static str] =
        &["n", "N", "distance", "distance_exact", "ratio", "tol"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.big_n.clone(),
            num(self.distance),
            self.distance_exact.clone(),
            opt(&self.ratio),
            num(self.tol),
        ]
    }
}

pub fn write_records<R: Record, W: Write>(
    records: &[R],
    format: Format,
    mut out: W,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::COLUMNS)?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            w.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows_match_headers() {
        let gen = GenRecord {
            family: "abns".into(),
            n: 2,
            param: Some("1".into()),
            coefficients: vec!["-2".into(), "0".into(), "6".into()],
        };
        assert_eq!(gen.csv_row().len(), GenRecord::COLUMNS.len());
        let limit = LimitRecord {
            n: 2,
            big_n: "10".into(),
            distance: 0.2,
            distance_exact: "1/5".into(),
            ratio: None,
            tol: 0.0,
        };
        assert_eq!(limit.csv_row().len(), LimitRecord::COLUMNS.len());
        let mut buf = Vec::new();
        write_records(&[gen], Format::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "family,n,param,coefficients\nabns,2,1,-2 0 6\n"
        );
    }

    #[test]
    fn decimal_formatting_round_trips() {
        for v in [
            0.0,
            -6.000000000000019,
            1.5e-13,
            0.5773502691881731,
            1e-9,
            3.2e20,
        ] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1e-9), "1e-9");
        assert_eq!(num(-0.25), "-0.25");
    }
}
