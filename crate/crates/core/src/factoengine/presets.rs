//! Built-in ODE families for the engine.

use crate::exact::rational::{self, Rational};
use crate::exact::Poly;
use crate::families::{self, FamilyError};

use super::{FamilySpec, OdeFamily};

/// Working interval of the degree ladder in the scaled variable `u = ξ/√N`.
pub const ABNS_U_RANGE: (f64, f64) = (0.1, 2.0);
/// Working interval of the Gegenbauer parameter ladder.
pub const GEGENBAUER_X_RANGE: (f64, f64) = (0.1, 0.9);

/// ABNS equation indexed by the degree, in `ξ`:
/// `P = 1 + ξ²/N`, `Q_n = −2(N+n−1)ξ/N`, `R_n = n(2N+n−1)/N`.
#[derive(Debug, Clone)]
pub struct AbnsDegree {
    big_n: f64,
    members: Vec<(Poly, Poly)>,
}

impl AbnsDegree {
    /// Solutions are known for degrees `0..=n_max`.
    pub fn new(big_n: &Rational, n_max: usize) -> Result<Self, FamilyError> {
        let members = families::abns_sequence(n_max, big_n)?
            .into_iter()
            .map(|p| {
                let d = p.differentiate();
                (p, d)
            })
            .collect();
        Ok(AbnsDegree {
            big_n: rational::to_f64(big_n),
            members,
        })
    }
}

fn as_index(s: f64) -> Option<usize> {
    let r = s.round();
    ((s - r).abs() < 1e-9 && r >= 0.0).then_some(r as usize)
}

impl OdeFamily for AbnsDegree {
    fn p(&self, x: f64) -> f64 {
        1.0 + x * x / self.big_n
    }

    fn dp(&self, x: f64) -> Option<f64> {
        Some(2.0 * x / self.big_n)
    }

    fn q(&self, s: f64, x: f64) -> f64 {
        -2.0 * (self.big_n + s - 1.0) * x / self.big_n
    }

    fn r(&self, s: f64, _x: f64) -> f64 {
        s * (2.0 * self.big_n + s - 1.0) / self.big_n
    }

    fn solution(&self, s: f64, x: f64) -> Option<(f64, f64)> {
        let (p, d) = self.members.get(as_index(s)?)?;
        Some((p.evaluate_f64(x), d.evaluate_f64(x)))
    }
}

/// The degree ladder at degree `n` for parameter `N`, sampled on
/// `u ∈ [0.1, 2]`, i.e. `ξ ∈ [0.1√N, 2√N]`, anchored at `ξ = 0`.
pub fn abns_degree(n: usize, big_n: &Rational) -> Result<FamilySpec, FamilyError> {
    let family = AbnsDegree::new(big_n, n + 1)?;
    let root = rational::to_f64(big_n).sqrt();
    Ok(FamilySpec {
        name: "abns-degree".into(),
        family: Box::new(family),
        domain: (ABNS_U_RANGE.0 * root, ABNS_U_RANGE.1 * root),
        base_point: 0.0,
    })
}

/// Gegenbauer equation multiplied by `x²`, indexed by the parameter `s = α`
/// at fixed degree `n`: `P = x²(1−x²)`, `Q_s = −(2s+1)x³`, `R_s = n(2s+n)x²`.
#[derive(Debug, Clone, Copy)]
pub struct GegenbauerParam {
    n: usize,
}

impl GegenbauerParam {
    pub fn new(n: usize) -> Self {
        GegenbauerParam { n }
    }
}

/// `C_n^α(x)` by the three-term recurrence in floating point.
pub fn gegenbauer_f64(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * alpha * x);
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + alpha - 1.0) * cur - (kf + 2.0 * alpha - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

impl OdeFamily for GegenbauerParam {
    fn p(&self, x: f64) -> f64 {
        x * x * (1.0 - x * x)
    }

    fn dp(&self, x: f64) -> Option<f64> {
        Some(2.0 * x - 4.0 * x * x * x)
    }

    fn q(&self, s: f64, x: f64) -> f64 {
        -(2.0 * s + 1.0) * x * x * x
    }

    fn r(&self, s: f64, x: f64) -> f64 {
        let n = self.n as f64;
        n * (2.0 * s + n) * x * x
    }

    fn solution(&self, s: f64, x: f64) -> Option<(f64, f64)> {
        let y = gegenbauer_f64(self.n, s, x);
        let dy = if self.n == 0 {
            0.0
        } else {
            2.0 * s * gegenbauer_f64(self.n - 1, s + 1.0, x)
        };
        Some((y, dy))
    }
}

pub fn gegenbauer_param(n: usize) -> FamilySpec {
    FamilySpec {
        name: "gegenbauer-param".into(),
        family: Box::new(GegenbauerParam::new(n)),
        domain: GEGENBAUER_X_RANGE,
        base_point: 0.0,
    }
}

/// Registered preset names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    AbnsDegree,
    GegenbauerParam,
}

impl Preset {
    pub const NAMES: [&'static str; 2] = ["abns-degree", "gegenbauer-param"];

    pub fn from_name(name: &str) -> Option<Preset> {
        match name {
            "abns-degree" => Some(Preset::AbnsDegree),
            "gegenbauer-param" => Some(Preset::GegenbauerParam),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::AbnsDegree => "abns-degree",
            Preset::GegenbauerParam => "gegenbauer-param",
        }
    }

    /// The family spec and the ladder index `s` for degree `n` and
    /// parameter `param` (`N` or `α`).
    pub fn build(self, n: usize, param: &Rational) -> Result<(FamilySpec, f64), FamilyError> {
        match self {
            Preset::AbnsDegree => Ok((abns_degree(n, param)?, n as f64)),
            Preset::GegenbauerParam => Ok((gegenbauer_param(n), rational::to_f64(param))),
        }
    }
}
