//! Small arithmetic language for user-defined ODE families.
//!
//! Expressions use numbers, the variable (`x`, `xi` or `ξ`), the ladder
//! parameter `s`, the operators `+ - * / ^` (`·` is accepted for `*`) and
//! parentheses. Exponents must be integer literals. Function calls and
//! other identifiers are rejected when parsed.
//!
//! A family file holds one `key = value` per line; `#` starts a comment:
//!
//! ```text
//! P = 1 + x^2/2
//! Q = -2*(2 + s - 1)*x/2
//! R = s*(4 + s - 1)/2
//! y = ...            # optional, solution y_s(x), enables r estimates
//! dy = ...           # optional, y_s'(x); finite differences otherwise
//! domain = 0.1, 2    # working interval where P > 0
//! base = 0           # anchor of every antiderivative (default 0)
//! ```

use std::collections::HashMap;

use thiserror::Error;

use super::{FamilySpec, OdeFamily};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token `{token}` at offset {pos}")]
    UnexpectedToken { token: String, pos: usize },
    #[error("function calls are not supported (`{0}(`)")]
    FunctionCall(String),
    #[error("unknown identifier `{0}`; use x/xi/ξ for the variable and s for the parameter")]
    UnknownIdentifier(String),
    #[error("exponents must be integer literals (offset {0})")]
    NonIntegerExponent(usize),
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Param,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn eval(&self, x: f64, s: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Param => s,
            Expr::Neg(a) => -a.eval(x, s),
            Expr::Add(a, b) => a.eval(x, s) + b.eval(x, s),
            Expr::Sub(a, b) => a.eval(x, s) - b.eval(x, s),
            Expr::Mul(a, b) => a.eval(x, s) * b.eval(x, s),
            Expr::Div(a, b) => a.eval(x, s) / b.eval(x, s),
            Expr::Pow(a, e) => a.eval(x, s).powi(*e),
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        let b = Box::new;
        match self {
            Num(_) | Param => Num(0.0),
            Var => Num(1.0),
            Neg(a) => Neg(b(a.derivative())),
            Add(l, r) => Add(b(l.derivative()), b(r.derivative())),
            Sub(l, r) => Sub(b(l.derivative()), b(r.derivative())),
            Mul(l, r) => Add(
                b(Mul(b(l.derivative()), r.clone())),
                b(Mul(l.clone(), b(r.derivative()))),
            ),
            Div(l, r) => Div(
                b(Sub(
                    b(Mul(b(l.derivative()), r.clone())),
                    b(Mul(l.clone(), b(r.derivative()))),
                )),
                b(Pow(r.clone(), 2)),
            ),
            Pow(_, 0) => Num(0.0),
            Pow(a, e) => Mul(
                b(Mul(b(Num(*e as f64)), b(Pow(a.clone(), e - 1)))),
                b(a.derivative()),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // Scientific notation: 1e-3, 2.5E4
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| ExprError::UnexpectedToken {
                    token: text.clone(),
                    pos,
                })?;
            out.push((Tok::Num(v), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Ident(text), pos));
        } else if "+-*/^()·".contains(c) {
            out.push((Tok::Op(if c == '·' { '*' } else { c }), pos));
            i += 1;
        } else {
            return Err(ExprError::UnexpectedChar { ch: c, pos });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(usize::MAX, |(_, p)| *p)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let neg = self.eat_op('-');
        match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => {
                let e = *v as i32;
                self.at += 1;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => Err(ExprError::NonIntegerExponent(pos)),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or(ExprError::UnexpectedEnd)?;
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Ident(name) => {
                if self.peek() == Some(&Tok::Op('(')) {
                    return Err(ExprError::FunctionCall(name));
                }
                match name.as_str() {
                    "x" | "xi" | "ξ" => Ok(Expr::Var),
                    "s" => Ok(Expr::Param),
                    _ => Err(ExprError::UnknownIdentifier(name)),
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return match self.peek() {
                        None => Err(ExprError::UnexpectedEnd),
                        Some(t) => Err(ExprError::UnexpectedToken {
                            token: format!("{t:?}"),
                            pos: self.pos(),
                        }),
                    };
                }
                Ok(inner)
            }
            Tok::Op(c) => Err(ExprError::UnexpectedToken {
                token: c.to_string(),
                pos,
            }),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    match p.toks.get(p.at) {
        None => Ok(e),
        Some((t, pos)) => Err(ExprError::UnexpectedToken {
            token: match t {
                Tok::Num(v) => v.to_string(),
                Tok::Ident(s) => s.clone(),
                Tok::Op(c) => c.to_string(),
            },
            pos: *pos,
        }),
    }
}

/// ODE family whose coefficients are parsed expressions.
#[derive(Debug, Clone)]
pub struct ExprFamily {
    pub p: Expr,
    pub q: Expr,
    pub r: Expr,
    pub y: Option<Expr>,
    pub dy: Option<Expr>,
    dp: Expr,
}

impl ExprFamily {
    pub fn new(p: Expr, q: Expr, r: Expr, y: Option<Expr>, dy: Option<Expr>) -> Self {
        let dp = p.derivative();
        ExprFamily { p, q, r, y, dy, dp }
    }
}

impl OdeFamily for ExprFamily {
    fn p(&self, x: f64) -> f64 {
        self.p.eval(x, 0.0)
    }

    fn dp(&self, x: f64) -> Option<f64> {
        Some(self.dp.eval(x, 0.0))
    }

    fn q(&self, s: f64, x: f64) -> f64 {
        self.q.eval(x, s)
    }

    fn r(&self, s: f64, x: f64) -> f64 {
        self.r.eval(x, s)
    }

    fn solution(&self, s: f64, x: f64) -> Option<(f64, f64)> {
        let y = self.y.as_ref()?;
        let v = y.eval(x, s);
        let d = match &self.dy {
            Some(dy) => dy.eval(x, s),
            None => {
                let h = 1e-5 * x.abs().max(1.0);
                (-y.eval(x + 2.0 * h, s) + 8.0 * y.eval(x + h, s) - 8.0 * y.eval(x - h, s)
                    + y.eval(x - 2.0 * h, s))
                    / (12.0 * h)
            }
        };
        Some((v, d))
    }
}

fn parse_number(text: &str, line: usize) -> Result<f64, ExprError> {
    let e = parse(text).map_err(|e| ExprError::File {
        line,
        msg: e.to_string(),
    })?;
    let v = e.eval(f64::NAN, f64::NAN);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::File {
            line,
            msg: format!("`{text}` must be a constant"),
        })
    }
}

/// Parses a family file into a [`FamilySpec`] named `name`.
pub fn parse_family_file(name: &str, text: &str) -> Result<FamilySpec, ExprError> {
    let mut exprs: HashMap<&'static str, Expr> = HashMap::new();
    let mut domain = None;
    let mut base = 0.0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ExprError::File {
            line,
            msg: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let wrap = |e: ExprError| ExprError::File {
            line,
            msg: e.to_string(),
        };
        match key {
            "P" | "Q" | "R" | "y" | "dy" => {
                let k: &'static str = match key {
                    "P" => "P",
                    "Q" => "Q",
                    "R" => "R",
                    "y" => "y",
                    _ => "dy",
                };
                exprs.insert(k, parse(value).map_err(wrap)?);
            }
            "domain" => {
                let (a, b) = value.split_once(',').ok_or_else(|| ExprError::File {
                    line,
                    msg: "domain needs two comma-separated bounds".into(),
                })?;
                let (a, b) = (parse_number(a, line)?, parse_number(b, line)?);
                if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
                    return Err(ExprError::File {
                        line,
                        msg: "domain bounds must be increasing".into(),
                    });
                }
                domain = Some((a, b));
            }
            "base" => base = parse_number(value, line)?,
            other => {
                return Err(ExprError::File {
                    line,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let mut take = |k: &'static str| exprs.remove(k).ok_or(ExprError::MissingKey(k));
    let family = ExprFamily::new(
        take("P")?,
        take("Q")?,
        take("R")?,
        take("y").ok(),
        take("dy").ok(),
    );
    Ok(FamilySpec {
        name: name.to_string(),
        family: Box::new(family),
        domain: domain.ok_or(ExprError::MissingKey("domain"))?,
        base_point: base,
    })
}
