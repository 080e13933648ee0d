//! Exact arithmetic for sparse Laurent polynomials and rational functions
//! over the rationals.

mod expr;
mod parse;
mod poly;
mod ratfunc;
mod registry;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};
use thiserror::Error;

pub use expr::Expr;
pub use parse::{parse_expr_tree, MAX_DEPTH, MAX_EXPONENT};
pub use poly::{grevlex_cmp, Exponents, SparsePoly};
pub use ratfunc::{ring_op, Bindings, RatFunc, RingOp, POLE_GUARD};
pub use registry::VarRegistry;

/// Exact scalar: an arbitrary-precision rational.
pub type Q = BigRational;

#[allow(unused_imports)]
pub(crate) use poly::q_to_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("registry mismatch: {left} vs {right}")]
    RegistryMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("substitution sends denominator `{expr}` to zero")]
    ZeroDenominator { expr: String },
    #[error("pole: denominator evaluates to {re}{im:+}i")]
    Pole { re: f64, im: f64 },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("malformed JSON expression: {0}")]
    Json(String),
    #[error("binary operation needs a second operand")]
    MissingOperand,
}

/// Output styles for [`format_expr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatStyle {
    Plain,
    Latex,
    Json,
}

impl std::str::FromStr for FormatStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" | "text" => Ok(Self::Plain),
            "latex" => Ok(Self::Latex),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Parses the plain grammar into an exact rational function over `reg`.
pub fn parse_expr(s: &str, reg: &Arc<VarRegistry>) -> Result<RatFunc, SymbolicError> {
    parse_expr_tree(s)?.to_ratfunc(reg)
}

/// Deterministic rendering of the canonical form of `f`.
pub fn format_expr(f: &RatFunc, style: FormatStyle) -> String {
    match style {
        FormatStyle::Plain => Expr::from_ratfunc(f).plain(),
        FormatStyle::Latex => Expr::from_ratfunc(f).latex(),
        FormatStyle::Json => ratfunc_to_json(f).to_string(),
    }
}

/// Monomial key such as `p1^2*p3^-1`; the constant monomial is `1`.
pub fn monomial_key(reg: &VarRegistry, e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                reg.name(i).to_string()
            } else {
                format!("{}^{}", reg.name(i), k)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn parse_monomial_key(key: &str, reg: &VarRegistry) -> Result<Exponents, SymbolicError> {
    let mut e = vec![0; reg.len()];
    if key.trim() == "1" {
        return Ok(e);
    }
    for part in key.split('*') {
        let part = part.trim();
        let (name, k) = match part.split_once('^') {
            Some((n, k)) => (
                n.trim(),
                k.trim()
                    .parse::<i32>()
                    .ok()
                    .filter(|k| k.abs() <= MAX_EXPONENT)
                    .ok_or_else(|| SymbolicError::Json(format!("bad exponent in `{part}`")))?,
            ),
            None => (part, 1),
        };
        let i = reg.require(name)?;
        e[i] = e[i]
            .checked_add(k)
            .filter(|k| k.abs() <= MAX_EXPONENT)
            .ok_or_else(|| SymbolicError::Json(format!("exponent overflow in `{key}`")))?;
    }
    Ok(e)
}

pub fn poly_to_json(p: &SparsePoly) -> Value {
    let mut m = Map::new();
    for (e, c) in p.terms() {
        m.insert(monomial_key(p.registry(), e), Value::String(c.to_string()));
    }
    Value::Object(m)
}

pub fn poly_from_json(v: &Value, reg: &Arc<VarRegistry>) -> Result<SparsePoly, SymbolicError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SymbolicError::Json("polynomial must be an object".into()))?;
    let mut terms = Vec::with_capacity(obj.len());
    for (k, c) in obj {
        let coeff: Q = match c {
            Value::String(s) => s
                .trim()
                .parse::<Q>()
                .map_err(|e| SymbolicError::Json(format!("bad coefficient `{s}`: {e}")))?,
            Value::Number(n) => match n.as_i64() {
                Some(i) => Q::from_integer(BigInt::from(i)),
                None => return Err(SymbolicError::Json(format!("non-integer number {n}"))),
            },
            other => return Err(SymbolicError::Json(format!("bad coefficient {other}"))),
        };
        terms.push((parse_monomial_key(k, reg)?, coeff));
    }
    Ok(SparsePoly::from_terms(reg, terms))
}

/// `{"num": {...}, "den": {...}}` with the canonical numerator/denominator pair.
/// A unit denominator is written as the empty object.
pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    let mut m = Map::new();
    let den = f.denominator();
    m.insert("num".into(), poly_to_json(&f.numerator()));
    m.insert(
        "den".into(),
        if den.is_one() {
            Value::Object(Map::new())
        } else {
            poly_to_json(&den)
        },
    );
    Value::Object(m)
}

pub fn ratfunc_from_json(v: &Value, reg: &Arc<VarRegistry>) -> Result<RatFunc, SymbolicError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SymbolicError::Json("rational function must be an object".into()))?;
    let num = poly_from_json(
        obj.get("num")
            .ok_or_else(|| SymbolicError::Json("missing `num`".into()))?,
        reg,
    )?;
    let den = match obj.get("den") {
        Some(d) if d.as_object().is_some_and(|o| !o.is_empty()) => poly_from_json(d, reg)?,
        Some(d) if !d.is_object() => {
            return Err(SymbolicError::Json("`den` must be an object".into()))
        }
        _ => SparsePoly::one(reg),
    };
    RatFunc::from_parts(num, den)
}

/// The integer `n` as an exact scalar.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}
