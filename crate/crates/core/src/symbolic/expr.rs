//! A small expression tree used for printing and parsing.
//!
//! Superpotentials keep the term structure of their defining formula as an
//! [`Expr`], so they print the way they are written; canonical rational
//! functions convert to an [`Expr`] through [`Expr::from_ratfunc`].

use std::sync::Arc;

use num_traits::{One, Signed};

use super::poly::SparsePoly;
use super::ratfunc::RatFunc;
use super::registry::{latex_name, VarRegistry};
use super::{SymbolicError, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Q),
    Var(String),
    /// Sum of terms; a `Neg` term prints as subtraction.
    Add(Vec<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Num(Q::from_integer(n.into()))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn add(terms: Vec<Expr>) -> Self {
        if terms.len() == 1 {
            return terms.into_iter().next().unwrap();
        }
        Expr::Add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Self {
        if factors.len() == 1 {
            return factors.into_iter().next().unwrap();
        }
        Expr::Mul(factors)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: i32) -> Self {
        if n == 1 {
            return a;
        }
        Expr::Pow(Box::new(a), n)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Self {
        Expr::Neg(Box::new(a))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Num(q) if q.is_negative() => PREC_NEG,
            Expr::Num(q) if !q.is_integer() => PREC_MUL,
            Expr::Num(_) | Expr::Var(_) => PREC_ATOM,
            Expr::Add(_) => PREC_ADD,
            Expr::Neg(_) => PREC_NEG,
            Expr::Mul(_) | Expr::Div(..) => PREC_MUL,
            Expr::Pow(..) => PREC_POW,
        }
    }

    /// Plain-grammar rendering; parses back to the same value.
    pub fn plain(&self) -> String {
        let mut s = String::new();
        self.write_plain(&mut s);
        s
    }

    fn write_plain_child(&self, out: &mut String, min_prec: u8) {
        if self.prec() < min_prec {
            out.push('(');
            self.write_plain(out);
            out.push(')');
        } else {
            self.write_plain(out);
        }
    }

    fn write_plain(&self, out: &mut String) {
        match self {
            Expr::Num(q) => out.push_str(&q.to_string()),
            Expr::Var(v) => out.push_str(v),
            Expr::Add(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    match (i, t.split_sign()) {
                        (0, (true, inner)) => {
                            out.push('-');
                            inner.write_plain_child(out, PREC_MUL);
                        }
                        (0, (false, _)) => t.write_plain_child(out, PREC_ADD + 1),
                        (_, (true, inner)) => {
                            out.push_str(" - ");
                            inner.write_plain_child(out, PREC_MUL);
                        }
                        (_, (false, _)) => {
                            out.push_str(" + ");
                            t.write_plain_child(out, PREC_ADD + 1);
                        }
                    }
                }
            }
            Expr::Neg(a) => {
                out.push('-');
                a.write_plain_child(out, PREC_MUL);
            }
            Expr::Mul(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push('*');
                    }
                    // Non-leading factors must not re-associate with a
                    // preceding division, so they need atom-or-power form.
                    f.write_plain_child(out, if i == 0 { PREC_MUL } else { PREC_POW });
                }
            }
            Expr::Div(a, b) => {
                a.write_plain_child(out, PREC_MUL);
                out.push('/');
                b.write_plain_child(out, PREC_POW);
            }
            Expr::Pow(a, n) => {
                a.write_plain_child(out, PREC_ATOM);
                out.push('^');
                out.push_str(&n.to_string());
            }
        }
    }

    /// Returns `(true, inner)` when the expression is a negation of `inner`.
    fn split_sign(&self) -> (bool, Expr) {
        match self {
            Expr::Neg(a) => (true, (**a).clone()),
            Expr::Num(q) if q.is_negative() => (true, Expr::Num(-q)),
            Expr::Mul(fs) => match fs.first() {
                Some(Expr::Num(q)) if q.is_negative() => {
                    let mut rest = fs.clone();
                    if q == &-Q::one() {
                        rest.remove(0);
                    } else {
                        rest[0] = Expr::Num(-q);
                    }
                    (true, Expr::mul(rest))
                }
                _ => (false, self.clone()),
            },
            Expr::Div(a, b) => {
                let (neg, inner) = a.split_sign();
                if neg {
                    (true, Expr::div(inner, (**b).clone()))
                } else {
                    (false, self.clone())
                }
            }
            _ => (false, self.clone()),
        }
    }

    pub fn latex(&self) -> String {
        let mut s = String::new();
        self.write_latex(&mut s);
        s
    }

    fn write_latex_child(&self, out: &mut String, min_prec: u8) {
        if self.prec() < min_prec {
            out.push_str("\\left(");
            self.write_latex(out);
            out.push_str("\\right)");
        } else {
            self.write_latex(out);
        }
    }

    fn write_latex(&self, out: &mut String) {
        match self {
            Expr::Num(q) => {
                if q.is_integer() {
                    out.push_str(&q.to_string());
                } else {
                    if q.is_negative() {
                        out.push('-');
                    }
                    out.push_str(&format!("\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom()));
                }
            }
            Expr::Var(v) => out.push_str(&latex_name(v)),
            Expr::Add(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    let (neg, inner) = t.split_sign();
                    match (i, neg) {
                        (0, true) => out.push('-'),
                        (0, false) => {}
                        (_, true) => out.push_str(" - "),
                        (_, false) => out.push_str(" + "),
                    }
                    if neg {
                        inner.write_latex_child(out, PREC_MUL);
                    } else {
                        t.write_latex_child(out, PREC_ADD + 1);
                    }
                }
            }
            Expr::Neg(a) => {
                out.push('-');
                a.write_latex_child(out, PREC_MUL);
            }
            Expr::Mul(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    f.write_latex_child(out, PREC_MUL);
                }
            }
            Expr::Div(a, b) => {
                out.push_str("\\frac{");
                a.write_latex(out);
                out.push_str("}{");
                b.write_latex(out);
                out.push('}');
            }
            Expr::Pow(a, n) => {
                a.write_latex_child(out, PREC_ATOM);
                out.push_str(&format!("^{{{n}}}"));
            }
        }
    }

    /// Replaces variables for which `f` returns a tree.
    pub fn map_vars(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let map_all = |v: &[Expr]| v.iter().map(|e| e.map_vars(f)).collect();
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Expr::Add(ts) => Expr::Add(map_all(ts)),
            Expr::Neg(a) => Expr::neg(a.map_vars(f)),
            Expr::Mul(fs) => Expr::Mul(map_all(fs)),
            Expr::Div(a, b) => Expr::div(a.map_vars(f), b.map_vars(f)),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.map_vars(f)), *n),
        }
    }

    /// Evaluates the tree exactly over `reg`.
    pub fn to_ratfunc(&self, reg: &Arc<VarRegistry>) -> Result<RatFunc, SymbolicError> {
        Ok(match self {
            Expr::Num(q) => RatFunc::constant(reg, q.clone()),
            Expr::Var(v) => RatFunc::var(reg, v)?,
            Expr::Add(ts) => {
                let mut acc = RatFunc::zero(reg);
                for t in ts {
                    acc = acc.try_add(&t.to_ratfunc(reg)?)?;
                }
                acc
            }
            Expr::Neg(a) => a.to_ratfunc(reg)?.neg(),
            Expr::Mul(fs) => {
                let mut acc = RatFunc::one(reg);
                for f in fs {
                    acc = acc.try_mul(&f.to_ratfunc(reg)?)?;
                }
                acc
            }
            Expr::Div(a, b) => a.to_ratfunc(reg)?.try_div(&b.to_ratfunc(reg)?)?,
            Expr::Pow(a, n) => a.to_ratfunc(reg)?.pow(*n)?,
        })
    }

    /// Canonical printing form of a polynomial: terms in canonical order.
    pub fn from_poly(p: &SparsePoly) -> Expr {
        let reg = p.registry();
        let terms: Vec<Expr> = p
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| term_expr(reg, e, c))
            .collect();
        match terms.len() {
            0 => Expr::int(0),
            _ => Expr::add(terms),
        }
    }

    /// Canonical printing form `numerator / denominator`.
    pub fn from_ratfunc(f: &RatFunc) -> Expr {
        let num = Expr::from_poly(&f.numerator());
        let den = f.denominator();
        if den.is_one() {
            return num;
        }
        Expr::div(num, Expr::from_poly(&den))
    }
}

fn term_expr(reg: &Arc<VarRegistry>, e: &[i32], c: &Q) -> Expr {
    let mut factors: Vec<Expr> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| Expr::pow(Expr::var(reg.name(i)), k))
        .collect();
    if factors.is_empty() {
        return Expr::Num(c.clone());
    }
    if c == &-Q::one() {
        return Expr::neg(Expr::mul(factors));
    }
    if !c.is_one() {
        factors.insert(0, Expr::Num(c.clone()));
    }
    Expr::mul(factors)
}
