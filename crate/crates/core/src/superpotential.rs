//! The four presentations of the superpotential and the exact identities
//! relating them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;

use crate::error::{check_rank, Error, Result};
use crate::report::VerdictReport;
use crate::richardson::r_poly;
use crate::symbolic::{
    format_expr, ratfunc_to_json, Bindings, Expr, FormatStyle, RatFunc, VarRegistry, Q,
};
use crate::vars::{self, gs_y, gs_z, UnipotentParams};
use crate::weyl::{self, WeylSelector};

/// Largest rank accepted by [`verify_identity`].
pub const IDENTITY_MAX_M: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    Pluecker,
    Laurent,
    Gs,
    HoriVafa,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [Self::Pluecker, Self::Laurent, Self::Gs, Self::HoriVafa];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pluecker => "pluecker",
            Self::Laurent => "laurent",
            Self::Gs => "gs",
            Self::HoriVafa => "hori_vafa",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pluecker" | "plucker" => Ok(Self::Pluecker),
            "laurent" => Ok(Self::Laurent),
            "gs" => Ok(Self::Gs),
            "hori_vafa" | "hori-vafa" | "hv" => Ok(Self::HoriVafa),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// A superpotential: the written formula, its top-level terms and their sum.
#[derive(Debug, Clone)]
pub struct SuperpotentialExpr {
    pub model: ModelId,
    pub m: usize,
    pub registry: Arc<VarRegistry>,
    pub display: Expr,
    pub terms: Vec<RatFunc>,
    pub expr: RatFunc,
}

impl SuperpotentialExpr {
    fn from_display(
        model: ModelId,
        m: usize,
        reg: Arc<VarRegistry>,
        display: Expr,
    ) -> Result<Self> {
        let parts: Vec<&Expr> = match &display {
            Expr::Add(ts) => ts.iter().collect(),
            other => vec![other],
        };
        let terms = parts
            .into_iter()
            .map(|t| t.to_ratfunc(&reg))
            .collect::<Result<Vec<_>, _>>()?;
        let expr = terms.iter().cloned().sum();
        Ok(Self {
            model,
            m,
            registry: reg,
            display,
            terms,
            expr,
        })
    }

    /// Text in the given style; plain and LaTeX keep the written form.
    pub fn format(&self, style: FormatStyle) -> String {
        match style {
            FormatStyle::Plain => self.display.plain(),
            FormatStyle::Latex => self.display.latex(),
            FormatStyle::Json => json!({
                "model": self.model.as_str(),
                "m": self.m,
                "variables": self.registry.names(),
                "plain": self.display.plain(),
                "expr": ratfunc_to_json(&self.expr),
            })
            .to_string(),
        }
    }

    /// Registry indices of the coordinates a critical point is solved for.
    pub fn solve_vars(&self) -> Vec<usize> {
        self.registry
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| {
                n.as_str() != "q" && !(self.model == ModelId::Pluecker && n.as_str() == "p0")
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Restricts `expr` to `q = value`.
    pub fn at_q(&self, value: &Q) -> Result<RatFunc> {
        let mut b = Bindings::new();
        b.insert("q".into(), RatFunc::constant(&self.registry, value.clone()));
        Ok(self.expr.substitute(&b, &self.registry)?)
    }
}

pub fn superpotential(model: ModelId, m: usize) -> Result<SuperpotentialExpr> {
    match model {
        ModelId::Pluecker => w_pluecker(m),
        ModelId::Laurent => w_laurent(m),
        ModelId::Gs => w_gs(m),
        ModelId::HoriVafa => w_hori_vafa(m),
    }
}

fn v(name: impl Into<String>) -> Expr {
    Expr::var(name)
}

fn p(k: usize) -> Expr {
    v(format!("p{k}"))
}

fn signed(k: usize, e: Expr) -> Expr {
    if k % 2 == 0 {
        e
    } else {
        Expr::neg(e)
    }
}

/// `Σ_{k=0}^{l} (-1)^k p_{l-k} p_{2m-1+k-l}` as written.
fn divisor_expr(m: usize, l: usize) -> Expr {
    Expr::add(
        (0..=l)
            .map(|k| signed(k, Expr::mul(vec![p(l - k), p(2 * m - 1 + k - l)])))
            .collect(),
    )
}

/// `p1/p0 + Σ_l p_{l+1} p_{2m-1-l} / D_l + q p1/p_{2m-1}`.
pub fn w_pluecker(m: usize) -> Result<SuperpotentialExpr> {
    check_rank(m)?;
    let mut terms = vec![Expr::div(p(1), p(0))];
    for l in 1..m {
        let num = if l + 1 == 2 * m - 1 - l {
            Expr::pow(p(l + 1), 2)
        } else {
            Expr::mul(vec![p(l + 1), p(2 * m - 1 - l)])
        };
        terms.push(Expr::div(num, divisor_expr(m, l)));
    }
    terms.push(Expr::div(Expr::mul(vec![v("q"), p(1)]), p(2 * m - 1)));
    SuperpotentialExpr::from_display(ModelId::Pluecker, m, vars::pluecker(m)?, Expr::add(terms))
}

fn laurent_product(m: usize) -> Expr {
    let mut fs: Vec<Expr> = (1..m).map(|i| v(format!("a{i}"))).collect();
    fs.push(v("c"));
    fs.extend((1..m).rev().map(|i| v(format!("b{i}"))));
    Expr::mul(fs)
}

/// `a_1 + ... + a_{m-1} + c + b_{m-1} + ... + b_1 + q (a_1 + b_1) / (a_1 ... c ... b_1)`.
pub fn w_laurent(m: usize) -> Result<SuperpotentialExpr> {
    check_rank(m)?;
    let mut terms: Vec<Expr> = (1..m).map(|i| v(format!("a{i}"))).collect();
    terms.push(v("c"));
    terms.extend((1..m).rev().map(|i| v(format!("b{i}"))));
    terms.push(Expr::div(
        Expr::mul(vec![v("q"), Expr::add(vec![v("a1"), v("b1")])]),
        laurent_product(m),
    ));
    SuperpotentialExpr::from_display(ModelId::Laurent, m, vars::laurent(m)?, Expr::add(terms))
}

fn gs_display(m: usize) -> Expr {
    let mut terms = Vec::new();
    for i in 1..m {
        terms.push(v(gs_y(m, i)));
        terms.push(Expr::mul(vec![v(gs_y(m, i)), v(gs_z(m, i))]));
    }
    let mut xy = vec![v("x")];
    xy.extend((1..m).map(|i| v(gs_y(m, i))));
    let mut den = vec![Expr::add(vec![Expr::mul(xy), Expr::neg(Expr::int(1))])];
    den.extend((1..m).map(|i| v(gs_z(m, i))));
    terms.push(Expr::div(
        Expr::mul(vec![v("q"), Expr::pow(v("x"), 2)]),
        Expr::mul(den),
    ));
    Expr::add(terms)
}

/// `Σ y_i (1 + z_i) + q x^2 / ((x y_1 ... y_{m-1} - 1) z_1 ... z_{m-1})`.
pub fn w_gs(m: usize) -> Result<SuperpotentialExpr> {
    check_rank(m)?;
    SuperpotentialExpr::from_display(ModelId::Gs, m, vars::gs(m)?, gs_display(m))
}

/// The same model written in the shifted variables `z_i -> z_i + 1`.
pub fn w_gs_shifted(m: usize) -> Result<SuperpotentialExpr> {
    check_rank(m)?;
    let zs: Vec<String> = (1..m).map(|i| gs_z(m, i)).collect();
    let display = gs_display(m).map_vars(&|name| {
        zs.iter()
            .any(|z| z == name)
            .then(|| Expr::add(vec![v(name), Expr::int(1)]))
    });
    SuperpotentialExpr::from_display(ModelId::Gs, m, vars::gs(m)?, display)
}

/// `Y_1 + ... + Y_{n-1} + (Y_n + q)^2 / (Y_1 ... Y_n)` with `n = 2m - 1`, one
/// variable per complex dimension of the quadric.
pub fn w_hori_vafa(m: usize) -> Result<SuperpotentialExpr> {
    check_rank(m)?;
    let n = 2 * m - 1;
    let mut terms: Vec<Expr> = (1..n).map(|i| v(format!("Y{i}"))).collect();
    terms.push(Expr::div(
        Expr::pow(Expr::add(vec![v(format!("Y{n}")), v("q")]), 2),
        Expr::mul((1..=n).map(|i| v(format!("Y{i}"))).collect()),
    ));
    SuperpotentialExpr::from_display(ModelId::HoriVafa, m, vars::hori_vafa(m)?, Expr::add(terms))
}

/// `p_k` as a function of the factorization parameters `(a, c, b)`.
pub fn plucker_subst(m: usize) -> Result<Bindings> {
    let params = UnipotentParams::symbolic(m)?;
    let reg = params.c.registry().clone();
    let prod = |it: &[RatFunc]| it.iter().fold(RatFunc::one(&reg), |acc, x| &acc * x);
    let mut out = Bindings::new();
    out.insert("p0".into(), RatFunc::one(&reg));
    for k in 1..m {
        let v = &prod(&params.a[..k - 1]) * &(&params.a[k - 1] + &params.b[k - 1]);
        out.insert(format!("p{k}"), v);
    }
    for k in m..2 * m {
        let v = &(&prod(&params.a) * &params.c) * &prod(&params.b[2 * m - k - 1..]);
        out.insert(format!("p{k}"), v);
    }
    Ok(out)
}

/// The change of variables from the GS coordinates to Plücker coordinates
/// on the chart `p_0 = 1`.
pub fn gs_subst(m: usize) -> Result<Bindings> {
    check_rank(m)?;
    let reg = vars::pluecker(m)?;
    let pv = |k: usize| RatFunc::var(&reg, &format!("p{k}"));
    let mut unit = Bindings::new();
    unit.insert("p0".into(), RatFunc::one(&reg));
    let r = |j: usize| -> Result<RatFunc> {
        Ok(RatFunc::from_poly(r_poly(m, j)?).substitute(&unit, &reg)?)
    };
    let mut out = Bindings::new();
    out.insert(gs_y(m, 1), pv(1)?);
    for i in 2..m {
        out.insert(gs_y(m, i), pv(i)?.try_div(&pv(i - 1)?)?);
    }
    let q = RatFunc::var(&reg, "q")?;
    out.insert(gs_z(m, 1), q.try_div(&pv(2 * m - 1)?)?);
    for i in 2..m {
        out.insert(gs_z(m, i), r(i - 2)?.try_div(&r(i - 1)?)?);
    }
    out.insert("x".into(), pv(m)?.try_div(&r(m - 1)?)?);
    Ok(out)
}

/// `W_pluecker` with `p_0 = 1`.
pub fn w_pluecker_affine(m: usize) -> Result<RatFunc> {
    let w = w_pluecker(m)?;
    let mut unit = Bindings::new();
    unit.insert("p0".into(), RatFunc::one(&w.registry));
    Ok(w.expr.substitute(&unit, &w.registry)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    PlueckerEqLaurent,
    GsEqPluecker,
    MatrixEqLaurent,
    HvNote,
}

impl Identity {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PlueckerEqLaurent => "pluecker_eq_laurent",
            Self::GsEqPluecker => "gs_eq_pluecker",
            Self::MatrixEqLaurent => "matrix_eq_laurent",
            Self::HvNote => "hv_note",
        }
    }
}

fn compare(check: &str, m: usize, lhs: &RatFunc, rhs: &RatFunc) -> VerdictReport {
    VerdictReport::from_check(check, m, lhs.equals(rhs), || {
        format_expr(
            &RatFunc::from_poly(lhs.difference_numerator(rhs)),
            FormatStyle::Plain,
        )
    })
}

/// Runs one exact identity check.
pub fn verify_identity(which: Identity, m: usize) -> Result<VerdictReport> {
    check_rank(m)?;
    if m > IDENTITY_MAX_M {
        return Err(Error::ResourceLimit {
            what: "identity verification",
            m,
            max: IDENTITY_MAX_M,
        });
    }
    let check = which.as_str();
    match which {
        Identity::PlueckerEqLaurent => {
            let w = w_pluecker(m)?;
            let laurent = w_laurent(m)?;
            let lhs = w.expr.substitute(&plucker_subst(m)?, &laurent.registry)?;
            Ok(compare(check, m, &lhs, &laurent.expr))
        }
        Identity::GsEqPluecker => {
            let g = w_gs(m)?;
            let reg = vars::pluecker(m)?;
            let lhs = g.expr.substitute(&gs_subst(m)?, &reg)?;
            Ok(compare(check, m, &lhs, &w_pluecker_affine(m)?))
        }
        Identity::MatrixEqLaurent => matrix_eq_laurent(m),
        Identity::HvNote => {
            let q = num_complex::Complex64::new(1.0, 0.0);
            let opts = crate::numerics::NewtonOptions::default();
            let hv = crate::numerics::newton_multistart(&w_hori_vafa(m)?, q, 42, &opts)?;
            let pl = crate::numerics::newton_multistart(&w_pluecker(m)?, q, 42, &opts)?;
            Ok(VerdictReport::pass(check, m)
                .with("hori_vafa_points", hv.points.len())
                .with("pluecker_points", pl.points.len())
                .with("q", "1"))
        }
    }
}

/// Σ e_i^*(u_1) + Σ f_i^*(ū_2) against `W_laurent` at `q = 1`, then the
/// torus-scaled Bruhat factor at `q0 = 7/3`.
fn matrix_eq_laurent(m: usize) -> Result<VerdictReport> {
    let check = Identity::MatrixEqLaurent.as_str();
    let w = w_laurent(m)?;
    let reg = w.registry.clone();
    let pr = UnipotentParams::symbolic(m)?;
    let u1 = weyl::build_u1(m, &pr.a, &pr.c, &pr.b)?;
    let ub = weyl::build_ubar2(m, &pr.a, &pr.c, &pr.b)?;
    let mut sum = RatFunc::zero(&reg);
    for i in 1..=m {
        sum = &(&sum + &weyl::e_star(&u1, i)?) + &weyl::f_star(&ub, i)?;
    }
    let target = w.at_q(&Q::from_integer(1.into()))?;
    let first = compare(check, m, &sum, &target);
    if !first.passed() {
        return Ok(first);
    }
    let q0 = Q::new(7.into(), 3.into());
    let d = weyl::torus_element(m, &RatFunc::constant(&reg, q0.clone()))?;
    let wp = weyl::weyl_rep(&reg, &weyl::weyl_word(m, WeylSelector::ParabolicLongest)?)?;
    let u = weyl::bruhat_factor_u1(&d.mul(&wp)?.mul(&ub)?)?;
    let scaled = weyl::e_star(&u1, 1)?.scale(&q0);
    let got = weyl::e_star(&u, 1)?;
    if !got.equals(&scaled) {
        return Ok(VerdictReport::fail(
            check,
            m,
            format!("torus-scaled factor gives e_1^* = {got}"),
        ));
    }
    Ok(first.with("q0", q0.to_string()))
}
