use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{Exponents, SparsePoly};
use super::registry::VarRegistry;
use super::{SymbolicError, Q};

/// Below this modulus a denominator value is treated as a pole.
pub const POLE_GUARD: f64 = 1e-300;

/// A quotient of Laurent polynomials over the rationals.
///
/// The numerator is a Laurent polynomial (monomials are units, so all
/// monomial content lives upstairs). The denominator is a multiset of
/// normalized factors: non-constant polynomials with no monomial content,
/// integer coefficients of content 1 and a positive leading coefficient.
/// Factors are never factorized further; whenever a numerator is formed it is
/// trial-divided by the factors present, which removes every cancellation
/// that is visible at the factor level.
///
/// Equality is semantic (cross-multiplication), not structural.
#[derive(Clone)]
pub struct RatFunc {
    num: SparsePoly,
    den: Vec<(SparsePoly, u32)>,
}

/// Variable bindings for [`RatFunc::substitute`], keyed by source variable name.
pub type Bindings = HashMap<String, RatFunc>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow(i32),
}

impl RatFunc {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::zero(reg))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(SparsePoly::one(reg))
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Q) -> Self {
        Self::from_poly(SparsePoly::constant(reg, c))
    }

    pub fn integer(reg: &Arc<VarRegistry>, n: i64) -> Self {
        Self::constant(reg, Q::from_integer(n.into()))
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        Self {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn var(reg: &Arc<VarRegistry>, name: &str) -> Result<Self, SymbolicError> {
        Ok(Self::from_poly(SparsePoly::var(reg, reg.require(name)?)))
    }

    pub fn var_at(reg: &Arc<VarRegistry>, i: usize) -> Self {
        Self::from_poly(SparsePoly::var(reg, i))
    }

    /// `num / den`, failing when `den` is the zero polynomial.
    pub fn from_parts(num: SparsePoly, den: SparsePoly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        let mut out = Self::from_poly(num);
        out.divide_by_poly(&den);
        Ok(out)
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.num.registry()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True when there is no denominator and no negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty() && self.num.is_polynomial()
    }

    /// Number of numerator terms plus denominator-factor terms; a size proxy.
    pub fn size(&self) -> usize {
        self.num.num_terms() + self.den.iter().map(|(f, _)| f.num_terms()).sum::<usize>()
    }

    /// Denominator factors with multiplicities, in canonical order.
    pub fn denominator_factors(&self) -> &[(SparsePoly, u32)] {
        &self.den
    }

    /// The raw (Laurent) numerator as stored.
    pub fn laurent_numerator(&self) -> &SparsePoly {
        &self.num
    }

    fn negative_shift(&self) -> Exponents {
        self.num.min_exponents().iter().map(|&e| e.min(0)).collect()
    }

    /// Canonical numerator with nonnegative exponents, paired with
    /// [`RatFunc::denominator`].
    pub fn numerator(&self) -> SparsePoly {
        let neg: Exponents = self.negative_shift().iter().map(|e| -e).collect();
        self.num.mul_monomial(&neg)
    }

    /// Canonical denominator: content 1, positive leading coefficient, and no
    /// monomial factor in common with [`RatFunc::numerator`].
    pub fn denominator(&self) -> SparsePoly {
        let neg: Exponents = self.negative_shift().iter().map(|e| -e).collect();
        let mut d = SparsePoly::monomial(self.registry(), neg, Q::one());
        for (f, e) in &self.den {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    fn check_reg(&self, other: &Self) -> Result<(), SymbolicError> {
        if self.registry().same_as(other.registry()) {
            Ok(())
        } else {
            Err(SymbolicError::RegistryMismatch {
                left: format!("{:?}", self.registry()),
                right: format!("{:?}", other.registry()),
            })
        }
    }

    /// Divides by a polynomial in place; `p` must be nonzero.
    fn divide_by_poly(&mut self, p: &SparsePoly) {
        debug_assert!(!p.is_zero());
        let (shift, rest) = p.split_monomial();
        let (scale, prim) = rest.primitive_part();
        let neg: Exponents = shift.iter().map(|e| -e).collect();
        self.num = self.num.mul_monomial(&neg).scale(&scale.recip());
        if prim.as_constant().is_none() {
            push_factor(&mut self.den, prim, 1);
        }
        self.reduce();
    }

    /// Cancels every denominator factor that divides the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.exact_div(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    /// Re-runs normalization. Idempotent.
    pub fn normalized(&self) -> Self {
        let mut out = Self::from_poly(self.num.clone());
        for (f, e) in &self.den {
            for _ in 0..*e {
                out.divide_by_poly(f);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(self.registry());
        }
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.check_reg(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let (lcm, ca, cb) = lcm_cofactors(&self.den, &other.den);
        let num = self
            .num
            .mul(&expand(self.registry(), &ca))
            .add(&other.num.mul(&expand(self.registry(), &cb)));
        let mut out = Self { num, den: lcm };
        out.reduce();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.check_reg(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.registry()));
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            push_factor(&mut den, f.clone(), *e);
        }
        let mut out = Self {
            num: self.num.mul(&other.num),
            den,
        };
        if !self.den.is_empty() || !other.den.is_empty() {
            out.reduce();
        }
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.check_reg(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        let mut out = Self::from_poly(expand(self.registry(), &self.den));
        out.divide_by_poly(&self.num);
        Ok(out)
    }

    pub fn pow(&self, n: i32) -> Result<Self, SymbolicError> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Self::one(self.registry()));
        }
        let mut out = Self {
            num: self.num.pow(n),
            den: self.den.iter().map(|(f, e)| (f.clone(), e * n)).collect(),
        };
        out.reduce();
        Ok(out)
    }

    /// Partial derivative with respect to registry variable `var`.
    pub fn differentiate(&self, var: usize) -> Self {
        let reg = self.registry().clone();
        let mut out = Self {
            num: self.num.derivative(var),
            den: self.den.clone(),
        };
        out.reduce();
        for (i, (f, e)) in self.den.iter().enumerate() {
            let df = f.derivative(var);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[i].1 += 1;
            let coeff = Q::from_integer((*e as i64).into());
            let mut term = Self {
                num: self.num.mul(&df).scale(&coeff),
                den,
            };
            term.reduce();
            out = out.try_sub(&term).expect("same registry");
        }
        debug_assert!(out.registry().same_as(&reg));
        out
    }

    pub fn differentiate_by(&self, name: &str) -> Result<Self, SymbolicError> {
        Ok(self.differentiate(self.registry().require(name)?))
    }

    /// Exact equality as rational functions, decided by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        if !self.registry().same_as(other.registry()) {
            return false;
        }
        self.difference_numerator(other).is_zero()
    }

    /// `num(f)·(L/den f) − num(g)·(L/den g)` for the factor-wise lcm `L`; the
    /// polynomial whose vanishing decides [`RatFunc::equals`].
    pub fn difference_numerator(&self, other: &Self) -> SparsePoly {
        let (_, ca, cb) = lcm_cofactors(&self.den, &other.den);
        let reg = self.registry();
        self.num
            .mul(&expand(reg, &ca))
            .sub(&other.num.mul(&expand(reg, &cb)))
    }

    /// Composes with `bindings`, producing a function over `target`.
    ///
    /// Unbound variables map to the variable of the same name in `target`.
    pub fn substitute(
        &self,
        bindings: &Bindings,
        target: &Arc<VarRegistry>,
    ) -> Result<Self, SymbolicError> {
        let reg = self.registry();
        let mut images = Vec::with_capacity(reg.len());
        for name in reg.names() {
            let img = match bindings.get(name) {
                Some(f) => {
                    if !f.registry().same_as(target) {
                        return Err(SymbolicError::RegistryMismatch {
                            left: format!("{:?}", f.registry()),
                            right: format!("{target:?}"),
                        });
                    }
                    f.clone()
                }
                None => match target.index_of(name) {
                    Some(i) => Self::var_at(target, i),
                    None => {
                        // Only an error if the variable actually occurs.
                        let i = reg.require(name)?;
                        let used =
                            self.num.depends_on(i) || self.den.iter().any(|(f, _)| f.depends_on(i));
                        if used {
                            return Err(SymbolicError::UnknownVariable(name.clone()));
                        }
                        Self::zero(target)
                    }
                },
            };
            images.push(img);
        }
        for name in bindings.keys() {
            reg.require(name)?;
        }
        let mut powers = PowerCache::new(&images, reg.names());
        let num = eval_poly(&self.num, &mut powers, target)?;
        let mut out = num;
        for (f, e) in &self.den {
            let img = eval_poly(f, &mut powers, target)?;
            if img.is_zero() {
                return Err(SymbolicError::ZeroDenominator {
                    expr: super::expr::Expr::from_poly(f).plain(),
                });
            }
            out = out.try_div(&img.pow(*e as i32)?)?;
        }
        Ok(out)
    }

    /// Floating-point evaluation at a complex point (one value per variable).
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, SymbolicError> {
        let neg = self.negative_shift();
        let mut den = Complex64::new(1.0, 0.0);
        for (x, &k) in point.iter().zip(&neg) {
            if k < 0 {
                den *= x.powi(-k);
            }
        }
        for (f, e) in &self.den {
            den *= f.eval_complex(point).powi(*e as i32);
        }
        if den.norm().is_nan() || den.norm() < POLE_GUARD {
            return Err(SymbolicError::Pole {
                re: den.re,
                im: den.im,
            });
        }
        let pos: Exponents = neg.iter().map(|e| -e).collect();
        let num = self.num.mul_monomial(&pos).eval_complex(point);
        Ok(num / den)
    }

    /// Evaluation with variables given by name.
    pub fn evaluate_named(
        &self,
        point: &HashMap<String, Complex64>,
    ) -> Result<Complex64, SymbolicError> {
        let reg = self.registry();
        let mut v = Vec::with_capacity(reg.len());
        for name in reg.names() {
            v.push(
                *point
                    .get(name)
                    .ok_or_else(|| SymbolicError::UnboundVariable(name.clone()))?,
            );
        }
        self.evaluate(&v)
    }

    /// Exact evaluation at a rational point; `None` at a pole.
    pub fn evaluate_exact(&self, point: &[Q]) -> Option<Q> {
        let mut den = Q::one();
        for (f, e) in &self.den {
            den *= num_traits::pow::Pow::pow(&f.eval_exact(point)?, *e);
        }
        if den.is_zero() {
            return None;
        }
        Some(self.num.eval_exact(point)? / den)
    }

    /// Re-expresses over another registry that contains every used name.
    pub fn rebase(&self, target: &Arc<VarRegistry>) -> Result<Self, SymbolicError> {
        let miss = || SymbolicError::RegistryMismatch {
            left: format!("{:?}", self.registry()),
            right: format!("{target:?}"),
        };
        let num = self.num.rebase(target).ok_or_else(miss)?;
        let mut den = Vec::new();
        for (f, e) in &self.den {
            push_factor(&mut den, f.rebase(target).ok_or_else(miss)?, *e);
        }
        Ok(Self { num, den })
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.iter().any(|(f, _)| f.depends_on(var))
    }

    /// Weighted degrees appearing in the canonical numerator and denominator.
    pub fn weighted_degrees(&self, weights: &[i64]) -> (Vec<i64>, Vec<i64>) {
        (
            self.numerator().weighted_degrees(weights),
            self.denominator().weighted_degrees(weights),
        )
    }
}

/// Applies one of the elementary ring operations with full error reporting.
pub fn ring_op(f: &RatFunc, g: Option<&RatFunc>, op: RingOp) -> Result<RatFunc, SymbolicError> {
    let need = || g.ok_or(SymbolicError::MissingOperand);
    match op {
        RingOp::Add => f.try_add(need()?),
        RingOp::Sub => f.try_sub(need()?),
        RingOp::Mul => f.try_mul(need()?),
        RingOp::Div => f.try_div(need()?),
        RingOp::Neg => Ok(f.neg()),
        RingOp::Pow(n) => f.pow(n),
    }
}

fn push_factor(den: &mut Vec<(SparsePoly, u32)>, f: SparsePoly, e: u32) {
    if e == 0 {
        return;
    }
    if let Some(slot) = den.iter_mut().find(|(g, _)| *g == f) {
        slot.1 += e;
        return;
    }
    let pos = den
        .iter()
        .position(|(g, _)| factor_key(&f) < factor_key(g))
        .unwrap_or(den.len());
    den.insert(pos, (f, e));
}

fn factor_key(f: &SparsePoly) -> (usize, Vec<(&Exponents, &Q)>) {
    (f.num_terms(), f.terms().collect())
}

type Factors = Vec<(SparsePoly, u32)>;

/// Returns `(lcm, lcm/a, lcm/b)` of two factor multisets.
fn lcm_cofactors(a: &[(SparsePoly, u32)], b: &[(SparsePoly, u32)]) -> (Factors, Factors, Factors) {
    let mut lcm = a.to_vec();
    for (f, e) in b {
        match lcm.iter_mut().find(|(g, _)| g == f) {
            Some(slot) => slot.1 = slot.1.max(*e),
            None => push_factor(&mut lcm, f.clone(), *e),
        }
    }
    let cof = |x: &[(SparsePoly, u32)]| {
        lcm.iter()
            .filter_map(|(f, e)| {
                let have = x.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                (e > &have).then(|| (f.clone(), e - have))
            })
            .collect::<Vec<_>>()
    };
    let ca = cof(a);
    let cb = cof(b);
    (lcm, ca, cb)
}

fn expand(reg: &Arc<VarRegistry>, factors: &[(SparsePoly, u32)]) -> SparsePoly {
    let mut out = SparsePoly::one(reg);
    for (f, e) in factors {
        out = out.mul(&f.pow(*e));
    }
    out
}

struct PowerCache<'a> {
    images: &'a [RatFunc],
    names: &'a [String],
    cache: HashMap<(usize, i32), RatFunc>,
}

impl<'a> PowerCache<'a> {
    fn new(images: &'a [RatFunc], names: &'a [String]) -> Self {
        Self {
            images,
            names,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, var: usize, k: i32) -> Result<RatFunc, SymbolicError> {
        if let Some(v) = self.cache.get(&(var, k)) {
            return Ok(v.clone());
        }
        let img = &self.images[var];
        if k < 0 && img.is_zero() {
            return Err(SymbolicError::ZeroDenominator {
                expr: format!("{}^{}", self.names[var], k),
            });
        }
        let v = img.pow(k)?;
        self.cache.insert((var, k), v.clone());
        Ok(v)
    }
}

fn eval_poly(
    p: &SparsePoly,
    powers: &mut PowerCache<'_>,
    target: &Arc<VarRegistry>,
) -> Result<RatFunc, SymbolicError> {
    // Terms with a common denominator structure are summed by grouping their
    // numerators, which avoids re-normalizing after every single term.
    let mut groups: Vec<(Vec<(SparsePoly, u32)>, SparsePoly)> = Vec::new();
    for (e, c) in p.terms() {
        let mut t = RatFunc::constant(target, c.clone());
        for (v, &k) in e.iter().enumerate() {
            if k != 0 {
                t = t.try_mul(&powers.get(v, k)?)?;
            }
        }
        match groups.iter_mut().find(|(d, _)| *d == t.den) {
            Some((_, n)) => *n = n.add(&t.num),
            None => groups.push((t.den, t.num)),
        }
    }
    let mut out = RatFunc::zero(target);
    for (den, num) in groups {
        let mut t = RatFunc { num, den };
        t.reduce();
        out = out.try_add(&t)?;
    }
    Ok(out)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::expr::Expr::from_ratfunc(self).plain())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::expr::Expr::from_ratfunc(self).plain())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$inner(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

impl std::ops::Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(&self)
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(mut iter: I) -> RatFunc {
        let first = iter
            .next()
            .expect("sum of an empty iterator has no registry");
        iter.fold(first, |acc, x| acc + x)
    }
}
