use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::registry::VarRegistry;
use super::Q;

/// Exponent vector; one entry per registry variable. Entries may be negative.
pub type Exponents = Vec<i32>;

/// A Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
/// lexicographic and deterministic. Zero coefficients are never stored.
#[derive(Clone)]
pub struct SparsePoly {
    reg: Arc<VarRegistry>,
    terms: BTreeMap<Exponents, Q>,
}

/// Graded reverse lexicographic comparison of two exponent vectors.
///
/// This is the canonical monomial order: it picks leading terms for sign
/// normalization and orders terms when printing.
pub fn grevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl SparsePoly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Self {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::constant(reg, Q::one())
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Q) -> Self {
        Self::monomial(reg, vec![0; reg.len()], c)
    }

    pub fn monomial(reg: &Arc<VarRegistry>, exps: Exponents, c: Q) -> Self {
        assert_eq!(exps.len(), reg.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn var(reg: &Arc<VarRegistry>, i: usize) -> Self {
        let mut e = vec![0; reg.len()];
        e[i] = 1;
        Self::monomial(reg, e, Q::one())
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates.
    pub fn from_terms<I>(reg: &Arc<VarRegistry>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Q)>,
    {
        let mut acc: HashMap<Exponents, Q> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), reg.len(), "exponent vector length");
            *acc.entry(e).or_insert_with(Q::zero) += c;
        }
        Self {
            reg: reg.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value if this polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms sorted by the canonical order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        v
    }

    /// Leading term under the canonical order.
    pub fn leading(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    /// Componentwise minimum exponent; all zeros for the zero polynomial.
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.reg.len()];
        };
        let mut out = first.clone();
        for e in it {
            for (o, x) in out.iter_mut().zip(e) {
                *o = (*o).min(*x);
            }
        }
        out
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.reg.len()];
        };
        let mut out = first.clone();
        for e in it {
            for (o, x) in out.iter_mut().zip(e) {
                *o = (*o).max(*x);
            }
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    /// Set of weighted degrees `sum_i w_i e_i` over the support.
    pub fn weighted_degrees(&self, weights: &[i64]) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(&x, &w)| x as i64 * w).sum())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn check_reg(&self, other: &Self) {
        assert!(
            self.reg.same_as(&other.reg),
            "registry mismatch: {:?} vs {:?}",
            self.reg,
            other.reg
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_reg(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e, c);
        }
        Self {
            reg: self.reg.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(&self.reg);
        }
        Self {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[i32]) -> Self {
        Self {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, exps), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_reg(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.reg);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: HashMap<Exponents, Q> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let prod = c1 * c2;
                match acc.get_mut(&add_exps(e1, e2)) {
                    Some(slot) => *slot += prod,
                    None => {
                        acc.insert(add_exps(e1, e2), prod);
                    }
                }
            }
        }
        Self {
            reg: self.reg.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.reg);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(e, c)| {
            let k = e[var];
            if k == 0 {
                return None;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            Some((ne, c * Q::from_integer(BigInt::from(k))))
        });
        Self {
            reg: self.reg.clone(),
            terms: terms.collect(),
        }
    }

    /// Splits off the largest monomial factor: `self = x^shift * rest` where
    /// `rest` has componentwise minimum exponent zero.
    pub fn split_monomial(&self) -> (Exponents, Self) {
        let shift = self.min_exponents();
        if shift.iter().all(|&x| x == 0) {
            return (shift, self.clone());
        }
        let neg: Exponents = shift.iter().map(|x| -x).collect();
        (shift, self.mul_monomial(&neg))
    }

    /// Writes `self = s * p` with `p` integral, of content 1, and with a
    /// positive leading coefficient. Returns `(s, p)`; zero maps to `(0, 0)`.
    pub fn primitive_part(&self) -> (Q, Self) {
        if self.is_zero() {
            return (Q::zero(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut s = Q::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            s = -s;
        }
        let inv = s.recip();
        (s, self.scale(&inv))
    }

    /// Exact division. Returns `None` unless `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_reg(divisor);
        assert!(!divisor.is_zero(), "exact_div by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(&self.reg));
        }
        if divisor.is_monomial() {
            let (e, c) = divisor.terms.iter().next().unwrap();
            let neg: Exponents = e.iter().map(|x| -x).collect();
            return Some(self.mul_monomial(&neg).scale(&c.recip()));
        }
        let (fs, f0) = self.split_monomial();
        let (gs, g0) = divisor.split_monomial();
        let bound: Exponents = f0
            .max_exponents()
            .iter()
            .zip(g0.max_exponents())
            .map(|(a, b)| a - b)
            .collect();
        if bound.iter().any(|&b| b < 0) {
            return None;
        }
        let (glead_e, glead_c) = g0.terms.iter().next_back().unwrap();
        let glead_e = glead_e.clone();
        let glead_inv = glead_c.recip();
        let mut rem = f0.terms;
        let mut quot: BTreeMap<Exponents, Q> = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back() {
            let mut qe = Vec::with_capacity(re.len());
            for ((r, g), b) in re.iter().zip(&glead_e).zip(&bound) {
                let d = r - g;
                if d < 0 || d > *b {
                    return None;
                }
                qe.push(d);
            }
            let qc = rc * &glead_inv;
            for (ge, gc) in &g0.terms {
                add_term(&mut rem, &add_exps(ge, &qe), &-(gc * &qc));
            }
            add_term(&mut quot, &qe, &qc);
        }
        let shift: Exponents = fs.iter().zip(&gs).map(|(a, b)| a - b).collect();
        Some(
            Self {
                reg: self.reg.clone(),
                terms: quot,
            }
            .mul_monomial(&shift),
        )
    }

    /// Evaluates at a complex point given by one value per registry variable.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.reg.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(q_to_f64(c), 0.0);
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    t *= x.powi(k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact evaluation at a rational point. `None` if a negative power hits zero.
    pub fn eval_exact(&self, point: &[Q]) -> Option<Q> {
        assert_eq!(point.len(), self.reg.len());
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k < 0 && x.is_zero() {
                    return None;
                }
                if k != 0 {
                    t *= num_traits::pow::Pow::pow(x, k);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Re-expresses this polynomial over another registry containing all of
    /// its (used) variable names.
    pub fn rebase(&self, target: &Arc<VarRegistry>) -> Option<Self> {
        let map: Vec<Option<usize>> = self
            .reg
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    ne[map[i]?] = k;
                }
            }
            terms.insert(ne, c.clone());
        }
        Some(Self {
            reg: target.clone(),
            terms,
        })
    }
}

fn add_exps(a: &[i32], b: &[i32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn add_term(terms: &mut BTreeMap<Exponents, Q>, e: &Exponents, c: &Q) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(e) {
        Some(slot) => {
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        None => {
            terms.insert(e.clone(), c.clone());
        }
    }
}

pub(crate) fn q_to_f64(c: &Q) -> f64 {
    match (c.numer().to_f64(), c.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => c.to_f64().unwrap_or(f64::NAN),
    }
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.reg.same_as(&other.reg) && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::expr::Expr::from_poly(self).plain())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::expr::Expr::from_poly(self).plain())
    }
}
