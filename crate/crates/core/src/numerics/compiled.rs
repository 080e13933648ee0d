use num_complex::Complex64;

use crate::superpotential::SuperpotentialExpr;
use crate::symbolic::{q_to_f64, RatFunc, SparsePoly, POLE_GUARD};

#[derive(Debug, Clone)]
struct Poly {
    terms: Vec<(Vec<(usize, i32)>, f64)>,
}

impl Poly {
    fn new(p: &SparsePoly) -> Self {
        Self {
            terms: p
                .terms()
                .map(|(e, c)| {
                    let sparse = e
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k != 0)
                        .map(|(i, &k)| (i, k))
                        .collect();
                    (sparse, q_to_f64(c))
                })
                .collect(),
        }
    }

    fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for &(i, k) in e {
                t *= x[i].powi(k);
            }
            acc += t;
        }
        acc
    }
}

/// A rational function prepared for fast floating-point evaluation.
#[derive(Debug, Clone)]
pub struct CompiledRatFunc {
    num: Poly,
    den: Vec<(Poly, i32)>,
}

impl CompiledRatFunc {
    pub fn new(f: &RatFunc) -> Self {
        Self {
            num: Poly::new(f.laurent_numerator()),
            den: f
                .denominator_factors()
                .iter()
                .map(|(p, e)| (Poly::new(p), *e as i32))
                .collect(),
        }
    }

    /// `None` at a pole or when the value is not finite.
    pub fn eval(&self, x: &[Complex64]) -> Option<Complex64> {
        let mut den = Complex64::new(1.0, 0.0);
        for (p, e) in &self.den {
            den *= p.eval(x).powi(*e);
        }
        if den.norm().is_nan() || den.norm() < POLE_GUARD {
            return None;
        }
        let v = self.num.eval(x) / den;
        (v.re.is_finite() && v.im.is_finite()).then_some(v)
    }

    /// Smallest modulus among denominator factors at `x`.
    pub fn min_factor(&self, x: &[Complex64]) -> f64 {
        self.den
            .iter()
            .map(|(p, _)| p.eval(x).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Value, gradient and Hessian of a superpotential in its solve variables,
/// compiled term by term.
#[derive(Debug, Clone)]
pub struct CompiledModel {
    vars: Vec<usize>,
    nvars: usize,
    terms: Vec<CompiledRatFunc>,
    grad: Vec<Vec<CompiledRatFunc>>,
    hess: Vec<Vec<CompiledRatFunc>>,
    /// Solve-variable slots that occur with a negative exponent.
    torus: Vec<usize>,
}

impl CompiledModel {
    pub fn new(w: &SuperpotentialExpr) -> Self {
        let vars = w.solve_vars();
        let k = vars.len();
        let mut grad = vec![Vec::new(); k];
        let mut hess = vec![Vec::new(); k * k];
        for t in &w.terms {
            let d1: Vec<RatFunc> = vars.iter().map(|&v| t.differentiate(v)).collect();
            for i in 0..k {
                if !d1[i].is_zero() {
                    grad[i].push(CompiledRatFunc::new(&d1[i]));
                }
                for j in i..k {
                    let d2 = d1[i].differentiate(vars[j]);
                    if !d2.is_zero() {
                        hess[i * k + j].push(CompiledRatFunc::new(&d2));
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                hess[i * k + j] = hess[j * k + i].clone();
            }
        }
        let torus = (0..k)
            .filter(|&s| {
                w.terms
                    .iter()
                    .any(|t| t.laurent_numerator().terms().any(|(e, _)| e[vars[s]] < 0))
            })
            .collect();
        Self {
            nvars: w.registry.len(),
            terms: w.terms.iter().map(CompiledRatFunc::new).collect(),
            vars,
            grad,
            hess,
            torus,
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Full registry point from solve coordinates; `fixed` gives values of
    /// the remaining variables by registry index.
    pub fn embed(&self, x: &[Complex64], fixed: &[(usize, Complex64)]) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); self.nvars];
        for &(i, v) in fixed {
            full[i] = v;
        }
        for (s, &i) in self.vars.iter().enumerate() {
            full[i] = x[s];
        }
        full
    }

    fn sum(fs: &[CompiledRatFunc], full: &[Complex64]) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for f in fs {
            acc += f.eval(full)?;
        }
        Some(acc)
    }

    pub fn value(&self, full: &[Complex64]) -> Option<Complex64> {
        Self::sum(&self.terms, full)
    }

    pub fn gradient(&self, full: &[Complex64]) -> Option<Vec<Complex64>> {
        self.grad.iter().map(|g| Self::sum(g, full)).collect()
    }

    /// Row-major Hessian.
    pub fn hessian(&self, full: &[Complex64]) -> Option<Vec<Complex64>> {
        self.hess.iter().map(|h| Self::sum(h, full)).collect()
    }

    /// Smallest denominator factor or torus coordinate modulus at the point.
    pub fn boundary_distance(&self, full: &[Complex64]) -> f64 {
        let dens = self
            .terms
            .iter()
            .map(|t| t.min_factor(full))
            .fold(f64::INFINITY, f64::min);
        self.torus
            .iter()
            .map(|&s| full[self.vars[s]].norm())
            .fold(dens, f64::min)
    }
}
