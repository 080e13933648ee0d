use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::report::VerdictReport;
use crate::symbolic::{q_to_f64, Q};

/// Sweep cap for the simultaneous root iteration.
pub const MAX_SWEEPS: usize = 500;

/// Eigenvalues with multiplicity, sorted by argument then modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
}

fn sort_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    let arg = |z: &Complex64| if z.norm() < 1e-12 { -4.0 } else { z.arg() };
    arg(a)
        .total_cmp(&arg(b))
        .then(a.norm().total_cmp(&b.norm()))
}

impl Spectrum {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(sort_key);
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Coefficients `c_0, ..., c_n` (constant first) of `det(λI - A)`.
pub fn charpoly_exact(a: &[Vec<Q>]) -> Vec<Q> {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -tr / Q::from_integer((k as i64).into());
    }
    coeffs
}

fn charpoly_float(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let mut coeffs = vec![Complex64::zero(); n + 1];
    coeffs[n] = Complex64::one();
    let mut mk = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        mk = a * &mk + DMatrix::identity(n, n) * coeffs[n - k + 1];
        let tr = (a * &mk).trace();
        coeffs[n - k] = -tr / k as f64;
    }
    coeffs
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divmod(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![Q::zero()], r);
    }
    let lead = b.last().unwrap().clone();
    let mut quo = vec![Q::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &f * bc;
        }
        quo[shift] = f;
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Q::zero());
        }
    }
    (quo, r)
}

fn is_zero_poly(p: &[Q]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&y) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().unwrap().clone();
    x.iter().map(|c| c / &lead).collect()
}

fn derivative(p: &[Q]) -> Vec<Q> {
    if p.len() <= 1 {
        return vec![Q::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer((i as i64).into()))
        .collect()
}

/// Yun's square-free factorization: `(factor, multiplicity)` pairs.
pub fn squarefree(p: &[Q]) -> Vec<(Vec<Q>, usize)> {
    let p = trim(p.to_vec());
    let mut out = Vec::new();
    let a0 = poly_gcd(&p, &derivative(&p));
    let (mut b, _) = poly_divmod(&p, &a0);
    let (mut c, _) = poly_divmod(&derivative(&p), &a0);
    let mut d: Vec<Q> = {
        let db = derivative(&b);
        let len = c.len().max(db.len());
        (0..len)
            .map(|i| c.get(i).cloned().unwrap_or_default() - db.get(i).cloned().unwrap_or_default())
            .collect()
    };
    let mut i = 1;
    while trim(b.clone()).len() > 1 {
        let a = poly_gcd(&b, &d);
        if trim(a.clone()).len() > 1 {
            out.push((a.clone(), i));
        }
        b = poly_divmod(&b, &a).0;
        c = poly_divmod(&d, &a).0;
        let db = derivative(&b);
        let len = c.len().max(db.len());
        d = (0..len)
            .map(|k| c.get(k).cloned().unwrap_or_default() - db.get(k).cloned().unwrap_or_default())
            .collect();
        i += 1;
    }
    out
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

/// Roots of a polynomial (constant coefficient first) by Durand-Kerner.
pub fn durand_kerner(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut p = p.to_vec();
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    let n = p.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * bound.min(2.0))
        .collect();
    let scale = monic.iter().map(|c| c.norm()).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let delta = horner(&monic, z[i]) / den;
            z[i] -= delta;
            moved = moved.max(delta.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    let worst = z
        .iter()
        .map(|&r| horner(&monic, r).norm() / scale.max(1.0) / (1.0 + r.norm()).powi(n as i32))
        .fold(0.0, f64::max);
    if worst.is_nan() || worst >= 1e-12 {
        return Err(Error::RootsDidNotConverge { sweeps: MAX_SWEEPS });
    }
    Ok(z)
}

/// Spectrum of an exact rational matrix: exact characteristic polynomial,
/// exact square-free split, then numeric roots of each factor.
pub fn spectrum_exact(a: &[Vec<Q>]) -> Result<Spectrum> {
    let cp = charpoly_exact(a);
    let mut values = Vec::with_capacity(a.len());
    for (f, mult) in squarefree(&cp) {
        let fc: Vec<Complex64> = f.iter().map(|c| Complex64::new(q_to_f64(c), 0.0)).collect();
        for r in durand_kerner(&fc)? {
            values.extend(std::iter::repeat_n(r, mult));
        }
    }
    Ok(Spectrum::new(values))
}

/// Spectrum of a complex matrix via its characteristic polynomial.
pub fn spectrum(a: &DMatrix<Complex64>) -> Result<Spectrum> {
    if a.iter().all(|z| z.im == 0.0 && z.re.is_finite()) {
        let exact: Vec<Vec<Q>> = (0..a.nrows())
            .map(|i| {
                (0..a.ncols())
                    .map(|j| Q::from_float(a[(i, j)].re).expect("finite"))
                    .collect()
            })
            .collect();
        return spectrum_exact(&exact);
    }
    let cp = charpoly_float(a);
    Ok(Spectrum::new(durand_kerner(&cp)?))
}

/// Matches two spectra greedily, then improves the matching by pairwise
/// swaps; passes when the worst matched distance is at most `tol`.
pub fn compare_spectra(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<VerdictReport> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    let (av, bv) = (a.values(), b.values());
    let mut used = vec![false; n];
    let mut pair = vec![0usize; n];
    for i in 0..n {
        let j = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&x, &y| (av[i] - bv[x]).norm().total_cmp(&(av[i] - bv[y]).norm()))
            .expect("unused partner");
        used[j] = true;
        pair[i] = j;
    }
    let cost = |i: usize, j: usize| (av[i] - bv[j]).norm();
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n {
            for k in i + 1..n {
                let before = cost(i, pair[i]).max(cost(k, pair[k]));
                let after = cost(i, pair[k]).max(cost(k, pair[i]));
                if after < before {
                    pair.swap(i, k);
                    improved = true;
                }
            }
        }
    }
    let (worst_i, worst) = (0..n)
        .map(|i| (i, cost(i, pair[i])))
        .fold((0, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(VerdictReport::from_check("spectra", 0, worst <= tol, || {
        let (x, y) = (av[worst_i], bv[pair[worst_i]]);
        format!(
            "worst pair ({}, {}) vs ({}, {}) at distance {worst:e}",
            x.re, x.im, y.re, y.im
        )
    })
    .with("max_distance", worst)
    .with("tol", tol))
}
