//! The open domain `X° = P^{2m-1} \ D`, its divisor polynomials, the
//! parametrization `phi` by the open Richardson variety and the chart on `Ω`.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{check_index, check_rank, Error, Result};
use crate::report::VerdictReport;
use crate::superpotential::plucker_subst;
use crate::symbolic::{RatFunc, SparsePoly, VarRegistry, Q};
use crate::vars::{self, UnipotentParams};
use crate::weyl::{self, FieldMatrix, WeylSelector};

/// Absolute threshold below which a numeric divisor value counts as zero.
pub const DOMAIN_GUARD: f64 = 1e-12;

/// Largest rank accepted by [`verify_phi`].
pub const PHI_MAX_M: usize = 4;

fn p_index(reg: &VarRegistry, k: usize) -> usize {
    reg.index_of(&format!("p{k}")).expect("pluecker registry")
}

/// `r_j = Σ_{k=0}^{j} (-1)^k p_{j-k} p_{2m-1+k-j}` over [`vars::pluecker`].
pub fn r_poly(m: usize, j: usize) -> Result<SparsePoly> {
    check_index("r", j, 0, 2 * m - 1)?;
    let reg = vars::pluecker(m)?;
    let mut out = SparsePoly::zero(&reg);
    for k in 0..=j {
        let mut e = vec![0; reg.len()];
        e[p_index(&reg, j - k)] += 1;
        e[p_index(&reg, 2 * m - 1 + k - j)] += 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out = out.add(&SparsePoly::monomial(&reg, e, Q::from_integer(sign.into())));
    }
    Ok(out)
}

/// Defining polynomial of the divisor `D_l`, `0 <= l <= m`.
pub fn divisor_poly(m: usize, l: usize) -> Result<SparsePoly> {
    check_rank(m)?;
    check_index("divisor", l, 0, m)?;
    let reg = vars::pluecker(m)?;
    Ok(match l {
        0 => SparsePoly::var(&reg, p_index(&reg, 0)),
        l if l == m => SparsePoly::var(&reg, p_index(&reg, 2 * m - 1)),
        l => r_poly(m, l)?,
    })
}

pub fn divisor_set(m: usize) -> Result<Vec<SparsePoly>> {
    (0..=m).map(|l| divisor_poly(m, l)).collect()
}

/// Total degree of a homogeneous polynomial.
pub fn total_degree(p: &SparsePoly) -> i64 {
    let ones = vec![1; p.registry().len()];
    p.weighted_degrees(&ones).into_iter().max().unwrap_or(0)
}

/// The full point `(1, p_1, ..., p_{2m-1}, q)` for a registry lookup.
fn full_point<T: Clone>(affine: &[T], one: T, q: T) -> Vec<T> {
    let mut v = Vec::with_capacity(affine.len() + 2);
    v.push(one);
    v.extend_from_slice(affine);
    v.push(q);
    v
}

fn check_affine_len(m: usize, len: usize) -> Result<()> {
    if len != 2 * m - 1 {
        return Err(Error::DimensionMismatch {
            left: len,
            right: 2 * m - 1,
        });
    }
    Ok(())
}

/// Numeric membership in `X°` on the chart `p_0 = 1`.
pub fn in_domain(m: usize, affine: &[Complex64]) -> Result<bool> {
    check_affine_len(m, affine.len())?;
    let point = full_point(affine, Complex64::new(1.0, 0.0), Complex64::zero());
    Ok(divisor_set(m)?
        .iter()
        .all(|d| d.eval_complex(&point).norm() > DOMAIN_GUARD))
}

/// Exact membership in `X°` on the chart `p_0 = 1`.
pub fn in_domain_exact(m: usize, affine: &[Q]) -> Result<bool> {
    check_affine_len(m, affine.len())?;
    let point = full_point(affine, Q::from_integer(1.into()), Q::zero());
    Ok(divisor_set(m)?
        .iter()
        .all(|d| d.eval_exact(&point).is_some_and(|v| !v.is_zero())))
}

/// `r_0, ..., r_{m-1}` at the point `p` (with `p[0] = 1`).
fn r_values(m: usize, p: &[RatFunc]) -> Vec<RatFunc> {
    (0..m)
        .map(|j| {
            (0..=j)
                .map(|k| {
                    let t = &p[j - k] * &p[2 * m - 1 + k - j];
                    if k % 2 == 0 {
                        t
                    } else {
                        t.neg()
                    }
                })
                .sum()
        })
        .collect()
}

fn with_unit(affine: &[RatFunc]) -> Vec<RatFunc> {
    let mut p = vec![RatFunc::one(affine[0].registry())];
    p.extend_from_slice(affine);
    p
}

/// The matrix `phi(p)` for affine coordinates `p_1, ..., p_{2m-1}`.
pub fn phi(m: usize, affine: &[RatFunc]) -> Result<FieldMatrix> {
    check_rank(m)?;
    check_affine_len(m, affine.len())?;
    let reg = affine[0].registry().clone();
    let p = with_unit(affine);
    let r = r_values(m, &p);
    let mut rinv = Vec::with_capacity(m);
    for (j, rj) in r.iter().enumerate() {
        if rj.is_zero() {
            return Err(Error::NotInDomain(format!("r{j}")));
        }
        rinv.push(rj.inverse()?);
    }
    let n = 2 * m;
    let sgn = |k: usize, f: RatFunc| if k % 2 == 0 { f } else { f.neg() };
    let mut out = FieldMatrix::zeros(&reg, n);
    // `col` accumulates coefficients of v_1..v_n (stored 0-based).
    for j in 1..=n {
        let mut col = vec![RatFunc::zero(&reg); n];
        let mut put = |k: usize, v: RatFunc| col[k - 1] = &col[k - 1] + &v;
        if j == 1 {
            put(n, p[n - 1].clone());
        } else if j <= m {
            put(n + 1 - j, sgn(j, &r[j - 1] * &rinv[j - 2]));
            for l in 1..=j.saturating_sub(2) {
                put(n - l, sgn(l + 1, &(&p[n - j] * &p[l]) * &rinv[l - 1]));
            }
            put(n, p[n - j].clone());
        } else if j < n {
            put(n + 1 - j, sgn(j, &r[n - 1 - j] * &rinv[n - j]));
            for k in m + 1..j {
                put(n + 1 - k, sgn(k, &(&p[n - j] * &p[k - 1]) * &rinv[n - k]));
            }
            for k in 1..m {
                put(n - k, sgn(k - 1, &(&p[n - j] * &p[k]) * &rinv[k - 1]));
            }
            put(n, p[n - j].clone());
        } else {
            put(1, rinv[0].neg());
            for k in 1..m {
                put(k + 1, sgn(k, &p[n - 1 - k] * &rinv[k]));
                put(n - k, sgn(k + 1, &p[k] * &rinv[k - 1]));
            }
            put(n, RatFunc::one(&reg));
        }
        for (row, v) in col.into_iter().enumerate() {
            out.set(row, j - 1, v);
        }
    }
    Ok(out)
}

/// Coordinates on the chart `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaCoords {
    pub a: Vec<RatFunc>,
    pub c: RatFunc,
    pub b: Vec<RatFunc>,
}

/// `(a, c, b)` from affine coordinates `p_1, ..., p_{2m-1}`.
pub fn inverse_coords(m: usize, affine: &[RatFunc]) -> Result<OmegaCoords> {
    check_rank(m)?;
    check_affine_len(m, affine.len())?;
    let p = with_unit(affine);
    for (k, pk) in p.iter().enumerate().take(2 * m - 1).skip(m) {
        if pk.is_zero() {
            return Err(Error::NotInOmega(format!("p{k}")));
        }
    }
    let r = r_values(m, &p);
    for (j, rj) in r.iter().enumerate() {
        if rj.is_zero() {
            return Err(Error::NotInOmega(format!("r{j}")));
        }
    }
    let n = 2 * m;
    let mut a = Vec::with_capacity(m - 1);
    let mut b = Vec::with_capacity(m - 1);
    for i in 1..m {
        let ratio = p[n - i].try_div(&p[n - 1 - i])?;
        a.push(&(&ratio * &r[i]) / &r[i - 1]);
        b.push(ratio);
    }
    let c = p[m].pow(2)?.try_div(&r[m - 1])?;
    Ok(OmegaCoords { a, c, b })
}

/// Affine symbolic coordinates `p_1, ..., p_{2m-1}` over [`vars::pluecker`].
pub fn symbolic_affine(m: usize) -> Result<(Arc<VarRegistry>, Vec<RatFunc>)> {
    let reg = vars::pluecker(m)?;
    let p = (1..2 * m)
        .map(|k| RatFunc::var(&reg, &format!("p{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((reg, p))
}

/// The exact checks tying `phi` to the factorization `u_1 ẇ_P ū_2`.
pub fn verify_phi(m: usize) -> Result<VerdictReport> {
    verify_phi_with(m, |_| {})
}

/// [`verify_phi`] with a hook that may alter `phi` before checking.
pub fn verify_phi_with(m: usize, tamper: impl Fn(&mut FieldMatrix)) -> Result<VerdictReport> {
    check_rank(m)?;
    if m > PHI_MAX_M {
        return Err(Error::ResourceLimit {
            what: "phi verification",
            m,
            max: PHI_MAX_M,
        });
    }
    let name = "phi";
    let lreg = vars::laurent(m)?;
    let params = UnipotentParams::symbolic(m)?;
    let subst = plucker_subst(m)?;
    let values: Vec<RatFunc> = (1..2 * m)
        .map(|k| subst[&format!("p{k}")].clone())
        .collect();

    let mut mat = phi(m, &values)?;
    tamper(&mut mat);
    let wp = weyl::weyl_rep(&lreg, &weyl::weyl_word(m, WeylSelector::ParabolicLongest)?)?;
    let factored = weyl::build_u1(m, &params.a, &params.c, &params.b)?
        .mul(&wp)?
        .mul(&weyl::build_ubar2(m, &params.a, &params.c, &params.b)?)?;
    if let Some((r, c)) = mat.first_difference(&factored) {
        return Ok(VerdictReport::fail(
            name,
            m,
            format!(
                "(i) factorization differs at entry ({}, {}): {} vs {}",
                r + 1,
                c + 1,
                mat.get(r, c),
                factored.get(r, c)
            ),
        ));
    }
    if !weyl::is_symplectic(&mat)? {
        return Ok(VerdictReport::fail(name, m, "(ii) phi is not symplectic"));
    }
    let n = 2 * m;
    if !mat.get(n - 1, n - 1).is_one() {
        return Ok(VerdictReport::fail(
            name,
            m,
            format!("(iii) corner entry is {}", mat.get(n - 1, n - 1)),
        ));
    }
    let (_, p) = symbolic_affine(m)?;
    let sym = phi(m, &p)?;
    for k in 1..n {
        let got = weyl::plucker(&sym, k)?;
        if !got.equals(&p[k - 1]) {
            return Ok(VerdictReport::fail(
                name,
                m,
                format!("(iv) p{k}(phi(p)) = {got}"),
            ));
        }
    }
    let back = inverse_coords(m, &values)?;
    let same = back.c.equals(&params.c)
        && back.a.iter().zip(&params.a).all(|(x, y)| x.equals(y))
        && back.b.iter().zip(&params.b).all(|(x, y)| x.equals(y));
    if !same {
        return Ok(VerdictReport::fail(
            name,
            m,
            format!("(v) chart roundtrip gave {back:?}"),
        ));
    }
    Ok(VerdictReport::pass(name, m)
        .with("checks", "factorization,symplectic,corner,pluecker,chart"))
}
