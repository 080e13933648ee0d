//! Matrices of the symplectic group: Chevalley generators, Weyl group
//! representatives, factored unipotent elements and Bruhat factorization.
//!
//! Matrices are `2m x 2m`. Public indices for generators and coordinates are
//! 1-based as in the usual notation; [`FieldMatrix::get`] is 0-based.

mod group;
mod matrix;

use std::sync::Arc;

pub use group::{weyl_word, SignedPerm, WeylSelector, WeylWord};
pub use matrix::FieldMatrix;

use crate::error::{check_index, check_rank, Error, Result};
use crate::symbolic::{RatFunc, VarRegistry};

/// Which one-parameter subgroup: `x_i(t) = I + t e_i` or `y_i(t) = I + t f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    X,
    Y,
}

/// The raising generator `e_i` (1-based `i`).
pub fn raising(reg: &Arc<VarRegistry>, m: usize, i: usize) -> Result<FieldMatrix> {
    check_rank(m)?;
    check_index("generator", i, 1, m)?;
    let n = 2 * m;
    let mut e = FieldMatrix::zeros(reg, n);
    e.set(i - 1, i, RatFunc::one(reg));
    if i < m {
        e.set(n - i - 1, n - i, RatFunc::one(reg));
    }
    Ok(e)
}

/// `(e_1..e_m, f_1..f_m)` with `f_i` the transpose of `e_i`.
pub fn chevalley_gens(
    reg: &Arc<VarRegistry>,
    m: usize,
) -> Result<(Vec<FieldMatrix>, Vec<FieldMatrix>)> {
    let es = (1..=m)
        .map(|i| raising(reg, m, i))
        .collect::<Result<Vec<_>>>()?;
    let fs = es.iter().map(FieldMatrix::transpose).collect();
    Ok((es, fs))
}

/// `x_i(t)` or `y_i(t)`; the generators square to zero so the exponential is
/// `I + t * generator`.
pub fn one_param(m: usize, i: usize, t: &RatFunc, kind: ParamKind) -> Result<FieldMatrix> {
    let reg = t.registry();
    let e = raising(reg, m, i)?;
    let g = match kind {
        ParamKind::X => e,
        ParamKind::Y => e.transpose(),
    };
    FieldMatrix::identity(reg, 2 * m).add(&g.scale(t))
}

/// `ṡ_i = y_i(-1) x_i(1) y_i(-1)`.
pub fn simple_rep(reg: &Arc<VarRegistry>, m: usize, i: usize) -> Result<FieldMatrix> {
    let one = RatFunc::one(reg);
    let minus = one.neg();
    let y = one_param(m, i, &minus, ParamKind::Y)?;
    let x = one_param(m, i, &one, ParamKind::X)?;
    y.mul(&x)?.mul(&y)
}

/// Product of the `ṡ_i` along the word.
pub fn weyl_rep(reg: &Arc<VarRegistry>, w: &WeylWord) -> Result<FieldMatrix> {
    let m = w.rank();
    let mut out = FieldMatrix::identity(reg, 2 * m);
    for &i in w.letters() {
        out = out.mul(&simple_rep(reg, m, i)?)?;
    }
    Ok(out)
}

fn check_params(m: usize, a: &[RatFunc], b: &[RatFunc]) -> Result<()> {
    check_rank(m)?;
    for v in [a, b] {
        if v.len() != m - 1 {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: m - 1,
            });
        }
    }
    Ok(())
}

/// `y_1(a_1) ... y_{m-1}(a_{m-1}) y_m(c) y_{m-1}(b_{m-1}) ... y_1(b_1)`.
pub fn build_ubar2(m: usize, a: &[RatFunc], c: &RatFunc, b: &[RatFunc]) -> Result<FieldMatrix> {
    check_params(m, a, b)?;
    let reg = c.registry();
    let mut out = FieldMatrix::identity(reg, 2 * m);
    for (i, ai) in a.iter().enumerate() {
        out = out.mul(&one_param(m, i + 1, ai, ParamKind::Y)?)?;
    }
    out = out.mul(&one_param(m, m, c, ParamKind::Y)?)?;
    for (i, bi) in b.iter().enumerate().rev() {
        out = out.mul(&one_param(m, i + 1, bi, ParamKind::Y)?)?;
    }
    Ok(out)
}

fn product<'a>(reg: &Arc<VarRegistry>, it: impl IntoIterator<Item = &'a RatFunc>) -> RatFunc {
    it.into_iter().fold(RatFunc::one(reg), |acc, x| &acc * x)
}

/// The upper unitriangular factor `u_1` with `u_1 ẇ_P ū_2` in the opposite
/// big cell. Nonzero off-diagonal entries sit in the first row and the last
/// column only.
pub fn build_u1(m: usize, a: &[RatFunc], c: &RatFunc, b: &[RatFunc]) -> Result<FieldMatrix> {
    check_params(m, a, b)?;
    let reg = c.registry();
    for (i, v) in a.iter().enumerate() {
        if v.is_zero() {
            return Err(Error::ZeroParameter(format!("a{}", i + 1)));
        }
    }
    for (i, v) in b.iter().enumerate() {
        if v.is_zero() {
            return Err(Error::ZeroParameter(format!("b{}", i + 1)));
        }
    }
    if c.is_zero() {
        return Err(Error::ZeroParameter("c".into()));
    }
    let n = 2 * m;
    let a_prefix = |k: usize| product(reg, &a[..k]);
    // a_1 ... a_{m-1} c b_{m-1} ... b_j
    let tail = |j: usize| &(&a_prefix(m - 1) * c) * &product(reg, &b[j - 1..]);
    let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };

    let mut u = FieldMatrix::identity(reg, n);
    for j in 2..=m {
        let v = &(&a[j - 2] + &b[j - 2]) / &tail(j - 1);
        u.set(0, j - 1, v);
    }
    for t in 0..m - 1 {
        u.set(0, m + t, a_prefix(m - 1 - t).inverse()?);
    }
    u.set(0, n - 1, tail(1).inverse()?.neg());
    for r in 2..=m {
        let v = a_prefix(r - 1)
            .inverse()?
            .scale(&crate::symbolic::q_int(sign(r - 1)));
        u.set(r - 1, n - 1, v);
    }
    for r in m + 1..n {
        let j = n - r;
        let v = (&(&a[j - 1] + &b[j - 1]) / &tail(j)).scale(&crate::symbolic::q_int(sign(r - 1)));
        u.set(r - 1, n - 1, v);
    }
    Ok(u)
}

/// The antidiagonal form with `J[r][2m+1-r] = -1` for odd 1-based `r`, `+1`
/// for even `r`.
pub fn symplectic_form(reg: &Arc<VarRegistry>, m: usize) -> Result<FieldMatrix> {
    check_rank(m)?;
    let n = 2 * m;
    let mut j = FieldMatrix::zeros(reg, n);
    for r in 0..n {
        let v = if r % 2 == 0 { -1 } else { 1 };
        j.set(r, n - 1 - r, RatFunc::integer(reg, v));
    }
    Ok(j)
}

/// `ᵀg J g == J`.
pub fn is_symplectic(g: &FieldMatrix) -> Result<bool> {
    let j = symplectic_form(g.registry(), g.size() / 2)?;
    Ok(g.transpose().mul(&j)?.mul(g)?.equals(&j))
}

/// `p_k(g)`: the bottom row of `g` read from right to left.
pub fn plucker(g: &FieldMatrix, k: usize) -> Result<RatFunc> {
    let n = g.size();
    check_index("coordinate", k, 0, n - 1)?;
    Ok(g.get(n - 1, n - 1 - k).clone())
}

/// `f_i^*(u)`: entry `(i+1, i)` of a lower unitriangular matrix.
pub fn f_star(u: &FieldMatrix, i: usize) -> Result<RatFunc> {
    check_index("generator", i, 1, u.size() / 2)?;
    if !u.is_lower_unitriangular() {
        return Err(Error::NotUnitriangular { expected: "lower" });
    }
    Ok(u.get(i, i - 1).clone())
}

/// `e_i^*(u)`: entry `(i, i+1)` of an upper unitriangular matrix.
pub fn e_star(u: &FieldMatrix, i: usize) -> Result<RatFunc> {
    check_index("generator", i, 1, u.size() / 2)?;
    if !u.is_upper_unitriangular() {
        return Err(Error::NotUnitriangular { expected: "upper" });
    }
    Ok(u.get(i - 1, i).clone())
}

/// `diag(q0, 1, ..., 1, 1/q0)`.
pub fn torus_element(m: usize, q0: &RatFunc) -> Result<FieldMatrix> {
    check_rank(m)?;
    let reg = q0.registry();
    let mut diag = vec![RatFunc::one(reg); 2 * m];
    diag[0] = q0.clone();
    diag[2 * m - 1] = q0.inverse()?;
    Ok(FieldMatrix::diagonal(&diag))
}

/// The upper unitriangular `u` with `u M ẇ_0^{-1}` lower triangular.
///
/// Entries above the diagonal of `M ẇ_0^{-1}` are cleared column by column,
/// from the last column to the first, using only row operations that add a
/// multiple of a lower row to a higher one.
pub fn bruhat_factor_u1(mat: &FieldMatrix) -> Result<FieldMatrix> {
    let n = mat.size();
    if n % 2 != 0 || n < 4 {
        return Err(Error::RankTooSmall(n / 2));
    }
    let m = n / 2;
    let reg = mat.registry();
    let w0 = weyl_rep(reg, &weyl_word(m, WeylSelector::Longest)?)?;
    // Signed permutation matrices are orthogonal.
    let mut work = mat.mul(&w0.transpose())?;
    let mut u = FieldMatrix::identity(reg, n);
    for col in (0..n).rev() {
        let pivot = work.get(col, col).clone();
        if pivot.is_zero() {
            return Err(Error::NotInCell { column: col + 1 });
        }
        let pinv = pivot.inverse()?;
        for row in 0..col {
            if work.get(row, col).is_zero() {
                continue;
            }
            let f = (work.get(row, col) * &pinv).neg();
            work.add_row_multiple(row, col, &f);
            u.add_row_multiple(row, col, &f);
        }
    }
    debug_assert!(work.is_lower_triangular());
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse_expr, Q};
    use crate::vars::{self, UnipotentParams};

    fn p(s: &str, reg: &Arc<VarRegistry>) -> RatFunc {
        parse_expr(s, reg).unwrap()
    }

    #[test]
    fn generators_for_m2() {
        let reg = vars::laurent(2).unwrap();
        let (es, fs) = chevalley_gens(&reg, 2).unwrap();
        let e1 =
            FieldMatrix::from_integers(&reg, 4, &[0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
        let e2 =
            FieldMatrix::from_integers(&reg, 4, &[0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(es[0], e1);
        assert_eq!(es[1], e2);
        assert_eq!(fs[0], e1.transpose());
    }

    #[test]
    fn generators_square_to_zero() {
        for m in 2..=5 {
            let reg = vars::laurent(m).unwrap();
            let (es, fs) = chevalley_gens(&reg, m).unwrap();
            let zero = FieldMatrix::zeros(&reg, 2 * m);
            for g in es.iter().chain(&fs) {
                assert_eq!(g.mul(g).unwrap(), zero);
            }
        }
    }

    #[test]
    fn ubar2_m2_matches_display() {
        let reg = vars::laurent(2).unwrap();
        let u = UnipotentParams::symbolic(2).unwrap();
        let g = build_ubar2(2, &u.a, &u.c, &u.b).unwrap();
        let rows = [
            ["1", "0", "0", "0"],
            ["a1 + b1", "1", "0", "0"],
            ["c*b1", "c", "1", "0"],
            ["a1*c*b1", "a1*c", "a1 + b1", "1"],
        ];
        for (r, row) in rows.iter().enumerate() {
            for (c, s) in row.iter().enumerate() {
                assert_eq!(g.get(r, c), &p(s, &reg), "entry ({r},{c})");
            }
        }
        assert_eq!(plucker(&g, 2).unwrap(), p("a1*c", &reg));
        assert_eq!(plucker(&g, 0).unwrap(), p("1", &reg));
    }

    #[test]
    fn one_param_inverse() {
        let reg = vars::laurent(3).unwrap();
        let a = p("a1", &reg);
        for i in 1..=3 {
            let y = one_param(3, i, &a, ParamKind::Y).unwrap();
            let yinv = one_param(3, i, &a.neg(), ParamKind::Y).unwrap();
            assert!(y.mul(&yinv).unwrap().is_identity());
        }
        let x = one_param(3, 3, &RatFunc::one(&reg), ParamKind::X).unwrap();
        assert!(x.get(2, 3).is_one());
        assert!(one_param(3, 4, &a, ParamKind::X).is_err());
    }

    #[test]
    fn simple_reps_square_to_signed_identity() {
        for m in 2..=4 {
            let reg = vars::laurent(m).unwrap();
            for i in 1..=m {
                let s = simple_rep(&reg, m, i).unwrap();
                let s2 = s.mul(&s).unwrap();
                assert!(s2.is_diagonal());
                for k in 0..2 * m {
                    let v = s2.get(k, k).as_constant().unwrap();
                    assert!(v == Q::from_integer(1.into()) || v == Q::from_integer((-1).into()));
                }
            }
        }
    }

    #[test]
    fn longest_rep_is_antidiagonal() {
        for m in 2..=4 {
            let reg = vars::laurent(m).unwrap();
            let w0 = weyl_rep(&reg, &weyl_word(m, WeylSelector::Longest).unwrap()).unwrap();
            assert!(w0.is_antidiagonal());
            let e = weyl_rep(&reg, &WeylWord::new(m, vec![]).unwrap()).unwrap();
            assert!(e.is_identity());
        }
    }

    #[test]
    fn symplectic_form_shape() {
        let reg = vars::laurent(2).unwrap();
        let j = symplectic_form(&reg, 2).unwrap();
        let expect = FieldMatrix::from_integers(
            &reg,
            4,
            &[0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0],
        );
        assert_eq!(j, expect);
        for m in 2..=5 {
            let reg = vars::laurent(m).unwrap();
            let j = symplectic_form(&reg, m).unwrap();
            let minus_i = FieldMatrix::identity(&reg, 2 * m).scale(&RatFunc::integer(&reg, -1));
            assert_eq!(j.mul(&j).unwrap(), minus_i);
            assert_eq!(j.transpose(), j.scale(&RatFunc::integer(&reg, -1)));
        }
    }

    #[test]
    fn u1_entries_and_symplecticity() {
        for m in 2..=4 {
            let reg = vars::laurent(m).unwrap();
            let u = UnipotentParams::symbolic(m).unwrap();
            let u1 = build_u1(m, &u.a, &u.c, &u.b).unwrap();
            assert!(u1.is_upper_unitriangular());
            let all: Vec<String> = (1..m)
                .map(|i| format!("a{i}"))
                .chain(["c".to_string()])
                .chain((1..m).rev().map(|i| format!("b{i}")))
                .collect();
            let prod = all.join("*");
            assert_eq!(
                u1.get(0, 1),
                &p(&format!("(a1 + b1)/({prod})"), &reg),
                "m={m}"
            );
            assert_eq!(u1.get(0, 2 * m - 1), &p(&format!("-1/({prod})"), &reg));
            assert!(is_symplectic(&u1).unwrap(), "u1 symplectic at m={m}");
            let ub = build_ubar2(m, &u.a, &u.c, &u.b).unwrap();
            assert!(ub.is_lower_unitriangular());
            assert!(is_symplectic(&ub).unwrap(), "ubar2 symplectic at m={m}");
        }
    }

    #[test]
    fn u1_rejects_zero_parameters() {
        let reg = vars::laurent(2).unwrap();
        let u = UnipotentParams::symbolic(2).unwrap();
        let zero = RatFunc::zero(&reg);
        assert!(matches!(
            build_u1(2, &u.a, &zero, &u.b),
            Err(Error::ZeroParameter(_))
        ));
    }

    #[test]
    fn bruhat_factor_recovers_u1() {
        for m in 2..=3 {
            let reg = vars::laurent(m).unwrap();
            let u = UnipotentParams::symbolic(m).unwrap();
            let ub = build_ubar2(m, &u.a, &u.c, &u.b).unwrap();
            let wp =
                weyl_rep(&reg, &weyl_word(m, WeylSelector::ParabolicLongest).unwrap()).unwrap();
            let mat = wp.mul(&ub).unwrap();
            let got = bruhat_factor_u1(&mat).unwrap();
            assert_eq!(got, build_u1(m, &u.a, &u.c, &u.b).unwrap(), "m={m}");
            let again = bruhat_factor_u1(&got.mul(&mat).unwrap()).unwrap();
            assert!(again.is_identity());
        }
    }

    #[test]
    fn bruhat_factor_scales_with_torus() {
        let m = 2;
        let reg = vars::laurent(m).unwrap();
        let u = UnipotentParams::symbolic(m).unwrap();
        let q0 = RatFunc::constant(&reg, Q::new(7.into(), 3.into()));
        let d = torus_element(m, &q0).unwrap();
        let wp = weyl_rep(&reg, &weyl_word(m, WeylSelector::ParabolicLongest).unwrap()).unwrap();
        let ub = build_ubar2(m, &u.a, &u.c, &u.b).unwrap();
        let got = bruhat_factor_u1(&d.mul(&wp).unwrap().mul(&ub).unwrap()).unwrap();
        assert_eq!(e_star(&got, 1).unwrap(), p("7/3*(a1 + b1)/(a1*c*b1)", &reg));
    }

    #[test]
    fn bruhat_factor_of_w0_is_identity() {
        let reg = vars::laurent(3).unwrap();
        let w0 = weyl_rep(&reg, &weyl_word(3, WeylSelector::Longest).unwrap()).unwrap();
        assert!(bruhat_factor_u1(&w0).unwrap().is_identity());
        let i = FieldMatrix::identity(&reg, 6);
        assert!(matches!(bruhat_factor_u1(&i), Err(Error::NotInCell { .. })));
    }

    #[test]
    fn star_coordinates() {
        for m in 2..=4 {
            let reg = vars::laurent(m).unwrap();
            let u = UnipotentParams::symbolic(m).unwrap();
            let ub = build_ubar2(m, &u.a, &u.c, &u.b).unwrap();
            assert_eq!(f_star(&ub, 1).unwrap(), &u.a[0] + &u.b[0]);
            assert_eq!(f_star(&ub, m).unwrap(), u.c);
            // The two elementary entries of each generator agree.
            for i in 1..m {
                let n = 2 * m;
                assert_eq!(ub.get(i, i - 1), ub.get(n - i, n - i - 1), "f_{i} at m={m}");
            }
            assert!(f_star(&ub.transpose(), 1).is_err());
            let u1 = build_u1(m, &u.a, &u.c, &u.b).unwrap();
            assert!(e_star(&ub, 1).is_err());
            let _ = e_star(&u1, 1).unwrap();
            let _ = reg;
        }
    }

    #[test]
    fn json_round_trip() {
        let reg = vars::laurent(2).unwrap();
        let u = UnipotentParams::symbolic(2).unwrap();
        let g = build_u1(2, &u.a, &u.c, &u.b).unwrap();
        let back = FieldMatrix::from_json(&g.to_json(), &reg).unwrap();
        assert_eq!(back, g);
        assert!(FieldMatrix::from_json(&serde_json::json!([["1", "0"]]), &reg).is_err());
    }

    #[test]
    fn det_of_generated_matrices_is_one() {
        let m = 3;
        let u = UnipotentParams::symbolic(m).unwrap();
        let ub = build_ubar2(m, &u.a, &u.c, &u.b).unwrap();
        assert!(ub.det().unwrap().is_one());
        let reg = ub.registry().clone();
        let w0 = weyl_rep(&reg, &weyl_word(m, WeylSelector::Longest).unwrap()).unwrap();
        assert!(w0.det().unwrap().is_one());
        let prod = build_u1(m, &u.a, &u.c, &u.b)
            .unwrap()
            .mul(&w0)
            .unwrap()
            .mul(&ub)
            .unwrap();
        assert!(prod.det().unwrap().is_one());
    }
}
