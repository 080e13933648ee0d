use std::sync::Arc;

use lgmirror::superpotential::w_laurent;
use lgmirror::symbolic::{Bindings, RatFunc, VarRegistry, Q};
use lgmirror::vars::UnipotentParams;
use lgmirror::weyl::{
    bruhat_factor_u1, build_u1, build_ubar2, e_star, f_star, is_symplectic, one_param, plucker,
    torus_element, weyl_rep, weyl_word, FieldMatrix, ParamKind, SignedPerm, WeylSelector,
};
use proptest::prelude::*;

fn constant_reg() -> Arc<VarRegistry> {
    VarRegistry::new(["t"]).unwrap()
}

fn q(reg: &Arc<VarRegistry>, n: i64, d: i64) -> RatFunc {
    RatFunc::constant(reg, Q::new(n.into(), d.into()))
}

fn product(reg: &Arc<VarRegistry>, xs: &[RatFunc]) -> RatFunc {
    xs.iter().fold(RatFunc::one(reg), |acc, x| &acc * x)
}

fn nonzero() -> impl Strategy<Value = (i64, i64)> {
    ((-9i64..=9).prop_filter("nonzero", |n| *n != 0), 1i64..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generator_words_are_symplectic_with_unit_determinant(
        m in 2usize..=4,
        word in prop::collection::vec((1usize..=4, any::<bool>(), -5i64..=5), 1..8),
    ) {
        let reg = constant_reg();
        let mut g = FieldMatrix::identity(&reg, 2 * m);
        for (i, upper, t) in word {
            let i = (i - 1) % m + 1;
            let kind = if upper { ParamKind::X } else { ParamKind::Y };
            g = g.mul(&one_param(m, i, &RatFunc::integer(&reg, t), kind).unwrap()).unwrap();
        }
        prop_assert!(g.det().unwrap().is_one());
        prop_assert!(is_symplectic(&g).unwrap());
    }

    #[test]
    fn factorization_of_numeric_points_is_inverted_by_bruhat(
        m in 2usize..=3,
        raw in prop::collection::vec(nonzero(), 5),
    ) {
        let reg = constant_reg();
        let vals: Vec<RatFunc> = raw.iter().map(|&(n, d)| q(&reg, n, d)).collect();
        let a = vals[..m - 1].to_vec();
        let b = vals[m - 1..2 * m - 2].to_vec();
        let c = vals[2 * m - 2].clone();
        let wp = weyl_rep(&reg, &weyl_word(m, WeylSelector::ParabolicLongest).unwrap()).unwrap();
        let mat = wp.mul(&build_ubar2(m, &a, &c, &b).unwrap()).unwrap();
        let u = bruhat_factor_u1(&mat).unwrap();
        prop_assert!(u.equals(&build_u1(m, &a, &c, &b).unwrap()));
        let again = bruhat_factor_u1(&u.mul(&mat).unwrap()).unwrap();
        prop_assert!(again.is_identity());
    }

    #[test]
    fn longest_words_are_reduced(m in 2usize..=6) {
        let w = weyl_word(m, WeylSelector::Longest).unwrap();
        prop_assert_eq!(w.len(), m * m);
        prop_assert!(w.is_reduced());
        let wp = weyl_word(m, WeylSelector::ParabolicLongest).unwrap();
        prop_assert_eq!(wp.len(), (m - 1) * (m - 1));
        prop_assert_eq!(SignedPerm::from_word(m, w.letters()).length(), m * m);
    }
}

#[test]
fn factored_unipotents_have_unit_determinant_and_are_symplectic() {
    for m in 2..=5 {
        let p = UnipotentParams::symbolic(m).unwrap();
        for g in [
            build_ubar2(m, &p.a, &p.c, &p.b).unwrap(),
            build_u1(m, &p.a, &p.c, &p.b).unwrap(),
        ] {
            assert!(g.det().unwrap().is_one(), "m={m}");
            assert!(is_symplectic(&g).unwrap(), "m={m}");
        }
    }
}

#[test]
fn pluecker_coordinates_of_the_lower_factor() {
    for m in 2..=5 {
        let p = UnipotentParams::symbolic(m).unwrap();
        let reg = p.c.registry().clone();
        let g = build_ubar2(m, &p.a, &p.c, &p.b).unwrap();
        for k in 0..2 * m {
            let expected = if k == 0 {
                RatFunc::one(&reg)
            } else if k < m {
                &product(&reg, &p.a[..k - 1]) * &(&p.a[k - 1] + &p.b[k - 1])
            } else {
                &(&product(&reg, &p.a) * &p.c) * &product(&reg, &p.b[2 * m - k - 1..])
            };
            assert!(plucker(&g, k).unwrap().equals(&expected), "m={m} k={k}");
        }
    }
}

#[test]
fn dual_coordinates_sum_to_the_laurent_model() {
    for m in 2..=4 {
        let p = UnipotentParams::symbolic(m).unwrap();
        let u1 = build_u1(m, &p.a, &p.c, &p.b).unwrap();
        let ubar2 = build_ubar2(m, &p.a, &p.c, &p.b).unwrap();
        let total: RatFunc = (1..=m)
            .map(|i| &e_star(&u1, i).unwrap() + &f_star(&ubar2, i).unwrap())
            .sum();
        let w = w_laurent(m).unwrap();
        let mut b = Bindings::new();
        b.insert("q".into(), RatFunc::one(&w.registry));
        let at_one = w.expr.substitute(&b, &w.registry).unwrap();
        assert!(total.equals(&at_one), "m={m}");
    }
}

#[test]
fn bruhat_factorization_is_idempotent_symbolically() {
    for m in 2..=3 {
        let p = UnipotentParams::symbolic(m).unwrap();
        let reg = p.c.registry().clone();
        let wp = weyl_rep(&reg, &weyl_word(m, WeylSelector::ParabolicLongest).unwrap()).unwrap();
        let mat = wp.mul(&build_ubar2(m, &p.a, &p.c, &p.b).unwrap()).unwrap();
        let u = bruhat_factor_u1(&mat).unwrap();
        assert!(u.equals(&build_u1(m, &p.a, &p.c, &p.b).unwrap()), "m={m}");
        assert!(
            bruhat_factor_u1(&u.mul(&mat).unwrap())
                .unwrap()
                .is_identity(),
            "m={m}"
        );

        let q0 = q(&reg, 7, 3);
        let scaled = torus_element(m, &q0).unwrap().mul(&mat).unwrap();
        let e1 = e_star(&bruhat_factor_u1(&scaled).unwrap(), 1).unwrap();
        let den = &(&product(&reg, &p.a) * &p.c) * &product(&reg, &p.b);
        let expected = &(&q0 * &(&p.a[0] + &p.b[0])) / &den;
        assert!(e1.equals(&expected), "m={m}");
    }
}

#[test]
fn longest_representative_is_signed_antidiagonal() {
    let reg = constant_reg();
    for m in 2..=4 {
        let w0 = weyl_rep(&reg, &weyl_word(m, WeylSelector::Longest).unwrap()).unwrap();
        assert!(w0.is_antidiagonal(), "m={m}");
        for r in 0..2 * m {
            let v = w0.get(r, 2 * m - 1 - r).as_constant().unwrap();
            assert!(v == Q::from_integer(1.into()) || v == Q::from_integer((-1).into()));
        }
        assert!(bruhat_factor_u1(&w0).unwrap().is_identity());
    }
}
