use lgmirror::richardson::divisor_poly;
use lgmirror::superpotential::{
    plucker_subst, superpotential, verify_identity, w_gs, w_hori_vafa, w_laurent, w_pluecker,
    Identity, ModelId,
};
use lgmirror::symbolic::{format_expr, parse_expr, Expr, FormatStyle, RatFunc};
use lgmirror::vars::UnipotentParams;
use lgmirror::weyl::{build_ubar2, plucker};

fn product(xs: &[RatFunc], one: &RatFunc) -> RatFunc {
    xs.iter().fold(one.clone(), |acc, x| &acc * x)
}

#[test]
fn alternating_sums_telescope_on_the_lower_factor() {
    for m in 2..=5 {
        let p = UnipotentParams::symbolic(m).unwrap();
        let one = RatFunc::one(p.c.registry());
        let g = build_ubar2(m, &p.a, &p.c, &p.b).unwrap();
        let pk = |k: usize| plucker(&g, k).unwrap();
        for l in 1..m {
            let sum: RatFunc = (0..=l)
                .map(|k| {
                    let t = &pk(l - k) * &pk(2 * m - 1 + k - l);
                    if k % 2 == 0 {
                        t
                    } else {
                        t.neg()
                    }
                })
                .sum();
            let head = product(&p.a[..l], &one).pow(2).unwrap();
            let expected =
                &(&(&head * &product(&p.a[l..], &one)) * &p.c) * &product(&p.b[l..], &one);
            assert!(sum.equals(&expected), "m={m} l={l}");

            let fraction = &(&pk(l + 1) * &pk(2 * m - 1 - l)) / &sum;
            let expected = if l < m - 1 {
                &p.a[l] + &p.b[l]
            } else {
                p.c.clone()
            };
            assert!(fraction.equals(&expected), "m={m} l={l}");
        }
    }
}

#[test]
fn middle_denominators_are_the_divisor_polynomials() {
    for m in 2..=5 {
        let w = w_pluecker(m).unwrap();
        for l in 1..m {
            let den = w.terms[l].denominator();
            let d = RatFunc::from_poly(divisor_poly(m, l).unwrap());
            let ratio = RatFunc::from_poly(den).try_div(&d).unwrap();
            assert!(ratio.as_constant().is_some(), "m={m} l={l}");
        }
    }
}

#[test]
fn written_forms() {
    let plain = |w: lgmirror::superpotential::SuperpotentialExpr| w.format(FormatStyle::Plain);
    assert_eq!(
        plain(w_pluecker(2).unwrap()),
        "p1/p0 + p2^2/(p1*p2 - p0*p3) + q*p1/p3"
    );
    assert_eq!(
        plain(w_pluecker(3).unwrap()),
        "p1/p0 + p2*p4/(p1*p4 - p0*p5) + p3^2/(p2*p3 - p1*p4 + p0*p5) + q*p1/p5"
    );
    assert_eq!(
        plain(w_laurent(2).unwrap()),
        "a1 + c + b1 + q*(a1 + b1)/(a1*c*b1)"
    );
    assert_eq!(plain(w_gs(2).unwrap()), "y + y*z + q*x^2/((x*y - 1)*z)");
    let gs3 = w_gs(3).unwrap();
    let factored = parse_expr(
        "y1*(1 + z1) + y2*(1 + z2) + q*x^2/((x*y1*y2 - 1)*z1*z2)",
        &gs3.registry,
    )
    .unwrap();
    assert!(gs3.expr.equals(&factored));
    assert_eq!(
        plain(w_hori_vafa(2).unwrap()),
        "Y1 + Y2 + (Y3 + q)^2/(Y1*Y2*Y3)"
    );
}

#[test]
fn written_forms_parse_back_to_the_same_value() {
    for m in 2..=4 {
        for model in [
            ModelId::Pluecker,
            ModelId::Laurent,
            ModelId::Gs,
            ModelId::HoriVafa,
        ] {
            let w = superpotential(model, m).unwrap();
            let back = parse_expr(&w.format(FormatStyle::Plain), &w.registry).unwrap();
            assert!(back.equals(&w.expr), "{model:?} m={m}");
            let again = format_expr(
                &Expr::from_ratfunc(&back).to_ratfunc(&w.registry).unwrap(),
                FormatStyle::Plain,
            );
            assert!(parse_expr(&again, &w.registry).unwrap().equals(&w.expr));
        }
    }
}

#[test]
fn laurent_numerator_has_two_m_plus_one_monomials() {
    for m in 2..=5 {
        let w = w_laurent(m).unwrap();
        // Clearing the single monomial denominator leaves one monomial per
        // summand, and the quantum term contributes two.
        let n = w.expr.numerator();
        assert_eq!(n.num_terms(), 2 * m + 1, "m={m}");
    }
}

#[test]
fn lower_factor_realizes_the_substitution() {
    for m in 2..=5 {
        let p = UnipotentParams::symbolic(m).unwrap();
        let g = build_ubar2(m, &p.a, &p.c, &p.b).unwrap();
        let subst = plucker_subst(m).unwrap();
        for k in 0..2 * m {
            assert!(
                plucker(&g, k).unwrap().equals(&subst[&format!("p{k}")]),
                "m={m} k={k}"
            );
        }
    }
}

#[test]
fn exact_identities_hold_up_to_five() {
    for m in 2..=5 {
        for which in [Identity::PlueckerEqLaurent, Identity::GsEqPluecker] {
            let v = verify_identity(which, m).unwrap();
            assert!(v.passed(), "{which:?} m={m}: {:?}", v.witness);
        }
    }
    for m in 2..=4 {
        let v = verify_identity(Identity::MatrixEqLaurent, m).unwrap();
        assert!(v.passed(), "m={m}: {:?}", v.witness);
    }
}
