use std::sync::Arc;

use lgmirror::superpotential::{superpotential, ModelId};
use lgmirror::symbolic::{
    format_expr, parse_expr, ratfunc_from_json, ratfunc_to_json, FormatStyle, RatFunc, SparsePoly,
    SymbolicError, VarRegistry, Q,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reg() -> Arc<VarRegistry> {
    VarRegistry::new(["x", "y", "z"]).unwrap()
}

type Terms = Vec<([i32; 3], i64)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(([-1i32..=2, -1i32..=2, 0i32..=2], -4i64..=4), 1..4)
}

fn poly(reg: &Arc<VarRegistry>, t: &Terms) -> SparsePoly {
    SparsePoly::from_terms(
        reg,
        t.iter()
            .map(|(e, c)| (e.to_vec(), Q::from_integer((*c).into()))),
    )
}

/// `num / den` with a denominator that is guaranteed nonzero.
fn ratfunc(reg: &Arc<VarRegistry>, num: &Terms, den: &Terms) -> RatFunc {
    let mut d = poly(reg, den);
    if d.is_zero() {
        d = SparsePoly::one(reg);
    }
    RatFunc::from_parts(poly(reg, num), d).unwrap()
}

fn random_points(seed: u64, dim: usize, count: usize) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Complex64::from_polar(
                        rng.random_range(0.5..2.0),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect()
        })
        .collect()
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalizing_is_idempotent(n in terms(), d in terms()) {
        let r = reg();
        let f = ratfunc(&r, &n, &d);
        let once = f.normalized();
        let twice = once.normalized();
        prop_assert_eq!(once.to_string(), twice.to_string());
        prop_assert!(once.equals(&f));
    }

    #[test]
    fn equality_is_an_equivalence(a in terms(), b in terms(), c in terms(), s in terms()) {
        let r = reg();
        let f = ratfunc(&r, &a, &b);
        let g = ratfunc(&r, &c, &s);
        // The same value written three ways.
        let f2 = if g.is_zero() { f.clone() } else { &(&f * &g) / &g };
        let f3 = &(&f + &g) - &g;
        prop_assert!(f.equals(&f));
        prop_assert_eq!(f.equals(&g), g.equals(&f));
        prop_assert!(f.equals(&f2) && f2.equals(&f3) && f.equals(&f3));
        if f.equals(&g) && g.equals(&f3) {
            prop_assert!(f.equals(&f3));
        }
    }

    #[test]
    fn equal_values_evaluate_alike(a in terms(), b in terms(), c in terms(), seed in 0u64..1000) {
        let r = reg();
        let f = ratfunc(&r, &a, &b);
        let g = ratfunc(&r, &c, &[([0, 0, 0], 1)].to_vec());
        let f2 = &(&f * &(&g + &RatFunc::integer(&r, 7))) / &(&g + &RatFunc::integer(&r, 7));
        prop_assume!(f.equals(&f2));
        let mut checked = 0;
        for p in random_points(seed, 3, 40) {
            if let (Ok(u), Ok(v)) = (f.evaluate(&p), f2.evaluate(&p)) {
                prop_assert!(close(u, v, 1e-9), "{u} vs {v}");
                checked += 1;
            }
            if checked == 10 {
                break;
            }
        }
    }

    #[test]
    fn json_roundtrip_preserves_value(n in terms(), d in terms()) {
        let r = reg();
        let f = ratfunc(&r, &n, &d);
        let back = ratfunc_from_json(&ratfunc_to_json(&f), &r).unwrap();
        prop_assert!(back.equals(&f));
    }

    #[test]
    fn plain_text_roundtrip_preserves_value(n in terms(), d in terms()) {
        let r = reg();
        let f = ratfunc(&r, &n, &d);
        let text = format_expr(&f, FormatStyle::Plain);
        let back = parse_expr(&text, &r).unwrap();
        prop_assert!(back.equals(&f), "{text}");
    }

    #[test]
    fn parser_never_panics(s in "[xyz0-9+*/^() -]{0,24}") {
        let _ = parse_expr(&s, &reg());
    }
}

fn finite_difference(f: &RatFunc, x: &[Complex64], i: usize) -> Option<Complex64> {
    let h = 1e-5;
    let mut up = x.to_vec();
    let mut down = x.to_vec();
    up[i] += h;
    down[i] -= h;
    Some((f.evaluate(&up).ok()? - f.evaluate(&down).ok()?) / (2.0 * h))
}

#[test]
fn derivatives_match_finite_differences() {
    let models = [
        ModelId::Pluecker,
        ModelId::Laurent,
        ModelId::Gs,
        ModelId::HoriVafa,
    ];
    for m in 2..=3 {
        for model in models {
            let w = superpotential(model, m).unwrap();
            let n = w.registry.len();
            for (k, p) in random_points(17 * m as u64, n, 5).iter().enumerate() {
                for i in 0..n {
                    let exact = match w.expr.differentiate(i).evaluate(p) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let Some(fd) = finite_difference(&w.expr, p, i) else {
                        continue;
                    };
                    assert!(
                        close(exact, fd, 1e-6),
                        "{model:?} m={m} var {} sample {k}: {exact} vs {fd}",
                        w.registry.name(i)
                    );
                }
            }
        }
    }
}

#[test]
fn superpotentials_are_weight_one() {
    for m in 2..=5usize {
        let w = superpotential(ModelId::Pluecker, m).unwrap();
        let weights: Vec<i64> = w
            .registry
            .names()
            .iter()
            .map(|n| {
                if n == "q" {
                    2 * m as i64 - 1
                } else {
                    n[1..].parse().unwrap()
                }
            })
            .collect();
        assert_weight(&w.expr, &weights, 1, m);

        let w = superpotential(ModelId::Laurent, m).unwrap();
        let weights: Vec<i64> = w
            .registry
            .names()
            .iter()
            .map(|n| if n == "q" { 2 * m as i64 - 1 } else { 1 })
            .collect();
        assert_weight(&w.expr, &weights, 1, m);
    }
}

fn assert_weight(f: &RatFunc, weights: &[i64], expected: i64, m: usize) {
    let (num, den) = f.weighted_degrees(weights);
    let nd = num[0];
    assert!(
        num.iter().all(|&d| d == nd),
        "m={m}: numerator not homogeneous {num:?}"
    );
    let dd = den.first().copied().unwrap_or(0);
    assert!(
        den.iter().all(|&d| d == dd),
        "m={m}: denominator not homogeneous {den:?}"
    );
    assert_eq!(nd - dd, expected, "m={m}");
}

#[test]
fn examples_from_the_expression_grammar() {
    let r = VarRegistry::new(["a", "c", "b", "q"]).unwrap();
    let f = parse_expr("q*(a+b)/(a*c*b)", &r).unwrap();
    let expected = parse_expr("-q/(a^2*c)", &r).unwrap();
    assert!(f.differentiate_by("a").unwrap().equals(&expected));

    let r = VarRegistry::new(["p0", "p1", "p2", "p3"]).unwrap();
    let f = parse_expr("p2^2/(p1*p2 - p0*p3)", &r).unwrap();
    let expected = parse_expr("p2*(p1*p2 - 2*p0*p3)/(p1*p2 - p0*p3)^2", &r).unwrap();
    assert!(f.differentiate_by("p2").unwrap().equals(&expected));
    assert!(format_expr(&f, FormatStyle::Latex)
        .contains(r"\frac{p_{2}^{2}}{p_{1} p_{2} - p_{0} p_{3}}"));

    let g = parse_expr("1/(p1*p2 - p0*p3)", &r).unwrap();
    let one = Complex64::new(1.0, 0.0);
    assert!(matches!(
        g.evaluate(&[one; 4]),
        Err(SymbolicError::Pole { .. })
    ));

    match parse_expr("1/(x", &reg()) {
        Err(SymbolicError::Syntax { offset, .. }) => assert_eq!(offset, 4),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn pluecker_model_vanishes_at_the_extra_point() {
    let w = superpotential(ModelId::Pluecker, 2).unwrap();
    let c = |x: f64| Complex64::new(x, 0.0);
    let v = w
        .expr
        .evaluate(&[c(1.0), c(0.0), c(0.0), c(-1.0), c(1.0)])
        .unwrap();
    assert!(v.norm() < 1e-15);
}
