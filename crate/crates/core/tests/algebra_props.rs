mod support;

use std::sync::Arc;

use entrolab::algebra::{poly_arith, AlgebraError, ArithOp, Monomial, PolyRing, Polynomial};
use entrolab::groebner::{buchberger, Ideal};
use entrolab::parse::parse_polynomial;
use proptest::prelude::*;
use support::*;

fn random_poly(r: Arc<PolyRing>, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let nvars = r.nvars();
    proptest::collection::vec((proptest::collection::vec(0..=max_exp, nvars), -20i64..=20), 0..=max_terms).prop_map(
        move |terms| {
            let f = *r.field();
            Polynomial::from_terms(
                &r,
                terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), f.from_i64(c))).collect(),
            )
        },
    )
}

fn rings() -> [Arc<PolyRing>; 3] {
    [ring(0, &["x", "y"]), ring(5, &["x", "y"]), ring(7, &["x", "y", "z"])]
}

fn ring_and_polys(k: usize) -> impl Strategy<Value = (Arc<PolyRing>, Vec<Polynomial>)> {
    (0usize..3).prop_flat_map(move |i| {
        let r = rings()[i].clone();
        (Just(r.clone()), proptest::collection::vec(random_poly(r, 5, 4), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms((_r, ps) in ring_and_polys(3)) {
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn canonical_form_is_idempotent((_r, ps) in ring_and_polys(1)) {
        let f = &ps[0];
        prop_assert_eq!(&f.normalized(), f);
        let r = f.ring();
        for w in f.terms().windows(2) {
            prop_assert_eq!(r.order().compare(&w[0].0, &w[1].0), std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn substitution_is_a_homomorphism((r, ps) in ring_and_polys(2), imgs in proptest::collection::vec(0usize..6, 3)) {
        let pool: Vec<Polynomial> = ["x*y", "x^2 - y", "x + 1", "y^3", "0", "x"].iter()
            .map(|s| parse_polynomial(s, &r).unwrap()).collect();
        let images: Vec<Polynomial> = (0..r.nvars()).map(|i| pool[imgs[i]].clone()).collect();
        let (a, b) = (&ps[0], &ps[1]);
        let s = |p: &Polynomial| p.substitute(&images).unwrap();
        prop_assert_eq!(s(&(a + b)), &s(a) + &s(b));
        prop_assert_eq!(s(&(a * b)), &s(a) * &s(b));
        prop_assert_eq!(s(&Polynomial::one(&r)), Polynomial::one(&r));
    }

    #[test]
    fn freshmans_dream_in_characteristic_p(ps in proptest::collection::vec(random_poly(ring(5, &["x", "y"]), 4, 3), 2)) {
        let (a, b) = (&ps[0], &ps[1]);
        prop_assert_eq!((a + b).pow(5), &a.pow(5) + &b.pow(5));
    }

    #[test]
    fn print_then_parse_is_identity((r, ps) in ring_and_polys(1)) {
        let f = &ps[0];
        prop_assert_eq!(&parse_polynomial(&f.to_string(), &r).unwrap(), f);
    }

    #[test]
    fn normal_form_is_linear_and_idempotent((r, ps) in ring_and_polys(4)) {
        let ideal = Ideal::new(&r, ps[..2].to_vec()).unwrap();
        let (f, g) = (&ps[2], &ps[3]);
        let nf = |p: &Polynomial| ideal.normal_form(p);
        prop_assert_eq!(nf(&nf(f)), nf(f));
        prop_assert_eq!(nf(&(f + g)), &nf(f) + &nf(g));
        let c = r.field().from_i64(3);
        prop_assert_eq!(nf(&f.scale(&c)), nf(f).scale(&c));
        for gen in ideal.generators() {
            prop_assert!(nf(gen).is_zero());
            prop_assert!(nf(&(gen * f)).is_zero());
        }
    }

    #[test]
    fn basis_satisfies_buchberger_criterion((r, ps) in ring_and_polys(3)) {
        let gb = buchberger(&r, &ps).unwrap();
        let elems = gb.elements();
        for (i, g) in elems.iter().enumerate() {
            prop_assert!(r.field().is_one(g.leading_coeff().unwrap()));
            for h in &elems[i + 1..] {
                let (lg, lh) = (g.leading_monomial().unwrap(), h.leading_monomial().unwrap());
                prop_assert!(!lg.divides(lh) && !lh.divides(lg));
                let l = lg.lcm(lh);
                let one = r.field().one();
                let s = &g.mul_term(&l.checked_div(lg).unwrap(), &one) - &h.mul_term(&l.checked_div(lh).unwrap(), &one);
                prop_assert!(gb.normal_form(&s).is_zero());
            }
        }
        for p in &ps {
            prop_assert!(gb.contains(p));
        }
    }
}

#[test]
fn mixing_rings_is_an_error() {
    let a = Polynomial::var(&ring(5, &["x", "y"]), 0);
    let b = Polynomial::var(&ring(7, &["x", "y"]), 0);
    assert_eq!(poly_arith(&a, &b, ArithOp::Add), Err(AlgebraError::RingMismatch));
    assert!(a.checked_mul(&b).is_err());
}

#[test]
fn binomial_expansion_over_f5() {
    let r = ring(5, &["x", "y"]);
    assert_eq!(poly(&r, "(x + y)^5").to_string(), "x^5 + y^5");
    assert_eq!(poly(&r, "(x + y)^2").to_string(), "x^2 + 2*x*y + y^2");
}

#[test]
fn fixture_polynomials_round_trip() {
    for name in FIXTURES {
        let spec = fixture(name);
        let vars: Vec<&str> = spec.variables.iter().map(String::as_str).collect();
        let r = ring(spec.characteristic, &vars);
        let all = spec.relations.iter().chain(spec.map.iter().flatten()).chain(spec.ideal.iter().flatten());
        for src in all {
            let f = poly(&r, src);
            assert_eq!(poly(&r, &f.to_string()), f, "{name}: {src}");
        }
    }
}
