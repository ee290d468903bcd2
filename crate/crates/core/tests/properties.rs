use ck_core::cohomology::{check_cocycle, coboundary, OneCochain};
use ck_core::conformal::{bracket_at, AlgebraSpec, BasisKey, Element, LambdaElement, Window};
use ck_core::derivation::{check_derivation, inner_derivation};
use ck_core::module::{check_module, graded_module, rank_one_module, GradedParams, RankOneParams};
use ck_core::poly::{vars, Monomial, MultiPoly, Var};
use ck_core::rational::Rational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn poly_in(vs: Vec<Var>, maxdeg: i32) -> impl Strategy<Value = MultiPoly> {
    let n = vs.len();
    prop::collection::vec((prop::collection::vec(0..=maxdeg, n), rational()), 0..5).prop_map(move |terms| {
        let mut p = MultiPoly::zero();
        for (exps, c) in terms {
            let m = Monomial::from_pairs(vs.iter().cloned().zip(exps)).unwrap();
            p.add_term(m, c);
        }
        p
    })
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    poly_in(vec![Var::D, Var::L, Var::M, Var::param("a")], 2)
}

fn element(alg: &'static str, w: Window) -> impl Strategy<Value = Element> {
    let keys = AlgebraSpec::builtin(alg).unwrap().keys_in(w);
    let nk = keys.len();
    prop::collection::vec((0..nk, poly_in(vec![Var::D], 2)), 1..4).prop_map(move |parts| {
        let mut x = Element::zero();
        for (k, p) in parts {
            x.add_term(keys[k].clone(), &p);
        }
        x
    })
}

fn builtin() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["cv", "chv", "csv", "csv-ext"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&(&q + &r)), &p.mul(&q) + &p.mul(&r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(p.mul(&MultiPoly::one()), p.clone());
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly(), q in poly(), v in poly()) {
        let s = |x: &MultiPoly| x.substitute(&Var::L, &v).unwrap();
        prop_assert_eq!(s(&p.mul(&q)), s(&p).mul(&s(&q)));
        prop_assert_eq!(s(&(&p + &q)), &s(&p) + &s(&q));
    }

    #[test]
    fn collect_round_trip(p in poly()) {
        let vs = [Var::D, Var::L];
        let mut back = MultiPoly::zero();
        for (mono, coeff) in p.collect(&vs) {
            prop_assert!(coeff.variables().iter().all(|v| !vs.contains(v)));
            back.add_assign(&coeff.mul(&MultiPoly::term(mono, Rational::one())));
        }
        prop_assert_eq!(back, p);
    }

    #[test]
    fn text_round_trip(p in poly()) {
        prop_assert_eq!(MultiPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn sesquilinearity(x in element("csv-ext", Window::new(-1, 1).unwrap()),
                       y in element("csv-ext", Window::new(-1, 1).unwrap())) {
        let alg = AlgebraSpec::builtin("csv-ext").unwrap();
        let (d, l) = (vars::d(), vars::l());
        let base = bracket_at(&alg, &x, &y, &l).unwrap();
        let left = bracket_at(&alg, &x.mul_poly(&d), &y, &l).unwrap();
        prop_assert_eq!(left, base.mul_poly(&-&l));
        let right = bracket_at(&alg, &x, &y.mul_poly(&d), &l).unwrap();
        prop_assert_eq!(right, base.mul_poly(&(&d + &l)));
    }

    #[test]
    fn coboundaries_are_cocycles(alg in builtin(), values in prop::collection::vec(rational(), 20)) {
        let spec = AlgebraSpec::builtin(alg).unwrap();
        let w = Window::new(-1, 1).unwrap();
        let mut f = OneCochain::new();
        for (k, v) in spec.keys_in(w).into_iter().zip(values) {
            f.set(k, v);
        }
        let t = coboundary(&spec, &f, w).unwrap();
        prop_assert!(check_cocycle(&spec, &t, w).unwrap().passed());
    }

    #[test]
    fn inner_derivations_pass(x in element("csv-ext", Window::new(-1, 1).unwrap())) {
        let alg = AlgebraSpec::builtin("csv-ext").unwrap();
        let d = inner_derivation(&alg, &x, Window::new(-1, 1).unwrap()).unwrap();
        prop_assert!(check_derivation(&alg, &d, Window::new(-1, 1).unwrap()).unwrap().passed());
    }

    #[test]
    fn rank_one_points_pass(a in rational(), b in rational(), c in (1i64..4), dn in rational()) {
        let p = RankOneParams {
            a: MultiPoly::from_rational(a),
            b: MultiPoly::from_rational(b),
            c: MultiPoly::from_int(c),
            e: MultiPoly::zero(),
            d: MultiPoly::from_rational(dn),
        };
        let alg = AlgebraSpec::builtin("csv-ext").unwrap();
        let t = rank_one_module("csv-ext", &p).unwrap();
        prop_assert!(check_module(&alg, &t, Window::new(-1, 1).unwrap()).unwrap().passed());
    }

    #[test]
    fn graded_points_pass(a in rational(), b in rational(), dn in rational()) {
        let mut p = GradedParams::uniform().with_c(MultiPoly::zero()).with_d(MultiPoly::from_rational(dn));
        p.b = MultiPoly::from_rational(b);
        p.kind = ck_core::module::GradedKind::Uniform { a: MultiPoly::from_rational(a) };
        let w = Window::new(-1, 1).unwrap();
        let alg = AlgebraSpec::builtin("csv-ext").unwrap();
        prop_assert!(check_module(&alg, &graded_module("csv-ext", &p, w).unwrap(), w).unwrap().passed());
    }
}

#[test]
fn lambda_element_keys_are_sorted() {
    let mut x = LambdaElement::zero();
    x.add_term(BasisKey::new("M", 1), &MultiPoly::one());
    x.add_term(BasisKey::new("L", 2), &MultiPoly::one());
    let keys: Vec<String> = x.keys().map(|k| k.to_string()).collect();
    assert_eq!(keys, ["L@2", "M@1"]);
}
