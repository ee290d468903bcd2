use super::*;
use crate::poly::parse_poly_with_units;

fn w22() -> Window {
    Window::new(-2, 2).unwrap()
}

fn cunit(text: &str) -> MultiPoly {
    parse_poly_with_units(text, &ParseOptions::with_units(&["c"])).unwrap()
}

#[test]
fn rank_one_rules() {
    let t = rank_one_module("chv", &RankOneParams::symbolic()).unwrap();
    assert_eq!(t.action(&FamilyId::new("L"), 2, 0).unwrap(), cunit("c^2*(d+a*l+b)"));
    assert_eq!(t.action(&FamilyId::new("L"), -1, 0).unwrap(), cunit("c^-1*(d+a*l+b)"));
    assert_eq!(t.action(&FamilyId::new("M"), 1, 0).unwrap(), cunit("c*e"));
    assert!(t.rule(&FamilyId::new("Y")).is_none());

    let t = rank_one_module("csv-ext", &RankOneParams::symbolic().with_e(MultiPoly::zero())).unwrap();
    assert!(t.action(&FamilyId::new("Y"), 1, 0).unwrap().is_zero());
    assert!(t.action(&FamilyId::new("M"), 1, 0).unwrap().is_zero());
    assert_eq!(t.action(&FamilyId::new("N"), -2, 0).unwrap(), cunit("dn*c^-2"));
}

#[test]
fn overrides_need_known_family() {
    let p = RankOneParams::symbolic();
    assert!(rank_one_module_with("chv", &p, &[("Y", ActionRule::Zero)]).is_err());
    assert!(rank_one_module("cv", &p).is_err());
}

#[test]
fn rank_one_families_pass() {
    let zero = RankOneParams::symbolic().with_e(MultiPoly::zero());
    let chv = rank_one_module("chv", &RankOneParams::symbolic()).unwrap();
    assert!(check_module(&AlgebraSpec::builtin("chv").unwrap(), &chv, w22()).unwrap().passed());
    for alg in ["csv", "csv-ext"] {
        let t = rank_one_module(alg, &zero).unwrap();
        let r = check_module(&AlgebraSpec::builtin(alg).unwrap(), &t, w22()).unwrap();
        assert!(r.passed(), "{}: {:?}", alg, r.failures().next());
    }
}

#[test]
fn nonzero_e_fails_on_y_pairs() {
    let alg = AlgebraSpec::builtin("csv").unwrap();
    let t = rank_one_module("csv", &RankOneParams::symbolic()).unwrap();
    let r = module_residual(&alg, &t, &BasisKey::new("Y", 1), &BasisKey::new("Y", -2), 0).unwrap();
    let expect = cunit("(l-m)*c^-1*e");
    assert_eq!(r, LambdaElement::single(BasisKey::new("v", 0), expect));
    let t = rank_one_module("csv", &RankOneParams::symbolic().with_e(MultiPoly::one())).unwrap();
    let rep = check_module(&alg, &t, w22()).unwrap();
    assert!(!rep.passed());
    assert!(rep.failures().all(|f| f.label.contains("Y@") && !f.label.contains("L@")));
}

#[test]
fn graded_rules() {
    let w = w22();
    let p = GradedParams::uniform().with_c(MultiPoly::zero());
    let t = graded_module("csv", &p, w).unwrap();
    assert_eq!(t.action(&FamilyId::new("L"), 1, -1).unwrap(), MultiPoly::parse("d+a*l+b").unwrap());
    assert!(t.action(&FamilyId::new("M"), 1, -1).unwrap().is_zero());
    assert_eq!(t.module_key(3), BasisKey::new("v", 3));

    let a = Pattern::from_bits(-2, &[0, 0, 0, 1, 1]).unwrap();
    let t = graded_module("csv", &GradedParams::pattern(a), w).unwrap();
    let l = FamilyId::new("L");
    assert_eq!(t.action(&l, 1, 0).unwrap(), MultiPoly::one());
    assert_eq!(t.action(&l, -1, 1).unwrap(), MultiPoly::parse("(d+b)*(d+b+l)").unwrap());
    assert_eq!(t.action(&l, 1, 1).unwrap(), MultiPoly::parse("d+b+l").unwrap());
    assert_eq!(t.action(&l, 0, -2).unwrap(), MultiPoly::parse("d+b").unwrap());
    assert!(matches!(t.action(&l, 2, 1), Err(Error::PatternGap(3))));
}

#[test]
fn pattern_values() {
    let mut m = BTreeMap::new();
    m.insert(0, 2);
    assert!(matches!(Pattern::new(&m), Err(Error::PatternValue { index: 0, value: 2 })));
    let w = Window::new(-1, 1).unwrap();
    assert_eq!(Pattern::all(w).len(), 8);
    assert!(Pattern::constant(w, 1).is_constant());
    assert_eq!(Pattern::from_bits(-1, &[1, 0, 1]).unwrap().to_string(), "101");
    assert!(graded_module("csv", &GradedParams::pattern(Pattern::from_bits(0, &[1]).unwrap()), w).is_err());
}

#[test]
fn graded_uniform_passes_with_zero_c() {
    let w = w22();
    for alg in ["chv", "csv", "csv-ext"] {
        let p = GradedParams::uniform().with_c(MultiPoly::zero());
        let p = if alg == "chv" { GradedParams::uniform() } else { p };
        let t = graded_module(alg, &p, w).unwrap();
        let r = check_module(&AlgebraSpec::builtin(alg).unwrap(), &t, w).unwrap();
        assert!(r.passed(), "{}: {:?}", alg, r.failures().next());
    }
}

#[test]
fn graded_c_obstruction() {
    let alg = AlgebraSpec::builtin("csv").unwrap();
    let t = graded_module("csv", &GradedParams::uniform(), w22()).unwrap();
    let r = module_residual(&alg, &t, &BasisKey::new("Y", 0), &BasisKey::new("Y", 1), -1).unwrap();
    assert_eq!(r, LambdaElement::single(BasisKey::new("v", 0), MultiPoly::parse("(l-m)*c").unwrap()));
}

#[test]
fn pattern_family_over_chv() {
    // With c = 0 every pattern works; with c != 0 only constant patterns do.
    let alg = AlgebraSpec::builtin("chv").unwrap();
    let w = Window::new(-1, 1).unwrap();
    for a in Pattern::all(w) {
        let p = GradedParams::pattern(a.clone()).with_c(MultiPoly::zero());
        assert!(check_module(&alg, &graded_module("chv", &p, w).unwrap(), w).unwrap().passed(), "{}", a);
        let p = GradedParams::pattern(a.clone());
        let ok = check_module(&alg, &graded_module("chv", &p, w).unwrap(), w).unwrap().passed();
        assert_eq!(ok, a.is_constant(), "{}", a);
    }
}

#[test]
fn missing_family_is_reported() {
    let alg = AlgebraSpec::builtin("csv").unwrap();
    let mut t = ActionTable::new(false, &[]);
    t.set_rule("L", ActionRule::template("d+l").unwrap());
    assert!(matches!(check_module(&alg, &t, w22()), Err(Error::MissingAction { .. })));
}

#[test]
fn wrong_l_action_fails() {
    let alg = AlgebraSpec::builtin("chv").unwrap();
    let mut t = ActionTable::new(false, &[]);
    t.set_rule("L", ActionRule::template("d+l^2").unwrap());
    t.set_rule("M", ActionRule::Zero);
    assert!(!check_module(&alg, &t, w22()).unwrap().passed());
}

#[test]
fn rank_one_classification_pointwise() {
    let w = Window::new(-1, 1).unwrap();
    let p = RankOneParams {
        a: MultiPoly::from_rational(Rational::new(1, 2)),
        b: MultiPoly::from_int(3),
        c: MultiPoly::from_int(2),
        e: MultiPoly::from_int(1),
        d: MultiPoly::var(Var::param("dn")),
    };
    let r = solve_rank_one_extension_at("csv", &p, w, 3).unwrap();
    assert!(!r.settled);
    assert!(r.normal_form.is_none());
    assert!(r.stages[1].outcome.starts_with("inconsistent"), "{:?}", r.stages);

    let r = solve_rank_one_extension_at("csv", &p.clone().with_e(MultiPoly::zero()), w, 3).unwrap();
    assert!(r.settled, "{}", r.verdict);
    assert_eq!(r.forced.get("Y").map(String::as_str), Some("0"));
    assert!(r.free.is_empty());
    assert!(r.round_trip);
}

#[test]
fn rank_one_classification_symbolic() {
    let w = Window::new(-1, 1).unwrap();
    let r = solve_rank_one_extension_at("csv-ext", &RankOneParams::symbolic(), w, 3).unwrap();
    assert!(r.settled, "{} {:?}", r.verdict, r.stages);
    assert_eq!(r.forced.get("e").map(String::as_str), Some("0"));
    assert_eq!(r.forced.get("Y").map(String::as_str), Some("0"));
    assert_eq!(r.forced.get("N").map(String::as_str), Some("dn*c^i"));
    assert_eq!(r.free, ["a", "b", "c", "dn"]);
    assert!(r.round_trip);
}

#[test]
fn graded_classification_symbolic() {
    let w = Window::new(-1, 1).unwrap();
    let r = solve_graded_extension("csv", &GradedKind::Uniform { a: MultiPoly::var(Var::param("a")) }, w, 2).unwrap();
    assert!(r.settled, "{} {:?}", r.verdict, r.stages);
    assert_eq!(r.forced.get("c").map(String::as_str), Some("0"));
    assert_eq!(r.forced.get("Y").map(String::as_str), Some("0"));
    assert_eq!(r.free, ["a", "b"]);
}

#[test]
fn chv_keeps_the_twist() {
    let r = solve_rank_one_extension_at("chv", &RankOneParams::symbolic(), Window::new(-1, 1).unwrap(), 2).unwrap();
    assert!(r.settled);
    assert!(r.forced.is_empty());
    assert_eq!(r.free, ["a", "b", "c", "e"]);
}

#[test]
fn quadratic_probe_recovers_a_product() {
    // h_j = t·c^j on csv with e free: (Y, Y) is constant in t.
    let alg = AlgebraSpec::builtin("csv").unwrap();
    let w = Window::new(-1, 1).unwrap();
    let base = RankOneParams::symbolic();
    let items = vec![(BasisKey::new("Y", 0), BasisKey::new("Y", 1), 0)];
    let mut h0 = BTreeMap::new();
    for j in w.indices() {
        h0.insert((j, 0), super::solve::tests_support::cpow(j));
    }
    let qs = super::solve::tests_support::probe_rank_one(&alg, &base, &items, &h0).unwrap();
    assert!(qs[0].is_constant());
    assert_eq!(qs[0].constant, LambdaElement::single(BasisKey::new("v", 0), cunit("(l-m)*c*e")));

    // A ∂-dependent h makes the residual genuinely quadratic.
    let mut h1 = BTreeMap::new();
    for j in w.indices() {
        h1.insert((j, 0), super::solve::tests_support::cpow(j).mul(&vars::d()));
    }
    let qs = super::solve::tests_support::probe_rank_one(&alg, &base, &items, &h1).unwrap();
    assert!(!qs[0].is_constant());
    assert!(qs[0].quadratic.contains_key(&(0, 0)));
}
