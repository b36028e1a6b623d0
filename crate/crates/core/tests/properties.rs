use brim::exactring::intersect::{intersection_number, Intersection};
use brim::{Field, Gf, Ideal, Module, Poly, Rational, Session, Staircase};
use proptest::prelude::*;

fn staircase() -> impl Strategy<Value = Staircase> {
    (1u32..9, 1u32..9, prop::collection::vec((0u32..8, 0u32..8), 0..5)).prop_map(|(a, b, rest)| {
        let mut pts = vec![(a, 0), (0, b)];
        pts.extend(rest);
        Staircase::new(pts)
    })
}

fn poly() -> impl Strategy<Value = Poly<Gf>> {
    prop::collection::vec(((0u32..5, 0u32..5), 1i64..50), 1..4)
        .prop_map(|t| Poly::from_terms(t.into_iter().map(|(m, c)| (m, Gf::from_i64(c)))))
}

fn in_maximal(p: Poly<Gf>) -> Poly<Gf> {
    if p.constant_term().is_zero() {
        p
    } else {
        p.shift(1, 0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_matches_staircase(st in staircase()) {
        let s = Session::default();
        let c = Ideal::<Gf>::from_staircase(&st).colength(&s).unwrap();
        prop_assert_eq!(c.value, st.colength().unwrap());
        // The certificate degree lies inside the ideal.
        let d = (c.certified_at - 1) as u32;
        prop_assert!((0..=d).all(|a| st.contains(a, d - a)));
    }

    #[test]
    fn closure_and_adjoint_are_nested(st in staircase()) {
        let cl = st.newton_closure().unwrap();
        let adj = st.polyhedral_adjoint().unwrap();
        prop_assert!(st.corners().iter().all(|&(a, b)| cl.contains(a, b)));
        prop_assert!(cl.corners().iter().all(|&(a, b)| adj.contains(a, b)));
        prop_assert!(cl.is_integrally_closed().unwrap());
    }

    #[test]
    fn order_is_a_valuation(f in poly(), g in poly()) {
        let (of, og) = (f.order().unwrap(), g.order().unwrap());
        prop_assert_eq!((&f * &g).order(), Some(of + og));
        let sum = &f + &g;
        prop_assume!(!sum.is_zero());
        prop_assert!(sum.order().unwrap() >= of.min(og));
    }

    #[test]
    fn fulton_matches_truncation(f in poly(), g in poly()) {
        let (f, g) = (in_maximal(f), in_maximal(g));
        let s = Session::default();
        match intersection_number(&f, &g) {
            Intersection::Finite(v) => {
                let i = Ideal::new(vec![f, g]).unwrap().with_hint(v);
                prop_assert_eq!(i.colength(&s).unwrap().value, v);
            }
            Intersection::Infinite => {
                let i = Ideal::new(vec![f, g]).unwrap();
                prop_assert!(i.colength(&s).is_err());
            }
            Intersection::Exhausted => prop_assert!(false, "budget exhausted"),
        }
    }

    #[test]
    fn fitting_ideals_ignore_coordinates(seed in 0u64..1000, a in 1u32..3, extra in 0u32..2) {
        let c = a + extra;
        let s = Session::default();
        let m = Module::<Gf>::family_mabc(a, c + 1, c).unwrap();
        let moved = m.random_transform(seed);
        for k in 1..=2 {
            prop_assert!(m.fitting_ideal(k).unwrap().equals(&moved.fitting_ideal(k).unwrap(), &s).unwrap());
        }
        prop_assert_eq!(m.colength(&s).unwrap(), moved.colength(&s).unwrap());
    }
}

#[test]
fn rationals_agree_with_prime_field() {
    let s = Session::default();
    for text in ["x^2 + y^3, x*y", "x^3 - y^2, x^2*y + y^4", "x^4, x*y^2, y^5 + x^3"] {
        let q = Ideal::<Rational>::parse(text).unwrap();
        let p = Ideal::<Gf>::parse(text).unwrap();
        assert_eq!(q.colength(&s).unwrap().value, p.colength(&s).unwrap().value, "{text}");
        assert_eq!(q.hs_multiplicity(1, &s).unwrap(), p.hs_multiplicity(1, &s).unwrap(), "{text}");
    }
}

#[test]
fn multiplicity_routes_agree_with_cross_check() {
    let s = Session::default().with_cross_check(true);
    for text in ["x^2, y^3", "x^3, x*y^2, y^4", "x^2 + y^3, x*y^2"] {
        let i = Ideal::<Gf>::parse(text).unwrap();
        assert!(i.hs_multiplicity(3, &s).is_ok(), "{text}");
    }
    let m = Ideal::<Gf>::parse("x^3, x*y, y^3").unwrap();
    assert_eq!(m.hs_multiplicity(1, &s).unwrap(), 6);
}
