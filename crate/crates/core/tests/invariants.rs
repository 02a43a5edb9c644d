use idele_core::approx::{random_problem, strong_approx_solve, strong_approx_verify};
use idele_core::curve::{Curve, EcGroup};
use idele_core::funcfield::divisor_of;
use idele_core::gf::{Fe, Field};
use idele_core::picard::{characters_enum, lambda_phi, pi_map, pic0_class, Pic0Class};
use idele_core::polyser::{jet_inv, jet_mul};
use idele_core::rng::stream;
use idele_core::sample::{self, IdeleShape};
use idele_core::symbol::{local_symbol, pairing};
use proptest::prelude::*;

fn field(q: u32) -> Field {
    match q {
        4 => Field::new(2, 2).unwrap(),
        9 => Field::new(3, 2).unwrap(),
        25 => Field::new(5, 2).unwrap(),
        p => Field::prime(p).unwrap(),
    }
}

fn ell() -> Curve {
    Curve::elliptic(&Field::prime(5).unwrap(), Fe(1), Fe(0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_is_a_field(q in prop::sample::select(vec![2u32, 3, 4, 5, 9, 25]), a in 0u32..25, b in 0u32..25, c in 0u32..25) {
        let k = field(q);
        let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(k.mul(a, k.inv(a)), Fe::ONE);
        }
    }

    #[test]
    fn norm_preimage_is_a_section(d in 1u32..=3, c in 1u32..5) {
        let curve = Curve::p1(&Field::prime(5).unwrap());
        let x = curve.places_up_to(d).unwrap().into_iter().find(|x| x.degree() == d).unwrap();
        let u = x.norm_preimage(Fe(c)).unwrap();
        prop_assert_eq!(x.norm(u), Fe(c));
    }

    #[test]
    fn group_law_is_associative(i in 0usize..9, j in 0usize..9, l in 0usize..9, b in prop::sample::select(vec![0u32, 1])) {
        let grp = EcGroup::new(&Field::prime(5).unwrap(), Fe(1), Fe(b));
        let pts = grp.points();
        let (p, q, r) = (pts[i % pts.len()], pts[j % pts.len()], pts[l % pts.len()]);
        prop_assert_eq!(grp.add(grp.add(p, q), r), grp.add(p, grp.add(q, r)));
        prop_assert!(grp.add(p, grp.neg(p)).is_infinity());
    }

    #[test]
    fn divisor_is_a_homomorphism(seed in any::<u64>(), q in prop::sample::select(vec![3u32, 5])) {
        for c in [Curve::p1(&field(q)), ell()] {
            let mut rng = stream(seed, "divisor-hom");
            let f = sample::function(&mut rng, &c, 2);
            let g = sample::function(&mut rng, &c, 2);
            let lhs = divisor_of(&f.mul(&g)).unwrap();
            let rhs = divisor_of(&f).unwrap().add(&divisor_of(&g).unwrap());
            prop_assert_eq!(lhs.clone(), rhs);
            prop_assert_eq!(lhs.degree(), 0);
        }
    }

    #[test]
    fn jets_form_a_group(seed in any::<u64>()) {
        let c = Curve::p1(&field(9));
        let mut rng = stream(seed, "jets");
        let places = c.places_up_to(2).unwrap();
        let x = &places[seed as usize % places.len()];
        let a = sample::jet(&mut rng, x, 1, 3);
        let b = sample::jet(&mut rng, x, -2, 3);
        let one = jet_mul(&a, &jet_inv(&a)).unwrap();
        prop_assert!(one.is_one());
        prop_assert_eq!(jet_mul(&a, &b).unwrap().valuation(), -1);
    }

    #[test]
    fn local_symbol_is_antisymmetric(seed in any::<u64>()) {
        let c = Curve::p1(&field(5));
        let mut rng = stream(seed, "symbol");
        let places = c.places_up_to(2).unwrap();
        let x = &places[seed as usize % places.len()];
        let a = sample::jet(&mut rng, x, (seed % 5) as i64 - 2, 2);
        let b = sample::jet(&mut rng, x, (seed % 3) as i64 - 1, 2);
        let k = c.field();
        prop_assert_eq!(k.mul(local_symbol(&a, &b).unwrap(), local_symbol(&b, &a).unwrap()), Fe::ONE);
    }

    #[test]
    fn pairing_is_multiplicative(seed in any::<u64>()) {
        let c = ell();
        let mut rng = stream(seed, "pairing");
        let places = c.places_up_to(2).unwrap();
        let mut draw = || sample::idele(&mut rng, &c, &places, 2, IdeleShape::default()).unwrap();
        let (a, b, g) = (draw(), draw(), draw());
        let k = c.field();
        let lhs = pairing(&a.mul(&b).unwrap(), &g).unwrap();
        prop_assert_eq!(lhs, k.mul(pairing(&a, &g).unwrap(), pairing(&b, &g).unwrap()));
    }

    #[test]
    fn pi_of_lambda_phi_is_phi_of_class(seed in any::<u64>()) {
        let c = ell();
        let chars = characters_enum(&c).unwrap();
        let phi = &chars[seed as usize % chars.len()];
        let lam = lambda_phi(&c, phi, 2).unwrap();
        let mut rng = stream(seed, "pi");
        let places = c.places_up_to(2).unwrap();
        let mut d = idele_core::funcfield::Divisor::new();
        for _ in 0..3 {
            let x = &places[rand::Rng::gen_range(&mut rng, 0..places.len())];
            d.add_term(x, rand::Rng::gen_range(&mut rng, -2..=2));
        }
        let deg = d.degree();
        d.add_term(&c.infinity(), -deg);
        let Pic0Class::Point(p) = pic0_class(&c, &d, 2).unwrap() else { unreachable!() };
        prop_assert_eq!(pi_map(&lam, &d).unwrap(), phi.apply(p));
    }

    #[test]
    fn approximation_is_verified(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 5])) {
        let c = Curve::p1(&field(q));
        let mut rng = stream(seed, "approx");
        let prob = random_problem(&mut rng, &c, 4, 2, 3).unwrap();
        let f = strong_approx_solve(&prob).unwrap();
        prop_assert!(strong_approx_verify(&f, &prob).unwrap().passed());
    }
}
