use idele_core::curve::Curve;
use idele_core::gf::{Fe, Field};
use idele_core::rng::stream;
use idele_core::sample::{self, IdeleShape};
use idele_core::symbol::{axiom_suite, constant_pairing_check, weil_check};
use idele_core::verdict::CheckStatus;

fn curves() -> Vec<Curve> {
    let f5 = Field::prime(5).unwrap();
    vec![
        Curve::p1(&Field::prime(2).unwrap()),
        Curve::p1(&Field::prime(3).unwrap()),
        Curve::p1(&f5),
        Curve::p1(&Field::new(3, 2).unwrap()),
        Curve::elliptic(&f5, Fe(1), Fe(0)).unwrap(),
        Curve::elliptic(&f5, Fe(1), Fe(1)).unwrap(),
    ]
}

#[test]
fn weil_reciprocity_on_random_pairs() {
    for c in curves() {
        let mut rng = stream(11, &c.describe());
        for _ in 0..30 {
            let f = sample::function(&mut rng, &c, 3);
            let g = sample::function(&mut rng, &c, 3);
            let t = weil_check(&f, &g).unwrap();
            assert!(t.is_one(), "{} : f = {f}, g = {g}, {:?}", c.describe(), t.to_json());
        }
    }
}

#[test]
fn axioms_on_random_triples() {
    for c in curves() {
        let window = 2;
        let places = c.places_up_to(window).unwrap();
        let mut rng = stream(5, &c.describe());
        let mut evaluated = [0usize; 2];
        for i in 0..15 {
            let mut draw = || sample::idele(&mut rng, &c, &places, window, IdeleShape::default()).unwrap();
            let (a, b, g) = (draw(), draw(), draw());
            let a = if i % 2 == 0 { sample::into_i1(&mut rng, &a).unwrap() } else { a };
            for check in axiom_suite(&a, &b, &g).unwrap() {
                if check.status == CheckStatus::Pass {
                    match check.name.as_str() {
                        "steinberg" => evaluated[0] += 1,
                        "isotropy_on_i1" => evaluated[1] += 1,
                        _ => {}
                    }
                }
                assert_ne!(
                    check.status,
                    CheckStatus::Fail,
                    "{} {}: a = {a}, b = {b}, g = {g}: {}",
                    c.describe(),
                    check.name,
                    check.witness
                );
            }
            let k = c.field();
            let cst = sample::unit(&mut rng, k);
            assert_eq!(constant_pairing_check(&b, cst).unwrap().status, CheckStatus::Pass);
        }
        assert!(evaluated.iter().all(|&n| n > 0), "{}: {evaluated:?}", c.describe());
    }
}
