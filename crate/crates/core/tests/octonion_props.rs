use finegrad::octonion_d4::{
    eta_mul, norm, oct_conj, oct_mul, polar, so_basis, tau_matrix, Eta, Octonion, SOElement, Triality,
};
use finegrad::{CycNum, Matrix};
use proptest::prelude::*;

fn octonion() -> impl Strategy<Value = Octonion> {
    prop::array::uniform8(-4i64..=4).prop_map(Octonion::from_ints)
}

fn eta(twisted: bool) -> Eta {
    if twisted {
        Eta::new(tau_matrix()).unwrap()
    } else {
        Eta::identity()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn norm_is_multiplicative(x in octonion(), y in octonion()) {
        prop_assert_eq!(norm(&oct_mul(&x, &y)), &norm(&x) * &norm(&y));
    }

    #[test]
    fn conjugate_gives_norm(x in octonion()) {
        prop_assert_eq!(oct_mul(&x, &oct_conj(&x)), Octonion::one().scale(&norm(&x)));
        prop_assert_eq!(oct_mul(&oct_conj(&x), &x), Octonion::one().scale(&norm(&x)));
    }

    #[test]
    fn twisted_norm_is_associative(x in octonion(), y in octonion(), z in octonion(), twisted in any::<bool>()) {
        let e = eta(twisted);
        prop_assert_eq!(polar(&eta_mul(&x, &y, &e), &z), polar(&x, &eta_mul(&y, &z, &e)));
    }

    #[test]
    fn lifts_satisfy_triality(coeffs in prop::collection::vec(-3i64..=3, 28)) {
        let tri = Triality::standard();
        let mut d = Matrix::zeros(8, 8);
        for (c, b) in coeffs.iter().zip(so_basis()) {
            d = d.add(&b.scale(&CycNum::from_int(*c)));
        }
        let t = tri.lift(&SOElement::new(d).unwrap()).unwrap();
        prop_assert!(tri.satisfies(&t));
    }
}
