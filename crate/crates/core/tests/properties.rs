use plexus::basis::{wedge_basis, BasisMonomial};
use plexus::grassmann::Element;
use plexus::scalar::int;
use proptest::prelude::*;

fn element(terms: &[(u64, i64)]) -> Element {
    terms.iter().fold(Element::zero(3), |acc, &(q, c)| {
        acc.add(&Element::serial(q).lift(3).unwrap().scale(&int(c))).unwrap()
    })
}

fn terms() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((0u64..16, -3i64..=3), 0..5)
}

proptest! {
    #[test]
    fn serial_round_trip(q in any::<u64>()) {
        let m = BasisMonomial::from_serial_u64(q);
        prop_assert_eq!(m.serial_u64(), Some(q));
    }

    #[test]
    fn wedge_is_associative(a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (element(&a), element(&b), element(&c));
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn monomials_commute_up_to_parity(p in 0u64..65536, q in 0u64..65536) {
        let (a, b) = (BasisMonomial::from_serial_u64(p), BasisMonomial::from_serial_u64(q));
        let (s, ab) = wedge_basis(&a, &b);
        let (t, ba) = wedge_basis(&b, &a);
        if s == 0 {
            prop_assert_eq!(t, 0);
        } else {
            prop_assert_eq!(&ab, &ba);
            let both_odd = a.degree() % 2 == 1 && b.degree() % 2 == 1;
            prop_assert_eq!(s * t, if both_odd { -1 } else { 1 });
        }
    }
}
