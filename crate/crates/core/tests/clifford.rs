use plexus::clifford::{
    car_check, full_rotation_check, generator_from_duplex, normal, rotation_suite, so_closure_check, spin_generator, stage_modes,
    CliffordOperator, Letter,
};
use plexus::grassmann::{duplex_inner, DualElement, DuplexVector, Element};
use plexus::pauli::orthonormal_duplex_frame;
use plexus::scalar::int;
use plexus::PlexusError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn car_holds_through_stage_3() {
    for (stage, gens) in [(1, 2), (2, 4), (3, 8)] {
        let r = car_check(stage, 0).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.params["generators"], gens);
    }
}

#[test]
fn car_stage_4_sampled() {
    let r = car_check(4, 0).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.params["generators"], 32);
    assert_eq!(r.params["basis_vectors_checked"], 1000);
}

#[test]
fn car_rejects_stage_5() {
    assert!(matches!(car_check(5, 0), Err(PlexusError::RankTooLarge { .. })));
}

fn e1_duplex(sign: i64) -> DuplexVector {
    let e1 = Element::serial(1);
    let dual = DualElement::basis(1, e1.terms().next().unwrap().0.clone()).unwrap();
    DuplexVector::new(e1, dual.scale(&int(sign))).unwrap()
}

#[test]
fn generator_squares_follow_duplex_norm() {
    let g = generator_from_duplex(&e1_duplex(1)).unwrap();
    assert_eq!(g.mul(&g).as_scalar(), Some(int(1)));
    let g = generator_from_duplex(&e1_duplex(-1)).unwrap();
    assert_eq!(g.mul(&g).as_scalar(), Some(int(-1)));
    let g = generator_from_duplex(&e1_duplex(0)).unwrap();
    assert!(g.mul(&g).is_zero());
}

#[test]
fn frame_anticommutators_are_twice_the_inner_product() {
    for stage in 1..=3 {
        let frame = orthonormal_duplex_frame(stage).unwrap();
        let gens = frame.generators().unwrap();
        for (i, f) in frame.vectors.iter().enumerate() {
            for (j, g) in frame.vectors.iter().enumerate() {
                let expected = duplex_inner(f, g).unwrap() * int(2);
                assert_eq!(gens[i].anticommutator(&gens[j]).as_scalar(), Some(expected));
            }
        }
    }
}

#[test]
fn spin_generator_squares() {
    let frame = orthonormal_duplex_frame(2).unwrap();
    let v = &frame.vectors;
    let compact = spin_generator(&v[0], &v[1]).unwrap();
    assert_eq!(compact.mul(&compact).as_scalar(), Some(int(-1)));
    let boost = spin_generator(&v[0], &v[2]).unwrap();
    assert_eq!(boost.mul(&boost).as_scalar(), Some(int(1)));
    assert!(spin_generator(&v[0], &v[0]).unwrap().is_zero());
}

#[test]
fn closure_stage_2_and_3() {
    for (stage, alg) in [(2, "so(2,2)"), (3, "so(4,4)")] {
        let r = so_closure_check(stage, 0).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.params["algebra"], alg);
    }
}

#[test]
fn closure_stage_4_sampled() {
    let r = so_closure_check(4, 0).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn half_turn_is_minus_one() {
    let r = rotation_suite(2, 1e-12).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.params["compact_planes"], 2);
    let r = rotation_suite(3, 1e-12).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn non_compact_plane_is_rejected() {
    let frame = orthonormal_duplex_frame(2).unwrap();
    let v = &frame.vectors;
    assert!(matches!(full_rotation_check(&v[0], &v[2], 1e-12), Err(PlexusError::NonCompactPlane)));
}

fn random_word(rng: &mut ChaCha8Rng, modes: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..7);
    (0..len)
        .map(|_| {
            let m = rng.gen_range(0..modes);
            if rng.gen_bool(0.5) {
                Letter::creator(m)
            } else {
                Letter::annihilator(m)
            }
        })
        .collect()
}

#[test]
fn normal_ordering_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let word = random_word(&mut rng, 4);
        let reference = normal::normal_order(&word);
        let mut pick = ChaCha8Rng::seed_from_u64(rng.gen());
        let other = normal::normal_order_with(&word, &mut |positions| positions[pick.gen_range(0..positions.len())]);
        assert_eq!(reference, other, "{word:?}");
    }
}

#[test]
fn matrix_matches_symbolic_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for stage in [2usize, 3] {
        let modes = stage_modes(stage).unwrap();
        for _ in 0..20 {
            let op = CliffordOperator::product(modes, &random_word(&mut rng, modes));
            let m = op.matrix();
            for j in 0..(1u64 << modes) {
                let image = op.apply(&Element::serial(j).lift(stage).unwrap());
                let got: Vec<_> =
                    image.terms().map(|(mono, c)| (mono.serial_u64().unwrap() as usize, c.clone())).collect();
                let mut got = got;
                got.sort_by_key(|x| x.0);
                assert_eq!(got, m.column(j as usize).to_vec());
            }
        }
    }
    // Stage 4: 1000 random basis vectors against the bitmask action.
    let modes = 16;
    for _ in 0..1000 {
        let op = CliffordOperator::product(modes, &random_word(&mut rng, modes));
        let j: u64 = rng.gen_range(0..1 << 16);
        let image = op.apply(&Element::serial(j).lift(4).unwrap());
        let mut got: Vec<_> = image.terms().map(|(mono, c)| (mono.serial_u64().unwrap(), c.clone())).collect();
        got.sort_by_key(|x| x.0);
        assert_eq!(got, op.apply_state(j));
    }
}
