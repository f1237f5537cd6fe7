use plexus::scalar::{int, Rational};
use plexus::yang::{
    atoms_check, build_yang_rep, chiral_check, chiral_split, invariant_planes, killing_form, layout_check,
    orbital_atoms, render_layout, structure_check, yang_matrix_layout, SignatureMode,
};

fn unit_atoms(rep: &plexus::yang::YangRep) -> plexus::yang::OrbitalAtoms {
    orbital_atoms(rep, &int(1), &int(1), &int(1)).unwrap()
}

#[test]
fn all_commutators_match_the_orthogonal_pattern() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let r = structure_check(&rep, 0);
    assert!(r.passed(), "{r}");
    assert_eq!(r.params["relations"], 105);
}

#[test]
fn alt_signature_also_closes() {
    let rep = build_yang_rep(SignatureMode::Alt);
    let r = structure_check(&rep, 0);
    assert!(r.passed(), "{r}");
}

#[test]
fn killing_form_is_regular_with_so33_signature() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let (form, r) = killing_form(&rep).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(form.inertia, (9, 6, 0));
    assert!(form.norm(6, 5) < Rational::from_integer(0.into()));
    assert!(form.norm(1, 4) > Rational::from_integer(0.into()));
}

#[test]
fn chirality_splits_four_plus_four() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let split = chiral_split(&rep).unwrap();
    assert_eq!(split.plus_basis.len(), 4);
    assert_eq!(split.minus_basis.len(), 4);
    let r = chiral_check(&rep).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn atoms_relations() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let atoms = unit_atoms(&rep);
    let r = atoms_check(&rep, &atoms);
    assert!(r.passed(), "{r}");
    // With g_66 = -1 the surviving coefficient is -2ħ.
    assert_eq!(r.params["xp_coefficient"], "-2");
}

#[test]
fn atoms_scale_with_units() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let atoms = orbital_atoms(&rep, &int(3), &int(5), &int(1)).unwrap();
    let r = atoms_check(&rep, &atoms);
    assert!(r.passed(), "{r}");
    assert_eq!(r.params["xp_coefficient"], "-30");
    assert!(orbital_atoms(&rep, &int(0), &int(1), &int(1)).is_err());
}

#[test]
fn layout_is_antisymmetric_with_atom_borders() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let atoms = unit_atoms(&rep);
    let layout = yang_matrix_layout(&rep, &atoms);
    let r = layout_check(&rep, &layout);
    assert!(r.passed(), "{r}");
    let text = render_layout(&layout);
    assert!(text.contains("-δx^1/X"));
    assert!(text.contains("δL^65"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn quantized_imaginary_planes() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let atoms = unit_atoms(&rep);
    let q1: Vec<Rational> = (0..8).map(|i| int(i64::from(i == 0))).collect();
    let plane = invariant_planes(&rep, &atoms.dqi, &q1).unwrap();
    assert!(plane.report.passed(), "{}", plane.report);
    assert_eq!(plane.commuting.len(), 7);
    let j12 = rep.gamma_product(&[1, 2]);
    assert!(invariant_planes(&rep, &j12, &q1).unwrap().report.passed());
}

#[test]
fn generator_bundle_exports() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let v = rep.to_json();
    assert_eq!(v["generators"].as_object().unwrap().len(), 15);
    assert_eq!(v["signature"], "3-3-compact-i");
    assert!(v["generators"]["L_{12}"].is_array());
}
