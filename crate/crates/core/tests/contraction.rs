use num_bigint::BigUint;
use num_traits::{One, Zero};
use plexus::contraction::{
    band_census, band_levels, band_residual, centrality_check, commutator_ledger, contraction_sweep, cumulate_exact,
    grouped_spectrum, lie_hom_check, lie_hom_suite, lorentz_sector_check, qi_spectrum, spectrum_oracle_check,
    tensor_qi_spectrum, CumulantSystem, SectorPolicy,
};
use plexus::matrix::SparseMatrix;
use plexus::scalar::{int, ratio, Rational};
use plexus::yang::{build_yang_rep, orbital_atoms, SignatureMode};
use plexus::PlexusError;

fn unit_atoms() -> (plexus::yang::YangRep, plexus::yang::OrbitalAtoms) {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let atoms = orbital_atoms(&rep, &int(1), &int(1), &int(1)).unwrap();
    (rep, atoms)
}

#[test]
fn trace_of_cumulant() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let x = &rep.gamma_product(&[1, 4]) + &SparseMatrix::scalar(8, ratio(3, 7));
    for n in 1..=3u32 {
        let sum = cumulate_exact(&x, n as usize).unwrap();
        assert_eq!(sum.trace(), x.trace() * int(n as i64) * int(8i64.pow(n - 1)));
    }
}

#[test]
fn two_cell_qi_magnitudes() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let spectrum = tensor_qi_spectrum(&rep, 2).unwrap();
    assert_eq!(spectrum.keys().cloned().collect::<Vec<_>>(), vec![int(0), int(1)]);
    // k = 1 twice, k = 0 and k = 2 share magnitude 1; 4^2 per sector.
    assert_eq!(spectrum[&int(0)], BigUint::from(32u32));
    assert_eq!(spectrum[&int(1)], BigUint::from(32u32));
}

#[test]
fn spectrum_oracle_up_to_four_cells() {
    let rep = build_yang_rep(SignatureMode::CompactI);
    let report = spectrum_oracle_check(&rep, &[2, 3, 4]).unwrap();
    assert!(report.passed(), "{report}");
    let dims: BigUint = grouped_spectrum(4).values().sum();
    assert_eq!(dims, BigUint::from(4096u32));
}

#[test]
fn lie_homomorphism() {
    let (_, atoms) = unit_atoms();
    let report = lie_hom_check(&atoms.dl[&(1, 5)], &atoms.dl[&(5, 6)], 2).unwrap();
    assert!(report.passed());
    let x = &atoms.dl[&(2, 3)];
    assert!(cumulate_exact(&x.commutator(x), 3).unwrap().is_zero());
    let suite = lie_hom_suite(&[2, 3], 0).unwrap();
    assert_eq!(suite.count(), 100);
    assert!(suite.passed());
    assert!(matches!(lie_hom_check(x, x, 5), Err(PlexusError::TooLarge { .. })));
}

#[test]
fn closed_form_spectrum() {
    let s = qi_spectrum(4);
    assert_eq!(s.len(), 5);
    assert_eq!(s[1].magnitude, ratio(1, 2));
    assert_eq!(s[1].multiplicity, BigUint::from(4u32));
    assert!(s[0].residual().is_zero());
    assert_eq!(s[1].residual(), ratio(3, 4));
    let one = qi_spectrum(1);
    assert!(one.iter().all(|x| x.magnitude == Rational::one()));
    // Multiplicities sum to 2^N, also for large N.
    let total: BigUint = qi_spectrum(300).iter().map(|x| x.multiplicity.clone()).sum();
    assert_eq!(total, BigUint::from(2u32).pow(300));
}

#[test]
fn band_census_examples() {
    for (n, levels) in [(4, 1), (100, 5), (10_000, 50)] {
        let report = band_census(n).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(band_levels(n), levels);
    }
    let mut last = 0;
    for n in 4..2000 {
        let l = band_levels(n);
        assert!(l >= last);
        assert!(((n as f64).sqrt() / 2.0 - l as f64).abs() <= 1.0);
        last = l;
    }
}

#[test]
fn sweep_slopes() {
    let ns = [16, 64, 256, 1024, 4096];
    let sweep = contraction_sweep(&ns, SectorPolicy::default(), &int(1), &int(1)).unwrap();
    // Independent residual: 1 − (1 − 2K/N)² with K = ⌈√N/2⌉.
    for p in &sweep.points {
        let n = p.n as f64;
        let k = (n.sqrt() / 2.0).ceil();
        assert!((p.r1_max_band - (1.0 - (1.0 - 2.0 * k / n).powi(2))).abs() < 1e-15);
        assert_eq!(p.r2, 1.0 / n);
    }
    let r1 = sweep.fit("r1").unwrap();
    assert!((r1.slope + 0.5).abs() <= 0.05, "{}", r1.slope);
    let r2 = sweep.fit("r2").unwrap();
    assert!((r2.slope + 1.0).abs() < 1e-12);
    assert!(sweep.report(0.05).passed());
    let csv = sweep.to_csv();
    assert_eq!(csv.lines().next().unwrap(), "N,W,r1_max_band,r2,band_levels,band_width");
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn sweep_errors_and_trivial_sector() {
    assert!(matches!(contraction_sweep(&[], SectorPolicy::default(), &int(1), &int(1)), Err(PlexusError::EmptySweep)));
    let short = contraction_sweep(&[8], SectorPolicy::default(), &int(1), &int(1)).unwrap();
    assert!(short.fits.is_empty());
    for n in [16, 1000, 4096] {
        assert!(qi_spectrum(n)[0].residual().is_zero());
        assert!(band_residual(n, SectorPolicy::StrictBand) <= band_residual(n, SectorPolicy::HalfRootCeiling));
    }
}

#[test]
fn ledger_ratios() {
    let (rep, atoms) = unit_atoms();
    for n in [10u64, 100] {
        let ledger = commutator_ledger(&rep, &atoms, n).unwrap();
        assert!(ledger.report.passed(), "{}", ledger.report);
        assert_eq!(ledger.w, ratio(1, n as i64));
        let (xx, pp) = ledger.ratios();
        assert_eq!(xx, int(n as i64));
        assert_eq!(pp, ratio(1, n as i64));
        assert_eq!(ledger.cell_norm, ratio(1, 2));
    }
    // Distinct erge and chrone: ratios still 1/𝒲 and 𝒲.
    let atoms = orbital_atoms(&rep, &ratio(1, 3), &int(5), &int(1)).unwrap();
    let ledger = commutator_ledger(&rep, &atoms, 10).unwrap();
    let (xx, pp) = ledger.ratios();
    assert_eq!(xx, Rational::one() / &ledger.w);
    assert_eq!(pp, ledger.w);
    assert_eq!(ledger.hbar, ratio(5, 3));
}

#[test]
fn disjoint_position_momentum_commute() {
    let (_, atoms) = unit_atoms();
    assert!(atoms.dl[&(1, 5)].commutator(&atoms.dl[&(2, 6)]).is_zero());
    let c = atoms.dl[&(1, 5)].commutator(&atoms.dl[&(1, 6)]);
    assert_eq!(c, -&atoms.dl[&(5, 6)]);
}

#[test]
fn lorentz_sector_on_tensors() {
    let (rep, atoms) = unit_atoms();
    for n in [1, 2] {
        let system = CumulantSystem::new(rep.clone(), atoms.clone(), n).unwrap();
        let report = lorentz_sector_check(&system).unwrap();
        assert!(report.passed(), "{report}");
    }
    let atoms = orbital_atoms(&rep, &ratio(2, 3), &ratio(3, 4), &int(1)).unwrap();
    let system = CumulantSystem::new(rep, atoms, 3).unwrap();
    assert!(lorentz_sector_check(&system).unwrap().passed());
}

#[test]
fn qi_is_central_in_the_limit() {
    let (rep, atoms) = unit_atoms();
    let (points, report) = centrality_check(&rep, &atoms, &[1, 3], &[10, 100, 1000, 10_000], 1e-9).unwrap();
    assert!(report.passed(), "{report}");
    assert!(centrality_check(&rep, &atoms, &[2], &[], 1e-9).is_err());
    // Three cells: ‖XP‖ = √3/2, commutator (2/3)·√3/2.
    assert!((points[1].position_norm - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!((points[1].commutator_norm - 3f64.sqrt() / 3.0).abs() < 1e-12);
    let last = points.last().unwrap();
    assert!(last.ratio() < 2.1e-4);
}
