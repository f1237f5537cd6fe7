//! CAR, so(n, n) closure and rotation checks.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{stage_modes, CliffordOperator, GeneratorKind, Letter};
use crate::error::{PlexusError, Result};
use crate::grassmann::{single_monomial, DuplexVector};
use crate::lie::{self, LieAlgebra};
use crate::pauli::orthonormal_duplex_frame;
use crate::report::{Check, Report};
use crate::scalar::{int, ratio, Rational};

/// Basis vectors sampled per relation at stage 4.
pub const CAR_SAMPLES: usize = 1000;

/// Generator pairs sampled for the stage-4 closure check.
pub const CLOSURE_SAMPLES: usize = 200;

fn stage_in_range(stage: usize) -> Result<usize> {
    if stage == 0 {
        return Err(PlexusError::InvalidArgument("stage must be at least 1".into()));
    }
    stage_modes(stage)
}

/// All pairwise canonical anticommutation relations of a stage: symbolically
/// by normal ordering, and by direct bitmask action on basis vectors
/// (all of them up to stage 3, `CAR_SAMPLES` seeded samples at stage 4).
pub fn car_check(stage: usize, seed: u64) -> Result<Report> {
    let modes = stage_in_range(stage)?;
    let letters: Vec<Letter> =
        (0..modes).map(Letter::creator).chain((0..modes).map(Letter::annihilator)).collect();
    let dim = 1u64 << modes;
    let states: Vec<u64> = if stage <= 3 {
        (0..dim).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..CAR_SAMPLES).map(|_| rng.gen_range(0..dim)).collect()
    };

    let mut report = Report::new("car")
        .param("stage", stage)
        .param("generators", letters.len())
        .param("basis_vectors_checked", states.len());
    if stage > 3 {
        report.set_param("seed", seed);
    }

    for (i, &a) in letters.iter().enumerate() {
        for &b in &letters[i..] {
            let delta = a.mode == b.mode && a.kind != b.kind;
            let lhs = format!("{{{a}, {b}}}");
            let rhs = if delta { "1" } else { "0" };
            let ga = CliffordOperator::letter(modes, a);
            let gb = CliffordOperator::letter(modes, b);
            let sym = ga.anticommutator(&gb).as_scalar();
            let expected = if delta { Rational::one() } else { Rational::zero() };
            report.push(Check::exact("CAR (normal order)", &lhs, rhs, sym == Some(expected)));

            let bad = states
                .iter()
                .filter(|&&s| {
                    // a(b s) + b(a s) as a sparse combination of basis states.
                    let mut out = std::collections::BTreeMap::<u64, i32>::new();
                    for (x, y) in [(a, b), (b, a)] {
                        if let Some((u, s2)) = y.act(s).and_then(|(t, s1)| x.act(t).map(|(u, s2)| (u, s1 * s2))) {
                            *out.entry(u).or_insert(0) += s2 as i32;
                        }
                    }
                    out.retain(|_, c| *c != 0);
                    let expected: std::collections::BTreeMap<u64, i32> =
                        if delta { [(s, 1)].into() } else { Default::default() };
                    out != expected
                })
                .count();
            report.push(Check::exact("CAR (basis action)", lhs, rhs, bad == 0));
        }
    }
    Ok(report)
}

/// `γ(v ⊕ v') = γ_v + γ^{v'}` for a duplex vector over the stage's monadics.
pub fn generator_from_duplex(f: &DuplexVector) -> Result<CliffordOperator> {
    let modes = stage_modes(f.stage())?;
    let mut op = CliffordOperator::zero(modes);
    let parts = f
        .ket
        .terms()
        .map(|(m, c)| (GeneratorKind::Creator, m, c))
        .chain(f.bra.coterms().map(|(m, c)| (GeneratorKind::Annihilator, m, c)));
    for (kind, m, c) in parts {
        let g = super::CliffordGenerator::new(m.clone(), kind)
            .map_err(|_| PlexusError::InvalidArgument(format!("{m} is not a monadic of stage {}", f.stage())))?;
        let mode = g.letter().mode;
        if mode >= modes {
            return Err(PlexusError::InvalidArgument(format!("{m} is not a monadic of stage {}", f.stage())));
        }
        op = op.add(&CliffordOperator::letter(modes, Letter { mode, kind }).scale(c));
    }
    Ok(op)
}

/// Semi-commutator `½[γ(w1), γ(w2)]`.
pub fn spin_generator(w1: &DuplexVector, w2: &DuplexVector) -> Result<CliffordOperator> {
    if w1.stage() != w2.stage() {
        return Err(PlexusError::StageMismatch { left: w1.stage(), right: w2.stage() });
    }
    let (a, b) = (generator_from_duplex(w1)?, generator_from_duplex(w2)?);
    Ok(a.commutator(&b).scale(&ratio(1, 2)))
}

fn random_combination(basis: &[CliffordOperator], rng: &mut ChaCha8Rng) -> CliffordOperator {
    let mut acc = CliffordOperator::zero(basis[0].modes());
    for b in basis {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            acc = acc.add(&b.scale(&int(c)));
        }
    }
    acc
}

/// Closure of the grade-2 operators `L_ab = ½ γ_a γ_b` of an orthonormal
/// frame under commutators, with the orthogonal structure constants of the
/// frame signs; the Jacobi identity; and, up to stage 3, the dimension and
/// nondegeneracy of the Killing form.
pub fn so_closure_check(stage: usize, seed: u64) -> Result<Report> {
    stage_in_range(stage)?;
    let frame = orthonormal_duplex_frame(stage)?;
    let gammas = frame.vectors.iter().map(generator_from_duplex).collect::<Result<Vec<_>>>()?;
    let signs: Vec<i64> = frame.signs.iter().map(|&s| s as i64).collect();
    let n = gammas.len();
    let half = ratio(1, 2);
    let planes: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let gens: Vec<CliffordOperator> = planes.iter().map(|&(a, b)| gammas[a].mul(&gammas[b]).scale(&half)).collect();
    let index_of = |p: (usize, usize)| planes.binary_search(&p).expect("normalized plane");

    let exhaustive = stage <= 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..planes.len()).flat_map(|i| (i..planes.len()).map(move |j| (i, j))).collect()
    } else {
        (0..CLOSURE_SAMPLES).map(|_| (rng.gen_range(0..planes.len()), rng.gen_range(0..planes.len()))).collect()
    };

    let pos = signs.iter().filter(|&&s| s > 0).count();
    let mut report = Report::new("closure")
        .param("stage", stage)
        .param("algebra", format!("so({},{})", pos, n - pos))
        .param("generators", gens.len())
        .param("pairs_checked", pairs.len());
    if !exhaustive {
        report.set_param("seed", seed);
    }

    for (i, j) in pairs {
        let ((np, nn), (mp, m)) = (planes[i], planes[j]);
        let lhs = gens[i].commutator(&gens[j]);
        let mut rhs = CliffordOperator::zero(lhs.modes());
        for (p, c) in lie::orthogonal_bracket(&signs, np, nn, mp, m) {
            rhs = rhs.add(&gens[index_of(p)].scale(&int(c)));
        }
        report.push(Check::exact(
            "orthogonal bracket",
            format!("[L_{np}{nn}, L_{mp}{m}]"),
            "g-pattern",
            lhs == rhs,
        ));
    }

    // Random combinations up to stage 3; single random generators at stage 4,
    // where full combinations have thousands of words.
    for t in 0..10 {
        let mut pick = || {
            if exhaustive {
                random_combination(&gens, &mut rng)
            } else {
                gens[rng.gen_range(0..gens.len())].clone()
            }
        };
        let (x, y, z) = (pick(), pick(), pick());
        let jac = x.commutator(&y).commutator(&z).add(&y.commutator(&z).commutator(&x)).add(&z.commutator(&x).commutator(&y));
        report.push(Check::exact("Jacobi", format!("random triple {t}"), "0", jac.is_zero()));
    }

    if exhaustive {
        let algebra = LieAlgebra::from_basis(&gens, CliffordOperator::flatten, CliffordOperator::commutator)?;
        let expected_dim = n * (n - 1) / 2;
        report.push(Check::exact(
            "dimension",
            algebra.dimension().to_string(),
            expected_dim.to_string(),
            algebra.dimension() == expected_dim,
        ));
        let killing = algebra.killing_form();
        let (det, (kp, kn, kz)) = lie::killing_summary(&killing);
        report.set_param("killing_inertia", vec![kp, kn, kz]);
        report.push(Check::exact("Killing form nondegenerate", format!("det = {det}"), "≠ 0", !det.is_zero()));
        let (ep, en) = lie::orthogonal_killing_inertia(pos, n - pos);
        report.push(Check::exact(
            "Killing signature",
            format!("({kp},{kn},{kz})"),
            format!("({ep},{en},0)"),
            (kp, kn, kz) == (ep, en, 0),
        ));
    }
    Ok(report)
}

fn rotation_planes(report: &mut Report, gamma: &CliffordOperator, label: &str, tolerance: f64) -> Result<()> {
    if gamma.modes() > 10 {
        return Err(PlexusError::RankTooLarge { requested: gamma.stage(), max: 3 });
    }
    let m = gamma.matrix().to_f64();
    let dim = m.nrows();
    let id = nalgebra::DMatrix::<f64>::identity(dim, dim);
    let half_turn = (&m * std::f64::consts::PI).exp();
    let full_turn = (&m * (2.0 * std::f64::consts::PI)).exp();
    let dev = |a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>| (a - b).amax();
    report.push(Check::numeric("exp(πΓ) = -1", format!("exp(π {label})"), "-1", dev(&half_turn, &(-&id)), tolerance));
    report.push(Check::numeric("exp(2πΓ) = +1", format!("exp(2π {label})"), "1", dev(&full_turn, &id), tolerance));
    Ok(())
}

/// `exp(π γ_{w1 w2}) = -1` in binary64 for a compact orthonormal plane.
pub fn full_rotation_check(w1: &DuplexVector, w2: &DuplexVector, tolerance: f64) -> Result<Report> {
    let gamma = spin_generator(w1, w2)?;
    let square = gamma.mul(&gamma).as_scalar();
    if square == Some(Rational::one()) {
        return Err(PlexusError::NonCompactPlane);
    }
    if square != Some(-Rational::one()) {
        return Err(PlexusError::InvalidArgument("the vectors do not span an orthonormal plane".into()));
    }
    let mut report = Report::new("rotation").param("stage", w1.stage()).param("tolerance", tolerance);
    let label = match (single_monomial(&w1.ket), single_monomial(&w2.ket)) {
        (Some((a, _)), Some((b, _))) => format!("γ_{{{a},{b}}}"),
        _ => "Γ".to_string(),
    };
    rotation_planes(&mut report, &gamma, &label, tolerance)?;
    Ok(report)
}

/// Rotation check on every compact plane of the orthonormal frame of a stage.
pub fn rotation_suite(stage: usize, tolerance: f64) -> Result<Report> {
    if stage > 3 {
        return Err(PlexusError::RankTooLarge { requested: stage, max: 3 });
    }
    let frame = orthonormal_duplex_frame(stage)?;
    let mut report = Report::new("rotation").param("stage", stage).param("tolerance", tolerance);
    let n = frame.vectors.len();
    let mut planes = 0;
    for a in 0..n {
        for b in a + 1..n {
            if frame.signs[a] != frame.signs[b] {
                continue;
            }
            planes += 1;
            let sub = full_rotation_check(&frame.vectors[a], &frame.vectors[b], tolerance)?;
            report.checks.extend(sub.checks.into_iter().map(|mut c| {
                c.lhs = format!("{} [f{a}, f{b}]", c.lhs);
                c
            }));
        }
    }
    report.set_param("compact_planes", planes);
    Ok(report)
}

/// Random sample of distinct index pairs, for sampled plane checks.
pub(crate) fn sample_planes(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    all.shuffle(rng);
    all.truncate(count);
    all.sort_unstable();
    all
}
