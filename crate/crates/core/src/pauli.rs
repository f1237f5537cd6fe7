//! Orthonormal duplex frames and recursive Pauli metrics.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{self, generator_from_duplex, mode_label, stage_modes, CliffordOperator};
use crate::error::{PlexusError, Result};
use crate::grassmann::{DualElement, DuplexVector, Element};
use crate::matrix::SignedSparseMatrix;
use crate::report::{Check, Report};
use crate::scalar::{int, Rational};

/// Planes sampled for the stage-4 skew-symmetrization check.
pub const STAGE4_PLANES: usize = 200;

/// Orthonormal frame of a stage's duplex space: `f+_q = e_q ⊕ ê^q` (norm +1)
/// for every mode `q`, then `f-_q = e_q ⊕ -ê^q` (norm -1), where `e_q` is the
/// monadic of mode `q`.
#[derive(Debug, Clone)]
pub struct QuadraticFrame {
    pub stage: usize,
    pub vectors: Vec<DuplexVector>,
    pub signs: Vec<i8>,
}

pub fn orthonormal_duplex_frame(stage: usize) -> Result<QuadraticFrame> {
    let modes = stage_modes(stage)?;
    let mut plus = Vec::with_capacity(modes);
    let mut minus = Vec::with_capacity(modes);
    for q in 0..modes {
        let m = mode_label(q);
        let ket = Element::term(stage, m.clone(), Rational::one())?;
        let bra = DualElement::basis(stage, m)?;
        plus.push(DuplexVector::new(ket.clone(), bra.clone())?);
        minus.push(DuplexVector::new(ket, bra.scale(&int(-1)))?);
    }
    let signs = std::iter::repeat_n(1, modes).chain(std::iter::repeat_n(-1, modes)).collect();
    plus.extend(minus);
    Ok(QuadraticFrame { stage, vectors: plus, signs })
}

impl QuadraticFrame {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn generators(&self) -> Result<Vec<CliffordOperator>> {
        self.vectors.iter().map(generator_from_duplex).collect()
    }

    /// Frame generators as signed one-entry-per-column matrices.
    pub fn signed_generators(&self) -> Result<Vec<SignedSparseMatrix>> {
        self.generators()?
            .iter()
            .map(|g| g.signed_matrix().ok_or_else(|| PlexusError::InvalidArgument("frame generator not monomial".into())))
            .collect()
    }

    /// Frame indices of the negative-square vectors, ascending.
    pub fn negative(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.signs[i] < 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
    Neither,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew",
            Symmetry::Neither => "neither",
        })
    }
}

fn symmetry_of(m: &SignedSparseMatrix) -> Symmetry {
    match m.transpose() {
        Some(t) if t == *m => Symmetry::Symmetric,
        Some(t) if t == m.neg() => Symmetry::Skew,
        _ => Symmetry::Neither,
    }
}

/// The Pauli metric of a stage: the product of the negative-square frame
/// generators, as a signed permutation of the classical basis.
#[derive(Debug, Clone)]
pub struct PauliMetric {
    pub stage: usize,
    pub matrix: SignedSparseMatrix,
    /// Frame indices of the factors, left to right.
    pub order: Vec<usize>,
}

/// Pauli metric with factors in ascending frame order.
pub fn pauli_metric(stage: usize) -> Result<PauliMetric> {
    let frame = metric_frame(stage)?;
    let order = frame.negative();
    pauli_metric_with_order(&frame, &order)
}

fn metric_frame(stage: usize) -> Result<QuadraticFrame> {
    if stage < 2 {
        return Err(PlexusError::InvalidArgument(format!("Pauli metrics start at stage 2, not {stage}")));
    }
    orthonormal_duplex_frame(stage)
}

/// Pauli metric with the negative-square factors in a given order.
pub fn pauli_metric_with_order(frame: &QuadraticFrame, order: &[usize]) -> Result<PauliMetric> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != frame.negative() {
        return Err(PlexusError::InvalidArgument("order must list every negative-square frame vector once".into()));
    }
    let gens = frame.signed_generators()?;
    let dim = gens[0].dimension();
    let matrix = order.iter().fold(SignedSparseMatrix::identity(dim), |acc, &i| acc.mul(&gens[i]));
    Ok(PauliMetric { stage: frame.stage, matrix, order: order.to_vec() })
}

impl PauliMetric {
    pub fn dimension(&self) -> usize {
        self.matrix.dimension()
    }

    pub fn symmetry(&self) -> Symmetry {
        symmetry_of(&self.matrix)
    }

    /// `Some(±1)` when `β² = ±1`.
    pub fn square_sign(&self) -> Option<i8> {
        let sq = self.matrix.mul(&self.matrix);
        let id = SignedSparseMatrix::identity(self.dimension());
        if sq == id {
            Some(1)
        } else if sq == id.neg() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.is_signed_permutation()
    }

    /// Sparse triplet export: a header, then `row column ±1` per entry.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        let order: Vec<String> = self.order.iter().map(|i| format!("f{i}")).collect();
        writeln!(out, "# pauli metric stage {} dimension {}", self.stage, self.dimension()).unwrap();
        writeln!(out, "# factor order {}", order.join(" ")).unwrap();
        for j in 0..self.dimension() {
            if let Some((i, s)) = self.matrix.entry(j) {
                writeln!(out, "{i} {j} {s}").unwrap();
            }
        }
        out
    }
}

/// Which transpose `𝒯` the skew-symmetrization check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransposeMode {
    /// Matrix transpose in the Hilbert-orthonormal classical basis.
    #[default]
    Hilbert,
    /// The anti-automorphism of the Clifford algebra fixing every duplex
    /// vector (reversion of generator products).
    DuplexAdjoint,
}

impl TransposeMode {
    pub fn name(self) -> &'static str {
        match self {
            TransposeMode::Hilbert => "hilbert",
            TransposeMode::DuplexAdjoint => "duplex-adjoint",
        }
    }
}

impl FromStr for TransposeMode {
    type Err = PlexusError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(TransposeMode::Hilbert),
            "duplex-adjoint" | "reversion" => Ok(TransposeMode::DuplexAdjoint),
            _ => Err(PlexusError::InvalidArgument(format!("unknown transpose mode `{s}`"))),
        }
    }
}

fn product(gens: &[SignedSparseMatrix], indices: impl IntoIterator<Item = usize>) -> SignedSparseMatrix {
    indices.into_iter().fold(SignedSparseMatrix::identity(gens[0].dimension()), |acc, i| acc.mul(&gens[i]))
}

/// Checks `𝒯(βΓ) = -βΓ` for the grade-2 frame elements `Γ = γ_a γ_b`
/// (every plane up to stage 3, `STAGE4_PLANES` seeded samples at stage 4),
/// plus the symmetry character of β, `β² = ±1`, and the spin invariance
/// `Γᵀβ + βΓ = 0`.
pub fn check_skew_symmetrization(stage: usize, seed: u64, mode: TransposeMode) -> Result<Report> {
    let frame = metric_frame(stage)?;
    let beta = pauli_metric_with_order(&frame, &frame.negative())?;
    let gens = frame.signed_generators()?;
    let n = gens.len();
    let planes = if stage <= 3 {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        clifford::sample_planes(n, STAGE4_PLANES, &mut rng)
    };

    let symmetry = beta.symmetry();
    let expected_symmetry = if stage == 2 { Symmetry::Skew } else { Symmetry::Symmetric };
    let mut report = Report::new("pauli")
        .param("stage", stage)
        .param("transpose", mode.name())
        .param("planes_checked", planes.len())
        .param("beta_symmetry", symmetry.to_string())
        .param("beta_square", beta.square_sign().map(i64::from));
    if stage > 3 {
        report.set_param("seed", seed);
    }
    report.push(Check::exact("β invertible", "β", "signed permutation", beta.is_invertible()));
    report.push(Check::exact(
        "β symmetry character",
        symmetry.to_string(),
        expected_symmetry.to_string(),
        symmetry == expected_symmetry,
    ));
    report.push(Check::exact("β² = ±1", "β²", "±1", beta.square_sign().is_some()));

    let reversed_beta = product(&gens, beta.order.iter().rev().copied());
    let mut invariant_fail = 0;
    for (a, b) in planes {
        let gamma = gens[a].mul(&gens[b]);
        let bg = beta.matrix.mul(&gamma);
        let transposed = match mode {
            TransposeMode::Hilbert => bg.transpose().expect("signed permutation"),
            TransposeMode::DuplexAdjoint => gens[b].mul(&gens[a]).mul(&reversed_beta),
        };
        report.push(Check::exact(
            "𝒯(βΓ) = -βΓ",
            format!("𝒯(β γ_f{a} γ_f{b})"),
            format!("-β γ_f{a} γ_f{b}"),
            transposed == bg.neg(),
        ));
        let gamma_t = gamma.transpose().expect("signed permutation");
        if gamma_t.mul(&beta.matrix) != bg.neg() {
            invariant_fail += 1;
        }
    }
    report.push(Check::exact("spin invariance Γᵀβ + βΓ = 0", "Γᵀβ + βΓ", "0", invariant_fail == 0));
    Ok(report)
}

fn coordinates(q: &Element, dim: usize) -> Result<Vec<Rational>> {
    let mut v = vec![Rational::zero(); dim];
    for (m, c) in q.terms() {
        let i = m
            .serial_u64()
            .filter(|&i| (i as usize) < dim)
            .ok_or_else(|| PlexusError::InvalidArgument(format!("{m} lies outside the metric's stage")))?;
        v[i as usize] = c.clone();
    }
    Ok(v)
}

/// `Av_Q A = β(Q, A Q) = Σ β_{q'q''} Q^{q'} (AQ)^{q''}`.
pub fn pseudo_expectation(beta: &PauliMetric, q: &Element, a: &CliffordOperator) -> Result<Rational> {
    if q.stage() > beta.stage {
        return Err(PlexusError::StageMismatch { left: q.stage(), right: beta.stage });
    }
    if a.stage() > beta.stage {
        return Err(PlexusError::StageMismatch { left: a.stage(), right: beta.stage });
    }
    let dim = beta.dimension();
    let qv = coordinates(q, dim)?;
    let aq = coordinates(&a.apply(&q.lift(beta.stage)?), dim)?;
    let mut acc = Rational::zero();
    for (j, x) in aq.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if let Some((i, s)) = beta.matrix.entry(j) {
            acc += &qv[i] * x * int(s as i64);
        }
    }
    Ok(acc)
}

/// Numerical frame covariance at stage 2: `Av_{RQ}(R A R⁻¹) = Av_Q A` for
/// `R = exp(θΓ)` and random angle, plane, spinor and operator.
pub fn frame_covariance_check(samples: usize, seed: u64, tolerance: f64) -> Result<Report> {
    let stage = 2;
    let frame = orthonormal_duplex_frame(stage)?;
    let beta = pauli_metric(stage)?;
    let gens = frame.generators()?;
    let dim = beta.dimension();
    let b = beta.matrix.to_sparse().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("pauli-covariance").param("stage", stage).param("seed", seed);
    for t in 0..samples {
        let theta: f64 = rng.gen_range(-3.0..3.0);
        let a_idx = rng.gen_range(0..gens.len());
        let mut b_idx = rng.gen_range(0..gens.len() - 1);
        if b_idx >= a_idx {
            b_idx += 1;
        }
        let gamma = gens[a_idx].mul(&gens[b_idx]).matrix().to_f64();
        let r = (&gamma * theta).exp();
        let r_inv = (&gamma * -theta).exp();
        let q = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        let before = q.dot(&(&b * &a * &q));
        let q2 = &r * &q;
        let a2 = &r * &a * &r_inv;
        let after = q2.dot(&(&b * &a2 * &q2));
        report.push(Check::numeric(
            "Av covariant",
            format!("sample {t}: θ = {theta:.3}, plane f{a_idx} f{b_idx}"),
            "Av_Q A",
            (after - before).abs(),
            tolerance,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::duplex_inner;

    #[test]
    fn frame_shapes() {
        let f = orthonormal_duplex_frame(2).unwrap();
        assert_eq!(f.signs, vec![1, 1, -1, -1]);
        let f3 = orthonormal_duplex_frame(3).unwrap();
        assert_eq!(f3.signs.iter().filter(|&&s| s > 0).count(), 4);
        assert_eq!(f3.len(), 8);
    }

    #[test]
    fn frame_is_orthonormal() {
        let f = orthonormal_duplex_frame(3).unwrap();
        for (i, v) in f.vectors.iter().enumerate() {
            for (j, w) in f.vectors.iter().enumerate() {
                let expected = if i == j { int(f.signs[i] as i64) } else { Rational::zero() };
                assert_eq!(duplex_inner(v, w).unwrap(), expected);
            }
        }
    }

    #[test]
    fn negative_generator_squares_to_minus_one() {
        let f = orthonormal_duplex_frame(2).unwrap();
        let g = generator_from_duplex(&f.vectors[2]).unwrap();
        assert_eq!(g.mul(&g).as_scalar(), Some(int(-1)));
    }

    #[test]
    fn metric_symmetry_by_stage() {
        assert_eq!(pauli_metric(2).unwrap().symmetry(), Symmetry::Skew);
        assert_eq!(pauli_metric(3).unwrap().symmetry(), Symmetry::Symmetric);
        assert_eq!(pauli_metric(2).unwrap().square_sign(), Some(-1));
        assert_eq!(pauli_metric(3).unwrap().square_sign(), Some(1));
        assert!(matches!(pauli_metric(5), Err(PlexusError::RankTooLarge { .. })));
    }

    #[test]
    fn other_factor_orders_differ_by_sign() {
        let frame = orthonormal_duplex_frame(3).unwrap();
        let base = pauli_metric_with_order(&frame, &frame.negative()).unwrap().matrix;
        let mut order = frame.negative();
        order.reverse();
        let other = pauli_metric_with_order(&frame, &order).unwrap().matrix;
        assert!(other == base || other == base.neg());
        order.swap(0, 1);
        let other = pauli_metric_with_order(&frame, &order).unwrap().matrix;
        assert!(other == base || other == base.neg());
    }

    #[test]
    fn pseudo_expectation_reads_beta() {
        let beta = pauli_metric(2).unwrap();
        let q = Element::unit().lift(2).unwrap();
        let id = CliffordOperator::identity(2);
        let b00 = match beta.matrix.entry(0) {
            Some((0, s)) => int(s as i64),
            _ => Rational::zero(),
        };
        assert_eq!(pseudo_expectation(&beta, &q, &id).unwrap(), b00);
        assert!(pseudo_expectation(&beta, &q, &CliffordOperator::zero(2)).unwrap().is_zero());
    }
}
