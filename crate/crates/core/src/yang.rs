//! The Yang algebra so(3,3) on the 8-dimensional real spinors of one cell.
//!
//! The spinor space is the exterior algebra on three modes (the first three
//! monadics of stage 3). Its six frame generators `γ^n = γ_q ± γ^q` realize
//! the duplex space of `3ℝ`; indices run over `1..=6`.
//! The Lie generators are `L^{n'n} = ½ γ^{n'} γ^n`, normalized so that
//! `[L, L]` obeys the orthogonal bracket pattern with unit coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::clifford::{CliffordOperator, Letter};
use crate::error::{PlexusError, Result};
use crate::lie::{self, LieAlgebra};
use crate::linalg;
use crate::matrix::SparseMatrix;
use crate::report::{Check, Report};
use crate::scalar::{int, ratio, Rational};

/// Spinor dimension of one cell.
pub const SPINOR_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignatureMode {
    /// `g = (+,+,+,−,−,−)`: indices 5 and 6 both negative, so `γ^{65}`
    /// squares to −1.
    #[default]
    CompactI,
    /// `g = (+,+,+,−,+,−)`.
    Alt,
}

impl SignatureMode {
    pub fn name(self) -> &'static str {
        match self {
            SignatureMode::CompactI => "3-3-compact-i",
            SignatureMode::Alt => "alt",
        }
    }

    pub fn metric(self) -> [i64; 6] {
        match self {
            SignatureMode::CompactI => [1, 1, 1, -1, -1, -1],
            SignatureMode::Alt => [1, 1, 1, -1, 1, -1],
        }
    }
}

impl fmt::Display for SignatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignatureMode {
    type Err = PlexusError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3-3-compact-i" => Ok(SignatureMode::CompactI),
            "alt" => Ok(SignatureMode::Alt),
            _ => Err(PlexusError::InvalidArgument(format!("unknown signature mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct YangRep {
    pub mode: SignatureMode,
    pub metric: [i64; 6],
    /// `γ^1 .. γ^6`, stored 0-based.
    gammas: Vec<SparseMatrix>,
    /// `L^{ab}` for `a < b`, 1-based keys.
    generators: BTreeMap<(usize, usize), SparseMatrix>,
}

fn check_index(n: usize) {
    assert!((1..=6).contains(&n), "Yang indices run over 1..=6, got {n}");
}

pub fn build_yang_rep(mode: SignatureMode) -> YangRep {
    let modes = 3;
    let frame = |q: usize, sign: i64| {
        CliffordOperator::letter(modes, Letter::creator(q))
            .add(&CliffordOperator::letter(modes, Letter::annihilator(q)).scale(&int(sign)))
            .matrix()
    };
    let mut gammas: Vec<SparseMatrix> =
        (0..3).map(|q| frame(q, 1)).chain((0..3).map(|q| frame(q, -1))).collect();
    if mode == SignatureMode::Alt {
        // Replace γ^5 by γ^1γ^2γ^3γ^4γ^6γ^5, which squares to +1 and still
        // anticommutes with the other five.
        let p = [0, 1, 2, 3, 5, 4].iter().fold(SparseMatrix::identity(SPINOR_DIM), |acc, &i| &acc * &gammas[i]);
        gammas[4] = p;
    }
    let half = ratio(1, 2);
    let mut generators = BTreeMap::new();
    for a in 1..=6 {
        for b in a + 1..=6 {
            generators.insert((a, b), (&gammas[a - 1] * &gammas[b - 1]).scale(&half));
        }
    }
    YangRep { mode, metric: mode.metric(), gammas, generators }
}

impl YangRep {
    pub fn dimension(&self) -> usize {
        SPINOR_DIM
    }

    pub fn g(&self, n: usize) -> i64 {
        check_index(n);
        self.metric[n - 1]
    }

    /// `γ^n`.
    pub fn gamma(&self, n: usize) -> &SparseMatrix {
        check_index(n);
        &self.gammas[n - 1]
    }

    /// `γ_n = g_{nn} γ^n`.
    pub fn gamma_lower(&self, n: usize) -> SparseMatrix {
        self.gamma(n).scale(&int(self.g(n)))
    }

    /// Product `γ^{n1} γ^{n2} ⋯` in the given order.
    pub fn gamma_product(&self, indices: &[usize]) -> SparseMatrix {
        indices.iter().fold(SparseMatrix::identity(SPINOR_DIM), |acc, &n| &acc * self.gamma(n))
    }

    /// `L^{n'n} = ½ γ^{n'} γ^n`, antisymmetric, zero on the diagonal.
    pub fn generator(&self, np: usize, n: usize) -> SparseMatrix {
        check_index(np);
        check_index(n);
        match lie::plane(np, n) {
            Some((1, key)) => self.generators[&key].clone(),
            Some((_, key)) => -&self.generators[&key],
            None => SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM),
        }
    }

    /// The 15 generators `L^{ab}`, `a < b`, in lexicographic order.
    pub fn generators(&self) -> impl Iterator<Item = (&(usize, usize), &SparseMatrix)> {
        self.generators.iter()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// JSON bundle of the generators keyed `L_{n'n}`, entries as exact strings.
    pub fn to_json(&self) -> Value {
        let mut bundle = serde_json::Map::new();
        for ((a, b), m) in &self.generators {
            let rows: Vec<Vec<String>> = m.to_dense().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            bundle.insert(format!("L_{{{a}{b}}}"), json!(rows));
        }
        json!({ "signature": self.mode.name(), "metric": self.metric, "generators": bundle })
    }
}

fn lorentz_indices() -> Vec<(usize, usize)> {
    (1..=4).flat_map(|a| (a + 1..=4).map(move |b| (a, b))).collect()
}

/// The anticommutation relations of the six gammas, all 105 commutator
/// relations `[L^{n'n}, L^{m'm}]` against the orthogonal bracket pattern, and
/// the Jacobi identity on random combinations.
pub fn structure_check(rep: &YangRep, seed: u64) -> Report {
    let mut report = Report::new("yang").param("signature", rep.mode.name()).param("seed", seed);
    for a in 1..=6 {
        for b in a..=6 {
            let ac = rep.gamma(a).anticommutator(rep.gamma(b));
            let expected = if a == b { int(2 * rep.g(a)) } else { Rational::zero() };
            report.push(Check::exact(
                "{γ^a, γ^b} = 2g^{ab}",
                format!("{{γ^{a}, γ^{b}}}"),
                expected.to_string(),
                ac.as_scalar() == Some(expected),
            ));
        }
    }
    let keys: Vec<(usize, usize)> = rep.generators.keys().copied().collect();
    let g: Vec<i64> = rep.metric.to_vec();
    let mut relations = 0;
    for (i, &(np, n)) in keys.iter().enumerate() {
        for &(mp, m) in &keys[i + 1..] {
            let lhs = rep.generator(np, n).commutator(&rep.generator(mp, m));
            let mut rhs = SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM);
            // orthogonal_bracket works with 0-based indices.
            for ((a, b), c) in lie::orthogonal_bracket(&g, np - 1, n - 1, mp - 1, m - 1) {
                rhs = &rhs + &rep.generator(a + 1, b + 1).scale(&int(c));
            }
            relations += 1;
            report.push(Check::exact(
                "[L, L] orthogonal pattern",
                format!("[L^{np}{n}, L^{mp}{m}]"),
                "g-pattern",
                lhs == rhs,
            ));
        }
    }
    report.set_param("relations", relations);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<&SparseMatrix> = rep.generators.values().collect();
    for t in 0..10 {
        let mut combo = || {
            gens.iter().fold(SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM), |acc, m| {
                &acc + &m.scale(&int(rng.gen_range(-3..=3)))
            })
        };
        let (x, y, z) = (combo(), combo(), combo());
        let jac = &(&x.commutator(&y).commutator(&z) + &y.commutator(&z).commutator(&x)) + &z.commutator(&x).commutator(&y);
        report.push(Check::exact("Jacobi", format!("random triple {t}"), "0", jac.is_zero()));
    }
    report
}

/// Killing form of the 15 generators in lexicographic order.
#[derive(Debug, Clone)]
pub struct KillingForm {
    pub labels: Vec<(usize, usize)>,
    pub matrix: linalg::DenseMatrix,
    pub determinant: Rational,
    pub inertia: (usize, usize, usize),
}

impl KillingForm {
    pub fn norm(&self, a: usize, b: usize) -> Rational {
        let i = self.labels.iter().position(|&p| p == (a.min(b), a.max(b))).expect("generator label");
        self.matrix[i][i].clone()
    }
}

pub fn killing_form(rep: &YangRep) -> Result<(KillingForm, Report)> {
    let labels: Vec<(usize, usize)> = rep.generators.keys().copied().collect();
    let basis: Vec<SparseMatrix> = rep.generators.values().cloned().collect();
    let algebra = LieAlgebra::from_basis(&basis, SparseMatrix::flatten, SparseMatrix::commutator)?;
    let matrix = algebra.killing_form();
    let (determinant, inertia) = lie::killing_summary(&matrix);
    let p = rep.metric.iter().filter(|&&s| s > 0).count();
    let expected = lie::orthogonal_killing_inertia(p, 6 - p);
    let form = KillingForm { labels, matrix, determinant, inertia };

    let mut report = Report::new("yang-killing")
        .param("signature", rep.mode.name())
        .param("inertia", vec![inertia.0, inertia.1, inertia.2]);
    report.push(Check::exact(
        "Killing form nondegenerate",
        format!("det = {}", form.determinant),
        "≠ 0",
        !form.determinant.is_zero(),
    ));
    report.push(Check::exact(
        "Killing signature",
        format!("({},{},{})", inertia.0, inertia.1, inertia.2),
        format!("({},{},0)", expected.0, expected.1),
        inertia == (expected.0, expected.1, 0),
    ));
    for &(a, b) in &form.labels {
        let k = form.norm(a, b);
        let compact = rep.g(a) * rep.g(b) > 0;
        let ok = if compact { k.is_negative() } else { k.is_positive() };
        report.push(Check::exact(
            "Killing norm sign",
            format!("K(L^{a}{b}, L^{a}{b}) = {k}"),
            if compact { "< 0 (compact)" } else { "> 0 (boost)" },
            ok,
        ));
    }
    Ok((form, report))
}

#[derive(Debug, Clone)]
pub struct ChiralSplit {
    /// `γ^⊤ = γ^6 γ^5 γ^4 γ^3 γ^2 γ^1`.
    pub top: SparseMatrix,
    pub plus_projector: SparseMatrix,
    pub minus_projector: SparseMatrix,
    /// Column bases of the ±1 eigenspaces.
    pub plus_basis: Vec<Vec<Rational>>,
    pub minus_basis: Vec<Vec<Rational>>,
}

fn column_basis(p: &SparseMatrix) -> Vec<Vec<Rational>> {
    let dense = p.to_dense();
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    for j in 0..p.cols() {
        let col: Vec<Rational> = dense.iter().map(|r| r[j].clone()).collect();
        let mut trial = chosen.clone();
        trial.push(col.clone());
        if linalg::rank(&trial) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

pub fn chiral_split(rep: &YangRep) -> Result<ChiralSplit> {
    let top = rep.gamma_product(&[6, 5, 4, 3, 2, 1]);
    let id = SparseMatrix::identity(SPINOR_DIM);
    if (&top * &top) != id {
        return Err(PlexusError::NoRealChiralSplit(rep.mode.name().to_string()));
    }
    let half = ratio(1, 2);
    let plus_projector = (&id + &top).scale(&half);
    let minus_projector = (&id - &top).scale(&half);
    let plus_basis = column_basis(&plus_projector);
    let minus_basis = column_basis(&minus_projector);
    Ok(ChiralSplit { top, plus_projector, minus_projector, plus_basis, minus_basis })
}

/// Properties of the chiral split: `(γ^⊤)² = 1`, 4 ⊕ 4, centrality,
/// projector algebra, and `γ^{4321} = ∓γ^{65}` on the two halves.
pub fn chiral_check(rep: &YangRep) -> Result<Report> {
    let split = chiral_split(rep)?;
    let id = SparseMatrix::identity(SPINOR_DIM);
    let (pp, pm) = (&split.plus_projector, &split.minus_projector);
    let mut report = Report::new("yang-chirality").param("signature", rep.mode.name());
    report.push(Check::exact("(γ^⊤)² = 1", "(γ^⊤)²", "1", &split.top * &split.top == id));
    report.push(Check::exact(
        "eigenspace dimensions",
        format!("{} + {}", split.plus_basis.len(), split.minus_basis.len()),
        "4 + 4",
        split.plus_basis.len() == 4 && split.minus_basis.len() == 4,
    ));
    report.push(Check::exact("P± idempotent", "P+², P-²", "P+, P-", &(pp * pp) == pp && &(pm * pm) == pm));
    report.push(Check::exact("P+ P- = 0", "P+ P-", "0", (pp * pm).is_zero()));
    report.push(Check::exact("P+ + P- = 1", "P+ + P-", "1", pp + pm == id));
    for ((a, b), l) in rep.generators() {
        report.push(Check::exact(
            "γ^⊤ central in the even subalgebra",
            format!("[γ^⊤, L^{a}{b}]"),
            "0",
            split.top.commutator(l).is_zero(),
        ));
        report.push(Check::exact(
            "P+ commutes with generators",
            format!("[P+, L^{a}{b}]"),
            "0",
            pp.commutator(l).is_zero(),
        ));
    }
    let g4321 = rep.gamma_product(&[4, 3, 2, 1]);
    let g65 = rep.gamma_product(&[6, 5]);
    report.push(Check::exact(
        "γ^{4321} = -γ^{65} on the +1 eigenspace",
        "(γ^{4321} + γ^{65}) P+",
        "0",
        (&(&g4321 + &g65) * pp).is_zero(),
    ));
    report.push(Check::exact(
        "γ^{4321} = +γ^{65} on the -1 eigenspace",
        "(γ^{4321} - γ^{65}) P-",
        "0",
        (&(&g4321 - &g65) * pm).is_zero(),
    ));
    Ok(report)
}

/// Single-cell position, momentum, quantized imaginary and Lorentz atoms.
#[derive(Debug, Clone)]
pub struct OrbitalAtoms {
    pub chrone: Rational,
    pub erge: Rational,
    pub h: Rational,
    /// `δx^m = 𝒳 γ^m γ^5`, `m = 1..4` (index 0 holds `m = 1`).
    pub dx: Vec<SparseMatrix>,
    /// `δp_m = ℰ γ_m γ_6`.
    pub dp: Vec<SparseMatrix>,
    /// `δQi = γ^6 γ^5`.
    pub dqi: SparseMatrix,
    /// `δL_{nm} = h L^{nm}` for `n < m`.
    pub dl: BTreeMap<(usize, usize), SparseMatrix>,
}

pub fn orbital_atoms(rep: &YangRep, chrone: &Rational, erge: &Rational, h: &Rational) -> Result<OrbitalAtoms> {
    if !chrone.is_positive() || !erge.is_positive() {
        return Err(PlexusError::InvalidArgument("chrone and erge must be positive".into()));
    }
    let dx = (1..=4).map(|m| rep.gamma_product(&[m, 5]).scale(chrone)).collect();
    let dp = (1..=4).map(|m| (&rep.gamma_lower(m) * &rep.gamma_lower(6)).scale(erge)).collect();
    let dqi = rep.gamma_product(&[6, 5]);
    let dl = rep.generators().map(|(k, l)| (*k, l.scale(h))).collect();
    Ok(OrbitalAtoms { chrone: chrone.clone(), erge: erge.clone(), h: h.clone(), dx, dp, dqi, dl })
}

/// `(δQi)² = -1`; `[δx^m, δp_n] = c δ^m_n δQi` with one coefficient `c`
/// (recorded); δQi commutes with the Lorentz atoms and with no position or
/// momentum atom.
pub fn atoms_check(rep: &YangRep, atoms: &OrbitalAtoms) -> Report {
    let id = SparseMatrix::identity(SPINOR_DIM);
    let mut report = Report::new("yang-atoms")
        .param("signature", rep.mode.name())
        .param("chrone", atoms.chrone.to_string())
        .param("erge", atoms.erge.to_string());
    report.push(Check::exact("(δQi)² = -1", "(δQi)²", "-1", &atoms.dqi * &atoms.dqi == -&id));

    let hbar = &atoms.chrone * &atoms.erge;
    let expected_c = int(2 * rep.g(6)) * &hbar;
    report.set_param("xp_coefficient", expected_c.to_string());
    for m in 0..4 {
        for n in 0..4 {
            let lhs = atoms.dx[m].commutator(&atoms.dp[n]);
            let rhs = if m == n { atoms.dqi.scale(&expected_c) } else { SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM) };
            report.push(Check::exact(
                "[δx^m, δp_n] = c δ^m_n δQi",
                format!("[δx^{}, δp_{}]", m + 1, n + 1),
                if m == n { format!("{expected_c} δQi") } else { "0".into() },
                lhs == rhs,
            ));
        }
    }
    for (a, b) in lorentz_indices() {
        report.push(Check::exact(
            "δQi commutes with Lorentz atoms",
            format!("[δQi, δL_{a}{b}]"),
            "0",
            atoms.dqi.commutator(&atoms.dl[&(a, b)]).is_zero(),
        ));
    }
    for m in 0..4 {
        report.push(Check::exact(
            "δQi does not commute with position",
            format!("[δQi, δx^{}]", m + 1),
            "≠ 0",
            !atoms.dqi.commutator(&atoms.dx[m]).is_zero(),
        ));
        report.push(Check::exact(
            "δQi does not commute with momentum",
            format!("[δQi, δp_{}]", m + 1),
            "≠ 0",
            !atoms.dqi.commutator(&atoms.dp[m]).is_zero(),
        ));
    }
    let lorentz: Vec<SparseMatrix> = lorentz_indices().iter().map(|&(a, b)| rep.generator(a, b)).collect();
    let closes = LieAlgebra::from_basis(&lorentz, SparseMatrix::flatten, SparseMatrix::commutator).is_ok();
    report.push(Check::exact("Lorentz subalgebra closes", "span{L^{μν}: μ,ν ≤ 4}", "closed", closes));
    report
}

/// One cell of the 6×6 Yang-space layout.
#[derive(Debug, Clone)]
pub struct LayoutEntry {
    pub label: String,
    pub operator: SparseMatrix,
}

/// The 6×6 antisymmetric array whose `(a, b)` entry is the so(3,3) element
/// at that position: Lorentz atoms in the 4×4 block, position atoms `δx/𝒳`
/// in column/row 5, momentum atoms `δp/ℰ` in column/row 6, and
/// `δL^{56}`, `δL^{65}` in the corner.
pub fn yang_matrix_layout(rep: &YangRep, atoms: &OrbitalAtoms) -> Vec<Vec<LayoutEntry>> {
    let zero = SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM);
    let x = |i: usize| atoms.dx[i - 1].scale(&atoms.chrone.recip());
    // δp^i = g^{ii} δp_i
    let p = |i: usize| atoms.dp[i - 1].scale(&(int(rep.g(i)) / &atoms.erge));
    let mut out = vec![vec![LayoutEntry { label: "0".into(), operator: zero.clone() }; 6]; 6];
    for a in 1..=6 {
        for b in 1..=6 {
            if a == b {
                continue;
            }
            let entry = match (a, b) {
                (5, 6) => LayoutEntry { label: "δL^56".into(), operator: rep.generator(5, 6).scale(&atoms.h) },
                (6, 5) => LayoutEntry { label: "δL^65".into(), operator: rep.generator(6, 5).scale(&atoms.h) },
                (a, 5) => LayoutEntry { label: format!("-δx^{a}/X"), operator: -&x(a) },
                (a, 6) => LayoutEntry { label: format!("-δp^{a}/E"), operator: -&p(a) },
                (5, b) => LayoutEntry { label: format!("δx^{b}/X"), operator: x(b) },
                (6, b) => LayoutEntry { label: format!("δp^{b}/E"), operator: p(b) },
                (a, b) => LayoutEntry { label: format!("δL^{a}{b}"), operator: rep.generator(a, b).scale(&atoms.h) },
            };
            out[a - 1][b - 1] = entry;
        }
    }
    out
}

/// Antisymmetry of the layout and, for each off-diagonal entry, that it is a
/// nonzero multiple of the generator `L^{ab}` at its position.
pub fn layout_check(rep: &YangRep, layout: &[Vec<LayoutEntry>]) -> Report {
    let mut report = Report::new("yang-layout").param("signature", rep.mode.name());
    for a in 0..6 {
        for b in 0..6 {
            let e = &layout[a][b].operator;
            let anti = *e == -&layout[b][a].operator;
            report.push(Check::exact("antisymmetric", format!("M[{}][{}]", a + 1, b + 1), "-M[b][a]", anti));
            if a == b {
                continue;
            }
            let l = rep.generator(a + 1, b + 1);
            let c = multiple_of(e, &l);
            let ok = c.as_ref().is_some_and(|c| !c.is_zero());
            report.push(Check::exact(
                "entry is a multiple of L^{ab}",
                format!("{} = c L^{}{}", layout[a][b].label, a + 1, b + 1),
                c.map_or("none".into(), |c| c.to_string()),
                ok,
            ));
        }
    }
    report
}

/// `Some(c)` with `a = c b` (b nonzero).
fn multiple_of(a: &SparseMatrix, b: &SparseMatrix) -> Option<Rational> {
    let fb = b.flatten();
    let (pos, val) = fb.first()?;
    let c = a.get(pos / b.cols(), pos % b.cols()) / val;
    (b.scale(&c) == *a).then_some(c)
}

/// Text rendering of the layout labels.
pub fn render_layout(layout: &[Vec<LayoutEntry>]) -> String {
    let width = layout.iter().flatten().map(|e| e.label.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for (i, row) in layout.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|e| format!("{:>width$}", e.label)).collect();
        let (left, right) = cells.split_at(4);
        out.push_str(&format!("{} | {}\n", left.join(" "), right.join(" ")));
        if i == 3 {
            out.push_str(&format!("{}\n", "-".repeat(6 * (width + 1) + 1)));
        }
    }
    out
}

/// The complex plane `span(q1, J q1)` of a complex structure `J`.
#[derive(Debug, Clone)]
pub struct InvariantPlane {
    pub basis: [Vec<Rational>; 2],
    /// Generators commuting with `J` (1-based index pairs).
    pub commuting: Vec<(usize, usize)>,
    pub report: Report,
}

fn apply_dense(m: &SparseMatrix, v: &[Rational]) -> Vec<Rational> {
    let sparse: Vec<(usize, Rational)> = v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    let mut out = vec![Rational::zero(); m.rows()];
    for (i, x) in m.apply(&sparse) {
        out[i] = x;
    }
    out
}

pub fn invariant_planes(rep: &YangRep, j: &SparseMatrix, q1: &[Rational]) -> Result<InvariantPlane> {
    let id = SparseMatrix::identity(j.rows());
    if j * j != -&id {
        return Err(PlexusError::NotAComplexStructure);
    }
    if q1.len() != j.cols() || q1.iter().all(Zero::is_zero) {
        return Err(PlexusError::InvalidArgument("q1 must be a nonzero spinor of matching dimension".into()));
    }
    let jq = apply_dense(j, q1);
    let plane = [q1.to_vec(), jq.clone()];
    let mut report = Report::new("invariant-plane").param("signature", rep.mode.name());
    report.push(Check::exact("plane is 2-dimensional", "rank(q1, J q1)", "2", linalg::rank(&plane.to_vec()) == 2));
    let jjq: Vec<Rational> = apply_dense(j, &jq);
    let neg_q: Vec<Rational> = q1.iter().map(|x| -x.clone()).collect();
    report.push(Check::exact("J-invariant", "J(J q1)", "-q1", jjq == neg_q));

    let commuting: Vec<(usize, usize)> =
        rep.generators().filter(|(_, l)| l.commutator(j).is_zero()).map(|(k, _)| *k).collect();
    report.set_param("commuting_generators", commuting.len());
    for &(a, b) in &commuting {
        let l = rep.generator(a, b);
        // The image plane span(L q1, L J q1) is again J-invariant.
        let lq = apply_dense(&l, q1);
        let ljq = apply_dense(&l, &jq);
        report.push(Check::exact(
            "commuting generator maps the plane to a J-plane",
            format!("J L^{a}{b} q1"),
            format!("L^{a}{b} J q1"),
            apply_dense(j, &lq) == ljq,
        ));
    }
    Ok(InvariantPlane { basis: plane, commuting, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_squares_follow_metric() {
        let rep = build_yang_rep(SignatureMode::CompactI);
        assert_eq!(rep.gamma(5).anticommutator(rep.gamma(5)).as_scalar(), Some(int(-2)));
        assert_eq!(rep.generator_count(), 15);
        let alt = build_yang_rep(SignatureMode::Alt);
        assert_eq!(alt.gamma(5).anticommutator(alt.gamma(5)).as_scalar(), Some(int(2)));
    }

    #[test]
    fn disjoint_generators_commute() {
        let rep = build_yang_rep(SignatureMode::CompactI);
        assert!(rep.generator(1, 2).commutator(&rep.generator(3, 4)).is_zero());
    }

    #[test]
    fn generator_entries_are_halves() {
        let rep = build_yang_rep(SignatureMode::CompactI);
        let l = rep.generator(1, 2);
        assert!(l.flatten().iter().all(|(_, x)| x.abs() == ratio(1, 2)));
    }

    #[test]
    fn alt_signature_has_no_real_split() {
        let rep = build_yang_rep(SignatureMode::Alt);
        assert!(matches!(chiral_split(&rep), Err(PlexusError::NoRealChiralSplit(_))));
    }

    #[test]
    fn non_complex_structure_rejected() {
        let rep = build_yang_rep(SignatureMode::CompactI);
        let j = rep.gamma_product(&[1, 4]);
        let q: Vec<Rational> = (0..8).map(|i| if i == 0 { int(1) } else { int(0) }).collect();
        assert!(matches!(invariant_planes(&rep, &j, &q), Err(PlexusError::NotAComplexStructure)));
    }
}
