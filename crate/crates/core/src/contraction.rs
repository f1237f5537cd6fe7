//! Cumulation of single-cell operators over N cells and the contraction of
//! the Yang algebra to the Heisenberg–Poincaré algebra.
//!
//! Small N use the exact tensor realization on `8^N` dimensions. Everything
//! that grows with N is computed in closed form over commuting copies: the
//! cumulant of a per-cell complex structure has a binomial spectrum.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{PlexusError, Result};
use crate::lie;
use crate::linalg::SpanSolver;
use crate::matrix::SparseMatrix;
use crate::report::{Check, Report};
use crate::scalar::{exact_sqrt, int, ratio, to_f64, Rational};
use crate::yang::{OrbitalAtoms, YangRep, SPINOR_DIM};

/// Largest cell count for the tensor realization (dimension 4096).
pub const MAX_TENSOR_CELLS: usize = 4;
/// Sweep points needed for a slope fit.
pub const MIN_FIT_POINTS: usize = 5;
pub const LIE_HOM_SAMPLES: usize = 50;

fn check_tensor(n: usize) -> Result<()> {
    if n == 0 {
        return Err(PlexusError::InvalidArgument("cell count must be at least 1".into()));
    }
    if n > MAX_TENSOR_CELLS {
        return Err(PlexusError::TooLarge { cells: n, max: MAX_TENSOR_CELLS });
    }
    Ok(())
}

/// `Σ_α x_α`: the sum over the N tensor slots of `1 ⊗ … ⊗ x ⊗ … ⊗ 1`.
pub fn cumulate_exact(x: &SparseMatrix, n: usize) -> Result<SparseMatrix> {
    check_tensor(n)?;
    let d = x.rows();
    let mut total = SparseMatrix::zeros(d.pow(n as u32), d.pow(n as u32));
    for slot in 0..n {
        let left = SparseMatrix::identity(d.pow(slot as u32));
        let right = SparseMatrix::identity(d.pow((n - slot - 1) as u32));
        total = &total + &left.kron(x).kron(&right);
    }
    Ok(total)
}

fn random_cell_matrix(rng: &mut ChaCha8Rng) -> SparseMatrix {
    let mut columns = vec![Vec::new(); SPINOR_DIM];
    for column in columns.iter_mut() {
        for i in 0..SPINOR_DIM {
            if rng.gen_bool(0.5) {
                column.push((i, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))));
            }
        }
    }
    SparseMatrix::from_columns(SPINOR_DIM, columns)
}

/// `[Σx, Σy] = Σ[x, y]` exactly on the N-cell tensor space.
pub fn lie_hom_check(x: &SparseMatrix, y: &SparseMatrix, n: usize) -> Result<Report> {
    let mut report = Report::new("lie-homomorphism").param("cells", n);
    push_lie_hom(&mut report, x, y, n, "x, y")?;
    Ok(report)
}

fn push_lie_hom(report: &mut Report, x: &SparseMatrix, y: &SparseMatrix, n: usize, label: &str) -> Result<()> {
    let lhs = cumulate_exact(x, n)?.commutator(&cumulate_exact(y, n)?);
    let rhs = cumulate_exact(&x.commutator(y), n)?;
    report.push(Check::exact("[Σx, Σy] = Σ[x, y]", format!("N = {n}: {label}"), "Σ[x, y]", lhs == rhs));
    Ok(())
}

/// [`LIE_HOM_SAMPLES`] random rational 8×8 pairs at each N, seeded.
pub fn lie_hom_suite(cells: &[usize], seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("lie-homomorphism").param("seed", seed).param("samples", LIE_HOM_SAMPLES);
    for &n in cells {
        for s in 0..LIE_HOM_SAMPLES {
            let x = random_cell_matrix(&mut rng);
            let y = random_cell_matrix(&mut rng);
            push_lie_hom(&mut report, &x, &y, n, &format!("random pair {s}"))?;
        }
    }
    Ok(report)
}

/// One flip-count sector of the cumulant `ℚi = (1/N) Σ δQi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedSector {
    pub k: u64,
    /// `|N − 2k| / N`.
    pub magnitude: Rational,
    /// `binomial(N, k)`, in units of the per-cell plane degeneracy.
    pub multiplicity: BigUint,
}

impl PolarizedSector {
    /// `ℚi² + 1` on this sector: `1 − ((N − 2k)/N)²`.
    pub fn residual(&self) -> Rational {
        Rational::one() - &self.magnitude * &self.magnitude
    }
}

/// Closed-form spectrum of `ℚi` over N commuting cells: each cell
/// contributes `±i`, so k flips give `i(N − 2k)/N`.
pub fn qi_spectrum(n: u64) -> Vec<PolarizedSector> {
    let mut multiplicity = BigUint::one();
    (0..=n)
        .map(|k| {
            let sector = PolarizedSector {
                k,
                magnitude: sector_magnitude(n, k),
                multiplicity: multiplicity.clone(),
            };
            multiplicity = &multiplicity * BigUint::from(n - k) / BigUint::from(k + 1);
            sector
        })
        .collect()
}

fn sector_magnitude(n: u64, k: u64) -> Rational {
    Rational::new((n as i64 - 2 * k as i64).abs().into(), (n as i64).into())
}

/// Eigen-magnitudes of `Σ(δQi)/N` on the exact tensor realization with their
/// real dimensions, keyed by magnitude.
///
/// `T = −(Σ δQi)²` is symmetric with integer eigenvalues; the multiplicities
/// over the candidates `j², j = 0..=N` come from the power traces
/// `tr T^p`, and the minimal polynomial is then checked on every basis vector.
pub fn tensor_qi_spectrum(rep: &YangRep, n: usize) -> Result<BTreeMap<Rational, BigUint>> {
    let dqi = rep.gamma_product(&[6, 5]);
    let m = cumulate_exact(&dqi, n)?;
    let t = -&(&m * &m);
    let dim = t.rows();
    let candidates: Vec<Rational> = (0..=n as i64).map(|j| int(j * j)).collect();
    let powers = candidates.len();

    let mut traces = vec![Rational::zero(); powers];
    for i in 0..dim {
        let mut v = vec![(i, Rational::one())];
        for trace in traces.iter_mut() {
            if let Some((_, x)) = v.iter().find(|(r, _)| *r == i) {
                *trace += x;
            }
            v = t.apply(&v);
        }
    }
    let columns: Vec<Vec<(usize, Rational)>> = candidates
        .iter()
        .map(|c| {
            let mut power = Rational::one();
            let mut col = Vec::new();
            for p in 0..powers {
                if !power.is_zero() {
                    col.push((p, power.clone()));
                }
                power *= c;
            }
            col
        })
        .collect();
    let target: Vec<(usize, Rational)> =
        traces.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    let mults = SpanSolver::new(&columns)
        .coordinates(&target)
        .ok_or_else(|| PlexusError::InvalidArgument("power traces inconsistent with integer spectrum".into()))?;

    let mut present = Vec::new();
    let mut spectrum = BTreeMap::new();
    for (c, mult) in candidates.iter().zip(&mults) {
        if mult.is_zero() {
            continue;
        }
        if mult.is_negative() || !mult.is_integer() {
            return Err(PlexusError::InvalidArgument(format!("non-integral multiplicity {mult}")));
        }
        present.push(c.clone());
        let magnitude = exact_sqrt(c).expect("candidate is a square") / int(n as i64);
        let count = mult.to_integer().to_biguint().expect("nonnegative");
        spectrum.insert(magnitude, count);
    }
    for i in 0..dim {
        let mut v = vec![(i, Rational::one())];
        for c in &present {
            let tv = t.apply(&v);
            v = subtract_scaled(&tv, &v, c);
        }
        if !v.is_empty() {
            return Err(PlexusError::InvalidArgument("minimal polynomial does not annihilate".into()));
        }
    }
    Ok(spectrum)
}

fn subtract_scaled(a: &[(usize, Rational)], b: &[(usize, Rational)], c: &Rational) -> Vec<(usize, Rational)> {
    let mut acc: BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (i, x) in b {
        *acc.entry(*i).or_insert_with(Rational::zero) -= c * x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// The combinatorial spectrum grouped by magnitude, in real dimensions
/// (each sector carries `4^N`: one 4-dimensional `±i` eigenspace per cell).
pub fn grouped_spectrum(n: u64) -> BTreeMap<Rational, BigUint> {
    let degeneracy = BigUint::from(4u32).pow(n as u32);
    let mut out: BTreeMap<Rational, BigUint> = BTreeMap::new();
    for s in qi_spectrum(n) {
        *out.entry(s.magnitude).or_default() += &s.multiplicity * &degeneracy;
    }
    out
}

/// Oracle equivalence of [`qi_spectrum`] with [`tensor_qi_spectrum`].
pub fn spectrum_oracle_check(rep: &YangRep, cells: &[usize]) -> Result<Report> {
    let mut report = Report::new("qi-spectrum-oracle");
    for &n in cells {
        let tensor = tensor_qi_spectrum(rep, n)?;
        let closed = grouped_spectrum(n as u64);
        let show = |m: &BTreeMap<Rational, BigUint>| {
            m.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
        };
        report.push(Check::exact(
            "combinatorial spectrum = tensor eigenstructure",
            format!("N = {n}: {}", show(&tensor)),
            show(&closed),
            tensor == closed,
        ));
    }
    Ok(report)
}

/// Number of distinct magnitude levels in the band `1 − N^{−1/2} < |ℚi| ≤ 1`:
/// the flip counts `k ≤ N/2` with `4k² < N`.
pub fn band_levels(n: u64) -> u64 {
    (0..=n / 2).take_while(|k| 4 * k * k < n).count() as u64
}

/// `⌈√N / 2⌉`.
pub fn half_root_ceiling(n: u64) -> u64 {
    (0..=n).find(|k| 4 * k * k >= n).unwrap_or(n)
}

pub fn band_census(n: u64) -> Result<Report> {
    if n < 4 {
        return Err(PlexusError::InvalidArgument(format!("band census needs N ≥ 4, got {n}")));
    }
    let levels = band_levels(n);
    let expected = half_root_ceiling(n);
    let width = (n as f64).powf(-0.5);
    let mut report = Report::new("band-census")
        .param("cells", n)
        .param("band_levels", levels)
        .param("band_width", width);
    report.push(Check::exact(
        "band level count = ⌈√N/2⌉ ± 1",
        levels.to_string(),
        expected.to_string(),
        levels.abs_diff(expected) <= 1,
    ));
    // Every counted level lies in the band; the next one does not.
    let floor = 1.0 - width;
    let inside = (0..levels).all(|k| to_f64(&sector_magnitude(n, k)) > floor);
    let outside = to_f64(&sector_magnitude(n, levels)) <= floor + 1e-15;
    report.push(Check::exact("band edge", format!("levels 0..{levels}"), format!("|ℚi| > {floor}"), inside && outside));
    Ok(report)
}

/// Which flip sectors count as polarized in the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SectorPolicy {
    /// `k ≤ ⌈√N/2⌉`.
    #[default]
    HalfRootCeiling,
    /// Only the levels strictly inside the band, `4k² < N`.
    StrictBand,
}

impl SectorPolicy {
    fn max_k(self, n: u64) -> u64 {
        match self {
            SectorPolicy::HalfRootCeiling => half_root_ceiling(n),
            SectorPolicy::StrictBand => band_levels(n).saturating_sub(1),
        }
    }
}

/// One row of the sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "W")]
    pub w: f64,
    pub r1_max_band: f64,
    pub r2: f64,
    pub band_levels: u64,
    pub band_width: f64,
}

/// Least-squares line through `(log N, log r)`.
#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub quantity: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub fits: Vec<Fit>,
}

pub fn fit_log_log(quantity: &str, xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() < MIN_FIT_POINTS {
        return Err(PlexusError::TooFewPoints { got: xs.len(), need: MIN_FIT_POINTS });
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(Fit { quantity: quantity.into(), slope, intercept: my - slope * mx, r_squared })
}

/// Worst-case `ℚi² + 1` residual over the polarized sectors, exact.
pub fn band_residual(n: u64, policy: SectorPolicy) -> Rational {
    let max_k = policy.max_k(n).min(n / 2);
    (0..=max_k).map(|k| Rational::one() - sector_magnitude(n, k).pow(2)).max().unwrap_or_else(Rational::zero)
}

/// Contraction sweep: `r₁(N)` is the band residual of `ℚi² = −1`, `r₂(N)` the
/// power constant `𝒲 = ℰ/(N𝒳)` weighting the `[p, p]` anomaly. Both are
/// fitted in log-log form.
pub fn contraction_sweep(ns: &[u64], policy: SectorPolicy, chrone: &Rational, erge: &Rational) -> Result<Sweep> {
    if ns.is_empty() {
        return Err(PlexusError::EmptySweep);
    }
    if let Some(&bad) = ns.iter().find(|&&n| n < 4) {
        return Err(PlexusError::InvalidArgument(format!("sweep points must be ≥ 4, got {bad}")));
    }
    let points: Vec<SweepPoint> = ns
        .iter()
        .map(|&n| {
            let w = erge / (chrone * int(n as i64));
            SweepPoint {
                n,
                w: to_f64(&w),
                r1_max_band: to_f64(&band_residual(n, policy)),
                r2: to_f64(&w),
                band_levels: band_levels(n),
                band_width: (n as f64).powf(-0.5),
            }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let mut fits = Vec::new();
    if points.len() >= MIN_FIT_POINTS {
        fits.push(fit_log_log("r1", &xs, &points.iter().map(|p| p.r1_max_band).collect::<Vec<_>>())?);
        fits.push(fit_log_log("r2", &xs, &points.iter().map(|p| p.r2).collect::<Vec<_>>())?);
    }
    Ok(Sweep { points, fits })
}

impl Sweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,W,r1_max_band,r2,band_levels,band_width\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{:e},{:e},{:e},{},{:e}", p.n, p.w, p.r1_max_band, p.r2, p.band_levels, p.band_width);
        }
        out
    }

    pub fn fit(&self, quantity: &str) -> Option<&Fit> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }

    /// Slope and band checks: r₁ slope `−0.5 ± tolerance`, r₂ slope `−1`
    /// within `1e−9`, band counts within ±1 of `⌈√N/2⌉`.
    pub fn report(&self, tolerance: f64) -> Report {
        let mut report = Report::new("contraction-sweep")
            .param("points", self.points.len())
            .param("slope_tolerance", tolerance);
        if let Some(f) = self.fit("r1") {
            report.push(Check::numeric("slope of r₁ = -1/2", format!("{:.6}", f.slope), "-0.5", (f.slope + 0.5).abs(), tolerance));
        }
        if let Some(f) = self.fit("r2") {
            report.push(Check::numeric("slope of r₂ = -1", format!("{:.12}", f.slope), "-1", (f.slope + 1.0).abs(), 1e-9));
        }
        for p in &self.points {
            let expected = half_root_ceiling(p.n);
            report.push(Check::exact(
                "band level count = ⌈√N/2⌉ ± 1",
                format!("N = {}: {}", p.n, p.band_levels),
                expected.to_string(),
                p.band_levels.abs_diff(expected) <= 1,
            ));
        }
        report
    }

    pub fn fits_json(&self) -> Value {
        json!(self.fits)
    }
}

fn atom_l(atoms: &OrbitalAtoms, a: usize, b: usize) -> SparseMatrix {
    match lie::plane(a, b) {
        Some((1, key)) => atoms.dl[&key].clone(),
        Some((_, key)) => -&atoms.dl[&key],
        None => SparseMatrix::zeros(SPINOR_DIM, SPINOR_DIM),
    }
}

/// Operator norm of a cell matrix `A` with `AᵀA = c² 1` (true of every
/// product of gammas, up to scale).
fn isometric_norm(a: &SparseMatrix) -> Option<Rational> {
    exact_sqrt(&(&a.transpose() * a).as_scalar()?)
}

/// Exact coefficient `κ` with `lhs = κ · rhs`, if any.
fn coefficient(lhs: &SparseMatrix, rhs: &SparseMatrix) -> Option<Rational> {
    if rhs.is_zero() {
        return lhs.is_zero().then(Rational::zero);
    }
    let (row, col) = (0..rhs.cols()).find_map(|j| rhs.column(j).first().map(|(i, _)| (*i, j)))?;
    let k = lhs.get(row, col) / rhs.get(row, col);
    (lhs == &rhs.scale(&k)).then_some(k)
}

/// Cell identities and the norm bounds of the macroscopic commutators.
#[derive(Debug, Clone)]
pub struct ScalingLedger {
    pub cells: u64,
    pub hbar: Rational,
    /// `𝒲 = ℰ / (N𝒳)`.
    pub w: Rational,
    /// `[δL^{μ5}, δL^{ν5}] = κ δL^{μν}`.
    pub kappa_xx: Rational,
    /// `[δL^{μ5}, δL^{ν6}] = κ g_{μν} δL^{65}`.
    pub kappa_xp: Rational,
    /// `[δL^{μ6}, δL^{ν6}] = κ δL^{μν}`.
    pub kappa_pp: Rational,
    /// Common cell norm `‖δL^{ab}‖`.
    pub cell_norm: Rational,
    pub bound_xx: Rational,
    pub bound_xp: Rational,
    pub bound_pp: Rational,
    pub report: Report,
}

impl ScalingLedger {
    /// `(bound_xx / bound_xp, bound_pp / bound_xp)`, to compare with `(1/𝒲, 𝒲)`.
    pub fn ratios(&self) -> (Rational, Rational) {
        (&self.bound_xx / &self.bound_xp, &self.bound_pp / &self.bound_xp)
    }
}

/// With `X^μ = 𝒳 ΣδL^{μ5}`, `P_μ = (ℰ/N) ΣδL^{μ6}` and `ℚi = (1/N) ΣδL^{65}`,
/// derives the cell identities from the Yang brackets, lifts them with Σ,
/// and bounds `‖[X,X]‖`, `‖[X,P]‖`, `‖[P,P]‖` by N times the cell norm.
pub fn commutator_ledger(rep: &YangRep, atoms: &OrbitalAtoms, n: u64) -> Result<ScalingLedger> {
    if n == 0 {
        return Err(PlexusError::InvalidArgument("cell count must be at least 1".into()));
    }
    let big_n = int(n as i64);
    let hbar = &atoms.chrone * &atoms.erge;
    let w = &atoms.erge / (&atoms.chrone * &big_n);
    let mut report = Report::new("scaling-ledger")
        .param("cells", n)
        .param("chrone", atoms.chrone.to_string())
        .param("erge", atoms.erge.to_string());

    let mut uniform = |name: &str, pairs: Vec<(SparseMatrix, SparseMatrix, String)>| -> Result<Rational> {
        let mut kappa: Option<Rational> = None;
        for (lhs, rhs, label) in pairs {
            let c = coefficient(&lhs, &rhs);
            let ok = match (&c, &kappa) {
                (Some(c), Some(k)) => c == k,
                (Some(c), None) => {
                    kappa = Some(c.clone());
                    true
                }
                _ => false,
            };
            report.push(Check::exact(name, label, "κ · rhs", ok && c.is_some()));
        }
        kappa.ok_or_else(|| PlexusError::InvalidArgument(format!("{name}: no uniform coefficient")))
    };

    let mut xx = Vec::new();
    let mut pp = Vec::new();
    let mut xp = Vec::new();
    for mu in 1..=4 {
        for nu in 1..=4 {
            if mu != nu {
                xx.push((
                    atom_l(atoms, mu, 5).commutator(&atom_l(atoms, nu, 5)),
                    atom_l(atoms, mu, nu),
                    format!("[δL^{mu}5, δL^{nu}5] = κ δL^{mu}{nu}"),
                ));
                pp.push((
                    atom_l(atoms, mu, 6).commutator(&atom_l(atoms, nu, 6)),
                    atom_l(atoms, mu, nu),
                    format!("[δL^{mu}6, δL^{nu}6] = κ δL^{mu}{nu}"),
                ));
            } else {
                xp.push((
                    atom_l(atoms, mu, 5).commutator(&atom_l(atoms, nu, 6)),
                    atom_l(atoms, 6, 5).scale(&int(rep.g(mu))),
                    format!("[δL^{mu}5, δL^{nu}6] = κ g_{mu}{nu} δL^65"),
                ));
            }
        }
    }
    let kappa_xx = uniform("[x, x] cell identity", xx)?;
    let kappa_pp = uniform("[p, p] cell identity", pp)?;
    let kappa_xp = uniform("[x, p] cell identity", xp)?;
    for mu in 1..=4 {
        for nu in 1..=4 {
            if mu != nu {
                let c = atom_l(atoms, mu, 5).commutator(&atom_l(atoms, nu, 6));
                report.push(Check::exact("[x, p] off-diagonal", format!("[δL^{mu}5, δL^{nu}6]"), "0", c.is_zero()));
            }
        }
    }

    let mut norms = Vec::new();
    for a in 1..=6 {
        for b in a + 1..=6 {
            norms.push(isometric_norm(&atom_l(atoms, a, b)));
        }
    }
    let cell_norm = norms[0].clone().ok_or_else(|| PlexusError::InvalidArgument("cell norm is not exact".into()))?;
    report.push(Check::exact(
        "all cell generators share one norm",
        "‖δL^{ab}‖",
        cell_norm.to_string(),
        norms.iter().all(|x| x.as_ref() == Some(&cell_norm)),
    ));

    // ‖Σ y‖ ≤ N ‖y‖ for every cell operator y.
    let x2 = &atoms.chrone * &atoms.chrone;
    let p_scale = &atoms.erge / &big_n;
    let bound_xx = &x2 * kappa_xx.abs() * &big_n * &cell_norm;
    let bound_xp = &atoms.chrone * &p_scale * kappa_xp.abs() * &big_n * &cell_norm;
    let bound_pp = &p_scale * &p_scale * kappa_pp.abs() * &big_n * &cell_norm;
    let scale = &bound_xp / &hbar;
    report.push(Check::exact("‖[x,x]‖ bound = c ħ/𝒲", bound_xx.to_string(), (&scale * &hbar / &w).to_string(), bound_xx == &scale * &hbar / &w));
    report.push(Check::exact("‖[p,p]‖ bound = c ħ𝒲", bound_pp.to_string(), (&scale * &hbar * &w).to_string(), bound_pp == &scale * &hbar * &w));
    report.set_param("W", w.to_string());
    report.set_param("bound_constant", scale.to_string());

    Ok(ScalingLedger {
        cells: n,
        hbar,
        w,
        kappa_xx,
        kappa_xp,
        kappa_pp,
        cell_norm,
        bound_xx,
        bound_xp,
        bound_pp,
        report,
    })
}

/// How a cumulant system realizes its N cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    Tensor,
    Combinatorial,
}

/// N replicas of one Yang cell with its atoms.
#[derive(Debug, Clone)]
pub struct CumulantSystem {
    pub rep: YangRep,
    pub atoms: OrbitalAtoms,
    pub cells: usize,
    pub realization: Realization,
}

impl CumulantSystem {
    pub fn new(rep: YangRep, atoms: OrbitalAtoms, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(PlexusError::InvalidArgument("cell count must be at least 1".into()));
        }
        let realization = if cells <= MAX_TENSOR_CELLS { Realization::Tensor } else { Realization::Combinatorial };
        Ok(CumulantSystem { rep, atoms, cells, realization })
    }

    pub fn cumulate(&self, x: &SparseMatrix) -> Result<SparseMatrix> {
        cumulate_exact(x, self.cells)
    }

    fn big_n(&self) -> Rational {
        int(self.cells as i64)
    }

    /// `L^{ab} = Σ δL^{ab}`.
    pub fn lorentz(&self, a: usize, b: usize) -> Result<SparseMatrix> {
        self.cumulate(&atom_l(&self.atoms, a, b))
    }

    /// `X^μ = 𝒳 Σ δL^{μ5}`.
    pub fn position(&self, mu: usize) -> Result<SparseMatrix> {
        Ok(self.lorentz(mu, 5)?.scale(&self.atoms.chrone))
    }

    /// `P_μ = (ℰ/N) Σ δL^{μ6}`.
    pub fn momentum(&self, mu: usize) -> Result<SparseMatrix> {
        Ok(self.lorentz(mu, 6)?.scale(&(&self.atoms.erge / self.big_n())))
    }

    /// `ℚi = (1/N) Σ δL^{65}`.
    pub fn qi(&self) -> Result<SparseMatrix> {
        Ok(self.lorentz(6, 5)?.scale(&(Rational::one() / self.big_n())))
    }

    /// `(1/N) Σ δQi`, the normalization used by the spectrum.
    pub fn spectral_qi(&self) -> Result<SparseMatrix> {
        Ok(self.cumulate(&self.atoms.dqi)?.scale(&(Rational::one() / self.big_n())))
    }
}

/// The relations that need no 1/N rescaling, on the tensor realization:
/// Lorentz brackets, Lorentz action on position and momentum, Lorentz
/// invariance of ℚi, and the exact forms of `[X,X]`, `[X,P]`, `[P,P]`.
pub fn lorentz_sector_check(system: &CumulantSystem) -> Result<Report> {
    let rep = &system.rep;
    let atoms = &system.atoms;
    let g: Vec<i64> = rep.metric.to_vec();
    let n = system.cells;
    let hbar = &atoms.chrone * &atoms.erge;
    let metric = |a: usize, b: usize| if a == b { rep.g(a) } else { 0 };
    let mut report = Report::new("lorentz-sector").param("cells", n).param("signature", rep.mode.name());

    let pairs: Vec<(usize, usize)> = (1..=4).flat_map(|a| (a + 1..=4).map(move |b| (a, b))).collect();
    let l: BTreeMap<(usize, usize), SparseMatrix> =
        pairs.iter().map(|&(a, b)| Ok(((a, b), system.lorentz(a, b)?))).collect::<Result<_>>()?;
    let lor = |a: usize, b: usize| match lie::plane(a, b) {
        Some((1, key)) => l[&key].clone(),
        Some((_, key)) => -&l[&key],
        None => SparseMatrix::zeros(l[&(1, 2)].rows(), l[&(1, 2)].cols()),
    };
    let x: Vec<SparseMatrix> = (1..=4).map(|m| system.position(m)).collect::<Result<_>>()?;
    let p: Vec<SparseMatrix> = (1..=4).map(|m| system.momentum(m)).collect::<Result<_>>()?;
    let qi = system.qi()?;
    let dim = qi.rows();
    let zero = SparseMatrix::zeros(dim, dim);

    for (i, &(np, nn)) in pairs.iter().enumerate() {
        for &(mp, m) in &pairs[i + 1..] {
            let lhs = lor(np, nn).commutator(&lor(mp, m));
            let rhs = lie::orthogonal_bracket(&g, np - 1, nn - 1, mp - 1, m - 1)
                .into_iter()
                .fold(zero.clone(), |acc, ((a, b), c)| &acc + &lor(a + 1, b + 1).scale(&int(c)));
            report.push(Check::exact("[L, L] orthogonal pattern", format!("[L^{np}{nn}, L^{mp}{m}]"), "g-pattern", lhs == rhs));
        }
    }
    for &(nu, mup) in &pairs {
        for mu in 1..=4 {
            for (name, v) in [("x", &x), ("p", &p)] {
                let lhs = lor(nu, mup).commutator(&v[mu - 1]);
                let rhs = &v[nu - 1].scale(&int(metric(mup, mu))) - &v[mup - 1].scale(&int(metric(nu, mu)));
                report.push(Check::exact(
                    format!("[L^{{νμ'}}, {name}^μ] = g^{{μ'μ}} {name}^ν - g^{{νμ}} {name}^{{μ'}}"),
                    format!("[L^{nu}{mup}, {name}^{mu}]"),
                    "g-pattern",
                    lhs == rhs,
                ));
            }
        }
        report.push(Check::exact("[L, ℚi] = 0", format!("[L^{nu}{mup}, ℚi]"), "0", lor(nu, mup).commutator(&qi).is_zero()));
    }
    let x2 = &atoms.chrone * &atoms.chrone;
    let e2n = &atoms.erge * &atoms.erge / int((n * n) as i64);
    for mu in 1..=4 {
        for nu in 1..=4 {
            let xx = x[mu - 1].commutator(&x[nu - 1]);
            let expected = lor(mu, nu).scale(&(&x2 * int(-rep.g(5))));
            report.push(Check::exact("[X^μ, X^ν] = -g_55 𝒳² L^{μν}", format!("[X^{mu}, X^{nu}]"), "exact", xx == expected));
            let pp = p[mu - 1].commutator(&p[nu - 1]);
            let expected = lor(mu, nu).scale(&(&e2n * int(-rep.g(6))));
            report.push(Check::exact("[P_μ, P_ν] = -g_66 (ℰ/N)² L^{μν}", format!("[P_{mu}, P_{nu}]"), "exact", pp == expected));
            let xp = x[mu - 1].commutator(&p[nu - 1]);
            let expected = qi.scale(&(&hbar * int(metric(mu, nu))));
            report.push(Check::exact("[X^μ, P_ν] = ħ g_{μν} ℚi", format!("[X^{mu}, P_{nu}]"), "exact", xp == expected));
        }
    }
    Ok(report)
}

/// Norms of `[ℚi, X^1]` and `ℚi X^1` on the fully polarized sector, where
/// `|ℚi| = 1` (ℚi the spectral normalization `(1/N) Σ δQi`).
#[derive(Debug, Clone, Serialize)]
pub struct CentralityPoint {
    pub cells: u64,
    pub commutator_norm: f64,
    pub product_norm: f64,
    /// `‖X^1 P‖` with `P` the polarized projector.
    pub position_norm: f64,
    /// `tensor` or `closed-form`.
    pub source: &'static str,
}

impl CentralityPoint {
    pub fn ratio(&self) -> f64 {
        self.commutator_norm / self.product_norm
    }
}

fn spectral_norm(m: &SparseMatrix) -> f64 {
    m.to_f64().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Projector onto the `k = 0` sectors, where `−(Σ δQi)² = N²`.
fn polarized_projector(m: &SparseMatrix, n: usize) -> SparseMatrix {
    let dim = m.rows();
    let t = -&(m * m);
    let top = int((n * n) as i64);
    (1..=n / 2).fold(SparseMatrix::identity(dim), |acc, k| {
        let level = int(((n - 2 * k) * (n - 2 * k)) as i64);
        let factor = (&t - &SparseMatrix::scalar(dim, level.clone())).scale(&(Rational::one() / (&top - &level)));
        &acc * &factor
    })
}

/// A position atom flips one cell out of the polarized sector into `k = 1`,
/// where `ℚi = i(N − 2)/N`; so on polarized states
/// `‖[ℚi, X]P‖ = (2/N)‖XP‖` and `‖ℚi X P‖ = (|N − 2|/N)‖XP‖` with
/// `‖XP‖ = √N · 𝒳‖δL^{15}‖`. The commutator-to-product ratio is `2/|N − 2|`.
///
/// `tensor_cells` are evaluated on the tensor realization (binary64 singular
/// values) and compared with the closed form; `limit_cells` use the closed
/// form only and must show the ratio falling like 1/N. Two cells are
/// rejected for the tensor comparison: there the flips out of the `+i` and
/// `−i` polarized halves land in the same sector and interfere.
pub fn centrality_check(
    rep: &YangRep,
    atoms: &OrbitalAtoms,
    tensor_cells: &[usize],
    limit_cells: &[u64],
    tolerance: f64,
) -> Result<(Vec<CentralityPoint>, Report)> {
    let cell = isometric_norm(&atom_l(atoms, 1, 5))
        .ok_or_else(|| PlexusError::InvalidArgument("cell norm is not exact".into()))?;
    let cell = to_f64(&(&cell * &atoms.chrone));
    let closed = |n: u64| {
        let nf = n as f64;
        let position_norm = nf.sqrt() * cell;
        CentralityPoint {
            cells: n,
            commutator_norm: 2.0 / nf * position_norm,
            product_norm: (nf - 2.0).abs() / nf * position_norm,
            position_norm,
            source: "closed-form",
        }
    };
    let mut report = Report::new("qi-centrality").param("tolerance", tolerance);
    let mut points = Vec::new();
    for &n in tensor_cells {
        if n == 2 {
            return Err(PlexusError::InvalidArgument("centrality tensor check needs N ≠ 2".into()));
        }
        let system = CumulantSystem::new(rep.clone(), atoms.clone(), n)?;
        check_tensor(n)?;
        let m = system.cumulate(&atoms.dqi)?;
        let proj = polarized_projector(&m, n);
        let qi = m.scale(&(Rational::one() / int(n as i64)));
        let xp = &system.position(1)? * &proj;
        let point = CentralityPoint {
            cells: n as u64,
            commutator_norm: spectral_norm(&(&qi.commutator(&system.position(1)?) * &proj)),
            product_norm: spectral_norm(&(&qi * &xp)),
            position_norm: spectral_norm(&xp),
            source: "tensor",
        };
        let expected = closed(n as u64);
        for (name, got, want) in [
            ("‖X P‖ = √N 𝒳‖δL‖", point.position_norm, expected.position_norm),
            ("‖[ℚi, X] P‖ = (2/N)‖X P‖", point.commutator_norm, expected.commutator_norm),
            ("‖ℚi X P‖ = (|N-2|/N)‖X P‖", point.product_norm, expected.product_norm),
        ] {
            report.push(Check::numeric(name, format!("N = {n}: {got:.12}"), format!("{want:.12}"), (got - want).abs(), tolerance));
        }
        points.push(point);
    }
    let limit: Vec<CentralityPoint> = limit_cells.iter().map(|&n| closed(n)).collect();
    for pair in limit.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        report.push(Check::exact(
            "commutator/product ratio decreases",
            format!("N = {} → {}: {:.6} → {:.6}", a.cells, b.cells, a.ratio(), b.ratio()),
            "decreasing",
            b.ratio() < a.ratio(),
        ));
    }
    if let Some(last) = limit.last() {
        let scaled = last.ratio() * last.cells as f64;
        report.push(Check::numeric(
            "N · ratio → 2",
            format!("N = {}: {scaled:.6}", last.cells),
            "2",
            (scaled - 2.0).abs(),
            8.0 / last.cells as f64,
        ));
    }
    points.extend(limit);
    Ok((points, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::yang::{build_yang_rep, SignatureMode};

    #[test]
    fn cumulating_identity_counts_cells() {
        let id = SparseMatrix::identity(SPINOR_DIM);
        let sum = cumulate_exact(&id, 3).unwrap();
        assert_eq!(sum, SparseMatrix::scalar(512, int(3)));
    }

    #[test]
    fn tensor_limit() {
        let id = SparseMatrix::identity(2);
        assert!(matches!(cumulate_exact(&id, 5), Err(PlexusError::TooLarge { cells: 5, max: 4 })));
    }

    #[test]
    fn spectrum_small() {
        let s = qi_spectrum(4);
        let mags: Vec<Rational> = s.iter().map(|x| x.magnitude.clone()).collect();
        assert_eq!(mags[..3], [int(1), ratio(1, 2), int(0)]);
        assert_eq!(s[2].multiplicity, BigUint::from(6u32));
        assert_eq!(qi_spectrum(1).len(), 2);
        assert!(s[0].residual().is_zero());
    }

    #[test]
    fn band_counts() {
        assert_eq!(band_levels(4), 1);
        assert_eq!(band_levels(100), 5);
        assert_eq!(band_levels(10_000), 50);
        assert_eq!(half_root_ceiling(100), 5);
        assert_eq!(half_root_ceiling(16), 2);
    }

    #[test]
    fn two_cell_spectrum() {
        let rep = build_yang_rep(SignatureMode::CompactI);
        let s = tensor_qi_spectrum(&rep, 2).unwrap();
        let keys: Vec<Rational> = s.keys().cloned().collect();
        assert_eq!(keys, vec![int(0), int(1)]);
    }
}
