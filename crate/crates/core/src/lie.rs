//! Lie algebras given by a spanning set inside some associative algebra:
//! structure constants, Killing form, and the orthogonal-algebra bracket
//! pattern used to check so(p, q) closure.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{PlexusError, Result};
use crate::linalg::{self, DenseMatrix, SpanSolver};
use crate::scalar::Rational;

/// Coefficients over a fixed basis, sparse.
pub type Coordinates = Vec<(usize, Rational)>;

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    /// `structure[i][j]` holds the coordinates of `[b_i, b_j]`.
    structure: Vec<Vec<Coordinates>>,
}

impl LieAlgebra {
    /// Computes structure constants of the span of `basis`.
    ///
    /// `flatten` maps an element to sparse coordinates in some ambient
    /// vector space; `bracket` is the commutator. Fails if the basis is
    /// linearly dependent or not closed under the bracket.
    pub fn from_basis<T>(
        basis: &[T],
        flatten: impl Fn(&T) -> Coordinates,
        bracket: impl Fn(&T, &T) -> T,
    ) -> Result<Self> {
        let flat: Vec<Coordinates> = basis.iter().map(&flatten).collect();
        let solver = SpanSolver::new(&flat);
        if solver.rank() != basis.len() {
            return Err(PlexusError::InvalidArgument(format!(
                "Lie basis is dependent: rank {} of {}",
                solver.rank(),
                basis.len()
            )));
        }
        let n = basis.len();
        let mut structure = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = solver.coordinates(&flatten(&bracket(&basis[i], &basis[j]))).ok_or_else(|| {
                    PlexusError::InvalidArgument(format!("bracket of basis elements {i} and {j} leaves the span"))
                })?;
                let c: Coordinates = c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
                structure[j][i] = c.iter().map(|(k, x)| (*k, -x.clone())).collect();
                structure[i][j] = c;
            }
        }
        Ok(LieAlgebra { dim: n, structure })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn bracket_coordinates(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.structure[i][j]
    }

    fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.structure[i][j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `K(b_i, b_j) = tr(ad b_i ∘ ad b_j)`.
    pub fn killing_form(&self) -> DenseMatrix {
        let n = self.dim;
        let mut k = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                // tr(ad_i ad_j) = Σ_l Σ_m c_{i m}^l c_{j l}^m
                let mut acc = Rational::zero();
                for l in 0..n {
                    for (m, c) in &self.structure[j][l] {
                        let d = self.constant(i, *m, l);
                        if !d.is_zero() {
                            acc += c * d;
                        }
                    }
                }
                k[j][i] = acc.clone();
                k[i][j] = acc;
            }
        }
        k
    }

    /// Jacobi identity on the structure constants, over all basis triples.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim;
        let bracket_vec = |a: &BTreeMap<usize, Rational>, j: usize| -> BTreeMap<usize, Rational> {
            // [Σ a_i b_i, b_j]
            let mut out = BTreeMap::new();
            for (i, x) in a {
                for (k, c) in &self.structure[*i][j] {
                    *out.entry(*k).or_insert_with(Rational::zero) += x * c;
                }
            }
            out.retain(|_, v: &mut Rational| !v.is_zero());
            out
        };
        let to_map = |c: &[(usize, Rational)]| c.iter().cloned().collect::<BTreeMap<_, _>>();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let t1 = bracket_vec(&to_map(&self.structure[a][b]), c);
                    let t2 = bracket_vec(&to_map(&self.structure[b][c]), a);
                    let t3 = bracket_vec(&to_map(&self.structure[c][a]), b);
                    let mut sum = t1;
                    for (k, v) in t2.into_iter().chain(t3) {
                        *sum.entry(k).or_insert_with(Rational::zero) += v;
                    }
                    if sum.values().any(|v| !v.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Killing-form summary: determinant and inertia `(positive, negative, zero)`.
pub fn killing_summary(k: &DenseMatrix) -> (Rational, (usize, usize, usize)) {
    (linalg::determinant(k), linalg::inertia(k))
}

/// Index pair of an antisymmetric generator `L_{ab}`, normalized to `a < b`.
pub fn plane(a: usize, b: usize) -> Option<(i64, (usize, usize))> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((1, (a, b))),
        std::cmp::Ordering::Greater => Some((-1, (b, a))),
        std::cmp::Ordering::Equal => None,
    }
}

/// Expansion of `[L_{n'n}, L_{m'm}]` in the generators `L_{ab}` (`a < b`) of
/// the orthogonal algebra with diagonal metric `g`:
///
/// `g_{n m'} L_{n' m} − g_{n' m'} L_{n m} + g_{n' m} L_{n m'} − g_{n m} L_{n' m'}`.
pub fn orthogonal_bracket(g: &[i64], np: usize, n: usize, mp: usize, m: usize) -> BTreeMap<(usize, usize), i64> {
    let metric = |a: usize, b: usize| if a == b { g[a] } else { 0 };
    let mut out = BTreeMap::new();
    let mut add = |c: i64, a: usize, b: usize| {
        if c == 0 {
            return;
        }
        if let Some((s, key)) = plane(a, b) {
            *out.entry(key).or_insert(0) += s * c;
        }
    };
    add(metric(n, mp), np, m);
    add(-metric(np, mp), n, m);
    add(metric(np, m), n, mp);
    add(-metric(n, m), np, mp);
    out.retain(|_, v| *v != 0);
    out
}

/// Expected Killing inertia `(positive, negative)` of so(p, q): boosts are
/// positive, rotations negative.
pub fn orthogonal_killing_inertia(p: usize, q: usize) -> (usize, usize) {
    (p * q, p * p.saturating_sub(1) / 2 + q * q.saturating_sub(1) / 2)
}
