//! Small dense exact linear algebra: determinants, ranks, inertia and
//! coordinates in a spanning set. Matrices are row-major `Vec<Vec<Rational>>`.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

pub type DenseMatrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> DenseMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn determinant(m: &DenseMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

pub fn rank(m: &DenseMatrix) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(pivot, rank);
        let p = a[rank][col].clone();
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..cols {
                let delta = &factor * &a[rank][c];
                a[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix, by symmetric
/// Gaussian elimination (congruence to a diagonal matrix).
pub fn inertia(m: &DenseMatrix) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let mut diag = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // Prefer a nonzero diagonal pivot.
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // All diagonal entries zero: find an off-diagonal pair and mix
                // row/column j into i, which makes a[i][i] = 2 a[i][j] != 0.
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    Some((i, j)) => {
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                    None => {
                        diag.extend(std::iter::repeat_n(Rational::zero(), active.len()));
                        break;
                    }
                }
            }
        };
        let pv = a[p][p].clone();
        active.retain(|&i| i != p);
        for &r in &active {
            if a[r][p].is_zero() {
                continue;
            }
            let factor = &a[r][p] / &pv;
            for &c in &active {
                let delta = &factor * &a[p][c];
                a[r][c] -= delta;
            }
            a[r][p] = Rational::zero();
        }
        for &c in &active {
            a[p][c] = Rational::zero();
        }
        diag.push(pv);
    }
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    let neg = diag.iter().filter(|d| d.is_negative()).count();
    (pos, neg, n - pos - neg)
}

/// Incremental row-echelon basis for expressing sparse vectors (indexed by
/// arbitrary keys mapped to `usize`) as combinations of a fixed spanning set.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    /// Reduced rows: (pivot position, sparse row over positions, combination over inputs).
    rows: Vec<(usize, Vec<(usize, Rational)>, Vec<Rational>)>,
    inputs: usize,
}

fn axpy(row: &mut Vec<(usize, Rational)>, factor: &Rational, other: &[(usize, Rational)]) {
    // row <- row - factor * other, both sorted by position.
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        if j == other.len() || (i < row.len() && row[i].0 < other[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i == row.len() || other[j].0 < row[i].0 {
            out.push((other[j].0, -(factor * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *row = out;
}

impl SpanSolver {
    /// `vectors` are sparse, sorted by position.
    pub fn new(vectors: &[Vec<(usize, Rational)>]) -> Self {
        let n = vectors.len();
        let mut solver = SpanSolver { rows: Vec::new(), inputs: n };
        for (idx, v) in vectors.iter().enumerate() {
            let mut combo = vec![Rational::zero(); n];
            combo[idx] = Rational::one();
            let (residual, combo) = solver.reduce(v.clone(), combo);
            if let Some((pivot, lead)) = residual.first().cloned() {
                let inv = lead.recip();
                let row: Vec<_> = residual.into_iter().map(|(p, x)| (p, x * &inv)).collect();
                let combo: Vec<_> = combo.into_iter().map(|x| x * &inv).collect();
                solver.rows.push((pivot, row, combo));
            }
        }
        solver
    }

    fn reduce(
        &self,
        mut v: Vec<(usize, Rational)>,
        mut combo: Vec<Rational>,
    ) -> (Vec<(usize, Rational)>, Vec<Rational>) {
        for (pivot, row, rcombo) in &self.rows {
            if let Ok(k) = v.binary_search_by_key(pivot, |e| e.0) {
                let factor = v[k].1.clone();
                axpy(&mut v, &factor, row);
                for (c, r) in combo.iter_mut().zip(rcombo) {
                    *c -= &factor * r;
                }
            }
        }
        (v, combo)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients `c` with `v = Σ c_i inputs_i`, or `None` if `v` is outside
    /// the span. When the inputs are dependent one particular solution is
    /// returned.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        let (residual, combo) = self.reduce(v.to_vec(), vec![Rational::zero(); self.inputs]);
        if residual.is_empty() {
            Some(combo.into_iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> DenseMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn det_and_rank() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(&a), int(5));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), int(-1));
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        assert_eq!(inertia(&m(&[&[0, 1], &[1, 0]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[&[1, 0, 0], &[0, -2, 0], &[0, 0, 0]])), (1, 1, 1));
        assert_eq!(inertia(&m(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]])), (2, 2, 0));
    }

    #[test]
    fn span_coordinates() {
        let v1 = vec![(0, int(1)), (2, int(1))];
        let v2 = vec![(1, int(1)), (2, int(-1))];
        let s = SpanSolver::new(&[v1, v2]);
        assert_eq!(s.rank(), 2);
        let target = vec![(0, int(2)), (1, int(3)), (2, int(-1))];
        assert_eq!(s.coordinates(&target), Some(vec![int(2), int(3)]));
        assert_eq!(s.coordinates(&[(0, int(1))]), None);
    }
}
