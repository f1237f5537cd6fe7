//! Exact sparse matrices.
//!
//! [`SparseMatrix`] is a general column-compressed matrix with rational
//! entries. [`SignedSparseMatrix`] holds at most one `±1` per column: every
//! frame generator of a stage, and every product of them, has that shape, so
//! stage-4 work (dimension 65536) stays cheap.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::linalg::DenseMatrix;
use crate::scalar::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` sorted by row, no explicit zeros.
    columns: Vec<Vec<(usize, Rational)>>,
}

fn push_acc(acc: &mut BTreeMap<usize, Rational>, row: usize, v: Rational) {
    use std::collections::btree_map::Entry;
    match acc.entry(row) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if !v.is_zero() {
                e.insert(v);
            }
        }
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zeros(n, n);
        }
        SparseMatrix { rows: n, cols: n, columns: (0..n).map(|j| vec![(j, c.clone())]).collect() }
    }

    /// Builds from per-column entries in any order; duplicates are summed.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut acc = BTreeMap::new();
                for (r, v) in col {
                    assert!(r < rows, "row {r} out of range {rows}");
                    push_acc(&mut acc, r, v);
                }
                acc.into_iter().collect()
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let columns = (0..cols)
            .map(|j| (0..rows).filter(|&i| !m[i][j].is_zero()).map(|i| (i, m[i][j].clone())).collect())
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[(*i, j)] = to_f64(v);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.columns[j].binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<Rational> {
        if self.rows != self.cols {
            return None;
        }
        let c = self.get(0, 0);
        let ok = self.columns.iter().enumerate().all(|(j, col)| match col.as_slice() {
            [] => c.is_zero(),
            [(i, v)] => *i == j && *v == c,
            _ => false,
        });
        ok.then_some(c)
    }

    pub fn scale(&self, c: &Rational) -> SparseMatrix {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns: cols }
    }

    pub fn trace(&self) -> Rational {
        (0..self.cols.min(self.rows)).map(|j| self.get(j, j)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Matrix–vector product on a sparse vector.
    pub fn apply(&self, v: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
        let mut acc = BTreeMap::new();
        for (k, x) in v {
            for (i, a) in &self.columns[*k] {
                push_acc(&mut acc, *i, a * x);
            }
        }
        acc.into_iter().collect()
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &SparseMatrix) -> SparseMatrix {
        &(self * other) + &(other * self)
    }

    /// Kronecker product `self ⊗ other` with index `i * other.rows + k`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * other.rows;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a_col in &self.columns {
            for b_col in &other.columns {
                let mut col = Vec::with_capacity(a_col.len() * b_col.len());
                for (i, a) in a_col {
                    for (k, b) in b_col {
                        col.push((i * other.rows + k, a * b));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix { rows, cols: self.cols * other.cols, columns }
    }

    /// Entries flattened to positions `row * cols + col`, sorted.
    pub fn flatten(&self) -> Vec<(usize, Rational)> {
        let mut out: Vec<(usize, Rational)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (i * self.cols + j, v.clone())))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Largest absolute entry of `self - other`, in binary64.
    pub fn max_deviation(&self, other: &SparseMatrix) -> f64 {
        let d = self - other;
        d.columns
            .iter()
            .flat_map(|c| c.iter().map(|(_, v)| to_f64(v).abs()))
            .fold(0.0, f64::max)
    }
}

impl Add for &SparseMatrix {
    type Output = SparseMatrix;

    fn add(self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        out.push(a[i].clone());
                        i += 1;
                    } else if i == a.len() || b[j].0 < a[i].0 {
                        out.push(b[j].clone());
                        j += 1;
                    } else {
                        let v = &a[i].1 + &b[j].1;
                        if !v.is_zero() {
                            out.push((a[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }
}

impl Neg for &SparseMatrix {
    type Output = SparseMatrix;

    fn neg(self) -> SparseMatrix {
        self.scale(&-Rational::one())
    }
}

impl Sub for &SparseMatrix {
    type Output = SparseMatrix;

    fn sub(self, rhs: &SparseMatrix) -> SparseMatrix {
        self + &(-rhs)
    }
}

impl Mul for &SparseMatrix {
    type Output = SparseMatrix;

    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let columns = rhs.columns.iter().map(|col| self.apply(col)).collect();
        SparseMatrix { rows: self.rows, cols: rhs.cols, columns }
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Matrix with at most one `±1` entry per column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedSparseMatrix {
    /// Column `j` maps to `(row, negative)`.
    columns: Vec<Option<(u32, bool)>>,
}

impl SignedSparseMatrix {
    pub fn identity(dim: usize) -> Self {
        SignedSparseMatrix { columns: (0..dim as u32).map(|j| Some((j, false))).collect() }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> Option<(usize, bool)>) -> Self {
        SignedSparseMatrix {
            columns: (0..dim)
                .map(|j| {
                    f(j).map(|(i, neg)| {
                        assert!(i < dim);
                        (i as u32, neg)
                    })
                })
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, column: usize) -> Option<(usize, i8)> {
        self.columns[column].map(|(i, neg)| (i as usize, if neg { -1 } else { 1 }))
    }

    pub fn neg(&self) -> Self {
        SignedSparseMatrix { columns: self.columns.iter().map(|c| c.map(|(i, n)| (i, !n))).collect() }
    }

    pub fn mul(&self, rhs: &SignedSparseMatrix) -> SignedSparseMatrix {
        assert_eq!(self.dimension(), rhs.dimension(), "dimension mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|c| {
                let (k, n1) = (*c)?;
                let (i, n2) = self.columns[k as usize]?;
                Some((i, n1 ^ n2))
            })
            .collect();
        SignedSparseMatrix { columns }
    }

    /// Transpose; `None` if two columns share a row (then the transpose has
    /// two entries in one column).
    pub fn transpose(&self) -> Option<SignedSparseMatrix> {
        let mut cols: Vec<Option<(u32, bool)>> = vec![None; self.dimension()];
        for (j, c) in self.columns.iter().enumerate() {
            if let Some((i, n)) = *c {
                if cols[i as usize].is_some() {
                    return None;
                }
                cols[i as usize] = Some((j as u32, n));
            }
        }
        Some(SignedSparseMatrix { columns: cols })
    }

    pub fn is_signed_permutation(&self) -> bool {
        self.columns.iter().all(Option::is_some) && self.transpose().is_some()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let n = self.dimension();
        let columns = self
            .columns
            .iter()
            .map(|c| match c {
                Some((i, n)) => vec![(*i as usize, if *n { -Rational::one() } else { Rational::one() })],
                None => Vec::new(),
            })
            .collect();
        SparseMatrix { rows: n, cols: n, columns }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn arithmetic() {
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, dense(&[&[2, 1], &[1, 0]]));
        assert_eq!(&a - &a, SparseMatrix::zeros(2, 2));
        assert_eq!(a.transpose(), dense(&[&[1, 0], &[2, 1]]));
        assert_eq!(a.trace(), int(2));
        assert_eq!(SparseMatrix::scalar(3, int(2)).as_scalar(), Some(int(2)));
        assert_eq!(a.as_scalar(), None);
    }

    #[test]
    fn kron_dimensions_and_trace() {
        let a = dense(&[&[1, 2], &[3, 4]]);
        let b = dense(&[&[0, 1], &[1, 1]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k.trace(), a.trace() * b.trace());
        assert_eq!(k.get(1, 2), int(2)); // a[0][1] * b[1][0]
    }

    #[test]
    fn signed_products_match_sparse() {
        let p = SignedSparseMatrix::from_fn(4, |j| Some(((j + 1) % 4, j % 2 == 0)));
        let q = SignedSparseMatrix::from_fn(4, |j| Some((3 - j, j == 3)));
        assert_eq!(p.mul(&q).to_sparse(), &p.to_sparse() * &q.to_sparse());
        assert_eq!(p.transpose().unwrap().to_sparse(), p.to_sparse().transpose());
        assert!(p.is_signed_permutation());
        assert_eq!(p.mul(&p.transpose().unwrap()), SignedSparseMatrix::identity(4));
    }
}
