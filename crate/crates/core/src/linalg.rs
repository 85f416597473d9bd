//! Exact dense linear algebra over a coefficient field.
//!
//! The canonical reduced row echelon form is the backbone of every criterion
//! in the crate: ranks, kernels, solves and subspace predicates all reduce to
//! it. Subspaces are stored only through their canonical RREF basis, so
//! equality of subspaces is structural equality of matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;

/// Mismatched dimensions in a vector/subspace operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dimension mismatch: expected {}, found {}",
            self.expected, self.found
        )
    }
}

impl core::error::Error for DimensionMismatch {}

/// A dense row-major matrix over the field `F`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> ScalarMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field.clone(), n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    /// Build from rows; all rows must share one length.
    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let nrows = rows.len();
        let entries = rows.into_iter().flatten().collect();
        ScalarMatrix {
            field,
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F::Elem {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn mul_matrix(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.at(i, k), other.at(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "vector length differs from cols");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(i, k), &v[k]));
                }
                acc
            })
            .collect()
    }

    /// Canonical reduced row echelon form with pivot columns and rank.
    ///
    /// Forward phase is fraction-free (cross-multiplication with row content
    /// normalization, see [`Field::normalize_row`]); the backward phase
    /// divides once per pivot to reach the canonical form. Pivoting is
    /// deterministic: first nonzero entry in column order.
    pub fn rref(&self) -> Echelon<F> {
        let f = self.field.clone();
        let mut m = self.row_vecs();
        for row in m.iter_mut() {
            f.normalize_row(row);
        }
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !f.is_zero(&m[i][c])) else {
                continue;
            };
            m.swap(r, piv);
            let (top, rest) = m.split_at_mut(r + 1);
            let prow = &top[r];
            let pval = prow[c].clone();
            for row in rest.iter_mut() {
                if f.is_zero(&row[c]) {
                    continue;
                }
                let q = row[c].clone();
                for j in c..self.cols {
                    row[j] = f.sub(&f.mul(&pval, &row[j]), &f.mul(&q, &prow[j]));
                }
                f.normalize_row(row);
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        // Backward phase: unit pivots, clear above.
        for (idx, &pc) in pivots.iter().enumerate().rev() {
            let pinv = f.inv(&m[idx][pc]).expect("pivot is nonzero");
            for j in pc..self.cols {
                m[idx][j] = f.mul(&m[idx][j], &pinv);
            }
            let (above, below) = m.split_at_mut(idx);
            let prow = &below[0];
            for row in above.iter_mut() {
                if f.is_zero(&row[pc]) {
                    continue;
                }
                let q = row[pc].clone();
                for j in pc..self.cols {
                    row[j] = f.sub(&row[j], &f.mul(&q, &prow[j]));
                }
            }
        }
        Echelon {
            matrix: ScalarMatrix::from_rows(f, m),
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Exact full-column-rank test, taking the field's one-sided modular
    /// certificate when it applies.
    pub fn has_full_col_rank(&self) -> bool {
        if let Some(ans) = self
            .field
            .full_col_rank_certificate(&self.entries, self.rows, self.cols)
        {
            return ans;
        }
        self.rank() == self.cols
    }

    /// Right null space as a canonical subspace of K^cols.
    pub fn kernel(&self) -> Subspace<F> {
        let f = &self.field;
        let ech = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = ech.pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for c in 0..self.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
            } else {
                free_cols.push(c);
            }
        }
        for &fc in &free_cols {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(ech.matrix.at(r, fc));
            }
            basis.push(v);
        }
        Subspace::from_span(f.clone(), self.cols, basis)
    }

    /// One particular solution of `M x = b` (free variables set to zero),
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length differs");
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let ech = aug.rref();
        if ech.pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.matrix.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Exact inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = f.one();
        }
        let ech = aug.rref();
        if ech.rank < n {
            return None;
        }
        Some(Self::from_fn(f.clone(), n, n, |i, j| {
            ech.matrix.at(i, n + j).clone()
        }))
    }
}

/// Result of [`ScalarMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub matrix: ScalarMatrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// A linear subspace of K^n, held as its canonical RREF basis.
///
/// Canonicity makes set equality decidable by entry-wise comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: ScalarMatrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Canonical subspace spanned by the given vectors.
    pub fn from_span(field: F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient_dim),
            "spanning vector of wrong length"
        );
        if vectors.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        let ech = ScalarMatrix::from_rows(field.clone(), vectors).rref();
        let rows = (0..ech.rank).map(|i| ech.matrix.row(i).to_vec()).collect();
        Subspace {
            ambient_dim,
            basis: ScalarMatrix::from_rows(field, rows),
        }
    }

    pub fn zero(field: F, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ScalarMatrix::zeros(field, 0, ambient_dim),
        }
    }

    pub fn full(field: F, ambient_dim: usize) -> Self {
        let id = ScalarMatrix::identity(field, ambient_dim);
        Subspace {
            ambient_dim,
            basis: id,
        }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical RREF basis, one row per basis vector.
    pub fn basis(&self) -> &ScalarMatrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }

    /// Residual of `v` after reduction against the canonical basis.
    /// Zero exactly when `v` is a member.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ambient_dim, "vector length differs");
        let f = self.basis.field().clone();
        let mut w = v.to_vec();
        for r in 0..self.basis.rows() {
            let pc = (0..self.ambient_dim)
                .find(|&c| !f.is_zero(self.basis.at(r, c)))
                .expect("basis rows are nonzero");
            if f.is_zero(&w[pc]) {
                continue;
            }
            let q = w[pc].clone(); // pivot entries are 1
            for c in pc..self.ambient_dim {
                w[c] = f.sub(&w[c], &f.mul(&q, self.basis.at(r, c)));
            }
        }
        w
    }

    /// Exact membership test.
    pub fn member(&self, v: &[F::Elem]) -> Result<bool, DimensionMismatch> {
        if v.len() != self.ambient_dim {
            return Err(DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let f = self.basis.field();
        Ok(self.reduce(v).iter().all(|e| f.is_zero(e)))
    }

    /// Exact set equality (structural, thanks to canonical bases).
    pub fn subspace_eq(&self, other: &Self) -> Result<bool, DimensionMismatch> {
        if self.ambient_dim != other.ambient_dim {
            return Err(DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(self.basis == other.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> ScalarMatrix<Rationals> {
        ScalarMatrix::from_rows(
            Rationals,
            rows.iter().map(|r| r.iter().map(|&n| q(n)).collect()).collect(),
        )
    }

    #[test]
    fn rref_identity_fixed_point() {
        let id = ScalarMatrix::identity(Rationals, 3);
        let ech = id.rref();
        assert_eq!(ech.matrix, id);
        assert_eq!(ech.rank, 3);
        assert_eq!(ech.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_proportional_rows() {
        let m = mat(&[&[1, 2], &[2, 4]]);
        let ech = m.rref();
        assert_eq!(ech.rank, 1);
        assert_eq!(ech.matrix, mat(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_zero_matrix() {
        let m = ScalarMatrix::zeros(Rationals, 2, 3);
        let ech = m.rref();
        assert_eq!(ech.rank, 0);
        assert!(ech.matrix.is_zero());
    }

    #[test]
    fn rref_idempotent() {
        let m = mat(&[&[2, 4, -2], &[3, 1, 5], &[5, 5, 3]]);
        let once = m.rref().matrix;
        let twice = once.rref().matrix;
        assert_eq!(once, twice);
    }

    #[test]
    fn kernel_examples() {
        // [[1,1]] -> span{(1,-1)}
        let k = mat(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.member(&[q(1), q(-1)]).unwrap());
        // invertible -> zero subspace
        let k = mat(&[&[1, 1], &[0, 1]]).kernel();
        assert_eq!(k.dim(), 0);
        // zero 2x3 -> full 3-space
        let k = ScalarMatrix::zeros(Rationals, 2, 3).kernel();
        assert_eq!(k.dim(), 3);
        assert!(k.subspace_eq(&Subspace::full(Rationals, 3)).unwrap());
    }

    #[test]
    fn kernel_dim_plus_rank_is_cols() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        assert_eq!(m.kernel().dim() + m.rank(), m.cols());
    }

    #[test]
    fn solve_examples() {
        // identity
        let sol = ScalarMatrix::identity(Rationals, 3)
            .solve(&[q(4), q(-1), q(7)])
            .unwrap();
        assert_eq!(sol, vec![q(4), q(-1), q(7)]);
        // free variable convention: x = (2, 0)
        let sol = mat(&[&[1, 1]]).solve(&[q(2)]).unwrap();
        assert_eq!(sol, vec![q(2), q(0)]);
        // inconsistent
        assert!(mat(&[&[1, 1], &[1, 1]]).solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn member_and_equality() {
        let s = Subspace::from_span(Rationals, 2, vec![vec![q(1), q(0)]]);
        assert!(s.member(&[q(2), q(0)]).unwrap());
        assert!(!s.member(&[q(0), q(1)]).unwrap());
        let t = Subspace::from_span(Rationals, 2, vec![vec![q(1), q(1)], vec![q(1), q(-1)]]);
        let full = Subspace::from_span(Rationals, 2, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert!(t.subspace_eq(&full).unwrap());
        assert!(s.member(&[q(1)]).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1, 0], &[1, 1, 1], &[0, 3, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_matrix(&inv), ScalarMatrix::identity(Rationals, 3));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn full_col_rank_certificate_agrees() {
        let m = mat(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert!(m.has_full_col_rank());
        assert_eq!(m.rank(), 2);
        let m = mat(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert!(!m.has_full_col_rank());
    }

    #[test]
    fn prime_field_rref_matches_rational_rank() {
        let f = PrimeField::new(10007).unwrap();
        let rows = vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(6)],
            vec![f.from_i64(0), f.from_i64(5), f.from_i64(1)],
        ];
        let m = ScalarMatrix::from_rows(f, rows);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel().dim(), 1);
    }
}
