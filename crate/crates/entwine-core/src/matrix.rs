//! Sparse exact linear algebra over the rationals.
//!
//! Everything downstream (differentials, coactions, projectors) reduces to
//! ranks, kernels and linear solves of sparse matrices assembled from
//! structure constants. Elimination is plain exact Gaussian elimination
//! over Q (entries divided through by the pivot); since scalars are
//! arbitrary-precision rationals this is a certificate, not an
//! approximation. Pivot choice is deterministic (sparsest eligible row,
//! lowest index on ties) so kernels and representative bases are
//! reproducible across runs.

use crate::rational::{format_rational, Rational, Vector};
use crate::{Error, Result};
use num::traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse column-major matrix over Q. Absent entries are zero; dimensions
/// are fixed at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    /// One map per column: row index -> nonzero entry.
    data: Vec<BTreeMap<usize, Rational>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(entries: &[Vec<Rational>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zero(ambient, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), ambient, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[c].get(&r).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.data[c].remove(&r);
        } else {
            self.data[c].insert(r, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: Rational) {
        if v.is_zero() {
            return;
        }
        assert!(r < self.rows && c < self.cols, "index out of range");
        let e = self.data[c].entry(r).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.data[c].remove(&r);
        }
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, Rational> {
        &self.data[c]
    }

    pub fn column_vec(&self, c: usize) -> Vector {
        let mut v = vec![Rational::zero(); self.rows];
        for (&r, x) in &self.data[c] {
            v[r] = x.clone();
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &[Rational]) {
        assert_eq!(v.len(), self.rows);
        let mut col = BTreeMap::new();
        for (r, x) in v.iter().enumerate() {
            if !x.is_zero() {
                col.insert(r, x.clone());
            }
        }
        self.data[c] = col;
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for (r, c, v) in self.iter_entries() {
            t.data[r].insert(c, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        if s.is_zero() {
            return Matrix::zero(self.rows, self.cols);
        }
        let mut m = self.clone();
        for col in &mut m.data {
            for v in col.values_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, c, v) in other.iter_entries() {
            out.add_to(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (&r, a) in &self.data[c] {
                out[r] += a * x;
            }
        }
        out
    }

    /// Sparse product `self * other`, parallel over result columns.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let cols = crate::par::run_indexed(other.cols, |c| {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (&mid, x) in &other.data[c] {
                for (&r, a) in &self.data[mid] {
                    let e = acc.entry(r).or_insert_with(Rational::zero);
                    *e += a * x;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            acc
        });
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data: cols,
        }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut m = Matrix::zero(self.rows + other.rows, self.cols);
        for (r, c, v) in self.iter_entries() {
            m.data[c].insert(r, v.clone());
        }
        for (r, c, v) in other.iter_entries() {
            m.data[c].insert(r + self.rows, v.clone());
        }
        m
    }

    /// Stack `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`; `dim = cols - rank`.
    pub fn kernel(&self) -> Subspace {
        let ech = self.echelon();
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let is_pivot = |c: usize| pivot_cols.binary_search(&c).is_ok();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot(free) {
                continue;
            }
            // x[free] = 1; pivot variables read off the reduced rows.
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for (row_idx, &(r, c)) in ech.pivots.iter().enumerate() {
                let _ = r;
                if let Some(v) = ech.rows[row_idx].get(&free) {
                    x[c] = -v.clone();
                }
            }
            basis.push(x);
        }
        Subspace {
            ambient_dim: self.cols,
            basis,
        }
    }

    /// Some `x` with `self * x = b`, or `None` if the system is
    /// inconsistent. Inconsistency is a normal return, not a failure.
    pub fn solve(&self, b: &[Rational]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        // Eliminate the augmented system [self | b].
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in self.iter_entries() {
            rows[r].insert(c, v.clone());
        }
        for (r, v) in b.iter().enumerate() {
            if !v.is_zero() {
                rows[r].insert(self.cols, v.clone());
            }
        }
        let ech = echelon_rows(rows, self.cols + 1);
        let mut x = vec![Rational::zero(); self.cols];
        for (row_idx, &(_, c)) in ech.pivots.iter().enumerate() {
            if c == self.cols {
                return None; // pivot in the augmented column
            }
            if let Some(v) = ech.rows[row_idx].get(&self.cols) {
                x[c] = v.clone();
            }
        }
        Some(x)
    }

    /// Pivot columns of the original matrix: a basis of the column space.
    pub fn column_space_basis(&self) -> Vec<Vector> {
        let ech = self.echelon();
        ech.pivots
            .iter()
            .map(|&(_, c)| self.column_vec(c))
            .collect()
    }

    fn echelon(&self) -> Echelon {
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in self.iter_entries() {
            rows[r].insert(c, v.clone());
        }
        echelon_rows(rows, self.cols)
    }
}

struct Echelon {
    /// Reduced rows (each normalized to pivot 1, eliminated above and
    /// below), in pivot order.
    rows: Vec<BTreeMap<usize, Rational>>,
    /// (original placement irrelevant) pivot (row_index_in_rows, column).
    pivots: Vec<(usize, usize)>,
}

/// Gauss-Jordan on sparse rows. Deterministic: pivot row is the sparsest
/// eligible row, lowest index on ties.
fn echelon_rows(mut rows: Vec<BTreeMap<usize, Rational>>, ncols: usize) -> Echelon {
    let mut done: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..ncols {
        let mut best: Option<(usize, usize)> = None; // (nnz, idx)
        for (i, row) in rows.iter().enumerate() {
            if row.get(&col).is_some_and(|v| !v.is_zero()) {
                let nnz = row.len();
                if best.is_none_or(|(bn, _)| nnz < bn) {
                    best = Some((nnz, i));
                }
            }
        }
        let Some((_, idx)) = best else { continue };
        let mut pivot_row = rows.swap_remove(idx);
        let pv = pivot_row.get(&col).unwrap().clone();
        for v in pivot_row.values_mut() {
            *v /= &pv;
        }
        // eliminate in the remaining rows
        for row in rows.iter_mut() {
            if let Some(f) = row.get(&col).cloned() {
                if f.is_zero() {
                    row.remove(&col);
                    continue;
                }
                for (&c2, v2) in &pivot_row {
                    let e = row.entry(c2).or_insert_with(Rational::zero);
                    *e -= &f * v2;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        // and in the finished rows (full reduction)
        for row in done.iter_mut() {
            if let Some(f) = row.get(&col).cloned() {
                for (&c2, v2) in &pivot_row {
                    let e = row.entry(c2).or_insert_with(Rational::zero);
                    *e -= &f * v2;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
        pivots.push((done.len(), col));
        done.push(pivot_row);
    }
    Echelon { rows: done, pivots }
}

/// A linear subspace of Q^n given by an explicit independent basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Rational]) -> Option<Vector> {
        self.as_matrix().solve(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).is_some()
    }
}

/// `dim(num) - dim(den)` after verifying `den` is contained in `num` by a
/// rank argument; failure signals a broken complex upstream.
pub fn quotient_dim(num: &Subspace, den: &Subspace) -> Result<usize> {
    if num.ambient_dim != den.ambient_dim {
        return Err(Error::Dimension(format!(
            "quotient of subspaces of ambients {} and {}",
            num.ambient_dim, den.ambient_dim
        )));
    }
    let num_mat = num.as_matrix();
    let joint = num_mat.hstack(&den.as_matrix());
    if joint.rank() != num.dim() {
        return Err(Error::Containment(format!(
            "denominator (dim {}) not contained in numerator (dim {})",
            den.dim(),
            num.dim()
        )));
    }
    Ok(num.dim() - den.dim())
}

/// Extend a basis of `inner` to one of `inner + span(candidates)` and
/// return the selected candidate vectors: deterministic representatives of
/// the quotient. Used for cohomology representatives.
pub fn complement_basis(inner: &Subspace, candidates: &[Vector]) -> Vec<Vector> {
    let cols = inner.dim() + candidates.len();
    let mut m = Matrix::zero(inner.ambient_dim, cols);
    for (c, v) in inner.basis.iter().enumerate() {
        m.set_column(c, v);
    }
    for (c, v) in candidates.iter().enumerate() {
        m.set_column(inner.dim() + c, v);
    }
    let ech = m.echelon();
    ech.pivots
        .iter()
        .filter(|&&(_, c)| c >= inner.dim())
        .map(|&(_, c)| candidates[c - inner.dim()].clone())
        .collect()
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_rational(&self.get(r, c)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use proptest::prelude::*;

    fn m(entries: &[&[i64]]) -> Matrix {
        let dense: Vec<Vec<Rational>> = entries
            .iter()
            .map(|row| row.iter().map(|&x| rint(x)).collect())
            .collect();
        Matrix::from_dense(&dense)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2).rank(), 2);
        assert_eq!(Matrix::zero(3, 5).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(2).kernel().dim(), 0);
        assert_eq!(Matrix::zero(3, 5).kernel().dim(), 5);
        let k = m(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        // spanned by (1, -1) up to scale
        let v = &k.basis[0];
        assert_eq!(v[0], -v[1].clone());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(2);
        assert_eq!(id.solve(&[rint(3), rint(5)]).unwrap(), vec![rint(3), rint(5)]);
        let z = Matrix::zero(2, 2);
        assert!(z.solve(&[rint(1), rint(0)]).is_none());
        let half = m(&[&[2]]);
        assert_eq!(half.solve(&[rint(1)]).unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn quotient_dim_examples() {
        let num = Subspace {
            ambient_dim: 4,
            basis: vec![
                vec![rint(1), rint(0), rint(0), rint(0)],
                vec![rint(0), rint(1), rint(0), rint(0)],
                vec![rint(0), rint(0), rint(1), rint(0)],
            ],
        };
        let den = Subspace {
            ambient_dim: 4,
            basis: vec![vec![rint(1), rint(1), rint(0), rint(0)]],
        };
        assert_eq!(quotient_dim(&num, &den).unwrap(), 2);
        assert_eq!(quotient_dim(&num, &num).unwrap(), 0);
        assert_eq!(quotient_dim(&num, &Subspace::zero(4)).unwrap(), 3);
        let outside = Subspace {
            ambient_dim: 4,
            basis: vec![vec![rint(0), rint(0), rint(0), rint(1)]],
        };
        assert!(quotient_dim(&num, &outside).is_err());
    }

    #[test]
    fn complement_picks_deterministic_representatives() {
        let inner = Subspace {
            ambient_dim: 3,
            basis: vec![vec![rint(1), rint(0), rint(0)]],
        };
        let cands = vec![
            vec![rint(1), rint(0), rint(0)], // dependent
            vec![rint(1), rint(1), rint(0)],
            vec![rint(0), rint(1), rint(0)], // dependent on previous two
            vec![rint(0), rint(0), rint(1)],
        ];
        let reps = complement_basis(&inner, &cands);
        assert_eq!(reps, vec![cands[1].clone(), cands[3].clone()]);
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..=4, r * c).prop_map(move |vals| {
                let dense: Vec<Vec<Rational>> = (0..r)
                    .map(|i| (0..c).map(|j| rint(vals[i * c + j])).collect())
                    .collect();
                Matrix::from_dense(&dense)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(mat in arb_matrix()) {
            prop_assert_eq!(mat.rank(), mat.transpose().rank());
        }

        #[test]
        fn rank_nullity(mat in arb_matrix()) {
            prop_assert_eq!(mat.kernel().dim() + mat.rank(), mat.cols());
        }

        #[test]
        fn kernel_vectors_are_killed(mat in arb_matrix()) {
            for v in &mat.kernel().basis {
                prop_assert!(crate::rational::vec_is_zero(&mat.mul_vec(v)));
            }
        }

        #[test]
        fn solve_recovers_constructed_rhs(mat in arb_matrix(), seed in proptest::collection::vec(-3i64..=3, 1..5)) {
            let x0: Vector = (0..mat.cols()).map(|i| rint(seed[i % seed.len()])).collect();
            let b = mat.mul_vec(&x0);
            let x = mat.solve(&b).expect("consistent by construction");
            prop_assert_eq!(mat.mul_vec(&x), b);
        }
    }
}
