//! Canonical bases and index arithmetic for the triangular tensor-matrix
//! spaces `C (x) A^(n) (x) B^(n(n-1)/2)` that degree-`n` cochains are
//! evaluated on.
//!
//! Basis ordering is fixed once and for all so that every assembled matrix
//! is bit-reproducible: a multi-index flattens row-major with the `C`
//! index slowest, then the `n` `A`-indices left to right, then the
//! off-diagonal `B`-indices in lexicographic pair order
//! `(0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1)` (0-based slots). Reports
//! that print basis-dependent data inherit this convention.

use crate::algebra::BEntwining;
use crate::matrix::Matrix;
use crate::rational::{basis_vec, Rational, Vector};
use crate::{Error, Result};
use num::traits::Zero;

/// Number of strictly-upper-triangular pairs of an `n x n` matrix.
pub fn n_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Ordered list of 0-based pairs `(p, q)`, `p < q < n`.
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n_pairs(n));
    for p in 0..n {
        for q in p + 1..n {
            out.push((p, q));
        }
    }
    out
}

/// Position of pair `(p, q)` in [`pair_list`] order.
pub fn pair_pos(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(p < q && q < n);
    // pairs before row p: (n-1) + (n-2) + ... + (n-p)
    p * (2 * n - p - 1) / 2 + (q - p - 1)
}

/// A multi-index into `C (x) A^(n) (x) B^(n(n-1)/2)`: one coalgebra basis
/// index, `n` algebra indices on the diagonal, and one `B` index per
/// strictly-upper pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMatrixIndex {
    pub c: usize,
    pub a: Vec<usize>,
    /// `b[pair_pos(p, q, n)]` is the `B`-index in slot `(p, q)`.
    pub b: Vec<usize>,
}

impl TensorMatrixIndex {
    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn b_at(&self, p: usize, q: usize) -> usize {
        self.b[pair_pos(p, q, self.a.len())]
    }
}

/// Basis dimensions `(dim C, dim A, dim B)` of an entwining structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub c: usize,
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub fn of(e: &BEntwining) -> Dims {
        Dims {
            c: e.c.dim,
            a: e.a.dim,
            b: e.b.dim,
        }
    }
}

/// `dim C * dim A^n * dim B^(n(n-1)/2)` with overflow detection; the cap
/// guides users toward feasible degrees before memory does.
pub fn basis_size_checked(dims: Dims, n: usize, cap: usize) -> Result<usize> {
    let mut size: u128 = dims.c as u128;
    for _ in 0..n {
        size = size
            .checked_mul(dims.a as u128)
            .ok_or(Error::SizeCap {
                degree: n,
                size: u128::MAX,
                cap,
            })?;
    }
    for _ in 0..n_pairs(n) {
        size = size
            .checked_mul(dims.b as u128)
            .ok_or(Error::SizeCap {
                degree: n,
                size: u128::MAX,
                cap,
            })?;
    }
    if size > cap as u128 {
        return Err(Error::SizeCap {
            degree: n,
            size,
            cap,
        });
    }
    Ok(size as usize)
}

/// Unchecked variant for sizes already admitted by the cap.
pub fn basis_size(dims: Dims, n: usize) -> usize {
    dims.c * dims.a.pow(n as u32) * dims.b.pow(n_pairs(n) as u32)
}

pub fn flatten(dims: Dims, idx: &TensorMatrixIndex) -> usize {
    let mut k = idx.c;
    for &a in &idx.a {
        debug_assert!(a < dims.a);
        k = k * dims.a + a;
    }
    for &b in &idx.b {
        debug_assert!(b < dims.b);
        k = k * dims.b + b;
    }
    k
}

pub fn unflatten(dims: Dims, n: usize, mut k: usize) -> TensorMatrixIndex {
    let np = n_pairs(n);
    let mut b = vec![0usize; np];
    for slot in (0..np).rev() {
        b[slot] = k % dims.b;
        k /= dims.b;
    }
    let mut a = vec![0usize; n];
    for slot in (0..n).rev() {
        a[slot] = k % dims.a;
        k /= dims.a;
    }
    TensorMatrixIndex { c: k, a, b }
}

/// Product in `B` of the basis elements at the listed indices (empty list
/// gives the unit). `B` is commutative, so region products are
/// order-independent.
pub fn b_product(e: &BEntwining, idxs: impl IntoIterator<Item = usize>) -> Vector {
    let mut acc = e.b.unit.clone();
    for i in idxs {
        acc = e.b.mul_elems(&acc, &basis_vec(e.b.dim, i));
    }
    acc
}

/// Product over a rectangular region of `B`-entries of a tensor-matrix
/// index: all pairs `(r, c)` with `r` in `rows`, `c` in `cols` (callers
/// keep the region strictly upper-triangular).
pub fn b_region_product(
    e: &BEntwining,
    idx: &TensorMatrixIndex,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Vector {
    let mut items = Vec::new();
    for r in rows {
        for c in cols.clone() {
            debug_assert!(r < c);
            items.push(idx.b_at(r, c));
        }
    }
    b_product(e, items)
}

/// Per-row products of a region: entry `r` is the product over `cols` of
/// the `(r, c)` entries.
pub fn b_row_products(
    e: &BEntwining,
    idx: &TensorMatrixIndex,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Vec<Vector> {
    rows.map(|r| b_region_product(e, idx, r..r + 1, cols.clone()))
        .collect()
}

/// Per-column products of a region: entry `c` is the product over `rows`
/// of the `(r, c)` entries.
pub fn b_col_products(
    e: &BEntwining,
    idx: &TensorMatrixIndex,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Vec<Vector> {
    cols.map(|c| b_region_product(e, idx, rows.clone(), c..c + 1))
        .collect()
}

/// All ways of choosing one basis element from each factor of a list of
/// element vectors, with the product coefficient: the multilinear
/// expansion used throughout assembly.
pub fn expand_choices(factors: &[Vector]) -> Vec<(Rational, Vec<usize>)> {
    let mut out = vec![(
        Rational::from_integer(1.into()),
        Vec::with_capacity(factors.len()),
    )];
    for vec in factors {
        let mut next = Vec::new();
        for (coef, choice) in &out {
            for (i, v) in vec.iter().enumerate() {
                if !v.is_zero() {
                    let mut c2 = choice.clone();
                    c2.push(i);
                    next.push((coef * v, c2));
                }
            }
        }
        out = next;
    }
    out
}

/// Move the coalgebra index through a prefix of algebra indices by
/// repeated entwining: expansion of the map sending `c (x) a_1 ... a_k` to
/// `a_1' ... a_k' (x) c^(psi^k)`. `k = 0` is the identity.
pub fn psi_iterate_expand(
    e: &BEntwining,
    c: usize,
    a_prefix: &[usize],
) -> Vec<(Rational, Vec<usize>, usize)> {
    let mut outs = vec![(Rational::from_integer(1.into()), Vec::new(), c)];
    for &a in a_prefix {
        let mut next = Vec::new();
        for (coef, twisted, cc) in &outs {
            for (pc, a2, c2) in e.psi.pairs(*cc, a) {
                let mut t2 = twisted.clone();
                t2.push(a2);
                next.push((coef * &pc, t2, c2));
            }
        }
        outs = next;
    }
    outs
}

/// The `k`-fold entwining `C (x) A^(k) -> A^(k) (x) C` as a matrix.
/// Input index `c * dimA^k + (a_1..a_k)` row-major; output index
/// `(a_1..a_k) * dimC + c`.
pub fn psi_iterate(e: &BEntwining, k: usize) -> Matrix {
    let dims = Dims::of(e);
    let size = dims.c * dims.a.pow(k as u32);
    let mut m = Matrix::zero(size, size);
    for c in 0..dims.c {
        for a_flat in 0..dims.a.pow(k as u32) {
            let mut rest = a_flat;
            let mut a = vec![0usize; k];
            for slot in (0..k).rev() {
                a[slot] = rest % dims.a;
                rest /= dims.a;
            }
            let col = c * dims.a.pow(k as u32) + a_flat;
            for (coef, twisted, c2) in psi_iterate_expand(e, c, &a) {
                let mut out = 0usize;
                for &t in &twisted {
                    out = out * dims.a + t;
                }
                m.add_to(out * dims.c + c2, col, coef);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn basis_sizes() {
        let d = Dims { c: 1, a: 1, b: 1 };
        for n in 0..6 {
            assert_eq!(basis_size(d, n), 1);
        }
        let d = Dims { c: 2, a: 2, b: 2 };
        assert_eq!(basis_size(d, 2), 16);
        assert_eq!(basis_size(d, 3), 128);
        assert!(basis_size_checked(d, 3, 1 << 20).is_ok());
        assert!(matches!(
            basis_size_checked(d, 10, 1 << 20),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn flatten_layout_example() {
        let d = Dims { c: 2, a: 2, b: 2 };
        let idx = TensorMatrixIndex {
            c: 1,
            a: vec![0, 0],
            b: vec![0],
        };
        assert_eq!(flatten(d, &idx), 8);
        assert_eq!(flatten(d, &unflatten(d, 2, 0)), 0);
    }

    #[test]
    fn flatten_unflatten_inverse_exhaustive() {
        for d in [Dims { c: 2, a: 2, b: 2 }, Dims { c: 3, a: 2, b: 1 }, Dims { c: 1, a: 3, b: 2 }] {
            for n in 0..=3 {
                let size = basis_size(d, n);
                assert!(size <= 4096);
                for k in 0..size {
                    let idx = unflatten(d, n, k);
                    assert_eq!(flatten(d, &idx), k, "dims {d:?} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn pair_order_is_lexicographic() {
        assert_eq!(pair_list(4), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (i, &(p, q)) in pair_list(5).iter().enumerate() {
            assert_eq!(pair_pos(p, q, 5), i);
        }
    }

    #[test]
    fn region_products_in_dual_number_b() {
        // B = Q[x]/(x^2): a block of two x entries multiplies to zero.
        let e = fixtures::f3();
        let idx = TensorMatrixIndex {
            c: 0,
            a: vec![0, 0, 0],
            b: vec![1, 1, 0], // b(0,1) = x, b(0,2) = x, b(1,2) = 1
        };
        let p = b_region_product(&e, &idx, 0..1, 1..3);
        assert!(crate::rational::vec_is_zero(&p), "x * x = 0 in B");
        let single = b_region_product(&e, &idx, 0..1, 1..2);
        assert_eq!(single, crate::rational::basis_vec(2, 1));
        // unit: empty region
        let empty = b_region_product(&e, &idx, 0..0, 0..3);
        assert_eq!(empty, e.b.unit);
    }

    #[test]
    fn psi_iterate_flip_is_permutation() {
        let e = fixtures::f3();
        for k in 0..3 {
            let m = psi_iterate(&e, k);
            // flip: every column has exactly one entry, equal to 1
            for col in 0..m.cols() {
                let entries: Vec<_> = m.column(col).iter().collect();
                assert_eq!(entries.len(), 1);
                assert_eq!(entries[0].1, &crate::rational::rint(1));
            }
        }
        assert_eq!(psi_iterate(&e, 0), {
            // k = 0: identity on C
            Matrix::identity(e.c.dim)
        });
    }

    #[test]
    fn psi_iterate_group_bialgebra_example() {
        // f2: psi(g (x) g) = g (x) 1: input (c=1, a=1) -> output (a=1, c=0)
        let e = fixtures::f2();
        let m = psi_iterate(&e, 1);
        // input index c*dimA + a = 1*2+1 = 3; output index a*dimC + c = 1*2+0 = 2
        assert_eq!(m.get(2, 3), crate::rational::rint(1));
        assert_eq!(m.column(3).len(), 1);
    }

    #[test]
    fn psi_iterate_recursion() {
        // psi^(k+1) factors as psi at the last slot after psi^k on the prefix.
        let e = fixtures::f2();
        for k in 0..2usize {
            let dims = Dims::of(&e);
            for c in 0..dims.c {
                for flat in 0..dims.a.pow((k + 1) as u32) {
                    let mut rest = flat;
                    let mut a = vec![0usize; k + 1];
                    for slot in (0..k + 1).rev() {
                        a[slot] = rest % dims.a;
                        rest /= dims.a;
                    }
                    let direct = psi_iterate_expand(&e, c, &a);
                    // recursion: expand prefix, then entwine the last slot
                    let mut recur = Vec::new();
                    for (coef, tw, cc) in psi_iterate_expand(&e, c, &a[..k]) {
                        for (pc, a2, c2) in e.psi.pairs(cc, a[k]) {
                            let mut t2 = tw.clone();
                            t2.push(a2);
                            recur.push((&coef * &pc, t2, c2));
                        }
                    }
                    let norm = |mut v: Vec<(Rational, Vec<usize>, usize)>| {
                        v.sort_by(|x, y| (&x.1, x.2).cmp(&(&y.1, y.2)));
                        v
                    };
                    assert_eq!(norm(direct), norm(recur));
                }
            }
        }
    }
}
