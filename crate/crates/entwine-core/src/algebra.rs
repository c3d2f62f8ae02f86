//! Structure-constant presentations of the input data: the algebras `A`
//! and `B`, the coalgebra `C`, the entwining map, the central map from `B`
//! to `A`, and coefficient bimodules — together with exhaustive validators
//! for every axiom. Structure constants are the single source of truth;
//! every axiom is a finite exact identity over Q, checked entrywise, and
//! failures carry a witness index tuple for debugging fixtures.

use crate::rational::{basis_vec, zero_vec, Rational, Vector};
use crate::{Error, Result};
use num::traits::Zero;

/// Rank-3 tensor `t[i][j][k]`.
pub type Tensor3 = Vec<Vec<Vec<Rational>>>;
/// Rank-4 tensor `t[c][a][a2][c2]`.
pub type Tensor4 = Vec<Vec<Vec<Vec<Rational>>>>;

pub fn tensor3(d0: usize, d1: usize, d2: usize) -> Tensor3 {
    vec![vec![zero_vec(d2); d1]; d0]
}

pub fn tensor4(d0: usize, d1: usize, d2: usize, d3: usize) -> Tensor4 {
    vec![vec![vec![zero_vec(d3); d2]; d1]; d0]
}

/// A finite-dimensional unital associative algebra:
/// `e_i . e_j = sum_k mult[i][j][k] e_k`, `1 = sum_i unit[i] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureAlgebra {
    pub dim: usize,
    pub mult: Tensor3,
    pub unit: Vector,
}

impl StructureAlgebra {
    pub fn mul_elems(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coef = xi * yj;
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &coef * m;
                    }
                }
            }
        }
        out
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i][j]
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.mult[i][j] != self.mult[j][i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn product_of_basis(&self, idxs: &[usize]) -> Vector {
        let mut acc = self.unit.clone();
        for &i in idxs {
            acc = self.mul_elems(&acc, &basis_vec(self.dim, i));
        }
        acc
    }
}

/// A finite-dimensional counital coassociative coalgebra:
/// `Delta(e_k) = sum_{i,j} comult[k][i][j] e_i (x) e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureCoalgebra {
    pub dim: usize,
    pub comult: Tensor3,
    pub counit: Vector,
}

impl StructureCoalgebra {
    /// Sparse expansion of `Delta(e_k)`.
    pub fn comult_pairs(&self, k: usize) -> Vec<(Rational, usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.comult[k].iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push((v.clone(), i, j));
                }
            }
        }
        out
    }
}

/// The entwining map as a rank-4 tensor:
/// `psi(e_c (x) e_a) = sum_{a2,c2} psi[c][a][a2][c2] e_a2 (x) e_c2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntwiningMap {
    pub dim_c: usize,
    pub dim_a: usize,
    pub psi: Tensor4,
}

impl EntwiningMap {
    pub fn pairs(&self, c: usize, a: usize) -> Vec<(Rational, usize, usize)> {
        let mut out = Vec::new();
        for (a2, row) in self.psi[c][a].iter().enumerate() {
            for (c2, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push((v.clone(), a2, c2));
                }
            }
        }
        out
    }
}

/// The full input datum: algebras `A` and `B` (the latter commutative), a
/// coalgebra `C`, the entwining map, and the central unital algebra map
/// `zeta[b]` giving the image of the `b`-th basis element of `B` in `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct BEntwining {
    pub a: StructureAlgebra,
    pub b: StructureAlgebra,
    pub c: StructureCoalgebra,
    pub psi: EntwiningMap,
    pub zeta: Vec<Vector>,
}

impl BEntwining {
    pub fn zeta_of(&self, bvec: &[Rational]) -> Vector {
        let mut out = zero_vec(self.a.dim);
        for (b, coef) in bvec.iter().enumerate() {
            if !coef.is_zero() {
                for (k, z) in self.zeta[b].iter().enumerate() {
                    if !z.is_zero() {
                        out[k] += coef * z;
                    }
                }
            }
        }
        out
    }

    /// Full validation: component structures, the four entwining axioms,
    /// centrality, the psi/zeta exchange rule, zeta as a unital algebra
    /// morphism, and commutativity of `B`.
    pub fn validate_all(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        rep.extend("A", validate_algebra(&self.a));
        rep.extend("B", validate_algebra(&self.b));
        rep.check_with_witness("B commutative", b_commutative_witness(&self.b));
        rep.extend("C", validate_coalgebra(&self.c));
        rep.merge(validate_entwining(self));
        rep
    }
}

/// One axiom, pass/fail, and a witness index tuple on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub witness: Option<Vec<usize>>,
}

/// Outcome of validating a structure; one entry per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, axiom: impl Into<String>, witness: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.into(),
            passed: witness.is_none(),
            witness,
        });
    }

    fn check_with_witness(&mut self, axiom: &str, witness: Option<Vec<usize>>) {
        self.push(axiom, witness);
    }

    fn extend(&mut self, prefix: &str, other: ValidationReport) {
        for mut c in other.checks {
            c.axiom = format!("{prefix}: {}", c.axiom);
            self.checks.push(c);
        }
    }

    fn merge(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn dims_ok_algebra(a: &StructureAlgebra) -> Option<Vec<usize>> {
    if a.unit.len() != a.dim || a.mult.len() != a.dim {
        return Some(vec![a.dim]);
    }
    for (i, mi) in a.mult.iter().enumerate() {
        if mi.len() != a.dim {
            return Some(vec![i]);
        }
        for (j, mij) in mi.iter().enumerate() {
            if mij.len() != a.dim {
                return Some(vec![i, j]);
            }
        }
    }
    None
}

fn b_commutative_witness(b: &StructureAlgebra) -> Option<Vec<usize>> {
    for i in 0..b.dim {
        for j in 0..b.dim {
            for k in 0..b.dim {
                if b.mult[i][j][k] != b.mult[j][i][k] {
                    return Some(vec![i, j, k]);
                }
            }
        }
    }
    None
}

/// Associativity and both unit laws, each reported with a witness on
/// failure.
pub fn validate_algebra(a: &StructureAlgebra) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if let Some(w) = dims_ok_algebra(a) {
        rep.push("tensor shapes", Some(w));
        return rep;
    }
    rep.push("tensor shapes", None);

    let mut assoc = None;
    'outer: for i in 0..a.dim {
        for j in 0..a.dim {
            for k in 0..a.dim {
                for q in 0..a.dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for p in 0..a.dim {
                        lhs += &a.mult[i][j][p] * &a.mult[p][k][q];
                        rhs += &a.mult[j][k][p] * &a.mult[i][p][q];
                    }
                    if lhs != rhs {
                        assoc = Some(vec![i, j, k, q]);
                        break 'outer;
                    }
                }
            }
        }
    }
    rep.push("associativity", assoc);

    let mut left_unit = None;
    'lu: for j in 0..a.dim {
        let prod = a.mul_elems(&a.unit, &basis_vec(a.dim, j));
        if prod != basis_vec(a.dim, j) {
            left_unit = Some(vec![j]);
            break 'lu;
        }
    }
    rep.push("left unit law", left_unit);

    let mut right_unit = None;
    for j in 0..a.dim {
        let prod = a.mul_elems(&basis_vec(a.dim, j), &a.unit);
        if prod != basis_vec(a.dim, j) {
            right_unit = Some(vec![j]);
            break;
        }
    }
    rep.push("right unit law", right_unit);
    rep
}

/// Coassociativity, both counit laws, and the nonzero-dimension rule.
pub fn validate_coalgebra(c: &StructureCoalgebra) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if c.dim == 0 {
        rep.push("dim >= 1", Some(vec![0]));
        return rep;
    }
    rep.push("dim >= 1", None);
    if c.counit.len() != c.dim
        || c.comult.len() != c.dim
        || c.comult
            .iter()
            .any(|m| m.len() != c.dim || m.iter().any(|r| r.len() != c.dim))
    {
        rep.push("tensor shapes", Some(vec![c.dim]));
        return rep;
    }
    rep.push("tensor shapes", None);

    let mut coassoc = None;
    'outer: for k in 0..c.dim {
        for x in 0..c.dim {
            for y in 0..c.dim {
                for z in 0..c.dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for i in 0..c.dim {
                        lhs += &c.comult[k][i][z] * &c.comult[i][x][y];
                        rhs += &c.comult[k][x][i] * &c.comult[i][y][z];
                    }
                    if lhs != rhs {
                        coassoc = Some(vec![k, x, y, z]);
                        break 'outer;
                    }
                }
            }
        }
    }
    rep.push("coassociativity", coassoc);

    let mut left_counit = None;
    'lc: for k in 0..c.dim {
        for j in 0..c.dim {
            let mut s = Rational::zero();
            for i in 0..c.dim {
                s += &c.comult[k][i][j] * &c.counit[i];
            }
            let expect = if k == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            };
            if s != expect {
                left_counit = Some(vec![k, j]);
                break 'lc;
            }
        }
    }
    rep.push("left counit law", left_counit);

    let mut right_counit = None;
    'rc: for k in 0..c.dim {
        for i in 0..c.dim {
            let mut s = Rational::zero();
            for j in 0..c.dim {
                s += &c.comult[k][i][j] * &c.counit[j];
            }
            let expect = if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            };
            if s != expect {
                right_counit = Some(vec![k, i]);
                break 'rc;
            }
        }
    }
    rep.push("right counit law", right_counit);
    rep
}

/// The four entwining axioms plus centrality and the zeta exchange rule,
/// and zeta as a unital algebra morphism.
pub fn validate_entwining(e: &BEntwining) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let (da, dc, db) = (e.a.dim, e.c.dim, e.b.dim);
    let shapes_ok = e.psi.dim_a == da
        && e.psi.dim_c == dc
        && e.psi.psi.len() == dc
        && e.psi.psi.iter().all(|p| {
            p.len() == da
                && p.iter()
                    .all(|q| q.len() == da && q.iter().all(|r| r.len() == dc))
        })
        && e.zeta.len() == db
        && e.zeta.iter().all(|z| z.len() == da);
    rep.push(
        "psi/zeta tensor shapes",
        if shapes_ok { None } else { Some(vec![da, db, dc]) },
    );
    if !shapes_ok {
        return rep;
    }
    let psi = &e.psi.psi;

    // psi(c (x) ab) = a_psi b_psi (x) c^{psi psi}
    let mut mult_ax = None;
    'm: for c in 0..dc {
        for a1 in 0..da {
            for a2 in 0..da {
                for a3 in 0..da {
                    for c3 in 0..dc {
                        let mut lhs = Rational::zero();
                        for k in 0..da {
                            if !e.a.mult[a1][a2][k].is_zero() {
                                lhs += &e.a.mult[a1][a2][k] * &psi[c][k][a3][c3];
                            }
                        }
                        let mut rhs = Rational::zero();
                        for x in 0..da {
                            for c1 in 0..dc {
                                if psi[c][a1][x][c1].is_zero() {
                                    continue;
                                }
                                for y in 0..da {
                                    if e.a.mult[x][y][a3].is_zero() {
                                        continue;
                                    }
                                    rhs +=
                                        &psi[c][a1][x][c1] * &psi[c1][a2][y][c3] * &e.a.mult[x][y][a3];
                                }
                            }
                        }
                        if lhs != rhs {
                            mult_ax = Some(vec![c, a1, a2, a3, c3]);
                            break 'm;
                        }
                    }
                }
            }
        }
    }
    rep.push("entwining: multiplicativity", mult_ax);

    // (A (x) Delta) psi = (psi (x) C)(C (x) psi)(Delta (x) A)
    let mut comult_ax = None;
    'cm: for c in 0..dc {
        for a in 0..da {
            for a2 in 0..da {
                for c1 in 0..dc {
                    for c2 in 0..dc {
                        let mut lhs = Rational::zero();
                        for cp in 0..dc {
                            if !psi[c][a][a2][cp].is_zero() {
                                lhs += &psi[c][a][a2][cp] * &e.c.comult[cp][c1][c2];
                            }
                        }
                        let mut rhs = Rational::zero();
                        for d1 in 0..dc {
                            for d2 in 0..dc {
                                if e.c.comult[c][d1][d2].is_zero() {
                                    continue;
                                }
                                for x in 0..da {
                                    rhs += &e.c.comult[c][d1][d2]
                                        * &psi[d2][a][x][c2]
                                        * &psi[d1][x][a2][c1];
                                }
                            }
                        }
                        if lhs != rhs {
                            comult_ax = Some(vec![c, a, a2, c1, c2]);
                            break 'cm;
                        }
                    }
                }
            }
        }
    }
    rep.push("entwining: comultiplicativity", comult_ax);

    // a_psi eps(c^psi) = eps(c) a
    let mut counit_ax = None;
    'cu: for c in 0..dc {
        for a in 0..da {
            for a2 in 0..da {
                let mut lhs = Rational::zero();
                for cp in 0..dc {
                    if !psi[c][a][a2][cp].is_zero() {
                        lhs += &psi[c][a][a2][cp] * &e.c.counit[cp];
                    }
                }
                let rhs = if a == a2 {
                    e.c.counit[c].clone()
                } else {
                    Rational::zero()
                };
                if lhs != rhs {
                    counit_ax = Some(vec![c, a, a2]);
                    break 'cu;
                }
            }
        }
    }
    rep.push("entwining: counit", counit_ax);

    // psi(c (x) 1) = 1 (x) c
    let mut unit_ax = None;
    'un: for c in 0..dc {
        for a2 in 0..da {
            for c2 in 0..dc {
                let mut lhs = Rational::zero();
                for a in 0..da {
                    if !e.a.unit[a].is_zero() {
                        lhs += &e.a.unit[a] * &psi[c][a][a2][c2];
                    }
                }
                let rhs = if c == c2 {
                    e.a.unit[a2].clone()
                } else {
                    Rational::zero()
                };
                if lhs != rhs {
                    unit_ax = Some(vec![c, a2, c2]);
                    break 'un;
                }
            }
        }
    }
    rep.push("entwining: unit", unit_ax);

    // zeta(b) a = a zeta(b)
    let mut central = None;
    'ce: for b in 0..db {
        for a in 0..da {
            for q in 0..da {
                let mut diff = Rational::zero();
                for k in 0..da {
                    if !e.zeta[b][k].is_zero() {
                        diff += &e.zeta[b][k] * (&e.a.mult[k][a][q] - &e.a.mult[a][k][q]);
                    }
                }
                if !diff.is_zero() {
                    central = Some(vec![b, a, q]);
                    break 'ce;
                }
            }
        }
    }
    rep.push("zeta centrality", central);

    // psi(c (x) zeta(b)) = zeta(b) (x) c
    let mut compat = None;
    'cp: for b in 0..db {
        for c in 0..dc {
            for a2 in 0..da {
                for c2 in 0..dc {
                    let mut lhs = Rational::zero();
                    for k in 0..da {
                        if !e.zeta[b][k].is_zero() {
                            lhs += &e.zeta[b][k] * &psi[c][k][a2][c2];
                        }
                    }
                    let rhs = if c == c2 {
                        e.zeta[b][a2].clone()
                    } else {
                        Rational::zero()
                    };
                    if lhs != rhs {
                        compat = Some(vec![b, c, a2, c2]);
                        break 'cp;
                    }
                }
            }
        }
    }
    rep.push("psi/zeta exchange", compat);

    // zeta is a unital algebra morphism. Algebra morphisms are taken
    // unital here even though the defining data only says "morphism".
    let mut morphism = None;
    'mo: for b1 in 0..db {
        for b2 in 0..db {
            let mut prod_b = zero_vec(db);
            for k in 0..db {
                prod_b[k] = e.b.mult[b1][b2][k].clone();
            }
            let lhs = e.zeta_of(&prod_b);
            let rhs = e.a.mul_elems(&e.zeta[b1], &e.zeta[b2]);
            if lhs != rhs {
                morphism = Some(vec![b1, b2]);
                break 'mo;
            }
        }
    }
    rep.push("zeta multiplicative", morphism);
    let unital = if e.zeta_of(&e.b.unit) == e.a.unit {
        None
    } else {
        Some(vec![0])
    };
    rep.push("zeta unital", unital);
    rep
}

/// An `A`-bimodule by structure constants: `e_a . e_m = sum left[a][m][m2]
/// e_m2` and `e_m . e_a = sum right[m][a][m2] e_m2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Tensor3,
    pub right: Tensor3,
}

impl Bimodule {
    /// `A` acting on itself by multiplication.
    pub fn regular(a: &StructureAlgebra) -> Self {
        Bimodule {
            dim: a.dim,
            left: a.mult.clone(),
            right: a.mult.clone(),
        }
    }

    pub fn left_act(&self, a: usize, m: usize) -> &Vector {
        &self.left[a][m]
    }

    pub fn right_act(&self, m: usize, a: usize) -> &Vector {
        &self.right[m][a]
    }

    pub fn left_elem(&self, avec: &[Rational], m: &[Rational]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (a, ca) in avec.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (mi, cm) in m.iter().enumerate() {
                if cm.is_zero() {
                    continue;
                }
                let coef = ca * cm;
                for (k, v) in self.left[a][mi].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &coef * v;
                    }
                }
            }
        }
        out
    }

    pub fn right_elem(&self, m: &[Rational], avec: &[Rational]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (a, ca) in avec.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (mi, cm) in m.iter().enumerate() {
                if cm.is_zero() {
                    continue;
                }
                let coef = ca * cm;
                for (k, v) in self.right[mi][a].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &coef * v;
                    }
                }
            }
        }
        out
    }
}

/// Bimodule axioms over `a`, plus the `B`-symmetry rule `zeta(b) m = m
/// zeta(b)` required of coefficient modules.
pub fn validate_bimodule(m: &Bimodule, e: &BEntwining) -> ValidationReport {
    let a = &e.a;
    let mut rep = ValidationReport::default();
    let shapes = m.left.len() == a.dim
        && m.right.len() == m.dim
        && m.left
            .iter()
            .all(|x| x.len() == m.dim && x.iter().all(|y| y.len() == m.dim))
        && m.right
            .iter()
            .all(|x| x.len() == a.dim && x.iter().all(|y| y.len() == m.dim));
    rep.push(
        "bimodule tensor shapes",
        if shapes { None } else { Some(vec![m.dim]) },
    );
    if !shapes {
        return rep;
    }

    let mut left_assoc = None;
    'la: for a1 in 0..a.dim {
        for a2 in 0..a.dim {
            for mi in 0..m.dim {
                for q in 0..m.dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for p in 0..a.dim {
                        lhs += &a.mult[a1][a2][p] * &m.left[p][mi][q];
                    }
                    for p in 0..m.dim {
                        rhs += &m.left[a2][mi][p] * &m.left[a1][p][q];
                    }
                    if lhs != rhs {
                        left_assoc = Some(vec![a1, a2, mi, q]);
                        break 'la;
                    }
                }
            }
        }
    }
    rep.push("left action associativity", left_assoc);

    let mut right_assoc = None;
    'ra: for a1 in 0..a.dim {
        for a2 in 0..a.dim {
            for mi in 0..m.dim {
                for q in 0..m.dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for p in 0..m.dim {
                        lhs += &m.right[mi][a1][p] * &m.right[p][a2][q];
                    }
                    for p in 0..a.dim {
                        rhs += &a.mult[a1][a2][p] * &m.right[mi][p][q];
                    }
                    if lhs != rhs {
                        right_assoc = Some(vec![a1, a2, mi, q]);
                        break 'ra;
                    }
                }
            }
        }
    }
    rep.push("right action associativity", right_assoc);

    let mut commute = None;
    'co: for a1 in 0..a.dim {
        for a2 in 0..a.dim {
            for mi in 0..m.dim {
                for q in 0..m.dim {
                    let mut lhs = Rational::zero();
                    let mut rhs = Rational::zero();
                    for p in 0..m.dim {
                        lhs += &m.left[a1][mi][p] * &m.right[p][a2][q];
                        rhs += &m.right[mi][a2][p] * &m.left[a1][p][q];
                    }
                    if lhs != rhs {
                        commute = Some(vec![a1, a2, mi, q]);
                        break 'co;
                    }
                }
            }
        }
    }
    rep.push("actions commute", commute);

    let mut unit_l = None;
    for mi in 0..m.dim {
        if m.left_elem(&a.unit, &basis_vec(m.dim, mi)) != basis_vec(m.dim, mi) {
            unit_l = Some(vec![mi]);
            break;
        }
    }
    rep.push("unit acts as identity (left)", unit_l);
    let mut unit_r = None;
    for mi in 0..m.dim {
        if m.right_elem(&basis_vec(m.dim, mi), &a.unit) != basis_vec(m.dim, mi) {
            unit_r = Some(vec![mi]);
            break;
        }
    }
    rep.push("unit acts as identity (right)", unit_r);

    let mut sym = None;
    'sy: for b in 0..e.b.dim {
        let zb = &e.zeta[b];
        for mi in 0..m.dim {
            let lhs = m.left_elem(zb, &basis_vec(m.dim, mi));
            let rhs = m.right_elem(&basis_vec(m.dim, mi), zb);
            if lhs != rhs {
                sym = Some(vec![b, mi]);
                break 'sy;
            }
        }
    }
    rep.push("B-symmetry: zeta(b) m = m zeta(b)", sym);
    rep
}

/// The bimodule of maps from `C` to `M`, with `(g.a)(c) = g(c).a` and
/// `(a.g)(c) = a_psi . g(c^psi)`. Basis index of a map: `c * dim_m + m`
/// for the map sending `e_c` to `e_m` and other basis elements to zero.
/// The construction asserts its own bimodule axioms and `B`-symmetry;
/// failure means the input entwining is invalid.
pub fn hom_cm_bimodule(e: &BEntwining, m: &Bimodule) -> Result<Bimodule> {
    let (dc, da, dm) = (e.c.dim, e.a.dim, m.dim);
    let dim = dc * dm;
    let idx = |c: usize, mm: usize| c * dm + mm;
    let mut left = tensor3(da, dim, dim);
    let mut right = tensor3(dim, da, dim);
    for c in 0..dc {
        for mm in 0..dm {
            let g = idx(c, mm);
            for a in 0..da {
                // (g . a) sends e_c to e_m . e_a
                for (k, v) in m.right[mm][a].iter().enumerate() {
                    if !v.is_zero() {
                        right[g][a][idx(c, k)] += v;
                    }
                }
                // (a . g)(e_cin) = sum psi[cin][a][a2][c] (e_a2 . e_m)
                for cin in 0..dc {
                    for a2 in 0..da {
                        let p = &e.psi.psi[cin][a][a2][c];
                        if p.is_zero() {
                            continue;
                        }
                        for (k, v) in m.left[a2][mm].iter().enumerate() {
                            if !v.is_zero() {
                                left[a][g][idx(cin, k)] += p * v;
                            }
                        }
                    }
                }
            }
        }
    }
    let out = Bimodule { dim, left, right };
    let rep = validate_bimodule(&out, e);
    if let Some(fail) = rep.first_failure() {
        return Err(Error::Invariant(format!(
            "Hom(C,M) bimodule failed its own axiom {:?} at {:?}; input entwining invalid",
            fail.axiom, fail.witness
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rint;
    use proptest::prelude::*;

    #[test]
    fn rationals_algebra_validates() {
        let a = fixtures::algebra_q();
        assert!(validate_algebra(&a).all_passed());
    }

    #[test]
    fn dual_numbers_validate() {
        let a = fixtures::algebra_dual_numbers();
        assert!(validate_algebra(&a).all_passed());
        assert!(a.is_commutative());
    }

    #[test]
    fn broken_unit_law_reports_witness() {
        // e1 e1 = e1, but 1 . e1 is forced to 0: left unit fails on e1
        let mut a = fixtures::algebra_dual_numbers();
        a.mult[1][1][1] = rint(1);
        a.mult[0][1][1] = rint(0);
        let rep = validate_algebra(&a);
        assert!(!rep.all_passed());
        let fail = rep.first_failure().unwrap();
        assert!(fail.witness.is_some(), "failure must carry a witness");
    }

    #[test]
    fn fixtures_all_validate() {
        for (name, e) in fixtures::all_valid() {
            let rep = e.validate_all();
            assert!(
                rep.all_passed(),
                "{name}: {:?}",
                rep.first_failure().unwrap()
            );
        }
    }

    #[test]
    fn bad_zeta_fixture_fails_exchange_rule() {
        let e = fixtures::f2_bad_zeta();
        let rep = validate_entwining(&e);
        assert!(!rep.all_passed());
        let fail = rep.first_failure().unwrap();
        assert_eq!(fail.axiom, "psi/zeta exchange");
    }

    #[test]
    fn hom_cm_regular_trivial_c_is_regular() {
        // C = Q trivial: Hom(C, A) is A itself with the regular actions.
        let e = fixtures::f1();
        let m = Bimodule::regular(&e.a);
        let h = hom_cm_bimodule(&e, &m).unwrap();
        assert_eq!(h.dim, e.a.dim);
        assert_eq!(h.left, m.left);
        assert_eq!(h.right, m.right);
    }

    #[test]
    fn hom_cm_flip_commutative_is_symmetric() {
        let e = fixtures::f3();
        let m = Bimodule::regular(&e.a);
        let h = hom_cm_bimodule(&e, &m).unwrap();
        assert_eq!(h.dim, e.c.dim * e.a.dim);
        // flip psi and commutative A make the bimodule symmetric
        for a in 0..e.a.dim {
            for g in 0..h.dim {
                for k in 0..h.dim {
                    assert_eq!(h.left[a][g][k], h.right[g][a][k]);
                }
            }
        }
    }

    proptest! {
        // flip is an entwining for any valid algebra/coalgebra pair
        #[test]
        fn flip_always_entwines(u in -3i64..=3, v in -3i64..=3, w in -3i64..=3, t in -3i64..=3) {
            let a = fixtures::algebra_quadratic(rint(u), rint(v));
            let c = fixtures::coalgebra_dual_quadratic(rint(w), rint(t));
            let e = fixtures::flip_entwining(a, c);
            prop_assert!(e.validate_all().all_passed());
        }
    }
}
