//! The coaction-equivariant subcomplex of the secondary complex with
//! coefficients in the algebra: cochains intertwining the left and right
//! coalgebra coactions through the entwining map. On this subcomplex the
//! two cup products coincide at the cochain level, the composition
//! operations satisfy the unrestricted composition-algebra laws, and the
//! cohomology carries a Gerstenhaber algebra.
//!
//! Equivariance is computed as the kernel of an assembled linear
//! condition, so each degree gets an explicit basis for restricting the
//! differential and for reducing products modulo coboundaries.

use crate::comp::CompContext;
use crate::complex::{chain_cohomology, Cochain, CohomologyReport, SecondaryComplex};
use crate::matrix::{Matrix, Subspace};
use crate::rational::{Rational, Vector};
use crate::tensor::{basis_size, flatten, psi_iterate_expand, unflatten, Dims, TensorMatrixIndex};
use crate::{Error, Result};
use num::traits::Zero;

/// The two coactions on `C (x) A^(n) (x) B^(...)`: the left one splits the
/// coalgebra index, the right one splits it and entwines the second leg
/// through all `n` algebra slots. Output index layouts: left `(c1, v)` as
/// `c1 * basis + v`, right `(v, c2)` as `v * dimC + c2`.
pub struct CoactionPair {
    pub degree: usize,
    pub rho_l: Matrix,
    pub rho_r: Matrix,
}

pub fn coactions(e: &crate::algebra::BEntwining, n: usize) -> CoactionPair {
    let dims = Dims::of(e);
    let bs = basis_size(dims, n);
    let mut rho_l = Matrix::zero(dims.c * bs, bs);
    let mut rho_r = Matrix::zero(bs * dims.c, bs);
    for v in 0..bs {
        let idx = unflatten(dims, n, v);
        for (dco, c1, c2) in e.c.comult_pairs(idx.c) {
            let left_idx = TensorMatrixIndex {
                c: c2,
                a: idx.a.clone(),
                b: idx.b.clone(),
            };
            rho_l.add_to(c1 * bs + flatten(dims, &left_idx), v, dco.clone());
            for (pco, twisted, c2p) in psi_iterate_expand(e, c2, &idx.a) {
                let right_idx = TensorMatrixIndex {
                    c: c1,
                    a: twisted,
                    b: idx.b.clone(),
                };
                rho_r.add_to(flatten(dims, &right_idx) * dims.c + c2p, v, &dco * &pco);
            }
        }
    }
    CoactionPair {
        degree: n,
        rho_l,
        rho_r,
    }
}

/// Check the intertwining square of the right coaction on the plain space
/// `C (x) A^(n)` against an inner multiplication slot `j`:
/// `rho_R . (id (x) mu_j) = (id (x) mu_j (x) id) . rho_R`.
pub fn rho_r_intertwines_multiplication(
    e: &crate::algebra::BEntwining,
    n: usize,
    j: usize,
) -> bool {
    let dims = Dims::of(e);
    let da = dims.a;
    let size_in = dims.c * da.pow((n + 1) as u32);
    let rho = |deg: usize| -> Matrix {
        let sz = dims.c * da.pow(deg as u32);
        let mut m = Matrix::zero(sz * dims.c, sz);
        for v in 0..sz {
            let mut rest = v;
            let mut a = vec![0usize; deg];
            for slot in (0..deg).rev() {
                a[slot] = rest % da;
                rest /= da;
            }
            let c = rest;
            for (dco, c1, c2) in e.c.comult_pairs(c) {
                for (pco, tw, c2p) in psi_iterate_expand(e, c2, &a) {
                    let mut out = c1;
                    for &t in &tw {
                        out = out * da + t;
                    }
                    m.add_to(out * dims.c + c2p, v, &dco * &pco);
                }
            }
        }
        m
    };
    // multiplication at slot j: C (x) A^(n+1) -> C (x) A^(n)
    let mul_mat = |deg_in: usize| -> Matrix {
        let sz_in = dims.c * da.pow(deg_in as u32);
        let sz_out = dims.c * da.pow((deg_in - 1) as u32);
        let mut m = Matrix::zero(sz_out, sz_in);
        for v in 0..sz_in {
            let mut rest = v;
            let mut a = vec![0usize; deg_in];
            for slot in (0..deg_in).rev() {
                a[slot] = rest % da;
                rest /= da;
            }
            let c = rest;
            for (k, coef) in e.a.mult[a[j]][a[j + 1]].iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let mut a2 = a.clone();
                a2.remove(j + 1);
                a2[j] = k;
                let mut out = c;
                for &t in &a2 {
                    out = out * da + t;
                }
                m.add_to(out, v, coef.clone());
            }
        }
        m
    };
    let lhs = rho(n).mul(&mul_mat(n + 1));
    // (id (x) mu_j (x) id_C) after rho at degree n+1
    let rho_n1 = rho(n + 1);
    let base = mul_mat(n + 1);
    let mut mul_c = Matrix::zero(dims.c * da.pow(n as u32) * dims.c, size_in * dims.c);
    for (r, c_in, val) in base.iter_entries() {
        for cc in 0..dims.c {
            mul_c.add_to(r * dims.c + cc, c_in * dims.c + cc, val.clone());
        }
    }
    let rhs = mul_c.mul(&rho_n1);
    lhs == rhs
}

/// Basis of the degree-`n` equivariant cochains, as vectors in the
/// vectorized cochain space.
pub struct EquivariantSubspace {
    pub degree: usize,
    pub basis: Vec<Vector>,
}

impl EquivariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        Subspace {
            ambient_dim: v.len(),
            basis: self.basis.clone(),
        }
        .coords(v)
        .is_some()
    }
}

/// The linear equivariance condition on degree-`n` cochains with values
/// in `A`: entwining the output against the right coaction must agree
/// with feeding the left coaction through the cochain and entwining. The
/// returned operator maps cochain vectors to `V_n -> A (x) C` vectors;
/// its kernel is the equivariant subspace.
pub fn equivariance_condition(cx: &SecondaryComplex, n: usize) -> Result<Matrix> {
    let e = cx.entwining();
    let dims = cx.dims();
    if cx.coefficients().dim != dims.a {
        return Err(Error::Hypothesis(
            "equivariant subcomplex requires coefficients A".into(),
        ));
    }
    let bs = cx.basis_size(n)?;
    let da = dims.a;
    let dc = dims.c;
    let pair = coactions(e, n);
    let mut k_op = Matrix::zero(bs * da * dc, bs * da);
    // (f (x) id) . rho_R
    for (out, v, coef) in pair.rho_r.iter_entries() {
        let (v2, c2) = (out / dc, out % dc);
        for k in 0..da {
            k_op.add_to(v * da * dc + k * dc + c2, v2 * da + k, coef.clone());
        }
    }
    // minus psi . (id (x) f) . rho_L
    for (out, v, coef) in pair.rho_l.iter_entries() {
        let (c1, v2) = (out / bs, out % bs);
        for k in 0..da {
            for (pco, k2, c2) in e.psi.pairs(c1, k) {
                k_op.add_to(v * da * dc + k2 * dc + c2, v2 * da + k, -(coef * &pco));
            }
        }
    }
    Ok(k_op)
}

pub fn equivariant_subspace(cx: &SecondaryComplex, n: usize) -> Result<EquivariantSubspace> {
    let k_op = equivariance_condition(cx, n)?;
    Ok(EquivariantSubspace {
        degree: n,
        basis: k_op.kernel().basis,
    })
}

/// Restriction of the differential to the equivariant subspaces: asserts
/// image containment first (its failure means an invalid fixture or a
/// bug) and returns the matrix in the subspace bases.
pub fn restricted_differential(
    cx: &SecondaryComplex,
    sub_n: &EquivariantSubspace,
    sub_n1: &EquivariantSubspace,
) -> Result<Matrix> {
    let d = cx.differential(sub_n.degree)?;
    let target = Subspace {
        ambient_dim: cx.space_dim(sub_n.degree + 1)?,
        basis: sub_n1.basis.clone(),
    };
    let mut out = Matrix::zero(sub_n1.dim(), sub_n.dim());
    for (j, v) in sub_n.basis.iter().enumerate() {
        let dv = d.mul_vec(v);
        let coords = target.coords(&dv).ok_or_else(|| {
            Error::Invariant(format!(
                "differential does not preserve the equivariant subspace at degree {}",
                sub_n.degree
            ))
        })?;
        out.set_column(j, &coords);
    }
    Ok(out)
}

/// Equivariant subspaces through a top degree together with the restricted
/// differentials of the subcomplex.
pub struct EquivariantComplex {
    pub subspaces: Vec<EquivariantSubspace>,
    pub diffs: Vec<Matrix>,
}

impl EquivariantComplex {
    /// Subspaces for degrees `0 ..= max_degree + 1` and differentials for
    /// `0 ..= max_degree`.
    pub fn build(cx: &SecondaryComplex, max_degree: usize) -> Result<Self> {
        let mut subspaces = Vec::new();
        for n in 0..=max_degree + 1 {
            subspaces.push(equivariant_subspace(cx, n)?);
        }
        let mut diffs = Vec::new();
        for n in 0..=max_degree {
            diffs.push(restricted_differential(cx, &subspaces[n], &subspaces[n + 1])?);
        }
        Ok(EquivariantComplex { subspaces, diffs })
    }

    pub fn cohomology(&self, want_reps: bool) -> Result<CohomologyReport> {
        let dims: Vec<usize> = self.subspaces.iter().map(EquivariantSubspace::dim).collect();
        chain_cohomology(&dims, &self.diffs, want_reps)
    }

    /// Lift coordinates in the degree-`n` subspace basis to an ambient
    /// cochain vector.
    pub fn ambient(&self, n: usize, coords: &[Rational]) -> Vector {
        let basis = &self.subspaces[n].basis;
        let len = basis.first().map_or(0, Vec::len);
        let mut out = vec![Rational::zero(); len];
        for (c, b) in coords.iter().zip(basis) {
            crate::rational::add_assign_scaled(&mut out, b, c);
        }
        out
    }

    /// Is the ambient vector a coboundary of the subcomplex at degree `n`,
    /// i.e. the image of an equivariant cochain one degree down?
    pub fn bounds(&self, cx: &SecondaryComplex, n: usize, v: &[Rational]) -> Result<bool> {
        if n == 0 {
            return Ok(crate::rational::vec_is_zero(v));
        }
        let d = cx.differential(n - 1)?;
        let images: Vec<Vector> = self.subspaces[n - 1]
            .basis
            .iter()
            .map(|b| d.mul_vec(b))
            .collect();
        let m = Matrix::from_columns(v.len(), &images);
        Ok(m.solve(v).is_some())
    }
}

/// Sum of signed compositions `f <> g = sum_i (-1)^(i(n-1)) f <>_i g`.
pub fn circ(ctx: &CompContext, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (m, n) = (f.degree, g.degree);
    let deg = (m + n).saturating_sub(1);
    let da = ctx.dims().a;
    let mut acc = Cochain::zero(deg, da, ctx.complex().basis_size(deg)?);
    for i in 0..m {
        let sign = if (i * n.wrapping_sub(1)) % 2 == 0 {
            Rational::from_integer(1.into())
        } else {
            -Rational::from_integer(1.into())
        };
        acc = acc.add(&ctx.comp(f, i, g)?.scale(&sign));
    }
    Ok(acc)
}

/// The degree `-1` bracket `[f, g] = f <> g - (-1)^((m-1)(n-1)) g <> f`.
pub fn bracket(ctx: &CompContext, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (m, n) = (f.degree, g.degree);
    let fg = circ(ctx, f, g)?;
    let gf = circ(ctx, g, f)?;
    let sign = if (m.wrapping_sub(1) * n.wrapping_sub(1)) % 2 == 0 {
        Rational::from_integer(1.into())
    } else {
        -Rational::from_integer(1.into())
    };
    Ok(fg.sub(&gf.scale(&sign)))
}

/// Both composition products of a pair, as used by the structure
/// theorems.
pub fn circ_and_bracket(
    ctx: &CompContext,
    f: &Cochain,
    g: &Cochain,
) -> Result<(Cochain, Cochain)> {
    Ok((circ(ctx, f, g)?, bracket(ctx, f, g)?))
}

/// The unrestricted composition-algebra laws over equivariant samples:
/// the weak laws plus the two commutation laws for arbitrary inner
/// arguments. Checked as operator identities, quantifying over every
/// outer cochain of the listed degrees.
pub fn check_comp_axioms(
    ctx: &CompContext,
    samples: &[(String, Cochain)],
    outer_degrees: &[usize],
) -> Result<crate::comp::CompAxiomReport> {
    use crate::comp::CompAxiomCheck;
    let mut report = crate::comp::check_weak_comp(ctx, samples, outer_degrees)?;

    // (f<>_i g)<>_j h = (f<>_j h)<>_(i+p-1) g for j < i
    let mut comm = CompAxiomCheck {
        axiom: "commutation (j < i, equivariant inner)",
        witness: None,
        instances: 0,
    };
    'c: for &m in outer_degrees {
        for (gl, g) in samples {
            let n = g.degree;
            for (hl, h) in samples {
                let p = h.degree;
                for i in 0..m {
                    for j in 0..i {
                        comm.instances += 1;
                        let lhs = ctx
                            .comp_operator(g, i, m)?
                            .mul(&ctx.comp_operator(h, j, (m + n).saturating_sub(1))?);
                        let rhs = ctx.comp_operator(h, j, m)?.mul(&ctx.comp_operator(
                            g,
                            (i + p).saturating_sub(1),
                            (m + p).saturating_sub(1),
                        )?);
                        if lhs != rhs {
                            comm.witness = Some((m, format!("{gl},{hl}"), i, j));
                            break 'c;
                        }
                    }
                }
            }
        }
    }
    report.checks.push(comm);

    // (f<>_i g)<>_j h = (f<>_(j-n+1) h)<>_i g for j >= n + i
    let mut high = CompAxiomCheck {
        axiom: "commutation (j >= n+i, equivariant inner)",
        witness: None,
        instances: 0,
    };
    'h: for &m in outer_degrees {
        if m == 0 {
            continue;
        }
        for (gl, g) in samples {
            let n = g.degree;
            for (hl, h) in samples {
                for i in 0..m {
                    let lhs_deg = (m + n).saturating_sub(1);
                    // past lhs_deg + 1 every composition is zero on both sides
                    for j in (n + i)..=(lhs_deg + 1) {
                        high.instances += 1;
                        let lhs = ctx
                            .comp_operator(g, i, m)?
                            .mul(&ctx.comp_operator(h, j, lhs_deg)?);
                        let rhs = ctx
                            .comp_operator(h, j - n + 1, m)?
                            .mul(&ctx.comp_operator(g, i, (m + h.degree).saturating_sub(1))?);
                        if lhs != rhs {
                            high.witness = Some((m, format!("{gl},{hl}"), i, j));
                            break 'h;
                        }
                    }
                }
            }
        }
    }
    report.checks.push(high);
    Ok(report)
}

/// Do the two cup products agree on this pair exactly at the cochain
/// level? True whenever the left factor is equivariant.
pub fn cup_coincidence(ctx: &CompContext, f: &Cochain, g: &Cochain) -> Result<bool> {
    Ok(ctx.cup(f, g)? == ctx.sqcup(f, g)?)
}

#[derive(Clone, Debug)]
pub struct GerstenhaberCheck {
    pub identity: String,
    pub degrees: Vec<usize>,
    pub rep_indices: Vec<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct GerstenhaberReport {
    pub betti: Vec<usize>,
    pub checks: Vec<GerstenhaberCheck>,
}

impl GerstenhaberReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Gerstenhaber identities on the cohomology of the equivariant
/// subcomplex, verified modulo coboundaries of the subcomplex by linear
/// solve: graded commutativity of the cup product, graded Jacobi for the
/// shifted bracket, and the bracket-derivation law
/// `[f, g cup h] = [f,g] cup h + (-1)^((m-1)n) g cup [f,h]`.
pub fn gerstenhaber_check(ctx: &CompContext, max_degree: usize) -> Result<GerstenhaberReport> {
    let cx = ctx.complex();
    let ec = EquivariantComplex::build(cx, max_degree + 2)?;
    let coh = ec.cohomology(true)?;
    let betti = coh.betti();
    let dm = cx.coefficients().dim;
    let reps: Vec<Vec<Cochain>> = coh
        .rows
        .iter()
        .enumerate()
        .map(|(n, r)| {
            r.representatives
                .as_ref()
                .unwrap()
                .iter()
                .map(|coords| Cochain::from_vec(n, dm, &ec.ambient(n, coords)))
                .collect()
        })
        .collect();
    let reps_at = |d: usize| -> &[Cochain] {
        if d < reps.len() {
            &reps[d]
        } else {
            &[]
        }
    };
    let sign = |k: i64| -> Rational {
        if k.rem_euclid(2) == 0 {
            Rational::from_integer(1.into())
        } else {
            -Rational::from_integer(1.into())
        }
    };
    // a bracket of two degree-0 classes lands in degree -1, which is the
    // zero space; report it as the zero cochain of the degree the ambient
    // identity expects so sums stay well-typed
    let zero_at = |d: usize| -> Result<Cochain> { Ok(Cochain::zero(d, dm, cx.basis_size(d)?)) };
    let br_at = |x: &Cochain, y: &Cochain, out_deg: usize| -> Result<Cochain> {
        if x.degree + y.degree == 0 || x.is_zero() || y.is_zero() {
            zero_at(out_deg)
        } else {
            bracket(ctx, x, y)
        }
    };
    let cup_at = |x: &Cochain, y: &Cochain, out_deg: usize| -> Result<Cochain> {
        if (x.is_zero() || y.is_zero()) && x.degree + y.degree != out_deg {
            zero_at(out_deg)
        } else {
            ctx.cup(x, y)
        }
    };
    let mut checks = Vec::new();

    // graded commutativity of cup
    for m in 0..=max_degree {
        for n in m..=max_degree {
            if m + n > max_degree + 2 {
                continue;
            }
            for (fi, f) in reps_at(m).iter().enumerate() {
                for (gi, g) in reps_at(n).iter().enumerate() {
                    let fg = ctx.cup(f, g)?;
                    let gf = ctx.cup(g, f)?;
                    let resid = fg.sub(&gf.scale(&sign((m * n) as i64)));
                    let passed = ec.bounds(cx, m + n, &resid.to_vec())?;
                    checks.push(GerstenhaberCheck {
                        identity: "cup graded commutativity".into(),
                        degrees: vec![m, n],
                        rep_indices: vec![fi, gi],
                        passed,
                    });
                }
            }
        }
    }

    // graded Jacobi in the shifted grading
    for m in 0..=max_degree {
        for n in 0..=max_degree {
            for p in 0..=max_degree {
                if m + n + p < 2 {
                    continue;
                }
                let deg = m + n + p - 2;
                if deg > max_degree + 2 {
                    continue;
                }
                let (sm, sn, sp) = (m as i64 - 1, n as i64 - 1, p as i64 - 1);
                for (fi, f) in reps_at(m).iter().enumerate() {
                    for (gi, g) in reps_at(n).iter().enumerate() {
                        for (hi, h) in reps_at(p).iter().enumerate() {
                            let t1 = br_at(&br_at(f, g, (m + n).saturating_sub(1))?, h, deg)?;
                            let t2 = br_at(&br_at(g, h, (n + p).saturating_sub(1))?, f, deg)?;
                            let t3 = br_at(&br_at(h, f, (p + m).saturating_sub(1))?, g, deg)?;
                            let tot = t1
                                .scale(&sign(sm * sp))
                                .add(&t2.scale(&sign(sn * sm)))
                                .add(&t3.scale(&sign(sp * sn)));
                            let passed = ec.bounds(cx, deg, &tot.to_vec())?;
                            checks.push(GerstenhaberCheck {
                                identity: "graded Jacobi".into(),
                                degrees: vec![m, n, p],
                                rep_indices: vec![fi, gi, hi],
                                passed,
                            });
                        }
                    }
                }
            }
        }
    }

    // bracket is a graded derivation of the cup product
    for m in 0..=max_degree {
        for n in 0..=max_degree {
            for p in 0..=max_degree {
                if m + n + p == 0 || (m + n + p - 1) > max_degree + 2 {
                    continue;
                }
                let deg = m + n + p - 1;
                for (fi, f) in reps_at(m).iter().enumerate() {
                    for (gi, g) in reps_at(n).iter().enumerate() {
                        for (hi, h) in reps_at(p).iter().enumerate() {
                            let lhs = br_at(f, &ctx.cup(g, h)?, deg)?;
                            let t1 = cup_at(&br_at(f, g, (m + n).saturating_sub(1))?, h, deg)?;
                            let t2 = cup_at(g, &br_at(f, h, (m + p).saturating_sub(1))?, deg)?;
                            let resid = lhs
                                .sub(&t1)
                                .sub(&t2.scale(&sign((m as i64 - 1) * n as i64)));
                            let passed = ec.bounds(cx, deg, &resid.to_vec())?;
                            checks.push(GerstenhaberCheck {
                                identity: "bracket derives cup".into(),
                                degrees: vec![m, n, p],
                                rep_indices: vec![fi, gi, hi],
                                passed,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(GerstenhaberReport { betti, checks })
}
