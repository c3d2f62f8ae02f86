//! Built-in entwining structures used across the test suite and shipped as
//! JSON fixtures, plus the JSON interchange format consumed by the CLI.
//!
//! The shipped corpus:
//!
//! * `f0` — everything one-dimensional; differentials alternate 0 and 1.
//! * `f1` — `A = Q[x]/(x^2)`, `B = Q`, `C` trivial: the classical
//!   Hochschild complex of the dual numbers.
//! * `f2` — `A = C = QZ_2` (group bialgebra) with the bialgebra entwining
//!   `psi(c (x) a) = a_(1) (x) c a_(2)`, `B = Q`.
//! * `f3` — `A = B = Q[x]/(x^2)`, `C` the 2-dimensional grouplike
//!   coalgebra, flip entwining, `zeta = id`.
//! * `m2q` — `A = M_2(Q)`, `B = Q`, `C` trivial (separable algebra, so
//!   cohomology vanishes in positive degrees).
//! * `f2_bad_zeta` — `f2` with `B = QZ_2` and `zeta = id`; fails the
//!   psi/zeta exchange rule and serves as a negative control.
//!
//! All rationals in the JSON format are exact strings `"p/q"`; no floats
//! appear anywhere in the interchange schema.

use crate::algebra::{
    tensor3, tensor4, BEntwining, Bimodule, EntwiningMap, StructureAlgebra, StructureCoalgebra,
};
use crate::rational::{basis_vec, format_rational, parse_rational, rint, Rational, Vector};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub fn algebra_q() -> StructureAlgebra {
    StructureAlgebra {
        dim: 1,
        mult: vec![vec![vec![rint(1)]]],
        unit: vec![rint(1)],
    }
}

/// `Q[x]/(x^2 - v x - u)` on the basis `1, x`; associative and unital for
/// every `(u, v)`, which makes it a convenient randomizable family.
pub fn algebra_quadratic(u: Rational, v: Rational) -> StructureAlgebra {
    let mut mult = tensor3(2, 2, 2);
    mult[0][0][0] = rint(1);
    mult[0][1][1] = rint(1);
    mult[1][0][1] = rint(1);
    mult[1][1][0] = u;
    mult[1][1][1] = v;
    StructureAlgebra {
        dim: 2,
        mult,
        unit: basis_vec(2, 0),
    }
}

pub fn algebra_dual_numbers() -> StructureAlgebra {
    algebra_quadratic(rint(0), rint(0))
}

pub fn algebra_group_z2() -> StructureAlgebra {
    algebra_quadratic(rint(1), rint(0))
}

/// `M_2(Q)` on the matrix-unit basis `E_00, E_01, E_10, E_11` (row-major).
pub fn algebra_m2q() -> StructureAlgebra {
    let dim = 4;
    let mut mult = tensor3(dim, dim, dim);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    if j == k {
                        mult[2 * i + j][2 * k + l][2 * i + l] = rint(1);
                    }
                }
            }
        }
    }
    let mut unit = vec![rint(0); dim];
    unit[0] = rint(1);
    unit[3] = rint(1);
    StructureAlgebra { dim, mult, unit }
}

pub fn coalgebra_trivial() -> StructureCoalgebra {
    coalgebra_grouplike(1)
}

/// Grouplike coalgebra: every basis element `e` has `Delta(e) = e (x) e`
/// and `eps(e) = 1`.
pub fn coalgebra_grouplike(dim: usize) -> StructureCoalgebra {
    let mut comult = tensor3(dim, dim, dim);
    for k in 0..dim {
        comult[k][k][k] = rint(1);
    }
    StructureCoalgebra {
        dim,
        comult,
        counit: vec![rint(1); dim],
    }
}

/// Linear dual of [`algebra_quadratic`]: coassociative and counital for
/// every `(u, v)`.
pub fn coalgebra_dual_quadratic(u: Rational, v: Rational) -> StructureCoalgebra {
    let a = algebra_quadratic(u, v);
    let mut comult = tensor3(2, 2, 2);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                comult[k][i][j] = a.mult[i][j][k].clone();
            }
        }
    }
    StructureCoalgebra {
        dim: 2,
        comult,
        counit: a.unit,
    }
}

pub fn flip_psi(dim_c: usize, dim_a: usize) -> EntwiningMap {
    let mut psi = tensor4(dim_c, dim_a, dim_a, dim_c);
    for c in 0..dim_c {
        for a in 0..dim_a {
            psi[c][a][a][c] = rint(1);
        }
    }
    EntwiningMap { dim_c, dim_a, psi }
}

/// Flip entwining over `B = Q` with `zeta` the unit map; valid for any
/// algebra/coalgebra pair.
pub fn flip_entwining(a: StructureAlgebra, c: StructureCoalgebra) -> BEntwining {
    let psi = flip_psi(c.dim, a.dim);
    let zeta = vec![a.unit.clone()];
    BEntwining {
        a,
        b: algebra_q(),
        c,
        psi,
        zeta,
    }
}

pub fn f0() -> BEntwining {
    flip_entwining(algebra_q(), coalgebra_trivial())
}

pub fn f1() -> BEntwining {
    flip_entwining(algebra_dual_numbers(), coalgebra_trivial())
}

pub fn m2q() -> BEntwining {
    flip_entwining(algebra_m2q(), coalgebra_trivial())
}

/// Group-bialgebra entwining for `Z_2`: on grouplike basis elements
/// `psi(e_c (x) e_a) = e_a (x) e_{c+a}` with indices in `Z_2`.
pub fn f2() -> BEntwining {
    let a = algebra_group_z2();
    let c = coalgebra_grouplike(2);
    let mut psi = tensor4(2, 2, 2, 2);
    for ci in 0..2 {
        for ai in 0..2 {
            psi[ci][ai][ai][(ci + ai) % 2] = rint(1);
        }
    }
    BEntwining {
        zeta: vec![a.unit.clone()],
        b: algebra_q(),
        psi: EntwiningMap {
            dim_c: 2,
            dim_a: 2,
            psi,
        },
        a,
        c,
    }
}

/// `f2` with `B = QZ_2` and `zeta = id`: the psi/zeta exchange rule fails
/// because `psi(g (x) g) = g (x) 1`.
pub fn f2_bad_zeta() -> BEntwining {
    let mut e = f2();
    e.b = algebra_group_z2();
    e.zeta = vec![basis_vec(2, 0), basis_vec(2, 1)];
    e
}

pub fn f3() -> BEntwining {
    let a = algebra_dual_numbers();
    let b = algebra_dual_numbers();
    let c = coalgebra_grouplike(2);
    let psi = flip_psi(2, 2);
    let zeta = vec![basis_vec(2, 0), basis_vec(2, 1)];
    BEntwining { a, b, c, psi, zeta }
}

/// The valid shipped fixtures, with names matching the JSON files.
pub fn all_valid() -> Vec<(&'static str, BEntwining)> {
    vec![
        ("f0", f0()),
        ("f1", f1()),
        ("f2", f2()),
        ("f3", f3()),
        ("m2q", m2q()),
    ]
}

// ---------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct ModuleFile {
    #[serde(rename = "dimM")]
    pub dim_m: usize,
    #[serde(rename = "leftAct")]
    pub left_act: Vec<Vec<Vec<String>>>,
    #[serde(rename = "rightAct")]
    pub right_act: Vec<Vec<Vec<String>>>,
}

/// On-disk fixture document. All rationals are strings `"p/q"`. `zeta` is
/// indexed `zeta[b][a]`: row `b` is the image of the `b`-th basis element
/// of `B` expressed in the basis of `A`. `psi` is indexed
/// `psi[c][a][a2][c2]`. `M` is optional; the default coefficient bimodule
/// is `A` acting on itself.
#[derive(Serialize, Deserialize)]
pub struct FixtureFile {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "multA")]
    pub mult_a: Vec<Vec<Vec<String>>>,
    #[serde(rename = "unitA")]
    pub unit_a: Vec<String>,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(rename = "multB")]
    pub mult_b: Vec<Vec<Vec<String>>>,
    #[serde(rename = "unitB")]
    pub unit_b: Vec<String>,
    #[serde(rename = "dimC")]
    pub dim_c: usize,
    #[serde(rename = "comultC")]
    pub comult_c: Vec<Vec<Vec<String>>>,
    #[serde(rename = "counitC")]
    pub counit_c: Vec<String>,
    pub psi: Vec<Vec<Vec<Vec<String>>>>,
    pub zeta: Vec<Vec<String>>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub m: Option<ModuleFile>,
}

fn vec_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn t3_to_strings(t: &[Vec<Vector>]) -> Vec<Vec<Vec<String>>> {
    t.iter()
        .map(|a| a.iter().map(|b| vec_to_strings(b)).collect())
        .collect()
}

fn strings_to_vec(v: &[String]) -> Result<Vector> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn strings_to_t3(t: &[Vec<Vec<String>>]) -> Result<Vec<Vec<Vector>>> {
    t.iter()
        .map(|a| a.iter().map(|b| strings_to_vec(b)).collect())
        .collect()
}

impl FixtureFile {
    pub fn from_structures(e: &BEntwining, m: Option<&Bimodule>) -> Self {
        FixtureFile {
            dim_a: e.a.dim,
            mult_a: t3_to_strings(&e.a.mult),
            unit_a: vec_to_strings(&e.a.unit),
            dim_b: e.b.dim,
            mult_b: t3_to_strings(&e.b.mult),
            unit_b: vec_to_strings(&e.b.unit),
            dim_c: e.c.dim,
            comult_c: t3_to_strings(&e.c.comult),
            counit_c: vec_to_strings(&e.c.counit),
            psi: e
                .psi
                .psi
                .iter()
                .map(|x| t3_to_strings(x))
                .collect(),
            zeta: e.zeta.iter().map(|z| vec_to_strings(z)).collect(),
            m: m.map(|bm| ModuleFile {
                dim_m: bm.dim,
                left_act: t3_to_strings(&bm.left),
                right_act: t3_to_strings(&bm.right),
            }),
        }
    }

    pub fn into_structures(&self) -> Result<(BEntwining, Option<Bimodule>)> {
        let a = StructureAlgebra {
            dim: self.dim_a,
            mult: strings_to_t3(&self.mult_a)?,
            unit: strings_to_vec(&self.unit_a)?,
        };
        let b = StructureAlgebra {
            dim: self.dim_b,
            mult: strings_to_t3(&self.mult_b)?,
            unit: strings_to_vec(&self.unit_b)?,
        };
        let c = StructureCoalgebra {
            dim: self.dim_c,
            comult: strings_to_t3(&self.comult_c)?,
            counit: strings_to_vec(&self.counit_c)?,
        };
        let psi_t: Result<Vec<_>> = self.psi.iter().map(|x| strings_to_t3(x)).collect();
        let psi = EntwiningMap {
            dim_c: self.dim_c,
            dim_a: self.dim_a,
            psi: psi_t?,
        };
        let zeta: Result<Vec<_>> = self.zeta.iter().map(|z| strings_to_vec(z)).collect();
        let ent = BEntwining {
            a,
            b,
            c,
            psi,
            zeta: zeta?,
        };
        let m = match &self.m {
            None => None,
            Some(mf) => Some(Bimodule {
                dim: mf.dim_m,
                left: strings_to_t3(&mf.left_act)?,
                right: strings_to_t3(&mf.right_act)?,
            }),
        };
        Ok((ent, m))
    }
}

/// Load a fixture from JSON; the returned bimodule defaults to `A` regular
/// when the file carries no `M`.
pub fn load_fixture(path: &std::path::Path) -> Result<(BEntwining, Bimodule)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file: FixtureFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad fixture JSON: {e}")))?;
    let (ent, m) = file.into_structures()?;
    let m = m.unwrap_or_else(|| Bimodule::regular(&ent.a));
    Ok((ent, m))
}

pub fn fixture_to_json(e: &BEntwining, m: Option<&Bimodule>) -> String {
    let file = FixtureFile::from_structures(e, m);
    serde_json::to_string_pretty(&file).expect("fixture serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        for (name, e) in all_valid() {
            let json = fixture_to_json(&e, None);
            let file: FixtureFile = serde_json::from_str(&json).unwrap();
            let (back, m) = file.into_structures().unwrap();
            assert_eq!(back, e, "{name} round trip");
            assert!(m.is_none());
        }
    }

    #[test]
    fn rationals_survive_as_strings() {
        let mut e = f1();
        e.a.mult[1][1][0] = crate::rational::rat(-3, 7);
        let json = fixture_to_json(&e, None);
        assert!(json.contains("\"-3/7\""));
        let file: FixtureFile = serde_json::from_str(&json).unwrap();
        let (back, _) = file.into_structures().unwrap();
        assert_eq!(back.a.mult[1][1][0], crate::rational::rat(-3, 7));
    }
}
