//! Exact-arithmetic homological algebra for finite-dimensional entwining
//! structures over a commutative base algebra.
//!
//! Everything is reduced to sparse matrices over the rationals: cochain
//! spaces get canonical ordered bases, differentials and structure maps are
//! assembled entrywise from structure constants, and cohomology is ordinary
//! kernel-modulo-image linear algebra. No floating point anywhere.
//!
//! The layers, bottom to top:
//!
//! * [`rational`] / [`matrix`] — exact rational scalars and sparse linear
//!   algebra (rank, kernel, solve, quotients).
//! * [`algebra`] — structure-constant presentations of the algebras,
//!   coalgebra, entwining map and bimodules, with axiom validators.
//! * [`tensor`] — canonical bases and index arithmetic for the triangular
//!   tensor-matrix spaces the cochains live on.
//! * [`complex`] — the secondary Hochschild complex of an entwining
//!   structure, its differential, cohomology, and reductions.
//! * [`comp`] — the partial composition operations, the distinguished
//!   degree-2 element, and both cup products.
//! * [`equivariant`] — the coaction-equivariant subcomplex and the
//!   Gerstenhaber structure on its cohomology.
//! * [`hodge`] — the symmetric-group action, Eulerian idempotents, and the
//!   Hodge-type splitting in the commutative case.
//! * [`deformation`] — the deformation bicomplex, total cohomology,
//!   infinitesimal classification, and obstruction-driven jet lifting.
//! * [`fixtures`] — built-in test structures and the JSON interchange
//!   format used by the CLI.

pub mod algebra;
pub mod comp;
pub mod complex;
pub mod deformation;
pub mod equivariant;
pub mod fixtures;
pub mod hodge;
pub mod matrix;
pub(crate) mod par;
pub mod rational;
pub mod sample;
pub mod tensor;

pub use algebra::{BEntwining, Bimodule, StructureAlgebra, StructureCoalgebra, ValidationReport};
pub use complex::{Cochain, CohomologyReport, SecondaryComplex};
pub use matrix::{Matrix, Subspace};
pub use rational::Rational;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Structure-constant tensors of inconsistent shape.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A requested cochain space exceeds the configured basis-size cap.
    #[error("basis size {size} at degree {degree} exceeds cap {cap}")]
    SizeCap {
        degree: usize,
        size: u128,
        cap: usize,
    },

    /// A precondition on the input structure does not hold (named axiom).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// An internal invariant failed; indicates an invalid fixture or a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Subspace containment required by a quotient does not hold.
    #[error("containment failure: {0}")]
    Containment(String),

    /// Fixture or jet data failed to parse or validate structurally.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
