//! Join-meet binomial algebras of finite distributive lattices.
//!
//! A finite lattice `L` on elements `x_1, ..., x_n` gives rise to the
//! quadratic binomials `f_ij = x_i x_j - x_(i∨j) x_(i∧j)`, nonzero exactly
//! for incomparable pairs.  This crate builds the subalgebra generated by
//! those binomials, computes its defining ideal degree by degree with exact
//! arithmetic, classifies when the algebra is a polynomial ring or is
//! presented by quadrics, and verifies straightening-law structure, both for
//! join-meet algebras and for the Pluecker coordinate ring of the
//! Grassmannian.
//!
//! Entry points:
//! - [`poset`] / [`lattice`]: finite posets, lattices, Birkhoff duality,
//!   divisor lattices, rank statistics.
//! - [`classify`]: planar / simple / thin predicates, grid sublattices and
//!   intervals, snake-lattice and two-chain-poset enumerations.
//! - [`poly`] / [`order`] / [`binomials`]: exact sparse polynomials,
//!   monomial orders, join-meet systems.
//! - [`groebner`]: Buchberger, elimination, initial ideals, basis lifting.
//! - [`kernel`]: graded presentation kernels, polynomial-ring and quadratic
//!   generation verdicts.
//! - [`asl`]: standard monomials, straightening relations, ASL checks.
//! - [`grass`]: the lattice of Pluecker symbols and determinant generators.
//! - [`fixtures`] / [`cli`]: builtin lattices, JSON I/O, batch front end.

pub mod asl;
pub mod binomials;
pub mod classify;
pub mod cli;
pub mod fixtures;
pub mod grass;
pub mod groebner;
pub mod kernel;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod poly;
pub mod poset;

use std::fmt;

/// Failure mode reported by [`lattice::as_lattice`] for a specific pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFailure {
    NoUpperBound,
    NoLowerBound,
    NonUniqueLub,
    NonUniqueGlb,
}

impl fmt::Display for BoundFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundFailure::NoUpperBound => "no-upper-bound",
            BoundFailure::NoLowerBound => "no-lower-bound",
            BoundFailure::NonUniqueLub => "non-unique-lub",
            BoundFailure::NonUniqueGlb => "non-unique-glb",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cycle detected in cover relation at {0}")]
    CycleDetected(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("not a lattice: pair ({a}, {b}) has {reason}")]
    NotALattice {
        a: String,
        b: String,
        reason: BoundFailure,
    },
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("lattice is not thin")]
    NotThin,
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("leading term of the binomial for ({0}, {1}) is not the incomparable product")]
    OrderGuaranteeFailed(String, String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("toric basis element #{0} has no kernel lift with matching initial term")]
    HypothesisUnmet(usize),
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("product {0}*{1} lies outside the standard monomial span")]
    NoExpression(String, String),
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource caps for the exact computations.  `matrix_cells` bounds
/// rows x columns of any single kernel elimination; `gb_pairs` bounds the
/// number of S-pairs a Buchberger run may process.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub matrix_cells: u64,
    pub gb_pairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            matrix_cells: 500_000_000,
            gb_pairs: 500_000,
        }
    }
}
