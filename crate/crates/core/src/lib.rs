//! Staggered free-fermion odd 8-vertex models of flat-foldable quadrilateral
//! crease patterns: brute-force enumeration, Pfaffian solutions, closed-form
//! free energies, transition loci, defect lattice gases, the 3-coloring map
//! and the symmetric 16-vertex (Maekawa-defect) model.
//!
//! Everything here is `no_std` with `alloc`. File formats, threads and the
//! command line live in the `flatfold` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod coloring;
pub mod dimer;
pub mod elliptic;
pub mod enumerate;
pub mod freeenergy;
pub mod lattice;
pub mod latticegas;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod sixteen;
pub mod sum;
pub mod transitions;
pub mod vertex;

pub use lattice::{Shape, TorusConfig};
pub use model::{CpKind, CreaseWeights, Site, Staggering, StaggeredModel};
pub use vertex::{Crease, EvenWeights, Neighborhood, OddWeights, Parity, VertexClass};

/// Errors shared by the library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A weight is negative, non-finite, or a fugacity is not positive.
    InvalidWeight,
    /// A weight sits at an index the crease pattern forbids.
    MaskViolation { site: Site, index: usize },
    /// The torus does not tile with the model's unit cell.
    IncompatibleShape,
    /// Full enumeration would exceed the 32-edge budget.
    BudgetExceeded { edges: usize },
    /// The bond parametrisation cannot represent these vertex weights.
    GaugeFailure,
    /// A unit does not satisfy its free-fermion condition.
    NotFreeFermion { residual: f64 },
    /// Successive quadrature refinements disagree.
    NotConverged { last: f64, previous: f64 },
    /// A sector Pfaffian product came out with a sizeable imaginary part.
    SectorSign { imag: f64 },
    /// A 16-vertex weight set breaks the crease-reversal symmetry.
    SymmetryViolation,
    /// Colour propagation is inconsistent.
    ColoringInconsistent,
    /// Face colouring has equal neighbours.
    ImproperColoring,
    /// Operation not supported for this crease pattern.
    Unsupported,
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::InvalidWeight => write!(f, "invalid weight or fugacity"),
            Error::MaskViolation { site, index } => {
                write!(f, "weight {index} of unit {site:?} is disallowed by the crease pattern")
            }
            Error::IncompatibleShape => write!(f, "torus shape incompatible with the unit cell"),
            Error::BudgetExceeded { edges } => {
                write!(f, "{edges} edges exceed the enumeration budget")
            }
            Error::GaugeFailure => write!(f, "vertex weights not representable by bond weights"),
            Error::NotFreeFermion { residual } => {
                write!(f, "free-fermion residual {residual:e}")
            }
            Error::NotConverged { last, previous } => {
                write!(f, "quadrature not converged: {last} vs {previous}")
            }
            Error::SectorSign { imag } => write!(f, "sector product has imaginary part {imag:e}"),
            Error::SymmetryViolation => write!(f, "16-vertex weights not crease-reversal symmetric"),
            Error::ColoringInconsistent => write!(f, "colour propagation is inconsistent"),
            Error::ImproperColoring => write!(f, "colouring is not proper"),
            Error::Unsupported => write!(f, "unsupported for this crease pattern"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
