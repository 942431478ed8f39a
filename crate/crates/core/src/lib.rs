//! Exact arithmetic for unitary groups over truncated cyclotomic local
//! rings, relative class number identities, and superelliptic division
//! field degrees.

pub mod arith;
mod bigser;
pub mod checks;
pub mod class_invariants;
pub mod commutator;
pub mod curve;
pub mod cyclotomic;
pub mod error;
pub mod factor;
pub mod fp;
pub mod galois;
pub mod hermitian;
pub mod intmat;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod unit_lattices;

pub use checks::{selftest, SelftestReport};
pub use class_invariants::DemjanenkoReport;
pub use curve::{CurveOptions, CurveReport, HypothesisReport};
pub use cyclotomic::{CycloElt, RingCtx};
pub use error::{Error, Result};
pub use galois::{GaloisCertificate, GaloisVerdict};
pub use hermitian::{GroupVariant, HermitianForm};
pub use intmat::AbelianPresentation;
pub use matrix::MatLocal;
pub use poly::IntPoly;
pub use unit_lattices::{LatticeIndex, ReducedUnits};
