//! Exact computations with graded matrix factorizations of weighted
//! homogeneous polynomials and their K-theoretic invariants.

pub mod exactalg;
pub mod polyring;
pub mod grmod;
pub mod mf;
pub mod resolve;
pub mod ktheory;
pub mod clifford;
pub mod format;
pub mod report;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] polyring::PolyError),
    #[error(transparent)]
    Module(#[from] grmod::GrModError),
    #[error(transparent)]
    Mf(#[from] mf::MfError),
    #[error(transparent)]
    Resolve(#[from] resolve::ResolveError),
    #[error(transparent)]
    K(#[from] ktheory::KError),
    #[error(transparent)]
    Clifford(#[from] clifford::CliffordError),
    #[error(transparent)]
    Format(#[from] format::FormatError),
}
