//! K-theoretic invariants: quadric K0 classes, push-forward tables, the
//! Koszul-lattice check for complete intersections, and Milnor-fibre models.

mod k0;
mod laurent;
mod milnor;
mod propwe;
mod tables;

use thiserror::Error;

pub use k0::{
    as_quadric, gram_matrix, k0_class, k0_class_with_window, restriction_triangle_check,
    restriction_triangle_check_with_window, BasisTag, K0Class, KnorrerVariant, TriangleReport, TriangleRow,
};
pub use laurent::{LaurentElement, LaurentError, LaurentQuotient};
pub use milnor::{circle_groups, milnor_relative_k, MilnorK, MilnorModel};
pub use propwe::{prop_we_grid, prop_we_verify, PropWeReport};
pub use tables::{
    generator_class, ku_table, pushforward_columns, pushforward_matrix, rp_consistent, rp_ktheory, window_column,
    zero_section_class, KuTable,
};

use crate::mf::MfError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("Gram system has no integral solution: {0}")]
    NonIntegralSolution(String),
    #[error("Hom cohomology does not vanish at the ends of the window [-{0}, {0}]")]
    UncertifiedWindow(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Mf(#[from] MfError),
}
