//! Exact arithmetic: Gaussian rationals, integer matrices, Smith normal
//! form, finitely generated abelian groups and linear algebra over `Q(i)`.

mod abelian;
mod gaussian;
mod intmatrix;
pub mod linalg;
mod snf;
mod zielim;

pub use abelian::{cokernel, FGAbelianGroup};
pub use gaussian::GaussianRational;
pub use intmatrix::IntMatrix;
pub use linalg::{solve_exact, ExactSolution, NoSolution, QMatrix};
pub use snf::{kernel_rank, rank, smith_normal_form, SmithForm};
