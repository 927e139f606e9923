//! Exact integer linear algebra. No floating point is used anywhere here.

mod elim;
pub mod hnf;
pub mod int;
pub mod matrix;
pub mod nullspace;
pub mod rank;
pub mod snf;

pub use hnf::{hermite_normal_form, hermite_normal_form_big, is_hermite_normal_form, HnfResult};
pub use int::Int;
pub use matrix::{BigMatrix, IntMatrix, Matrix, SparseMatrix};
pub use nullspace::{nullspace, nullspace_big, nullspace_via_kernel_lattice};
pub use rank::independent_in_order;
pub use snf::{rank, rank_sparse, smith_normal_form, smith_normal_form_sparse, SnfResult};
