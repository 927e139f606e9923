pub mod certificate;
pub mod classify;
pub mod collapse;
pub mod complex;
pub mod digraph;
pub mod error;
pub mod flag;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod simplex;
pub mod tournament;
pub mod wedge;

pub use complex::{Complex, FVector};
pub use digraph::Digraph;
pub use error::{Error, Result};
pub use homology::{betti_only, integral_homology, HomologyProfile};
pub use simplex::{short_lex_compare, Simplex, VertexId};
