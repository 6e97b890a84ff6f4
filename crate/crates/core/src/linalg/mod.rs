//! Exact sparse linear algebra over ℤ, ℚ and 𝔽_p.

pub mod exact;
pub mod field;
pub mod homology;
pub mod matrix_market;
pub mod reduce;
pub mod snf;
pub mod sparse;

pub use exact::ExactMatrix;
pub use field::{Field, Ring};
pub use homology::{homology, HomologySummary};
pub use reduce::{rank, reduce, KernelVector, Reduction};
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
pub use sparse::{ColumnBuilder, SparseMatrix};
