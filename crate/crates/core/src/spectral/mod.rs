//! Spectral sequences of the filtered total complex.

pub(crate) mod engine;
pub mod filtered;
pub mod pages;
pub mod report;
pub mod verify;

pub use filtered::{total_complex, Block, DegreeSpace, FilteredComplex, Orientation};
pub use pages::{
    column_homology, integral_column_homology, is_reliable, pages, row_homology, PageDifferential, PageEntry,
    PageOptions, SpectralPage, SpectralSequence, Variance,
};
pub use report::{PageReport, PageRow};
pub use verify::{verify_sequence, PageVerification};
