//! Nerve chains of the tree posets and the bicomplex they span.

pub mod bicomplex;
pub mod chains;
pub mod conormal;
pub mod export;
pub mod poset;

pub use bicomplex::{max_degree, Bicomplex, Caps, IdentityCheck, IdentityKind, IdentityReport, Nerve, NerveColumn, Normalization};
pub use chains::{chain_counts, enumerate_chains, enumerate_level, ChainLevel, TreeChain};
pub use conormal::conormalize;
pub use export::{export_bicomplex, import_bicomplex, load_or_build, CacheOutcome, Manifest, SCHEMA_VERSION};
pub use poset::TreePoset;
