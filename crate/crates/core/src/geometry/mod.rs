//! Floating-point realization of weighted trees as configurations and
//! Kontsevich tensors.

pub mod chain;
pub mod config;
pub mod konts;
pub mod sample;
pub mod tau;

pub use chain::{config_from_chain, pair_difference, WeightedChain};
pub use config::{config_from_tree, stratum_of, Configuration, EPS_ALGEBRAIC, EPS_GEO};
pub use konts::{konts_coface, konts_point, CollapseDirection, KontsTensor};
pub use tau::{tau_tensor, ExtendedChain, Stratum, Weight};
