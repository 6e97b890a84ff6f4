//! Trees, the poset order, the cosimplicial action, twisted maps and pair predicates.

mod monotone;
mod pairs;
mod tree;

pub use monotone::{codegeneracy_index, coface_index, MonotoneMap};
pub use pairs::{classify_pair, is_exceptional, PairClass};
pub use tree::{enumerate_trees, tree_count, Extremal, FnTree, Order, RelationTable};
