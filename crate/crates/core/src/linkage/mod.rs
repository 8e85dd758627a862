//! Linkage learning: mutual-information DSM, linkage trees and the DLED
//! pairwise dependency test.

mod dled;
mod dsm;
mod tree;

pub use dled::{dled_check, dled_condition, dled_dsm, Dependency, DependencyLedger};
pub use dsm::{mutual_information_dsm, DependencyMatrix};
pub use tree::{build_linkage_tree, LinkageTree};
