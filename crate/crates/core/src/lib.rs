//! Maximum-cardinality matching in general graphs by phases of alternating
//! breadth-first search and double depth-first search.

pub mod augment;
pub mod ddfs;
pub mod dsu;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod level;
pub mod oracle;
pub mod petal;
