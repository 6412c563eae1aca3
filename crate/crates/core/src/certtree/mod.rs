//! Certificate trees: the region/node data model, the bit-exact CSV codec,
//! and streaming structural integrity checks.

pub mod csv;
pub mod integrity;
pub mod node;
pub mod region;

pub use csv::{create_tree, open_tree, CodecError, TreeReader, TreeWriter, COLUMNS};
pub use integrity::{check_integrity, IntegrityChecker, IntegrityReport, Violation};
pub use node::{CertNode, GlobalWitness, LocalWitness, NodeBody, TreeStats, R_DENOM};
pub use region::{Region5, DIM_NAMES, REGION_DENOM};
