//! Brute-force enumeration of loop configurations on small tori.

mod enumerate;
mod model;
mod partition;
pub mod tiles;

pub use enumerate::{enumerate_configs, fold_configs, for_each_config, LoopCensus, TileGrid};
pub use model::{face_weights, ModelKind, ModelSpec};
pub use partition::{lattice_z, lattice_z_table_route, Alphas, CensusKey, CensusTable};
