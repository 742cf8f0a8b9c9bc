//! Maps on orientable surfaces, the opening/closure bijection between
//! pointed bipartite quadrangulations and well-labeled one-face maps, and
//! exact enumeration through schemes and generating series.

pub mod bijection;
pub mod census;
pub mod format;
pub mod labeling;
pub mod map_core;
pub mod poly;
pub mod quad_map;
pub mod sampler;
pub mod schemes;
pub mod series;
pub mod verify;

pub use labeling::{LabelError, LabeledMap};
pub use map_core::{Corner, MapDiagnostics, MapError, Orbits, RotationMap, Surgery};
pub use quad_map::PointedQuad;
