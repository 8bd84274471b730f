//! Finite causal structures on sampled spacetimes: the K⁺ relation as a
//! least closed transitive relation, causal-ladder checkers, and the
//! domain-theoretic view of the resulting order.

pub mod causal;
pub mod dataset;
pub mod error;
pub mod export;
pub mod order;
pub mod pointset;
pub mod relation;
pub mod report;
pub mod spacetimes;
pub mod topology;

pub use causal::{k_plus, CausalStructure, KPlus};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use order::{PosetHandle, WayBelowMethod, WayBelowRel, WayDirection};
pub use pointset::PointSet;
pub use relation::{Direction, Rel, RelOp, RelationProperties};
pub use report::{CheckReport, Witness};
pub use spacetimes::{Event, EventSet, ModelKind, OracleKind, Region, SamplingScheme, SpacetimeModel};
pub use topology::FiniteTopology;
