//! Finite topological spaces and the logical topologies on model,
//! total, and isomorphism spaces.

mod bundle;
mod checks;
mod logical;
mod space;

pub use bundle::{check_topological_groupoid, TopologicalGroupoid};
pub use checks::{is_continuous, is_local_homeomorphism, is_open_map};
pub use logical::{
    arrow_open, build_logical_topologies, check_groupoid_topology, check_star_transfer,
    model_open, model_topological_groupoid, pinned_diagram, positive_diagram, sheaf_open,
    total_space, total_topology, ArrowOpenSpec, LogicalTopologies, TrackedTotal,
};
pub use space::{full_set, point_set, FiniteTopology, NamedOpen, PointSet};
