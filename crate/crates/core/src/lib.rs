//! Entropy flow on weighted graphs.
//!
//! Every vertex `x` carries an α-lazy outward random walk `R_x` that spreads
//! mass shell by shell away from `x`. The entropy of an edge `xy` is the KL
//! divergence between `R_x` and `R_y`, and the flow grows each edge weight at
//! the rate of its entropy. Edges between communities see very different
//! walks at their two ends and grow fastest, so cutting the heaviest edges
//! exposes the community structure.
//!
//! ```
//! use entropy_flow::{fixtures, run_flow, sweep, FlowConfig};
//!
//! let (graph, w0) = fixtures::bridged_triangles();
//! let trace = run_flow(&graph, &w0, &FlowConfig::new(0.5, 0.1, 10)).unwrap();
//! let report = sweep(&graph, trace.last(), None).unwrap();
//! let best = report.best_modularity().unwrap();
//! assert_eq!(best.num_communities, 2);
//! ```

pub mod community;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod walk;

pub use community::{
    ari, modularity, modularity_masked, nmi, surgery, sweep, MetricsReport, Partition, SweepReport,
};
pub use error::{Error, Result};
pub use flow::{
    classify_trajectory, closed_form_equal_triangle, closed_form_segment, edge_entropies,
    edge_entropy, flow_step, kl_divergence, run_flow, FlowConfig, FlowTrace, TrajectoryKind,
    TrajectoryVerdict, Variant,
};
pub use graph::{
    connected_components, shells, EdgeRecord, Graph, ShellDecomposition, WeightVector,
};
pub use io::{load_dataset, Dataset};
pub use walk::{outward_mass, walk_distribution, WalkDistribution};
