//! Analytical scalability estimator for distributed machine-learning
//! workloads.
//!
//! Given hardware parameters, a workload (gradient descent over a
//! declared network architecture, or graph inference over a
//! vertex-partitioned graph), and a communication topology, the
//! library computes per-superstep time breakdowns, strong/weak-scaling
//! speedup curves, the optimal worker count, and MAPE against
//! empirical measurements.
//!
//! ```
//! use scalemodel::core_model::{gd_step_time, CommTopology, GradientDescentModel, HardwareSpec};
//! use scalemodel::speedup::{optimal_nodes, strong_scaling_curve};
//!
//! let hw = HardwareSpec::new(105.6e9, 0.8, 1e9).unwrap();
//! let model = GradientDescentModel::new(72e6, 60_000, 12_000_000).unwrap();
//! let topo = CommTopology::spark_hybrid(64).unwrap();
//! let curve = strong_scaling_curve(|n| gd_step_time(&model, &hw, &topo, n), 1..=13).unwrap();
//! assert_eq!(optimal_nodes(&curve).unwrap(), 9);
//! ```

pub mod cli;
pub mod config;
pub mod core_model;
pub mod emit;
mod error;
pub mod graph_partition;
pub mod net_arch;
pub mod speedup;
pub mod validation;

pub use error::{Error, Result};
