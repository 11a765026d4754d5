//! Signal processing for flows on graph edges.
//!
//! Builds the incidence matrix, graph Laplacian, Edge-Laplacian `L₁ = BᵀB`
//! and line-graph Laplacian of a simple graph; splits edge flows into cyclic
//! and gradient parts; and provides the denoising and smoothing filters that
//! act on node signals, flows, and line-graph edge signals.
//!
//! ```
//! use edgeflow::{filters, Graph, EdgeSignal};
//!
//! let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
//! // (1, 1, −1) circulates around the triangle: flow denoising leaves it alone
//! let f = EdgeSignal::new(vec![1.0, 1.0, -1.0]);
//! let out = filters::flow_denoise(&g, &f, 10.0).unwrap();
//! assert!(out.distance(&f) < 1e-12);
//! ```

pub mod error;
pub mod experiments;
pub mod filters;
pub mod flowgen;
pub mod graph;
pub mod hodge;
pub mod io;
pub mod linalg;
pub mod operator;
pub mod signal;
pub mod spectral;
pub mod standins;

pub use error::{Error, Result};
pub use experiments::{ExperimentReport, GridSpec};
pub use filters::{Basis, FilterKind, FilterSpec, FrequencyResponse};
pub use flowgen::{FlowGenerator, FlowRecipe};
pub use graph::{Edge, Graph, GraphError};
pub use hodge::{HodgeDecomposition, HodgeProjector};
pub use operator::{IntOperator, Operator};
pub use signal::{EdgeSignal, NodeSignal};
pub use spectral::EigenDecomposition;
