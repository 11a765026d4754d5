//! Shared inputs for the criterion benchmarks.

use edgeflow::flowgen::gaussian_noise;
use edgeflow::standins::random_graph;
use edgeflow::{EdgeSignal, Graph};

/// A random graph with `edges` edges on `edges / 2` nodes, plus a white-noise
/// flow on it.
pub fn workload(edges: usize, seed: u64) -> (Graph, EdgeSignal) {
    let nodes = (edges / 2).max(2);
    let g = random_graph(nodes, edges, seed);
    let f = EdgeSignal::new(gaussian_noise(edges, 1.0, seed));
    (g, f)
}
