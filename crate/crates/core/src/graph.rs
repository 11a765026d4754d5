//! Simple undirected graphs with fixed reference orientations, and the
//! structural operators derived from them.
//!
//! Every edge carries a reference orientation `tail → head`. Flows are signed
//! relative to it. The orientation never changes after construction except
//! through [`Graph::flip_orientation`], which returns a new graph.
//!
//! Operators are built with exact integer arithmetic:
//!
//! ```text
//! B      N×E   B[t(e), e] = −1, B[h(e), e] = +1
//! L      N×N   D − A  (= B Bᵀ)
//! L₁     E×E   Bᵀ B
//! A_LG   E×E   |Bᵀ B − 2I|
//! L_LG   E×E   diag(A_LG 1) − A_LG
//! ```

use std::collections::HashMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::operator::IntOperator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop on node {node}")]
    SelfLoop { edge: usize, node: usize },
    #[error("edge {edge} ({u}, {v}) duplicates edge {first}")]
    DuplicateEdge {
        edge: usize,
        first: usize,
        u: usize,
        v: usize,
    },
    #[error("edge {edge} references node {node}, but the graph has {num_nodes} nodes")]
    NodeOutOfRange {
        edge: usize,
        node: usize,
        num_nodes: usize,
    },
    #[error("edge index {edge} out of range for graph with {num_edges} edges")]
    EdgeOutOfRange { edge: usize, num_edges: usize },
    #[error("expected {expected} {what}, got {actual}")]
    AnnotationLength {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::SelfLoop { .. } => "self_loop",
            GraphError::DuplicateEdge { .. } => "duplicate_edge",
            GraphError::NodeOutOfRange { .. } => "node_out_of_range",
            GraphError::EdgeOutOfRange { .. } => "edge_out_of_range",
            GraphError::AnnotationLength { .. } => "annotation_length",
        }
    }
}

/// An oriented edge `tail → head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Edge { tail, head }
    }

    fn key(&self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }

    pub fn reversed(self) -> Self {
        Edge {
            tail: self.head,
            head: self.tail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    coords: Option<Vec<[f64; 2]>>,
}

impl Graph {
    /// Builds a graph from unordered node pairs. Each edge is oriented from the
    /// smaller to the larger node index.
    pub fn new(num_nodes: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge::new(u.min(v), u.max(v)))
            .collect();
        Self::from_edges(num_nodes, edges)
    }

    /// Builds a graph keeping each pair's order as its reference orientation.
    pub fn with_orientation(
        num_nodes: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        Self::from_edges(
            num_nodes,
            pairs.iter().map(|&(t, h)| Edge::new(t, h)).collect(),
        )
    }

    pub fn from_edges(num_nodes: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            for node in [e.tail, e.head] {
                if node >= num_nodes {
                    return Err(GraphError::NodeOutOfRange {
                        edge: i,
                        node,
                        num_nodes,
                    });
                }
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop {
                    edge: i,
                    node: e.tail,
                });
            }
            if let Some(&first) = seen.get(&e.key()) {
                return Err(GraphError::DuplicateEdge {
                    edge: i,
                    first,
                    u: e.tail,
                    v: e.head,
                });
            }
            seen.insert(e.key(), i);
        }
        Ok(Graph {
            num_nodes,
            edges,
            labels: None,
            coords: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.num_nodes {
            return Err(GraphError::AnnotationLength {
                what: "node labels",
                expected: self.num_nodes,
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self, GraphError> {
        if coords.len() != self.num_nodes {
            return Err(GraphError::AnnotationLength {
                what: "node coordinates",
                expected: self.num_nodes,
                actual: coords.len(),
            });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    /// Returns a copy with edge `e`'s orientation reversed.
    pub fn flip_orientation(&self, e: usize) -> Result<Graph, GraphError> {
        if e >= self.edges.len() {
            return Err(GraphError::EdgeOutOfRange {
                edge: e,
                num_edges: self.edges.len(),
            });
        }
        let mut g = self.clone();
        g.edges[e] = g.edges[e].reversed();
        Ok(g)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_nodes];
        for e in &self.edges {
            d[e.tail] += 1;
            d[e.head] += 1;
        }
        d
    }

    /// Component id per node, numbered in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.num_nodes).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = HashMap::new();
        (0..self.num_nodes)
            .map(|v| {
                let root = find(&mut parent, v);
                let next = ids.len();
                *ids.entry(root).or_insert(next)
            })
            .collect()
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Hex digest of the oriented edge list, used to bind signal files to a graph.
    pub fn edge_list_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("nodes {}\n", self.num_nodes).as_bytes());
        for e in &self.edges {
            h.update(format!("{} {}\n", e.tail, e.head).as_bytes());
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Node-to-edge incidence matrix `B` (N×E).
    pub fn incidence_matrix(&self) -> IntOperator {
        IntOperator::from_triplets(
            self.num_nodes,
            self.num_edges(),
            self.edges
                .iter()
                .enumerate()
                .flat_map(|(i, e)| [(e.tail, i, -1), (e.head, i, 1)]),
        )
    }

    /// Symmetric 0/1 adjacency matrix `A` (N×N).
    pub fn adjacency_matrix(&self) -> IntOperator {
        IntOperator::from_triplets(
            self.num_nodes,
            self.num_nodes,
            self.edges
                .iter()
                .flat_map(|e| [(e.tail, e.head, 1), (e.head, e.tail, 1)]),
        )
    }

    /// Diagonal degree matrix `D = diag(A 1)`.
    pub fn degree_matrix(&self) -> IntOperator {
        let d: Vec<i64> = self.degrees().into_iter().map(|d| d as i64).collect();
        IntOperator::diagonal(&d)
    }

    /// Graph Laplacian `L = D − A`.
    pub fn laplacian(&self) -> IntOperator {
        self.degree_matrix().sub(&self.adjacency_matrix())
    }

    /// Edge-Laplacian `L₁ = Bᵀ B`.
    pub fn edge_laplacian(&self) -> IntOperator {
        let b = self.incidence_matrix();
        b.transpose().matmul(&b)
    }

    /// Line-graph adjacency `|Bᵀ B − 2I|`.
    pub fn line_graph_adjacency(&self) -> IntOperator {
        let two = IntOperator::identity(self.num_edges()).scale(2);
        self.edge_laplacian().sub(&two).abs()
    }

    /// The line graph: one node per edge, adjacent when the edges share an
    /// endpoint. Its edges are oriented from the smaller to the larger index.
    pub fn line_graph(&self) -> Graph {
        let a = self.line_graph_adjacency();
        let pairs: Vec<(usize, usize)> = a
            .triplets()
            .filter(|&(r, c, _)| r < c)
            .map(|(r, c, _)| (r, c))
            .collect();
        Graph::new(self.num_edges(), &pairs).expect("line graph of a simple graph is simple")
    }

    /// Line-graph Laplacian `diag(A_LG 1) − A_LG`.
    pub fn line_graph_laplacian(&self) -> IntOperator {
        let a = self.line_graph_adjacency();
        IntOperator::diagonal(&a.row_sums()).sub(&a)
    }
}
