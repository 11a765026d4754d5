//! Reference graphs and random graph generators.
//!
//! Two committed edge lists ship with the crate:
//!
//! * `fig1-like` — 9 nodes, 10 edges: two 4-cycles joined by a bridge, with
//!   one pendant edge. Its cycle space has dimension 2.
//! * `london-like` — 82 nodes, 130 edges: a connected, planar street-like
//!   network from [`planar_like`] with seed [`LONDON_LIKE_SEED`], i.e. a
//!   Euclidean minimum spanning tree over random points densified with the
//!   shortest non-crossing chords.

use rand::Rng;

use crate::flowgen::rng;
use crate::graph::Graph;
use crate::io::parse_edge_list;

pub const FIG1_LIKE: &str = include_str!("../data/fig1-like.edges");
pub const LONDON_LIKE: &str = include_str!("../data/london-like.edges");

pub const LONDON_LIKE_NODES: usize = 82;
pub const LONDON_LIKE_EDGES: usize = 130;
pub const LONDON_LIKE_SEED: u64 = 1858;

const GRAPH_STREAM: u64 = 101;

pub fn fig1_like() -> Graph {
    parse_edge_list(FIG1_LIKE).expect("committed fig1-like graph parses")
}

pub fn london_like() -> Graph {
    parse_edge_list(LONDON_LIKE).expect("committed london-like graph parses")
}

/// Looks up a committed graph by name.
pub fn by_name(name: &str) -> Option<Graph> {
    match name {
        "fig1-like" => Some(fig1_like()),
        "london-like" => Some(london_like()),
        _ => None,
    }
}

/// Uniformly random simple graph with `n` nodes and `m` edges (Erdős–Rényi
/// G(n, m)). Orientations follow the default smaller-to-larger rule.
///
/// Panics if `m` exceeds `n(n−1)/2`.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let max_edges = n * n.saturating_sub(1) / 2;
    assert!(
        m <= max_edges,
        "{m} edges do not fit in a simple graph on {n} nodes"
    );
    let mut r = rng(seed, GRAPH_STREAM);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    if m * 2 > max_edges {
        // dense: shuffle the full pair list
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        for i in (1..all.len()).rev() {
            let j = r.random_range(0..=i);
            all.swap(i, j);
        }
        all.truncate(m);
        pairs = all;
    } else {
        while pairs.len() < m {
            let u = r.random_range(0..n);
            let v = r.random_range(0..n);
            if u != v && seen.insert((u.min(v), u.max(v))) {
                pairs.push((u, v));
            }
        }
    }
    Graph::new(n, &pairs).expect("generated pairs are simple")
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    }
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Connected planar street-like graph: `n` random points in a 1.6 × 1 box,
/// joined by their Euclidean minimum spanning tree and then by the shortest
/// chords that cross no existing edge, until there are `m` edges.
///
/// Coordinates are rounded to 4 decimals so the edge-list file round-trips.
/// Panics if `m < n − 1` or the chords run out before reaching `m`.
pub fn planar_like(n: usize, m: usize, seed: u64) -> Graph {
    assert!(n >= 2 && m + 1 >= n, "need at least n-1 edges");
    let mut r = rng(seed, GRAPH_STREAM);
    let round = |v: f64| (v * 1e4).round() / 1e4;
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            [
                round(r.random_range(0.0..1.6)),
                round(r.random_range(0.0..1.0)),
            ]
        })
        .collect();
    let dist = |i: usize, j: usize| {
        ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt()
    };

    let mut cand: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .map(|(u, v)| (dist(u, v), u, v))
        .collect();
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    // Kruskal
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut used = vec![false; cand.len()];
    for (i, &(_, u, v)) in cand.iter().enumerate() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            chosen.push((u, v));
            used[i] = true;
        }
    }
    for (i, &(_, u, v)) in cand.iter().enumerate() {
        if chosen.len() >= m {
            break;
        }
        if used[i] {
            continue;
        }
        let crosses = chosen.iter().any(|&(a, b)| {
            a != u && a != v && b != u && b != v && segments_cross(pts[u], pts[v], pts[a], pts[b])
        });
        if !crosses {
            chosen.push((u, v));
        }
    }
    assert_eq!(chosen.len(), m, "ran out of non-crossing chords");
    Graph::new(n, &chosen)
        .expect("generated edges are simple")
        .with_coords(pts)
        .expect("one coordinate per node")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::cycle_space_dimension;
    use crate::io::format_edge_list;

    #[test]
    fn fig1_like_has_two_cycles() {
        let g = fig1_like();
        assert_eq!(g.num_components(), 1);
        assert_eq!(cycle_space_dimension(&g), 2);
        assert!(g.coords().is_some());
    }

    #[test]
    fn london_like_matches_generator() {
        let g = london_like();
        assert_eq!(g.num_nodes(), LONDON_LIKE_NODES);
        assert_eq!(g.num_edges(), LONDON_LIKE_EDGES);
        assert_eq!(g.num_components(), 1);
        let regenerated = planar_like(LONDON_LIKE_NODES, LONDON_LIKE_EDGES, LONDON_LIKE_SEED);
        assert_eq!(format_edge_list(&regenerated), format_edge_list(&g));
    }

    #[test]
    fn random_graph_sizes() {
        for (n, m) in [(5, 0), (5, 10), (12, 20), (100, 300)] {
            let g = random_graph(n, m, 3);
            assert_eq!((g.num_nodes(), g.num_edges()), (n, m));
        }
        assert_eq!(random_graph(12, 20, 9), random_graph(12, 20, 9));
    }
}
