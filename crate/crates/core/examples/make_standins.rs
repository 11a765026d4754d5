//! Regenerates `data/london-like.edges`.
//!
//! ```text
//! cargo run -p edgeflow --example make_standins > crates/core/data/london-like.edges
//! ```

use edgeflow::io::format_edge_list;
use edgeflow::standins::{planar_like, LONDON_LIKE_EDGES, LONDON_LIKE_NODES, LONDON_LIKE_SEED};

fn main() {
    let g = planar_like(LONDON_LIKE_NODES, LONDON_LIKE_EDGES, LONDON_LIKE_SEED);
    println!("# london-like: planar_like({LONDON_LIKE_NODES}, {LONDON_LIKE_EDGES}, seed {LONDON_LIKE_SEED})");
    print!("{}", format_edge_list(&g));
}
