//! Node positions for drawing.

use edgeflow::flowgen::gaussian_noise;
use edgeflow::Graph;

pub const LAYOUT_SEED: u64 = 7;
const ITERATIONS: usize = 300;

/// Stored coordinates when the graph has them, otherwise a force-directed
/// layout (Fruchterman–Reingold) started from a jittered circle. The jitter
/// uses a fixed seed, so the result depends only on the graph.
pub fn positions(g: &Graph) -> Vec<[f64; 2]> {
    if let Some(c) = g.coords() {
        return c.to_vec();
    }
    force_directed(g, LAYOUT_SEED)
}

pub fn force_directed(g: &Graph, seed: u64) -> Vec<[f64; 2]> {
    let n = g.num_nodes();
    if n == 0 {
        return Vec::new();
    }
    let jitter = gaussian_noise(2 * n, 0.05, seed);
    let mut pos: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [t.cos() + jitter[2 * i], t.sin() + jitter[2 * i + 1]]
        })
        .collect();
    let k = (4.0 / n as f64).sqrt();
    let mut temp = 0.2;
    for _ in 0..ITERATIONS {
        let mut disp = vec![[0.0f64; 2]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[i][0] - pos[j][0];
                let dy = pos[i][1] - pos[j][1];
                let d2 = (dx * dx + dy * dy).max(1e-9);
                let f = k * k / d2;
                disp[i][0] += dx * f;
                disp[i][1] += dy * f;
                disp[j][0] -= dx * f;
                disp[j][1] -= dy * f;
            }
        }
        for e in g.edges() {
            let (a, b) = (e.tail, e.head);
            let dx = pos[a][0] - pos[b][0];
            let dy = pos[a][1] - pos[b][1];
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d / k;
            disp[a][0] -= dx * f;
            disp[a][1] -= dy * f;
            disp[b][0] += dx * f;
            disp[b][1] += dy * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temp);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
        temp *= 0.985;
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_deterministic_and_finite() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        let a = positions(&g);
        assert_eq!(a, positions(&g));
        assert!(a.iter().all(|p| p[0].is_finite() && p[1].is_finite()));
    }
}
