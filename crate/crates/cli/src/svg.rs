//! Flow maps as SVG.
//!
//! Each edge is drawn as a line with an arrowhead at its midpoint. The
//! arrow points along the edge's reference orientation when the flow is
//! positive and against it when negative, so a flow that changes sign after
//! filtering shows up as a reversed arrowhead. Line width scales with `|f|`
//! relative to the largest magnitude in the panel; color encodes the sign.

use std::fmt::Write as _;

use edgeflow::Graph;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 30.0;
const POSITIVE: &str = "#2166ac";
const NEGATIVE: &str = "#b2182b";
const ZERO: &str = "#bbbbbb";

fn fit(pos: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pos {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let span = [(hi[0] - lo[0]).max(1e-9), (hi[1] - lo[1]).max(1e-9)];
    let scale = ((WIDTH - 2.0 * MARGIN) / span[0]).min((HEIGHT - 2.0 * MARGIN - 20.0) / span[1]);
    pos.iter()
        .map(|p| {
            [
                MARGIN + (p[0] - lo[0]) * scale,
                // flip y so larger coordinates are drawn higher up
                HEIGHT - MARGIN - (p[1] - lo[1]) * scale,
            ]
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `flow` on `g` with node positions `pos`.
pub fn flow_map(g: &Graph, pos: &[[f64; 2]], flow: &[f64], title: &str) -> String {
    let pts = fit(pos);
    let max = flow.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    )
    .unwrap();
    for (e, edge) in g.edges().iter().enumerate() {
        let v = flow[e];
        let rel = if max > 0.0 { v.abs() / max } else { 0.0 };
        let color = if rel < 1e-12 {
            ZERO
        } else if v > 0.0 {
            POSITIVE
        } else {
            NEGATIVE
        };
        let width = 0.75 + 5.0 * rel;
        let (a, b) = if v < 0.0 {
            (pts[edge.head], pts[edge.tail])
        } else {
            (pts[edge.tail], pts[edge.head])
        };
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width:.2}" stroke-linecap="round"/>"#,
            a[0], a[1], b[0], b[1]
        )
        .unwrap();
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        if len > 0.0 && rel >= 1e-12 {
            let (ux, uy) = (dx / len, dy / len);
            let size = 5.0 + 4.0 * rel;
            let tip = [
                (a[0] + b[0]) / 2.0 + ux * size,
                (a[1] + b[1]) / 2.0 + uy * size,
            ];
            let base = [tip[0] - ux * 2.0 * size, tip[1] - uy * 2.0 * size];
            let left = [base[0] - uy * size, base[1] + ux * size];
            let right = [base[0] + uy * size, base[1] - ux * size];
            writeln!(
                s,
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
                tip[0], tip[1], left[0], left[1], right[0], right[1]
            )
            .unwrap();
        }
    }
    for p in &pts {
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="#333333"/>"##,
            p[0], p[1]
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
