//! Text file formats.
//!
//! **Edge list** (UTF-8, `#` starts a comment):
//!
//! ```text
//! nodes 4              optional; otherwise N = max id + 1
//! coord 0 0.5 1.25     optional node coordinates, all or none
//! 0 1                tail head, 0-based, any whitespace between
//! 1 2
//! ```
//!
//! **Signal file**: header comments naming the domain, graph, orientation
//! convention, length, and a hash of the oriented edge list, followed by one
//! `index value` line per entry. Values use Rust's shortest round-trip float
//! formatting, so write-then-read is bit-exact.
//!
//! **Records**: flat `key = value` lines, used for filter specs and recipes.
//!
//! **Operators**: `row col value` triplets sorted by `(row, col)` after a
//! `# shape rows cols` comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::operator::{Entry, Operator};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    InvalidGraph { line: usize, source: GraphError },
    #[error(
        "signal file was written for graph {found}, but the graph's edge-list hash is {expected}"
    )]
    HashMismatch { expected: String, found: String },
    #[error("signal file has domain {found}, expected {expected}")]
    DomainMismatch {
        expected: SignalDomain,
        found: SignalDomain,
    },
    #[error("signal has {actual} entries, graph needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "parse_error",
            ParseError::InvalidGraph { source, .. } => source.code(),
            ParseError::HashMismatch { .. } => "graph_hash_mismatch",
            ParseError::DomainMismatch { .. } => "signal_domain_mismatch",
            ParseError::LengthMismatch { .. } => "dimension_mismatch",
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Content lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_num<T: std::str::FromStr>(
    line: usize,
    tok: Option<&str>,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} {tok:?}")))
}

/// Parses an edge-list file. Orientations are taken as written.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pair_lines: Vec<usize> = Vec::new();
    let mut coords: BTreeMap<usize, (usize, [f64; 2])> = BTreeMap::new();

    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let first = toks.next().expect("content lines are non-empty");
        match first {
            "nodes" => {
                if declared.is_some() {
                    return Err(syntax(ln, "duplicate nodes header"));
                }
                declared = Some((parse_num(ln, toks.next(), "node count")?, ln));
            }
            "coord" => {
                let id: usize = parse_num(ln, toks.next(), "node id")?;
                let x: f64 = parse_num(ln, toks.next(), "x coordinate")?;
                let y: f64 = parse_num(ln, toks.next(), "y coordinate")?;
                if coords.insert(id, (ln, [x, y])).is_some() {
                    return Err(syntax(ln, format!("duplicate coordinates for node {id}")));
                }
            }
            _ => {
                let tail: usize = parse_num(ln, Some(first), "tail node id")?;
                let head: usize = parse_num(ln, toks.next(), "head node id")?;
                pairs.push((tail, head));
                pair_lines.push(ln);
            }
        }
        if toks.next().is_some() {
            return Err(syntax(ln, "unexpected trailing tokens"));
        }
    }

    let inferred = pairs
        .iter()
        .map(|&(t, h)| t.max(h) + 1)
        .chain(coords.keys().map(|&i| i + 1))
        .max()
        .unwrap_or(0);
    let n = declared.map_or(inferred, |(n, _)| n);
    let g = Graph::with_orientation(n, &pairs).map_err(|e| {
        let edge = match &e {
            GraphError::SelfLoop { edge, .. }
            | GraphError::DuplicateEdge { edge, .. }
            | GraphError::NodeOutOfRange { edge, .. } => *edge,
            _ => 0,
        };
        ParseError::InvalidGraph {
            line: pair_lines.get(edge).copied().unwrap_or(0),
            source: e,
        }
    })?;

    if coords.is_empty() {
        return Ok(g);
    }
    if let Some((&id, &(ln, _))) = coords.iter().find(|(&id, _)| id >= n) {
        return Err(syntax(
            ln,
            format!("coordinates for node {id}, but the graph has {n} nodes"),
        ));
    }
    if coords.len() != n {
        return Err(syntax(
            0,
            format!("coordinates given for {} of {n} nodes", coords.len()),
        ));
    }
    let xy = coords.into_values().map(|(_, c)| c).collect();
    g.with_coords(xy)
        .map_err(|e| ParseError::InvalidGraph { line: 0, source: e })
}

/// Serializes a graph in the edge-list format, tab-separated.
pub fn format_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "nodes {}", g.num_nodes()).unwrap();
    if let Some(coords) = g.coords() {
        for (i, [x, y]) in coords.iter().enumerate() {
            writeln!(s, "coord {i} {x} {y}").unwrap();
        }
    }
    for e in g.edges() {
        writeln!(s, "{}\t{}", e.tail, e.head).unwrap();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalDomain {
    Node,
    Edge,
}

impl std::fmt::Display for SignalDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignalDomain::Node => "node",
            SignalDomain::Edge => "edge",
        })
    }
}

/// A parsed signal file.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub domain: SignalDomain,
    pub graph_name: Option<String>,
    pub graph_hash: Option<String>,
    pub values: Vec<f64>,
}

impl SignalFile {
    /// Checks length, domain and (when present) the edge-list hash against `g`.
    pub fn check_against(&self, g: &Graph, domain: SignalDomain) -> Result<(), ParseError> {
        if self.domain != domain {
            return Err(ParseError::DomainMismatch {
                expected: domain,
                found: self.domain,
            });
        }
        if let Some(h) = &self.graph_hash {
            let expected = g.edge_list_hash();
            if *h != expected {
                return Err(ParseError::HashMismatch {
                    expected,
                    found: h.clone(),
                });
            }
        }
        let expected = match domain {
            SignalDomain::Node => g.num_nodes(),
            SignalDomain::Edge => g.num_edges(),
        };
        if self.values.len() != expected {
            return Err(ParseError::LengthMismatch {
                expected,
                actual: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Writes a signal bound to `g`. `graph_name` is informational.
pub fn format_signal(values: &[f64], domain: SignalDomain, g: &Graph, graph_name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "# edgeflow signal").unwrap();
    writeln!(s, "# domain {domain}").unwrap();
    writeln!(s, "# graph {graph_name}").unwrap();
    if domain == SignalDomain::Edge {
        writeln!(s, "# orientation tail->head").unwrap();
    }
    writeln!(s, "# length {}", values.len()).unwrap();
    writeln!(s, "# graph_hash {}", g.edge_list_hash()).unwrap();
    for (i, v) in values.iter().enumerate() {
        writeln!(s, "{i} {v}").unwrap();
    }
    s
}

/// Parses a signal file. Without a `# domain` header the domain is `edge`.
pub fn parse_signal(text: &str) -> Result<SignalFile, ParseError> {
    let mut domain = SignalDomain::Edge;
    let mut graph_name = None;
    let mut graph_hash = None;
    let mut declared_len: Option<(usize, usize)> = None;
    let mut entries: BTreeMap<usize, (usize, f64)> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut toks = comment.split_whitespace();
            match toks.next() {
                Some("domain") => {
                    domain = match toks.next() {
                        Some("node") => SignalDomain::Node,
                        Some("edge") => SignalDomain::Edge,
                        other => return Err(syntax(ln, format!("unknown domain {other:?}"))),
                    }
                }
                Some("graph") => graph_name = toks.next().map(str::to_string),
                Some("graph_hash") => graph_hash = toks.next().map(str::to_string),
                Some("length") => declared_len = Some((parse_num(ln, toks.next(), "length")?, ln)),
                _ => {}
            }
            continue;
        }
        let line = trimmed.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let idx: usize = parse_num(ln, toks.next(), "index")?;
        let val: f64 = parse_num(ln, toks.next(), "value")?;
        if toks.next().is_some() {
            return Err(syntax(ln, "unexpected trailing tokens"));
        }
        if let Some((prev, _)) = entries.insert(idx, (ln, val)) {
            return Err(syntax(
                ln,
                format!("index {idx} already given on line {prev}"),
            ));
        }
    }

    let len = declared_len.map_or(entries.len(), |(n, _)| n);
    if let Some((&idx, &(ln, _))) = entries.iter().find(|(&i, _)| i >= len) {
        return Err(syntax(
            ln,
            format!("index {idx} out of range for length {len}"),
        ));
    }
    if entries.len() != len {
        let missing = (0..len).find(|i| !entries.contains_key(i)).unwrap_or(0);
        return Err(syntax(
            declared_len.map_or(0, |(_, ln)| ln),
            format!("missing entry for index {missing}"),
        ));
    }
    Ok(SignalFile {
        domain,
        graph_name,
        graph_hash,
        values: entries.into_values().map(|(_, v)| v).collect(),
    })
}

/// Parses flat `key = value` lines (`key: value` also accepted).
pub fn parse_record(text: &str) -> Result<BTreeMap<String, String>, ParseError> {
    let mut out = BTreeMap::new();
    for (ln, line) in content_lines(text) {
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| syntax(ln, "expected key = value"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(syntax(ln, "expected key = value"));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(syntax(ln, format!("duplicate key {k:?}")));
        }
    }
    Ok(out)
}

/// Coordinate-triplet text with a shape header.
pub fn format_operator<T: Entry>(op: &Operator<T>) -> String {
    format!(
        "# shape {} {}\n{}",
        op.rows(),
        op.cols(),
        op.to_triplet_text()
    )
}

pub fn parse_operator(text: &str) -> Result<Operator<f64>, ParseError> {
    let mut shape = None;
    let mut trips = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let t = raw.trim();
        if let Some(rest) = t.strip_prefix("# shape") {
            let mut toks = rest.split_whitespace();
            shape = Some((
                parse_num::<usize>(ln, toks.next(), "rows")?,
                parse_num::<usize>(ln, toks.next(), "cols")?,
            ));
            continue;
        }
        let line = t.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let r: usize = parse_num(ln, toks.next(), "row")?;
        let c: usize = parse_num(ln, toks.next(), "col")?;
        let v: f64 = parse_num(ln, toks.next(), "value")?;
        trips.push((ln, r, c, v));
    }
    let (rows, cols) = shape.unwrap_or_else(|| {
        trips.iter().fold((0, 0), |(mr, mc), &(_, r, c, _)| {
            (mr.max(r + 1), mc.max(c + 1))
        })
    });
    if let Some(&(ln, r, c, _)) = trips.iter().find(|&&(_, r, c, _)| r >= rows || c >= cols) {
        return Err(syntax(
            ln,
            format!("entry ({r}, {c}) outside {rows}x{cols}"),
        ));
    }
    Ok(Operator::from_triplets(
        rows,
        cols,
        trips.into_iter().map(|(_, r, c, v)| (r, c, v)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_basic() {
        let g = parse_edge_list("# triangle\n0\t1\n1\t2\n2 0 # reversed on purpose\n").unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.edge(2).tail, 2);
        let g = parse_edge_list("nodes 5\n0\t1\n").unwrap();
        assert_eq!(g.num_nodes(), 5);
        assert_eq!(parse_edge_list("").unwrap().num_nodes(), 0);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n\n1 x\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err:?}");
        let err = parse_edge_list("0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::InvalidGraph { line: 2, .. }));
        assert_eq!(err.code(), "self_loop");
        let err = parse_edge_list("nodes 2\n0 1\n# c\n1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::InvalidGraph { line: 4, .. }));
        assert_eq!(err.code(), "node_out_of_range");
        let err = parse_edge_list("0 1\n1 0\n").unwrap_err();
        assert_eq!(err.code(), "duplicate_edge");
    }

    #[test]
    fn edge_list_with_coords_round_trips() {
        let text = "nodes 3\ncoord 0 0 0\ncoord 1 1.5 0\ncoord 2 0.25 -1\n0\t1\n2\t1\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.coords().unwrap()[2], [0.25, -1.0]);
        assert_eq!(format_edge_list(&g), text);
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
        assert!(parse_edge_list("coord 0 1 1\n0 1\n").is_err());
    }

    #[test]
    fn signal_round_trip_and_binding() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let vals = vec![0.1 + 0.2, -1e-300, 12345.678901234567];
        let text = format_signal(&vals, SignalDomain::Edge, &g, "tri.edges");
        let parsed = parse_signal(&text).unwrap();
        assert_eq!(parsed.values, vals);
        assert_eq!(parsed.graph_name.as_deref(), Some("tri.edges"));
        parsed.check_against(&g, SignalDomain::Edge).unwrap();

        let flipped = g.flip_orientation(0).unwrap();
        let err = parsed
            .check_against(&flipped, SignalDomain::Edge)
            .unwrap_err();
        assert_eq!(err.code(), "graph_hash_mismatch");
        let err = parsed.check_against(&g, SignalDomain::Node).unwrap_err();
        assert_eq!(err.code(), "signal_domain_mismatch");
    }

    #[test]
    fn bare_signal_without_header() {
        let s = parse_signal("1 2.5\n0 -1\n").unwrap();
        assert_eq!(s.values, vec![-1.0, 2.5]);
        assert_eq!(s.domain, SignalDomain::Edge);
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            s.check_against(&g, SignalDomain::Edge).unwrap_err().code(),
            "dimension_mismatch"
        );
        assert!(parse_signal("0 1\n2 1\n").is_err());
        assert!(parse_signal("0 1\n0 2\n").is_err());
    }

    #[test]
    fn record_parsing() {
        let r = parse_record("# filter\nkind = mixed\nalpha=28\nbeta: 0.06\n").unwrap();
        assert_eq!(r["kind"], "mixed");
        assert_eq!(r["alpha"], "28");
        assert_eq!(r["beta"], "0.06");
        assert!(parse_record("alpha = 1\nalpha = 2\n").is_err());
        assert!(parse_record("just words\n").is_err());
    }

    #[test]
    fn operator_text_is_sorted_and_round_trips() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let text = format_operator(&g.edge_laplacian());
        assert!(text.starts_with("# shape 3 3\n0 0 2\n0 1 -1\n0 2 1\n1 0 -1\n"));
        assert_eq!(parse_operator(&text).unwrap(), g.edge_laplacian().to_real());
        let empty = format_operator(&Graph::new(3, &[]).unwrap().laplacian());
        assert_eq!(parse_operator(&empty).unwrap().shape(), (3, 3));
    }
}
