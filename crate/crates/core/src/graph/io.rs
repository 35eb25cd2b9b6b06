use std::fmt::Write as _;
use std::str::FromStr;

use super::{CubicGraph, GraphError, Multigraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            "edge_list" | "edge-list" | "edgelist" => Ok(GraphFormat::EdgeList),
            other => Err(GraphError::MalformedInput(format!(
                "unknown format {other:?}"
            ))),
        }
    }
}

pub fn parse_graph(text: &[u8], format: GraphFormat) -> Result<CubicGraph, GraphError> {
    let g = match format {
        GraphFormat::Graph6 => parse_graph6(text)?,
        GraphFormat::EdgeList => parse_edge_list(text)?,
    };
    CubicGraph::from_multigraph(g)
}

fn malformed(msg: impl Into<String>) -> GraphError {
    GraphError::MalformedInput(msg.into())
}

/// Parses a single graph6 record. An optional `>>graph6<<` prefix and one
/// trailing newline are accepted. Edge ids follow the bit order of the
/// upper triangle, column by column.
pub fn parse_graph6(text: &[u8]) -> Result<Multigraph, GraphError> {
    let mut bytes = text;
    while let Some((&last, rest)) = bytes.split_last() {
        if last == b'\n' || last == b'\r' {
            bytes = rest;
        } else {
            break;
        }
    }
    if let Some(rest) = bytes.strip_prefix(b">>graph6<<") {
        bytes = rest;
    }
    if bytes.contains(&b'\n') {
        return Err(malformed("graph6 input holds more than one graph"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(malformed(format!(
                "byte {b:#04x} at offset {i} is not graph6"
            )));
        }
    }
    let (n, body) = decode_size(bytes)?;
    let bits_needed = n * n.saturating_sub(1) / 2;
    let bytes_needed = bits_needed.div_ceil(6);
    if body.len() != bytes_needed {
        return Err(malformed(format!(
            "expected {bytes_needed} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| -> bool {
        let byte = body[k / 6] - 63;
        (byte >> (5 - k % 6)) & 1 == 1
    };
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    // padding bits must be zero
    for pad in k..body.len() * 6 {
        if bit(pad) {
            return Err(malformed("nonzero padding bits"));
        }
    }
    Multigraph::new(n, edges)
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let value = |chunk: &[u8]| {
        chunk
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize)
    };
    match bytes {
        [] => Err(malformed("empty graph6 string")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(malformed("truncated graph6 size"));
            }
            Ok((value(&rest[..6]), &rest[6..]))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(malformed("truncated graph6 size"));
            }
            Ok((value(&rest[..3]), &rest[3..]))
        }
        [first, rest @ ..] => Ok(((first - 63) as usize, rest)),
    }
}

/// graph6 encoding. Fails on multigraphs, which the format cannot express.
pub fn to_graph6(g: &Multigraph) -> Result<String, GraphError> {
    let n = g.vertex_count();
    let mut adj = vec![false; n * n];
    for (_, u, v) in g.edges() {
        if adj[u * n + v] {
            return Err(malformed("graph6 cannot encode parallel edges"));
        }
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Edge list: a header line `n m`, then `m` lines `u v` with 0-based ids.
/// Repeated lines are parallel edges.
pub fn parse_edge_list(text: &[u8]) -> Result<Multigraph, GraphError> {
    let text = std::str::from_utf8(text).map_err(|_| malformed("edge list is not UTF-8"))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| malformed("missing header line"))?;
    let (n, m) = parse_pair(header).map_err(|e| malformed(format!("line 1: {e}")))?;
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let (u, v) = parse_pair(line).map_err(|e| malformed(format!("line {}: {e}", idx + 1)))?;
        edges.push((u as Vertex, v as Vertex));
    }
    if edges.len() != m {
        return Err(malformed(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Multigraph::new(n, edges)
}

fn parse_pair(line: &str) -> Result<(usize, usize), String> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next().ok_or("expected two integers")?;
    let b = it.next().ok_or("expected two integers")?;
    if it.next().is_some() {
        return Err("trailing tokens".into());
    }
    let a = a.parse().map_err(|_| format!("bad integer {a:?}"))?;
    let b = b.parse().map_err(|_| format!("bad integer {b:?}"))?;
    Ok((a, b))
}

pub fn to_edge_list(g: &Multigraph) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (_, u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_petersen, generate_prism};

    #[test]
    fn k4_from_graph6() {
        let g = parse_graph(b"C~", GraphFormat::Graph6).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn graph6_header_and_newline() {
        let g = parse_graph(b">>graph6<<C~\n", GraphFormat::Graph6).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn petersen_graph6_roundtrip() {
        let g = generate_petersen();
        let s = to_graph6(&g).unwrap();
        let back = parse_graph6(s.as_bytes()).unwrap();
        assert_eq!(back.vertex_count(), 10);
        assert_eq!(back.edge_count(), 15);
        // the canonical string for this labelling
        assert_eq!(s, to_graph6(&back).unwrap());
    }

    #[test]
    fn graph6_bad_byte() {
        assert!(matches!(
            parse_graph6(b"C\x01"),
            Err(GraphError::MalformedInput(_))
        ));
        assert!(matches!(
            parse_graph6(b"C~~"),
            Err(GraphError::MalformedInput(_))
        ));
    }

    #[test]
    fn graph6_large_header() {
        let n = 100;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Multigraph::new(n, edges).unwrap();
        let s = to_graph6(&g).unwrap();
        assert_eq!(s.as_bytes()[0], 126);
        let back = parse_graph6(s.as_bytes()).unwrap();
        assert_eq!(back.vertex_count(), 100);
        assert_eq!(back.edge_count(), 100);
    }

    #[test]
    fn theta_edge_list() {
        let g = parse_graph(b"2 3\n0 1\n0 1\n0 1", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.endpoints(2), (0, 1));
    }

    #[test]
    fn degree_two_vertex_is_not_cubic() {
        let err =
            parse_graph(b"4 5\n0 1\n1 2\n2 3\n3 0\n0 2\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(
            err,
            GraphError::NotCubic {
                vertex: 1,
                degree: 2
            }
        ));
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list(b"2 3\n0 1\n0 x\n0 1"),
            Err(GraphError::MalformedInput(_))
        ));
        assert!(matches!(
            parse_edge_list(b"2 3\n0 1\n"),
            Err(GraphError::MalformedInput(_))
        ));
        assert_eq!(parse_edge_list(b"2 1\n1 1\n"), Err(GraphError::LoopEdge(0)));
        assert!(matches!(
            parse_edge_list(b"2 1\n1 5\n"),
            Err(GraphError::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn edge_list_roundtrip_keeps_edge_order() {
        let g = generate_prism();
        let text = to_edge_list(&g);
        let back = parse_edge_list(text.as_bytes()).unwrap();
        assert_eq!(&back, g.as_multigraph());
    }
}
