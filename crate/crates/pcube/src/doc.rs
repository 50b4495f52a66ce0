//! File formats for the command-line tool: the `pcube/1` JSON graph
//! document, the plain edge-list format for recognition input, and DOT
//! export with edges colored by Θ-class.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AbstractGraph, CoordRemap, CubeGraph, GraphError, Label};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("document parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The on-disk graph document. Vertex labels are bitstrings of length `m`;
/// bitstring index 1 is the leftmost character.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format: String,
    pub m: usize,
    pub vertices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

pub const FORMAT: &str = "pcube/1";

impl GraphDocument {
    pub fn from_graph(g: &CubeGraph) -> GraphDocument {
        GraphDocument {
            format: FORMAT.to_string(),
            m: g.m(),
            vertices: g.labels().iter().map(|l| l.bitstring(g.m())).collect(),
            names: None,
        }
    }

    pub fn parse(text: &str) -> Result<GraphDocument, DocError> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))?;
        if doc.format != FORMAT {
            return Err(DocError::Parse(format!(
                "unsupported format `{}`, expected `{FORMAT}`",
                doc.format
            )));
        }
        if let Some(names) = &doc.names {
            if names.len() != doc.vertices.len() {
                return Err(DocError::Parse("names and vertices differ in length".into()));
            }
        }
        Ok(doc)
    }

    pub fn to_graph(&self) -> Result<(CubeGraph, CoordRemap), DocError> {
        let mut labels = Vec::with_capacity(self.vertices.len());
        for s in &self.vertices {
            if s.len() != self.m {
                return Err(DocError::Parse(format!(
                    "vertex `{s}` does not have {} bits",
                    self.m
                )));
            }
            let label = Label::from_bitstring(s)
                .ok_or_else(|| DocError::Parse(format!("bad bitstring `{s}`")))?;
            labels.push(label);
        }
        Ok(CubeGraph::from_labels(self.m, labels)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }
}

/// Parses the edge-list format: one `u v` pair per line, 0-based vertex
/// ids; blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<AbstractGraph, DocError> {
    let mut edges = Vec::new();
    let mut max_id = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize, DocError> {
            tok.and_then(|t| t.parse().ok()).ok_or_else(|| {
                DocError::Parse(format!("line {}: expected `u v`", lineno + 1))
            })
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(DocError::Parse(format!("line {}: expected `u v`", lineno + 1)));
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(DocError::Parse("no edges".into()));
    }
    Ok(AbstractGraph::from_edges(max_id + 1, &edges))
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Deterministic DOT output with edges colored by Θ-class (palette cycles
/// after ten classes).
pub fn export_dot(g: &CubeGraph) -> String {
    let mut out = String::from("graph pcube {\n  node [shape=box, fontname=\"monospace\"];\n");
    for i in 0..g.m() {
        out.push_str(&format!("  // class {i}: {}\n", PALETTE[i % PALETTE.len()]));
    }
    for &l in g.labels() {
        out.push_str(&format!("  \"{}\";\n", l.bitstring(g.m())));
    }
    let mut lines: Vec<String> = Vec::new();
    for (u, v) in g.edges() {
        let (lu, lv) = (g.label(u), g.label(v));
        let class = lu.xor(lv).iter().next().expect("edge flips one coordinate");
        let (a, b) = if lu < lv { (lu, lv) } else { (lv, lu) };
        lines.push(format!(
            "  \"{}\" -- \"{}\" [color=\"{}\"];\n",
            a.bitstring(g.m()),
            b.bitstring(g.m()),
            PALETTE[class % PALETTE.len()]
        ));
    }
    lines.sort();
    for line in lines {
        out.push_str(&line);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sk(n: usize) -> CubeGraph {
        let mut labels: Vec<Label> = (0..n).map(Label::singleton).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                labels.push(Label::singleton(i).with(j));
            }
        }
        CubeGraph::from_labels(n, labels).unwrap().0
    }

    #[test]
    fn document_round_trip_is_bit_exact() {
        let g = sk(4);
        let doc = GraphDocument::from_graph(&g);
        let text = doc.to_json();
        let parsed = GraphDocument::parse(&text).unwrap();
        let (g2, _) = parsed.to_graph().unwrap();
        assert_eq!(g2.labels(), g.labels());
        assert_eq!(parsed.to_json(), text);
    }

    #[test]
    fn document_rejects_bad_input() {
        assert!(GraphDocument::parse("{}").is_err());
        assert!(GraphDocument::parse("{\"format\":\"pcube/2\",\"m\":1,\"vertices\":[\"0\"]}")
            .is_err());
        let doc = GraphDocument {
            format: FORMAT.into(),
            m: 2,
            vertices: vec!["0".into()],
            names: None,
        };
        assert!(doc.to_graph().is_err());
    }

    #[test]
    fn edge_list_parses() {
        let g = parse_edge_list("0 1\n1 2\n# comment\n2 0\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().len(), 3);
        assert!(parse_edge_list("0\n").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn dot_is_deterministic_and_colored() {
        let g = sk(4);
        let a = export_dot(&g);
        let b = export_dot(&g);
        assert_eq!(a, b);
        assert!(a.contains("#1f77b4"));
        assert_eq!(a.matches(" -- ").count(), g.edge_count());
    }
}
