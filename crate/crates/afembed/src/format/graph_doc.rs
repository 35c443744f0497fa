//! Graph documents.
//!
//! The text form has one declaration per line:
//!
//! ```text
//! # the 4-cycle
//! vertex u1
//! vertex u2
//! edge e1 u1 u2      # e1 : u1 -> u2
//! ```
//!
//! Declarations may come in any order and `#` starts a comment. The JSON
//! form is `{"vertices": [...], "edges": [{"id", "src", "dst"}]}` where
//! `dst` is the range vertex.

use std::collections::BTreeMap;
use std::fmt;

use afembed_core::{Edge, EdgeId, Graph, VertexId};
use serde::{Deserialize, Serialize};

use super::DocError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.vertices().iter().map(|v| v.to_string()).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.to_string(),
                    src: e.source.to_string(),
                    dst: e.range.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, DocError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexId::new(v).map_err(DocError::unplaced))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: EdgeId::new(&e.id).map_err(DocError::unplaced)?,
                    source: VertexId::new(&e.src).map_err(DocError::unplaced)?,
                    range: VertexId::new(&e.dst).map_err(DocError::unplaced)?,
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        Graph::new(vertices, edges).map_err(DocError::unplaced)
    }
}

/// A token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (byte, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((byte, column + 1)),
            (true, Some((b, col))) => {
                out.push(Token {
                    text: &line[b..byte],
                    column: col,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, col)) = start {
        out.push(Token {
            text: &line[b..],
            column: col,
        });
    }
    out
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl fmt::Display) -> DocError {
        DocError::at(self.line, self.column, message)
    }
}

pub fn parse_text(text: &str) -> Result<Graph, DocError> {
    let mut vertices: BTreeMap<&str, Pos> = BTreeMap::new();
    let mut vertex_order = Vec::new();
    let mut edges: BTreeMap<&str, Pos> = BTreeMap::new();
    let mut edge_decls: Vec<[(&str, Pos); 3]> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else {
            continue;
        };
        let at = |t: &Token| Pos {
            line,
            column: t.column,
        };
        let args = &toks[1..];
        match head.text {
            "vertex" => {
                let [id] = args else {
                    return Err(
                        at(head).error(format!("`vertex` takes one id, found {}", args.len()))
                    );
                };
                VertexId::new(id.text).map_err(|e| at(id).error(e))?;
                if vertices.insert(id.text, at(id)).is_some() {
                    return Err(at(id).error(format!("duplicate vertex id `{}`", id.text)));
                }
                vertex_order.push(id.text);
            }
            "edge" => {
                let [id, src, dst] = args else {
                    return Err(at(head).error(format!(
                        "`edge` takes an id, a source and a range, found {} arguments",
                        args.len()
                    )));
                };
                EdgeId::new(id.text).map_err(|e| at(id).error(e))?;
                for v in [src, dst] {
                    VertexId::new(v.text).map_err(|e| at(v).error(e))?;
                }
                if edges.insert(id.text, at(id)).is_some() {
                    return Err(at(id).error(format!("duplicate edge id `{}`", id.text)));
                }
                edge_decls.push([(id.text, at(id)), (src.text, at(src)), (dst.text, at(dst))]);
            }
            other => {
                return Err(at(head).error(format!("expected `vertex` or `edge`, found `{other}`")))
            }
        }
    }

    for [(id, _), (src, src_pos), (dst, dst_pos)] in &edge_decls {
        for (v, pos) in [(src, src_pos), (dst, dst_pos)] {
            if !vertices.contains_key(v) {
                return Err(pos.error(format!("edge `{id}` references undeclared vertex `{v}`")));
            }
        }
    }

    let doc = GraphDoc {
        vertices: vertex_order.iter().map(|v| v.to_string()).collect(),
        edges: edge_decls
            .iter()
            .map(|[(id, _), (src, _), (dst, _)]| EdgeDoc {
                id: id.to_string(),
                src: src.to_string(),
                dst: dst.to_string(),
            })
            .collect(),
    };
    doc.to_graph()
}

pub fn write_text(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.id, e.source, e.range));
    }
    out
}

pub fn parse_json(text: &str) -> Result<Graph, DocError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(DocError::from_json)?;
    doc.to_graph()
}

pub fn write_json(g: &Graph) -> String {
    let mut out = serde_json::to_string_pretty(&GraphDoc::from_graph(g))
        .expect("graph documents always serialize");
    out.push('\n');
    out
}

/// Parses either form, choosing JSON when the document starts with `{`.
pub fn parse_any(text: &str) -> Result<Graph, DocError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
# the 4-cycle
edge e1 u1 u2
edge e2 u2 u3   # declared before its vertices
edge e3 u3 u4
edge e4 u4 u1
vertex u1
vertex u2
vertex u3
vertex u4
";

    #[test]
    fn parses_the_square() {
        let g = parse_text(SQUARE).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.receivers("u2").unwrap()[0].as_str(), "e1");
        assert_eq!(parse_text(&write_text(&g)).unwrap(), g);
        assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
    }

    #[test]
    fn one_vertex_no_edges() {
        let g = parse_text("vertex a\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_text("vertex a\nedge x a b\n").unwrap_err();
        assert_eq!((e.line, e.column), (Some(2), Some(10)));
        assert!(e.message.contains("undeclared vertex `b`"));

        let e = parse_text("vertex a\n  vertex a\n").unwrap_err();
        assert_eq!((e.line, e.column), (Some(2), Some(10)));

        let e = parse_text("vertex a\nvortex b\n").unwrap_err();
        assert_eq!(
            e.to_string(),
            "2:1: expected `vertex` or `edge`, found `vortex`"
        );

        let e = parse_text("edge x a\n").unwrap_err();
        assert_eq!((e.line, e.column), (Some(1), Some(1)));

        let e = parse_text("vertex a(1)\n").unwrap_err();
        assert_eq!((e.line, e.column), (Some(1), Some(8)));
    }

    #[test]
    fn json_errors() {
        let e = parse_json("{\"vertices\": [\"a\"], \"edges\": [{\"id\": \"x\"}]}").unwrap_err();
        assert_eq!(e.line, Some(1));
        let e = parse_json(
            "{\"vertices\": [\"a\"], \"edges\": [{\"id\": \"x\", \"src\": \"a\", \"dst\": \"b\"}]}",
        )
        .unwrap_err();
        assert_eq!(e.line, None);
        assert!(e.message.contains("undeclared"));
        assert!(parse_any("  {\"vertices\": [], \"edges\": []}").is_ok());
    }
}
