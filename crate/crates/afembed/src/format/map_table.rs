//! Generator map tables: one tab-separated row `kind id image` per vertex
//! and edge of the original graph, with the image in the term grammar.
//!
//! ```text
//! # kind	id	image
//! vertex	u1	p(u1)
//! edge	e1	s(T1.f2) t(T1) s*(T1.f1)
//! ```

use std::collections::BTreeMap;

use afembed_core::symbolic::{parse_term, CkContext, CkTerm};
use afembed_core::{GeneratorMap, Graph};

use super::DocError;

pub fn write_table(map: &GeneratorMap) -> String {
    let mut out = String::from("# kind\tid\timage\n");
    for (v, image) in map.vertex_images() {
        out.push_str(&format!("vertex\t{v}\t{image}\n"));
    }
    for (e, image) in map.edge_images() {
        out.push_str(&format!("edge\t{e}\t{image}\n"));
    }
    out
}

/// Reads a table for the generators of `domain`, parsing images against
/// `ctx`. Every vertex and edge must appear exactly once.
pub fn parse_table(
    text: &str,
    domain: &Graph,
    ctx: &dyn CkContext,
) -> Result<GeneratorMap, DocError> {
    let mut vertices: BTreeMap<String, (usize, CkTerm)> = BTreeMap::new();
    let mut edges: BTreeMap<String, (usize, CkTerm)> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let [kind, id, image] = fields[..] else {
            return Err(DocError::on_line(
                line,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        let (table, known) = match kind {
            "vertex" => (&mut vertices, domain.contains_vertex(id)),
            "edge" => (&mut edges, domain.edge(id).is_some()),
            other => {
                return Err(DocError::at(
                    line,
                    1,
                    format!("expected `vertex` or `edge`, found `{other}`"),
                ))
            }
        };
        if !known {
            return Err(DocError::on_line(line, format!("unknown {kind} `{id}`")));
        }
        let column = kind.chars().count() + id.chars().count() + 3;
        let term = parse_term(image, ctx).map_err(|e| DocError::at(line, column, e))?;
        if let Some((first, _)) = table.insert(id.to_string(), (line, term)) {
            return Err(DocError::on_line(
                line,
                format!("{kind} `{id}` already mapped on line {first}"),
            ));
        }
    }
    let take = |table: &mut BTreeMap<String, (usize, CkTerm)>, kind: &str, id: &str| {
        table
            .remove(id)
            .map(|(_, t)| t)
            .ok_or_else(|| DocError::unplaced(format!("no image for {kind} `{id}`")))
    };
    let vertex_images = domain
        .vertices()
        .iter()
        .map(|v| take(&mut vertices, "vertex", v.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    let edge_images = domain
        .edges()
        .iter()
        .map(|e| take(&mut edges, "edge", e.id.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorMap::new(domain.clone(), vertex_images, edge_images).map_err(DocError::unplaced)
}
