//! Graphviz export. Arcs are drawn from source to range and labelled with
//! the edge id, so parallel edges stay distinct.

use afembed_core::Graph;

fn quote(id: &str) -> String {
    let mut out = String::with_capacity(id.len() + 2);
    out.push('"');
    for c in id.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for v in g.vertices() {
        out.push_str(&format!("  {};\n", quote(v.as_str())));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            quote(e.source.as_str()),
            quote(e.range.as_str()),
            quote(e.id.as_str())
        ));
    }
    out.push_str("}\n");
    out
}
