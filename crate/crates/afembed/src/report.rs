//! Report records and their renderings: plain text for people,
//! newline-delimited JSON for scripts (fields in a fixed order) and CSV
//! tables for residuals and spectra.

use std::io;

use afembed_core::numeric::{ResidualReport, SpectrumReport};
use afembed_core::symbolic::{RelationEntry, RelationStatus};
use afembed_core::{EntranceWitness, InfiniteProjection, SimpleLoop};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Classification {
        verdict: String,
        vertices: usize,
        edges: usize,
        loops: usize,
    },
    Loop {
        index: usize,
        /// `e_1, …, e_n` in traversal order.
        edges: Vec<String>,
        vertices: Vec<String>,
    },
    Witness {
        loop_edges: Vec<String>,
        entry_vertex: String,
        entry_edge: String,
        alpha: String,
        beta: String,
        inequality: String,
    },
    Embedding {
        replaced_loops: usize,
        depth: usize,
        f_vertices: usize,
        f_edges: usize,
        f_verdict: String,
    },
    Tail {
        namespace: String,
        loop_edges: Vec<String>,
        mult: String,
        corner_dimensions: Vec<u64>,
    },
    MapEntry {
        kind: String,
        id: String,
        image: String,
    },
    Artifact {
        kind: String,
        path: String,
    },
    Relation {
        id: String,
        status: String,
        statement: String,
        difference: Option<String>,
    },
    Residual {
        relation: String,
        region: String,
        residual: f64,
        ok: bool,
    },
    Residuals {
        depth: usize,
        dimension: usize,
        interior_instances: usize,
        max_interior: f64,
        boundary_defects: usize,
        tolerance: f64,
        failures: usize,
    },
    Spectrum {
        tail: String,
        loop_len: usize,
        depth: usize,
        stage_size: u64,
        nonzero: usize,
        zero: usize,
        max_modulus_defect: f64,
        hausdorff: f64,
        bound: f64,
        ok: bool,
    },
    Result {
        command: String,
        exit_code: i32,
    },
}

fn traversal(l: &SimpleLoop) -> (Vec<String>, Vec<String>) {
    (1..=l.len())
        .map(|i| (l.edge(i).to_string(), l.vertex(i).to_string()))
        .unzip()
}

impl Record {
    pub fn for_loop(index: usize, l: &SimpleLoop) -> Self {
        let (edges, vertices) = traversal(l);
        Record::Loop {
            index,
            edges,
            vertices,
        }
    }

    pub fn for_witness(w: &EntranceWitness, chain: &InfiniteProjection) -> Self {
        Record::Witness {
            loop_edges: traversal(w.simple_loop()).0,
            entry_vertex: w.entry_vertex().to_string(),
            entry_edge: w.entry_edge().to_string(),
            alpha: w.alpha().to_string(),
            beta: w.beta().to_string(),
            inequality: chain.chain.clone(),
        }
    }

    pub fn for_relation(e: &RelationEntry) -> Self {
        Record::Relation {
            id: e.id.clone(),
            status: e.status.as_str().to_string(),
            statement: e.statement.clone(),
            difference: (e.status == RelationStatus::Failed && !e.difference.is_zero())
                .then(|| e.difference.to_string()),
        }
    }

    /// One row per relation instance, then a summary.
    pub fn for_residuals(
        r: &ResidualReport,
        depth: usize,
        dimension: usize,
        tolerance: f64,
    ) -> Vec<Self> {
        let mut out: Vec<Record> = r
            .interior
            .iter()
            .map(|x| Record::Residual {
                relation: x.relation.clone(),
                region: "interior".into(),
                residual: x.residual,
                ok: x.residual <= tolerance,
            })
            .collect();
        // boundary defects are expected and never fail the run
        out.extend(r.boundary.iter().map(|x| Record::Residual {
            relation: x.relation.clone(),
            region: "boundary".into(),
            residual: x.residual,
            ok: true,
        }));
        out.push(Record::Residuals {
            depth,
            dimension,
            interior_instances: r.interior.len(),
            max_interior: r.max_interior(),
            boundary_defects: r.boundary.len(),
            tolerance,
            failures: r.failures(tolerance).count(),
        });
        out
    }

    pub fn for_spectrum(s: &SpectrumReport, tolerance: f64) -> Self {
        let nonzero = s.nonzero().count();
        Record::Spectrum {
            tail: s.tail.to_string(),
            loop_len: s.loop_len,
            depth: s.depth,
            stage_size: s.stage_size,
            nonzero,
            zero: s.eigenvalues.len() - nonzero,
            max_modulus_defect: s.max_modulus_defect,
            hausdorff: s.hausdorff,
            bound: s.bound,
            ok: s.passes(tolerance),
        }
    }

    /// False for records that describe a failed check.
    pub fn passed(&self) -> bool {
        match self {
            Record::Relation { status, .. } => status != RelationStatus::Failed.as_str(),
            Record::Residual { ok, .. } | Record::Spectrum { ok, .. } => *ok,
            Record::Residuals { failures, .. } => *failures == 0,
            _ => true,
        }
    }

    /// Text lines for this record; passing residual rows are left to the
    /// summary line.
    fn text(&self) -> Vec<String> {
        match self {
            Record::Classification {
                verdict,
                vertices,
                edges,
                loops,
            } => vec![
                format!("verdict: {verdict}"),
                format!("graph: {vertices} vertices, {edges} edges; loops to replace: {loops}"),
            ],
            Record::Loop {
                index,
                edges,
                vertices,
            } => vec![format!(
                "loop {index}: edges {} through vertices {}",
                edges.join(" "),
                vertices.join(" ")
            )],
            Record::Witness {
                loop_edges,
                entry_vertex,
                entry_edge,
                alpha,
                beta,
                inequality,
            } => vec![
                format!("entrance: edge {entry_edge} enters loop {} at {entry_vertex}", loop_edges.join(" ")),
                format!("alpha: {alpha}"),
                format!("beta: {beta}"),
                format!("infinite projection: {inequality}"),
            ],
            Record::Embedding {
                replaced_loops,
                depth,
                f_vertices,
                f_edges,
                f_verdict,
            } => vec![format!(
                "embedding: loops replaced: {replaced_loops}; F at depth {depth} has {f_vertices} vertices and {f_edges} edges, verdict {f_verdict}"
            )],
            Record::Tail {
                namespace,
                loop_edges,
                mult,
                corner_dimensions,
            } => vec![format!(
                "tail {namespace}: replaces {}, multiplicities {mult}, corner dimensions {}",
                loop_edges.join(" "),
                corner_dimensions
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )],
            Record::MapEntry { kind, id, image } => vec![format!("map {kind} {id} -> {image}")],
            Record::Artifact { kind, path } => vec![format!("wrote {kind}: {path}")],
            Record::Relation {
                id,
                status,
                statement,
                difference,
            } => {
                let mut lines = vec![format!("{status:<9} {id}: {statement}")];
                if let Some(d) = difference {
                    lines.push(format!("          difference: {d}"));
                }
                lines
            }
            Record::Residual {
                relation,
                region,
                residual,
                ok,
            } => {
                if *ok {
                    Vec::new()
                } else {
                    vec![format!("failed    residual {relation} ({region}): {residual:.3e}")]
                }
            }
            Record::Residuals {
                depth,
                dimension,
                interior_instances,
                max_interior,
                boundary_defects,
                tolerance,
                failures,
            } => vec![format!(
                "residuals at depth {depth} (dimension {dimension}): {interior_instances} interior instances, max {max_interior:.3e}, tolerance {tolerance:.1e}, {failures} failures; {boundary_defects} boundary defects reported"
            )],
            Record::Spectrum {
                tail,
                loop_len,
                depth,
                stage_size,
                nonzero,
                zero,
                max_modulus_defect,
                hausdorff,
                bound,
                ok,
            } => vec![format!(
                "spectrum {tail}: loop length {loop_len}, depth {depth}, stage size {stage_size}, {nonzero} nonzero and {zero} zero eigenvalues, max modulus defect {max_modulus_defect:.3e}, distance to circle {hausdorff:.6} (bound {bound:.6}): {}",
                if *ok { "ok" } else { "failed" }
            )],
            Record::Result { command, exit_code } => {
                vec![format!("{command}: exit status {exit_code}")]
            }
        }
    }
}

pub fn render_text(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        for line in r.text() {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn render_json(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records always serialize"));
        out.push('\n');
    }
    out
}

/// `relation,region,residual` rows.
pub fn write_residual_csv(r: &ResidualReport, w: impl io::Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["relation", "region", "residual"])?;
    for (region, rows) in [("interior", &r.interior), ("boundary", &r.boundary)] {
        for x in rows {
            w.write_record([x.relation.as_str(), region, &format!("{:e}", x.residual)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `re,im,modulus` rows, one per eigenvalue.
pub fn write_spectrum_csv(s: &SpectrumReport, w: impl io::Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["re", "im", "modulus"])?;
    for z in &s.eigenvalues {
        w.write_record([z.re.to_string(), z.im.to_string(), z.norm().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_fields_keep_their_order() {
        let r = Record::Classification {
            verdict: "AF".into(),
            vertices: 2,
            edges: 1,
            loops: 0,
        };
        assert_eq!(
            render_json(&[r]),
            "{\"record\":\"classification\",\"verdict\":\"AF\",\"vertices\":2,\"edges\":1,\"loops\":0}\n"
        );
    }

    #[test]
    fn failing_records() {
        let bad = Record::Relation {
            id: "ck3 v=u2".into(),
            status: "failed".into(),
            statement: "p(u2) = s(e1) s*(e1)".into(),
            difference: Some("p(u2)".into()),
        };
        assert!(!bad.passed());
        let text = render_text(&[bad]);
        assert!(text.starts_with("failed    ck3 v=u2: "));
        assert!(text.contains("difference: p(u2)"));
        let quiet = Record::Residual {
            relation: "F ck1 idempotent v=a".into(),
            region: "interior".into(),
            residual: 0.0,
            ok: true,
        };
        assert_eq!(render_text(&[quiet]), "");
    }
}
