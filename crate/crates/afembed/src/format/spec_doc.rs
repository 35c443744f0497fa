//! JSON form of an augmented graph: the base graph without its replaced
//! loop edges, and for each replaced loop its edges in traversal order,
//! its tail namespace and its multiplicity sequence.

use afembed_core::{
    AugmentedGraphSpec, BratteliTailSpec, EdgeId, LoopReplacement, MultiplicitySeq, SimpleLoop,
    TailId, VertexId,
};
use serde::{Deserialize, Serialize};

use super::graph_doc::{EdgeDoc, GraphDoc};
use super::DocError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultDoc {
    pub prefix: Vec<u32>,
    pub tail: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplacementDoc {
    pub namespace: String,
    /// `e_1, …, e_n` with `e_i : u_i → u_{i+1}`.
    #[serde(rename = "loop")]
    pub loop_edges: Vec<EdgeDoc>,
    pub mult: MultDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub base: GraphDoc,
    pub replacements: Vec<ReplacementDoc>,
}

impl SpecDoc {
    pub fn from_spec(spec: &AugmentedGraphSpec) -> Self {
        SpecDoc {
            base: GraphDoc::from_graph(spec.base()),
            replacements: spec
                .replacements()
                .iter()
                .map(|r| {
                    let l = r.simple_loop();
                    let n = l.len();
                    ReplacementDoc {
                        namespace: r.tail().namespace().to_string(),
                        loop_edges: (1..=n)
                            .map(|i| EdgeDoc {
                                id: l.edge(i).to_string(),
                                src: l.vertex(i).to_string(),
                                dst: l.vertex(i % n + 1).to_string(),
                            })
                            .collect(),
                        mult: MultDoc {
                            prefix: r.tail().mult().prefix().to_vec(),
                            tail: r.tail().mult().repeating(),
                        },
                    }
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<AugmentedGraphSpec, DocError> {
        let base = self.base.to_graph()?;
        let replacements = self
            .replacements
            .iter()
            .map(|r| {
                let n = r.loop_edges.len();
                for (i, e) in r.loop_edges.iter().enumerate() {
                    let next = &r.loop_edges[(i + 1) % n];
                    if e.dst != next.src {
                        return Err(DocError::unplaced(format!(
                            "loop edge `{}` ends at `{}` but `{}` starts at `{}`",
                            e.id, e.dst, next.id, next.src
                        )));
                    }
                }
                let edges = r
                    .loop_edges
                    .iter()
                    .map(|e| EdgeId::new(&e.id))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(DocError::unplaced)?;
                let vertices = r
                    .loop_edges
                    .iter()
                    .map(|e| VertexId::new(&e.src))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(DocError::unplaced)?;
                let simple_loop =
                    SimpleLoop::from_cycle(edges, vertices).map_err(DocError::unplaced)?;
                let mult = MultiplicitySeq::new(r.mult.prefix.clone(), r.mult.tail)
                    .map_err(DocError::unplaced)?;
                let ns = TailId::new(&r.namespace).map_err(DocError::unplaced)?;
                Ok(LoopReplacement::new(
                    simple_loop,
                    BratteliTailSpec::new(ns, mult),
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        AugmentedGraphSpec::new(base, replacements).map_err(DocError::unplaced)
    }
}

pub fn write_json(spec: &AugmentedGraphSpec) -> String {
    let mut out = serde_json::to_string_pretty(&SpecDoc::from_spec(spec))
        .expect("spec documents always serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> Result<AugmentedGraphSpec, DocError> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(DocError::from_json)?;
    doc.to_spec()
}
