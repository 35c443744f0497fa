//! Command handling. Every command returns its report records and an exit
//! status computed from those records alone.

use std::fs;
use std::path::{Path, PathBuf};

use afembed_core::numeric::{build_rep, loop_spectrum, relation_residuals, NumericError};
use afembed_core::symbolic::{verify_all, SymbolicError};
use afembed_core::{
    classify, embed_with, materialize, witness_infinite, AugmentedGraphSpec, Classification,
    EmbedError, EntranceWitness, GeneratorMap, Graph, LoopError, MultiplicitySeq,
};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::format::{dot, graph_doc, map_table, spec_doc, DocError};
use crate::report::{self, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_ENTRANCE: i32 = 3;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", located(path, source))]
    Document { path: PathBuf, source: DocError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

/// `path:line:column: message` when the position is known.
fn located(path: &Path, e: &DocError) -> String {
    match e.line {
        Some(_) => format!("{}:{e}", path.display()),
        None => format!("{}: {e}", path.display()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Newline-delimited JSON records.
    #[value(name = "json-like", alias = "json")]
    JsonLike,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decide whether the graph algebra is AF, AF-embeddable or not finite.
    Classify,
    /// List the disjoint simple loops, or the entrance that rules them out.
    Loops,
    /// Build the loop-free graph F and the generator map, and write them out.
    Embed,
    /// Check the relations symbolically and in a truncated representation.
    Verify,
    /// Print the input graph, or F at the given depth, in another format.
    Export,
}

#[derive(Debug, Parser)]
#[command(
    name = "afembed",
    version,
    about = "AF-embeddings of graph algebras with loops"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Graph document (text grammar or JSON).
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Tail depth of the materialized graph F.
    #[arg(long, short, global = true, default_value_t = 6)]
    pub depth: usize,
    /// Tail multiplicities as `p1,p2,...;m` (prefix, then repeated value).
    #[arg(long, global = true, default_value = "2")]
    pub mult: MultiplicitySeq,
    #[arg(long, short, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Tolerance for algebraic residuals.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_alg: f64,
    /// Tolerance for spectral checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_spec: f64,
    /// Directory for written artifacts.
    #[arg(long, global = true, env = "AFEMBED_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Generator map table to verify instead of the constructed one.
    #[arg(long, global = true)]
    pub map: Option<PathBuf>,
    /// With `export`, print F at `--depth` instead of the input graph.
    #[arg(long, global = true)]
    pub embedded: bool,
}

/// What a command produced: records for the report, or a document when the
/// output is a graph in DOT or another graph format.
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), AppError> {
    fs::write(path, text).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_graph(cli: &Cli) -> Result<Graph, AppError> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| AppError::Usage("missing --input <path>".into()))?;
    graph_doc::parse_any(&read(path)?).map_err(|source| AppError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn check_tolerances(cli: &Cli) -> Result<(), AppError> {
    for (name, x) in [("--tol-alg", cli.tol_alg), ("--tol-spec", cli.tol_spec)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(AppError::Usage(format!("{name} must be positive, got {x}")));
        }
    }
    Ok(())
}

fn render(cli: &Cli, mut records: Vec<Record>, exit_code: i32) -> Result<Outcome, AppError> {
    let command = format!("{:?}", cli.command).to_lowercase();
    records.push(Record::Result { command, exit_code });
    let output = match cli.format {
        Format::Text => report::render_text(&records),
        Format::JsonLike => report::render_json(&records),
        Format::Dot => {
            return Err(AppError::Usage(
                "DOT output is available for `embed` and `export` only".into(),
            ))
        }
    };
    Ok(Outcome { exit_code, output })
}

fn classification_record(g: &Graph, c: &Classification) -> Record {
    Record::Classification {
        verdict: c.verdict().as_str().to_string(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        loops: match c {
            Classification::AfEmbeddable { loops } => loops.len(),
            _ => 0,
        },
    }
}

fn witness_records(g: &Graph, w: &EntranceWitness) -> Result<Vec<Record>, AppError> {
    let chain = witness_infinite(g, w)?;
    Ok(vec![Record::for_witness(w, &chain)])
}

/// Records and exit status for a graph whose loops have an entrance.
fn refuse(
    g: &Graph,
    c: &Classification,
    w: &EntranceWitness,
) -> Result<(Vec<Record>, i32), AppError> {
    let mut records = vec![classification_record(g, c)];
    records.extend(witness_records(g, w)?);
    Ok((records, EXIT_ENTRANCE))
}

fn cmd_classify(cli: &Cli, g: &Graph) -> Result<Outcome, AppError> {
    let c = classify(g);
    let (records, code) = match &c {
        Classification::NotFinite { witness } => refuse(g, &c, witness)?,
        Classification::AfEmbeddable { loops } => {
            let mut records = vec![classification_record(g, &c)];
            records.extend(
                loops
                    .iter()
                    .enumerate()
                    .map(|(i, l)| Record::for_loop(i + 1, l)),
            );
            (records, EXIT_OK)
        }
        Classification::Af => (vec![classification_record(g, &c)], EXIT_OK),
    };
    render(cli, records, code)
}

fn cmd_loops(cli: &Cli, g: &Graph) -> Result<Outcome, AppError> {
    let c = classify(g);
    let (records, code) = match &c {
        Classification::NotFinite { witness } => refuse(g, &c, witness)?,
        Classification::AfEmbeddable { loops } => (
            loops
                .iter()
                .enumerate()
                .map(|(i, l)| Record::for_loop(i + 1, l))
                .collect(),
            EXIT_OK,
        ),
        Classification::Af => (Vec::new(), EXIT_OK),
    };
    render(cli, records, code)
}

fn tail_records(spec: &AugmentedGraphSpec, depth: usize) -> Result<Vec<Record>, AppError> {
    spec.replacements()
        .iter()
        .map(|r| {
            let l = r.simple_loop();
            Ok(Record::Tail {
                namespace: r.tail().namespace().to_string(),
                loop_edges: (1..=l.len()).map(|i| l.edge(i).to_string()).collect(),
                mult: r.tail().mult().to_string(),
                corner_dimensions: r.tail().corner_dimensions(depth)?,
            })
        })
        .collect()
}

fn cmd_embed(cli: &Cli, g: &Graph) -> Result<Outcome, AppError> {
    let c = classify(g);
    if let Classification::NotFinite { witness } = &c {
        let (records, code) = refuse(g, &c, witness)?;
        return render(cli, records, code);
    }
    let (spec, map) = embed_with(g, &cli.mult)?;
    let f = materialize(&spec, cli.depth)?;
    let out_dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("afembed-out"));
    fs::create_dir_all(&out_dir).map_err(|source| AppError::Io {
        path: out_dir.clone(),
        source,
    })?;
    let d = cli.depth;
    let artifacts = [
        ("spec", "spec.json".to_string(), spec_doc::write_json(&spec)),
        ("map", "map.tsv".to_string(), map_table::write_table(&map)),
        ("graph", format!("F{d}.graph"), graph_doc::write_text(&f)),
        (
            "graph-json",
            format!("F{d}.json"),
            graph_doc::write_json(&f),
        ),
        (
            "dot",
            format!("F{d}.dot"),
            dot::to_dot(&f, &format!("F{d}")),
        ),
    ];
    let mut records = vec![classification_record(g, &c)];
    records.push(Record::Embedding {
        replaced_loops: spec.replacements().len(),
        depth: d,
        f_vertices: f.vertex_count(),
        f_edges: f.edge_count(),
        f_verdict: classify(&f).verdict().as_str().to_string(),
    });
    records.extend(tail_records(&spec, d)?);
    records.extend(map.vertex_images().map(|(v, t)| Record::MapEntry {
        kind: "vertex".into(),
        id: v.to_string(),
        image: t.to_string(),
    }));
    records.extend(map.edge_images().map(|(e, t)| Record::MapEntry {
        kind: "edge".into(),
        id: e.to_string(),
        image: t.to_string(),
    }));
    for (kind, name, text) in &artifacts {
        let path = out_dir.join(name);
        write(&path, text)?;
        records.push(Record::Artifact {
            kind: kind.to_string(),
            path: path.display().to_string(),
        });
    }
    if cli.format == Format::Dot {
        return Ok(Outcome {
            exit_code: EXIT_OK,
            output: artifacts[4].2.clone(),
        });
    }
    render(cli, records, EXIT_OK)
}

fn cmd_verify(cli: &Cli, g: &Graph) -> Result<Outcome, AppError> {
    check_tolerances(cli)?;
    if cli.depth == 0 {
        return Err(AppError::Usage("verify needs --depth of at least 1".into()));
    }
    let c = classify(g);
    if let Classification::NotFinite { witness } = &c {
        let (records, code) = refuse(g, &c, witness)?;
        return render(cli, records, code);
    }
    let (spec, constructed) = embed_with(g, &cli.mult)?;
    let map: GeneratorMap = match &cli.map {
        None => constructed,
        Some(path) => {
            map_table::parse_table(&read(path)?, g, &spec).map_err(|source| AppError::Document {
                path: path.clone(),
                source,
            })?
        }
    };

    let mut records = vec![classification_record(g, &c)];
    let symbolic = verify_all(&spec, &map)?;
    records.extend(symbolic.entries.iter().map(Record::for_relation));

    let rep = build_rep(&spec, cli.depth)?;
    let residuals = relation_residuals(&rep, &spec, &map)?;
    records.extend(Record::for_residuals(
        &residuals,
        cli.depth,
        rep.dim(),
        cli.tol_alg,
    ));
    let mut spectra = Vec::new();
    for r in spec.replacements() {
        let s = loop_spectrum(&rep, &spec, &map, r.tail().namespace().as_str())?;
        records.push(Record::for_spectrum(&s, cli.tol_spec));
        spectra.push(s);
    }

    if let Some(dir) = &cli.out_dir {
        fs::create_dir_all(dir).map_err(|source| AppError::Io {
            path: dir.clone(),
            source,
        })?;
        let csv_error = |path: &Path| {
            let path = path.to_path_buf();
            move |source| AppError::Csv { path, source }
        };
        let path = dir.join("residuals.csv");
        let file = fs::File::create(&path).map_err(|source| AppError::Io {
            path: path.clone(),
            source,
        })?;
        report::write_residual_csv(&residuals, file).map_err(csv_error(&path))?;
        for s in &spectra {
            let path = dir.join(format!("spectrum_{}.csv", s.tail));
            let file = fs::File::create(&path).map_err(|source| AppError::Io {
                path: path.clone(),
                source,
            })?;
            report::write_spectrum_csv(s, file).map_err(csv_error(&path))?;
        }
    }

    let code = if records.iter().all(Record::passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    render(cli, records, code)
}

fn cmd_export(cli: &Cli, g: &Graph) -> Result<Outcome, AppError> {
    let (graph, name) = if cli.embedded {
        let (spec, _) = embed_with(g, &cli.mult)?;
        (materialize(&spec, cli.depth)?, format!("F{}", cli.depth))
    } else {
        (g.clone(), "E".to_string())
    };
    let output = match cli.format {
        Format::Text => graph_doc::write_text(&graph),
        Format::JsonLike => graph_doc::write_json(&graph),
        Format::Dot => dot::to_dot(&graph, &name),
    };
    Ok(Outcome {
        exit_code: EXIT_OK,
        output,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, AppError> {
    let g = load_graph(cli)?;
    match cli.command {
        Command::Classify => cmd_classify(cli, &g),
        Command::Loops => cmd_loops(cli, &g),
        Command::Embed => cmd_embed(cli, &g),
        Command::Verify => cmd_verify(cli, &g),
        Command::Export => cmd_export(cli, &g),
    }
}
