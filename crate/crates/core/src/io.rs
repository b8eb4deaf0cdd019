//! On-disk formats: drawing and partition documents (JSON), DIMACS edge
//! lists, move traces, corpus directories and the experiment report (CSV).
//!
//! Writers produce one canonical form: sorted normalized edges, sorted
//! crossings, fixed key order and a trailing newline.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColoringError, Partition};
use crate::constructive::MoveTrace;
use crate::drawing::{Crossing, Drawing, Edge};
use crate::generator::{CorpusEntry, CorpusSpec, RNG_ID};
use crate::graph::{Girth, Graph, GraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] ColoringError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> FormatError {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.into(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.into(),
        source,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossingDoc {
    e1: [usize; 2],
    e2: [usize; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingDoc {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    crossings: Vec<CrossingDoc>,
}

/// Parses a drawing document. Edges are validated (range, loops,
/// duplicates); crossings are kept as written and checked by
/// [`Drawing::validate_one_plane`].
pub fn parse_drawing(text: &str) -> Result<Drawing, FormatError> {
    let doc: DrawingDoc = serde_json::from_str(text)?;
    let graph = Graph::new(doc.n, doc.edges.iter().map(|&[u, v]| (u, v)))?;
    let crossings = doc
        .crossings
        .iter()
        .map(|c| Crossing::new(Edge::new(c.e1[0], c.e1[1]), Edge::new(c.e2[0], c.e2[1])))
        .collect();
    Ok(Drawing::new(graph, crossings))
}

pub fn drawing_to_string(d: &Drawing) -> String {
    let edges: Vec<[usize; 2]> = d.graph().edges().iter().map(|&(u, v)| [u, v]).collect();
    let mut crossings: Vec<Crossing> = d.crossings().to_vec();
    crossings.sort_unstable();
    let crossings: Vec<CrossingDoc> = crossings
        .iter()
        .map(|c| CrossingDoc {
            e1: c.e1().endpoints(),
            e2: c.e2().endpoints(),
        })
        .collect();
    format!(
        "{{\n  \"n\": {},\n  \"edges\": {},\n  \"crossings\": {}\n}}\n",
        d.graph().order(),
        serde_json::to_string(&edges).expect("plain data"),
        serde_json::to_string(&crossings).expect("plain data"),
    )
}

pub fn read_drawing(path: &Path) -> Result<Drawing, FormatError> {
    parse_drawing(&read_text(path)?)
}

pub fn write_drawing(path: &Path, d: &Drawing) -> Result<(), FormatError> {
    write_text(path, &drawing_to_string(d))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    m: usize,
    assignment: Vec<usize>,
}

/// Parses `{"m": .., "assignment": [..]}`; class indices must lie in `1..=m`.
pub fn parse_partition(text: &str) -> Result<Partition, FormatError> {
    let doc: PartitionDoc = serde_json::from_str(text)?;
    Ok(Partition::new(doc.m, doc.assignment)?)
}

pub fn partition_to_string(p: &Partition) -> String {
    format!(
        "{{\n  \"m\": {},\n  \"assignment\": {}\n}}\n",
        p.m(),
        serde_json::to_string(p.assignment()).expect("plain data")
    )
}

pub fn read_partition(path: &Path) -> Result<Partition, FormatError> {
    parse_partition(&read_text(path)?)
}

pub fn write_partition(path: &Path, p: &Partition) -> Result<(), FormatError> {
    write_text(path, &partition_to_string(p))
}

/// A DIMACS graph plus the non-fatal problems found while reading it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsGraph {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Reads `p edge n m` / `e u v` (1-indexed). Comment lines start with `c`.
/// A wrong edge count and repeated edges are recorded as warnings.
pub fn parse_dimacs(text: &str) -> Result<DimacsGraph, FormatError> {
    let mut n = None;
    let mut declared = 0;
    let mut edges = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| FormatError::Dimacs {
            line,
            message: message.to_string(),
        };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(err("second problem line"));
                }
                if fields.len() != 4 || !matches!(fields[1], "edge" | "col") {
                    return Err(err("expected `p edge <n> <m>`"));
                }
                n = Some(
                    fields[2]
                        .parse::<usize>()
                        .map_err(|_| err("bad vertex count"))?,
                );
                declared = fields[3]
                    .parse::<usize>()
                    .map_err(|_| err("bad edge count"))?;
            }
            Some("e") => {
                let n = n.ok_or_else(|| err("edge before problem line"))?;
                if fields.len() != 3 {
                    return Err(err("expected `e <u> <v>`"));
                }
                let mut ends = [0usize; 2];
                for (slot, f) in ends.iter_mut().zip(&fields[1..]) {
                    let v: usize = f.parse().map_err(|_| err("bad vertex index"))?;
                    if v == 0 || v > n {
                        return Err(err("vertex index outside 1..=n"));
                    }
                    *slot = v - 1;
                }
                if ends[0] == ends[1] {
                    return Err(err("self-loop"));
                }
                edges.push((ends[0].min(ends[1]), ends[0].max(ends[1]), line));
            }
            Some(_) => return Err(err("unknown line type")),
        }
    }
    let n = n.ok_or(FormatError::Dimacs {
        line: 0,
        message: "missing problem line".into(),
    })?;
    if edges.len() != declared {
        warnings.push(format!(
            "header declares {declared} edges, file has {}",
            edges.len()
        ));
    }
    let mut seen = std::collections::HashSet::new();
    let mut unique = Vec::with_capacity(edges.len());
    for (u, v, line) in edges {
        if seen.insert((u, v)) {
            unique.push((u, v));
        } else {
            warnings.push(format!("line {line}: repeated edge {} {}", u + 1, v + 1));
        }
    }
    Ok(DimacsGraph {
        graph: Graph::new(n, unique)?,
        warnings,
    })
}

pub fn read_dimacs(path: &Path) -> Result<DimacsGraph, FormatError> {
    parse_dimacs(&read_text(path)?)
}

/// Reads a drawing document (text starting with `{`) or a DIMACS file.
pub fn read_graph_input(path: &Path) -> Result<(Drawing, Vec<String>), FormatError> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        Ok((parse_drawing(&text)?, Vec::new()))
    } else {
        let d = parse_dimacs(&text)?;
        Ok((Drawing::plane(d.graph), d.warnings))
    }
}

/// One move per line inside a JSON array.
pub fn trace_to_string(trace: &MoveTrace) -> String {
    let lines: Vec<String> = trace
        .moves()
        .iter()
        .map(|m| format!("  {}", serde_json::to_string(m).expect("plain data")))
        .collect();
    if lines.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", lines.join(",\n"))
    }
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    id: String,
    file: String,
    family: String,
    params: serde_json::Value,
    seed: u64,
    girth: String,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    rng: String,
    spec: CorpusSpec,
    entries: Vec<ManifestEntry>,
}

pub const MANIFEST: &str = "manifest.json";

/// Writes `<id>.json` per entry and a `manifest.json` describing how each
/// one was produced.
pub fn write_corpus(
    dir: &Path,
    spec: &CorpusSpec,
    entries: &[CorpusEntry],
) -> Result<(), FormatError> {
    fs::create_dir_all(dir).map_err(|source| FormatError::Io {
        path: dir.into(),
        source,
    })?;
    let mut manifest = Manifest {
        rng: RNG_ID.into(),
        spec: spec.clone(),
        entries: Vec::new(),
    };
    for e in entries {
        let file = format!("{}.json", e.id);
        write_drawing(&dir.join(&file), &e.drawing)?;
        manifest.entries.push(ManifestEntry {
            id: e.id.clone(),
            file,
            family: e.family.clone(),
            params: e.params.clone(),
            seed: e.seed,
            girth: e.girth.to_string(),
        });
    }
    let text = serde_json::to_string_pretty(&manifest).expect("plain data") + "\n";
    write_text(&dir.join(MANIFEST), &text)
}

/// Every graph file in `dir` (`*.json` except the manifest, `*.col`,
/// `*.dimacs`), keyed by file stem and sorted by it.
pub fn read_corpus_dir(dir: &Path) -> Result<Vec<(String, Drawing)>, FormatError> {
    let listing = fs::read_dir(dir).map_err(|source| FormatError::Io {
        path: dir.into(),
        source,
    })?;
    let mut out = Vec::new();
    for entry in listing {
        let path = entry
            .map_err(|source| FormatError::Io {
                path: dir.into(),
                source,
            })?
            .path();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let name = path.file_name().and_then(|f| f.to_str()).unwrap_or("");
        if !path.is_file() || name == MANIFEST || !matches!(ext, "json" | "col" | "dimacs") {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(name)
            .to_string();
        out.push((stem, read_graph_input(&path)?.0));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// One experiment report row: a graph and the solver's answer for each `m`
/// in `m_lo..=m_hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub graph_id: String,
    pub n: usize,
    pub e: usize,
    pub girth: Girth,
    pub ic: bool,
    pub m_lo: usize,
    pub m_hi: usize,
    /// `Some(true)` SAT, `Some(false)` UNSAT, `None` unknown.
    pub feasibility: Vec<Option<bool>>,
    pub va_eq: Option<usize>,
    pub va_eq_star: Option<usize>,
    pub solver: String,
    pub elapsed_ms: Option<u128>,
    pub flag: String,
}

pub const REPORT_HEADER: [&str; 12] = [
    "graph_id",
    "n",
    "e",
    "girth",
    "ic",
    "m_range",
    "feasibility",
    "va_eq",
    "va_eq_star",
    "solver",
    "elapsed_ms",
    "flag",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the header and the rows sorted by graph id. Feasibility is a
/// string over `1` (SAT), `0` (UNSAT) and `?` (unknown), one char per `m`.
pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<(), FormatError> {
    let mut rows: Vec<&ReportRow> = rows.iter().collect();
    rows.sort_by(|a, b| a.graph_id.cmp(&b.graph_id));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        let bits: String = r
            .feasibility
            .iter()
            .map(|f| match f {
                Some(true) => '1',
                Some(false) => '0',
                None => '?',
            })
            .collect();
        w.write_record([
            r.graph_id.clone(),
            r.n.to_string(),
            r.e.to_string(),
            r.girth.to_string(),
            (r.ic as u8).to_string(),
            format!("{}..{}", r.m_lo, r.m_hi),
            bits,
            opt(r.va_eq),
            opt(r.va_eq_star),
            r.solver.clone(),
            opt(r.elapsed_ms),
            r.flag.clone(),
        ])?;
    }
    w.flush().map_err(|source| FormatError::Io {
        path: PathBuf::from("<report>"),
        source,
    })?;
    Ok(())
}

pub fn report_to_string(rows: &[ReportRow]) -> String {
    let mut buf = Vec::new();
    write_report(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}
