//! Tables of knots: CSV in, one record per row out.

use std::path::Path;

use casson::casson::{check_bound, Method};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::{evaluate_all, InputKind, Loaded, MethodOutcome};
use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
struct Row {
    name: String,
    kind: String,
    payload: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFlags {
    pub crossings: usize,
    pub bound: i64,
    pub within: bool,
    /// `|v₂|` reaches the bound.
    pub sharp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub name: String,
    pub kind: Option<InputKind>,
    pub payload: String,
    pub methods: Vec<Method>,
    pub results: Vec<MethodOutcome>,
    /// True iff every method that produced a value produced the same one.
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub exit: i32,
}

impl BatchRecord {
    fn failed(name: String, kind: Option<InputKind>, payload: String, methods: &[Method], e: CliError) -> BatchRecord {
        BatchRecord {
            name,
            kind,
            payload,
            methods: methods.to_vec(),
            results: Vec::new(),
            agree: true,
            bound: None,
            error: Some(e.to_string()),
            exit: e.exit_code(),
        }
    }
}

/// Unprocessed table rows. A row that does not parse as CSV becomes a
/// record with its error; only an unreadable file is fatal.
pub fn ingest_csv(path: &Path) -> Result<Vec<Result<(String, String, String), String>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(reader
        .deserialize::<Row>()
        .map(|r| r.map(|r| (r.name, r.kind, r.payload)).map_err(|e| e.to_string()))
        .collect())
}

fn process_row(name: String, kind: &str, payload: String, methods: &[Method], seed: u64) -> BatchRecord {
    let kind = match kind.parse::<InputKind>() {
        Ok(k) => k,
        Err(e) => return BatchRecord::failed(name, None, payload, methods, e),
    };
    let loaded = match Loaded::parse(kind, &payload, seed) {
        Ok(l) => l,
        Err(e) => return BatchRecord::failed(name, Some(kind), payload, methods, e),
    };
    let (results, status) = evaluate_all(&loaded, methods);
    let b = check_bound(&loaded.diagram);
    let bound = BoundFlags { crossings: loaded.diagram.len(), bound: b.bound, within: b.ok, sharp: b.v2.abs() == b.bound };
    let (error, exit, agree) = match status {
        Ok(()) => (None, 0, true),
        Err(e) => (Some(e.to_string()), e.exit_code(), !matches!(e, CliError::Disagreement(_))),
    };
    BatchRecord { name, kind: Some(kind), payload, methods: methods.to_vec(), results, agree, bound: Some(bound), error, exit }
}

/// Evaluates every row in parallel; the output keeps the input order.
pub fn run_batch(path: &Path, methods: &[Method], seed: u64) -> Result<Vec<BatchRecord>, CliError> {
    let rows = ingest_csv(path)?;
    Ok(rows
        .into_par_iter()
        .enumerate()
        .map(|(i, row)| match row {
            Ok((name, kind, payload)) => process_row(name, &kind, payload, methods, seed),
            Err(e) => BatchRecord::failed(format!("row {}", i + 1), None, String::new(), methods, CliError::Parse(e)),
        })
        .collect())
}

pub fn tsv(records: &[BatchRecord]) -> String {
    let mut out = String::from("name\tkind\t");
    if let Some(r) = records.first() {
        for m in &r.methods {
            out.push_str(m.name());
            out.push('\t');
        }
    }
    out.push_str("agree\tsharp\terror\n");
    for r in records {
        out.push_str(&format!("{}\t{}\t", r.name, r.kind.map_or("?", InputKind::name)));
        for o in &r.results {
            out.push_str(&crate::report::short(&o.result));
            out.push('\t');
        }
        if r.results.is_empty() {
            out.push_str(&"\t".repeat(r.methods.len()));
        }
        let sharp = r.bound.as_ref().map_or(String::new(), |b| b.sharp.to_string());
        out.push_str(&format!("{}\t{}\t{}\n", r.agree, sharp, r.error.as_deref().unwrap_or("")));
    }
    out
}
