//! JSON and TSV rendering.

use serde::Serialize;

use crate::input::{MethodOutcome, MethodResult};
use crate::CliError;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

pub fn short(r: &MethodResult) -> String {
    match r {
        MethodResult::Ok { value } => value.to_string(),
        MethodResult::NotApplicable { .. } => "n/a".into(),
        MethodResult::Error { .. } => "error".into(),
        MethodResult::InternalError { .. } => "internal-error".into(),
    }
}

pub fn tsv_results(outcomes: &[MethodOutcome]) -> String {
    let mut out = String::from("method\tresult\n");
    for o in outcomes {
        out.push_str(&format!("{}\t{}\n", o.method.name(), short(&o.result)));
    }
    out
}

/// Wraps `body` with the schema version and renders it.
pub fn json<T: Serialize>(body: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(body).map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(map) = v.as_object_mut() {
        map.insert("schema_version".into(), SCHEMA_VERSION.into());
    }
    serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))
}
