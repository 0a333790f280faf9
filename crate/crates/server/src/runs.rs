//! Read-only access to the `*.jsonl` run-metrics files in the runs directory.

use std::path::{Path, PathBuf};

use loa_core::agent::{EpisodeMetrics, RunMetrics};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ErrorCode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub id: String,
    pub episodes: usize,
    pub median_steps: f64,
    pub first_quintile_median: f64,
    pub last_quintile_median: f64,
    pub solve_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunList {
    pub runs: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDetail {
    #[serde(flatten)]
    pub summary: RunSummary,
    #[serde(rename = "metrics")]
    pub episodes: Vec<EpisodeMetrics>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

fn unknown(id: &str) -> ApiError {
    ApiError::new(ErrorCode::UnknownRun, format!("no run `{id}`"))
}

fn load(dir: &Path, id: &str) -> Result<RunMetrics, ApiError> {
    if !valid_id(id) {
        return Err(unknown(id));
    }
    let path = dir.join(format!("{id}.jsonl"));
    let text = std::fs::read_to_string(&path).map_err(|_| unknown(id))?;
    RunMetrics::from_jsonl(id, 0, &text)
        .map_err(|e| ApiError::new(ErrorCode::Internal, format!("run `{id}` is malformed: {e}")))
}

fn summarize(id: &str, m: &RunMetrics) -> RunSummary {
    let (first, last) = m.quintile_medians();
    RunSummary {
        id: id.to_string(),
        episodes: m.episodes.len(),
        median_steps: m.median_steps_all(),
        first_quintile_median: first,
        last_quintile_median: last,
        solve_rate: m.solve_rate(),
    }
}

/// Runs sorted by id. Files that fail to parse are skipped.
pub fn list_runs(dir: Option<&PathBuf>) -> RunList {
    let Some(dir) = dir else {
        return RunList { runs: Vec::new() };
    };
    let mut ids: Vec<String> = std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            name.strip_suffix(".jsonl").map(str::to_string)
        })
        .filter(|id| valid_id(id))
        .collect();
    ids.sort();
    let runs = ids.iter().filter_map(|id| load(dir, id).ok().map(|m| summarize(id, &m))).collect();
    RunList { runs }
}

pub fn get_run(dir: Option<&PathBuf>, id: &str) -> Result<RunDetail, ApiError> {
    let dir = dir.ok_or_else(|| unknown(id))?;
    let m = load(dir, id)?;
    Ok(RunDetail { summary: summarize(id, &m), episodes: m.episodes })
}
