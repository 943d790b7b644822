//! Scenario files: parsing, validation, execution and report writing.
//!
//! A config is one JSON document `{"scenarios": [...]}`. Each run writes one
//! `<name>.json` report per scenario, `summary.csv`, and `metadata.json`
//! (the only file with wall-clock data).

mod catalog;
mod corpus;
mod kinds;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use catalog::{certificate_from_key, map_from_key, LambdaSpec, CALCULUS_KEYS, CERTIFICATE_KEYS, MAP_KEYS};
pub use corpus::{cone_pair_corpus, ConePair};
pub use kinds::{check_cone_pair, PairCheck};

/// The bundled config reproducing the worked examples.
pub const PAPER_EXAMPLES: &str = include_str!("../../scenarios/paper_examples.json");

/// Bundled configs by name.
pub fn bundled_config(name: &str) -> Option<&'static str> {
    match name {
        "paper_examples" => Some(PAPER_EXAMPLES),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    CertificateVerify,
    ConeDuality,
    ClarkeEstimate,
    BracketConvergence,
    OpenMappingProbe,
    SeparationFixture,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenarios: Vec<Scenario>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file; a bundled name is accepted when no such file exists.
    pub fn load(path: &str) -> Result<Self> {
        if !Path::new(path).exists() {
            if let Some(text) = bundled_config(path) {
                return Self::parse(text);
            }
        }
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
        Self::parse(&text)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub parallel: bool,
    pub seed_override: Option<u64>,
    /// Only scenarios whose name contains this substring run.
    pub filter: Option<String>,
    /// Fill the `runtime_ms` column; off by default so summaries are reproducible.
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScenarioVerdict {
    Passed,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub kind: ScenarioKind,
    pub seed: u64,
    pub verdict: ScenarioVerdict,
    pub metric_name: String,
    pub metric_value: Option<f64>,
    pub error: Option<String>,
    pub details: Value,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.verdict == ScenarioVerdict::Passed
    }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub reports: Vec<ScenarioReport>,
    pub runtimes_ms: Vec<f64>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(ScenarioReport::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn csv(&self, timings: bool) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["scenario", "kind", "verdict", "metric_name", "metric_value", "runtime_ms"])
            .map_err(io)?;
        for (r, ms) in self.reports.iter().zip(&self.runtimes_ms) {
            let kind = format!("{:?}", r.kind);
            let verdict = match r.verdict {
                ScenarioVerdict::Passed => "PASSED",
                ScenarioVerdict::Failed => "FAILED",
            };
            let value = r.metric_value.map(|v| v.to_string()).unwrap_or_default();
            let runtime = if timings { format!("{ms:.3}") } else { String::new() };
            w.write_record([r.name.as_str(), &kind, verdict, &r.metric_name, &value, &runtime])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

struct Planned {
    name: String,
    kind: ScenarioKind,
    seed: u64,
    prepared: kinds::Prepared,
}

/// Validates every selected scenario before anything runs.
fn plan(config: &ScenarioConfig, opts: &RunOptions) -> Result<Vec<Planned>> {
    let mut seen = HashSet::new();
    for s in &config.scenarios {
        if s.name.is_empty() || s.name.contains(['/', '\\']) || s.name.starts_with('.') {
            return Err(Error::Config(format!("invalid scenario name `{}`", s.name)));
        }
        if !seen.insert(s.name.as_str()) {
            return Err(Error::Config(format!("duplicate scenario name `{}`", s.name)));
        }
    }
    let selected = config
        .scenarios
        .iter()
        .filter(|s| opts.filter.as_deref().is_none_or(|f| s.name.contains(f)));
    selected
        .map(|s| {
            let seed = opts
                .seed_override
                .or(s.seed)
                .ok_or_else(|| Error::Config(format!("scenario `{}` has no seed", s.name)))?;
            let prepared = kinds::prepare(s.kind, &s.params, &s.tolerances, seed)
                .map_err(|e| in_scenario(&s.name, e))?;
            Ok(Planned {
                name: s.name.clone(),
                kind: s.kind,
                seed,
                prepared,
            })
        })
        .collect()
}

fn in_scenario(name: &str, e: Error) -> Error {
    match e {
        Error::UnknownCatalogKey(k) => Error::UnknownCatalogKey(k),
        Error::Config(m) => Error::Config(format!("scenario `{name}`: {m}")),
        other => Error::Config(format!("scenario `{name}`: {other}")),
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".into()
    }
}

fn execute(p: &Planned) -> (ScenarioReport, f64) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| p.prepared.run()));
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let failed = |error: String| ScenarioReport {
        name: p.name.clone(),
        kind: p.kind,
        seed: p.seed,
        verdict: ScenarioVerdict::Failed,
        metric_name: "error".into(),
        metric_value: None,
        error: Some(error),
        details: Value::Null,
    };
    let report = match result {
        Ok(Ok(o)) => ScenarioReport {
            name: p.name.clone(),
            kind: p.kind,
            seed: p.seed,
            verdict: if o.passed { ScenarioVerdict::Passed } else { ScenarioVerdict::Failed },
            metric_name: o.metric_name.into(),
            metric_value: Some(o.metric_value),
            error: None,
            details: o.details,
        },
        Ok(Err(e)) => failed(e.to_string()),
        Err(panic) => failed(format!("panic: {}", panic_message(panic.as_ref()))),
    };
    (report, ms)
}

/// Runs the selected scenarios; report order follows the config.
pub fn run_config(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunSummary> {
    Ok(run_planned(&plan(config, opts)?, opts.parallel))
}

fn run_planned(planned: &[Planned], parallel: bool) -> RunSummary {
    let results: Vec<(ScenarioReport, f64)> = if parallel {
        planned.par_iter().map(execute).collect()
    } else {
        planned.iter().map(execute).collect()
    };
    let (reports, runtimes_ms) = results.into_iter().unzip();
    RunSummary { reports, runtimes_ms }
}

/// Writes `<name>.json`, `summary.csv` and `metadata.json` under `out_dir`.
pub fn write_outputs(summary: &RunSummary, out_dir: &Path, opts: &RunOptions, started: SystemTime) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    for r in &summary.reports {
        let text = serde_json::to_string_pretty(r).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(out_dir.join(format!("{}.json", r.name)), text + "\n")?;
    }
    fs::write(out_dir.join("summary.csv"), summary.csv(opts.timings)?)?;
    let secs = |t: SystemTime| t.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let runtimes: BTreeMap<&str, f64> = summary
        .reports
        .iter()
        .zip(&summary.runtimes_ms)
        .map(|(r, ms)| (r.name.as_str(), *ms))
        .collect();
    let meta = json!({
        "started_unix": secs(started),
        "finished_unix": secs(SystemTime::now()),
        "parallel": opts.parallel,
        "seed_override": opts.seed_override,
        "filter": opts.filter,
        "runtime_ms": runtimes,
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(
        out_dir.join("metadata.json"),
        serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))? + "\n",
    )?;
    Ok(())
}

/// Loads, runs and writes a config in one go.
pub fn run_scenarios(config_path: &str, out_dir: impl Into<PathBuf>, opts: &RunOptions) -> Result<RunSummary> {
    let started = SystemTime::now();
    let config = ScenarioConfig::load(config_path)?;
    let summary = run_config(&config, opts)?;
    write_outputs(&summary, &out_dir.into(), opts, started)?;
    Ok(summary)
}
