//! Subcommand dispatch. Exit codes: 0 success, 1 a predicate came out
//! false (or a run was rejected), 2 bad input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use snc_core::blowup::{make_charts, transform_triple};
use snc_core::geom::{local_report, GeomError};
use snc_core::hilbert::hs_function;
use snc_core::pipeline::{desing_stable_snc, verify_run, DesingOptions, PipelineError};
use snc_core::{Ideal, Point, Q};

use crate::format::{FormatError, SncFile};
use crate::oracle::{self, Suite};
use crate::report::{
    certificate_json, event_json, hs_json, ideal_json, local_report_json, point_json, triple_json, OutputFormat, Report,
};

#[derive(Debug, Parser)]
#[command(name = "snc", version, about = "Stable simple normal crossings: checks, invariants, blow-ups")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local report at a named point (all points when omitted).
    Check {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Hilbert–Samuel function of a named ideal at a point.
    Hilbert {
        file: PathBuf,
        /// Component, divisor or boundary name, or `X`.
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
        /// Named point; the origin when omitted.
        #[arg(long)]
        point: Option<String>,
    },
    /// One chart of a blow-up along a coordinate center.
    Blowup {
        file: PathBuf,
        /// Comma-separated variable names.
        #[arg(long)]
        center: String,
        /// Pivot variable name or 1-based position in the center.
        #[arg(long)]
        chart: String,
        /// Write the transformed configuration as an input file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the desingularization driver and verify its certificate.
    Desing {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare Hilbert–Samuel functions at maximal strata of the leaves.
        #[arg(long)]
        hs_checks: bool,
    },
    /// Cross-check library results against independent oracles.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{0}")]
    Geom(#[from] GeomError),
    #[error("mode violation: {0}")]
    Mode(String),
    #[error("{0}")]
    Usage(String),
}

/// Result of one invocation; `main` only prints and exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn load(path: &Path) -> Result<(SncFile, Vec<u8>), CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{shown}: not UTF-8")))?;
    let file = SncFile::parse(&text).map_err(|source| CliError::Format { path: shown, source })?;
    Ok((file, bytes))
}

fn named_point(f: &SncFile, name: Option<&str>) -> Result<(String, Point), CliError> {
    match name {
        None => Ok(("origin".into(), vec![Q::from_integer(0.into()); f.ring.nvars()])),
        Some(n) => f
            .point(n)
            .cloned()
            .map(|p| (n.to_string(), p))
            .ok_or_else(|| CliError::Usage(format!("no point named `{n}`"))),
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let ok = |report: Report, code: i32| Outcome { code, stdout: report.render(cli.format), stderr: String::new() };
    match &cli.command {
        Command::Check { file, point } => {
            let (f, bytes) = load(file)?;
            let t = f.triple()?;
            let names: Vec<String> = f.components.iter().map(|(n, _)| n.clone()).collect();
            let targets: Vec<(String, Point)> = match point {
                Some(p) => vec![named_point(&f, Some(p))?],
                None if f.points.is_empty() => vec![named_point(&f, None)?],
                None => f.points.clone(),
            };
            let mut results = Vec::new();
            let mut code = 0;
            for (name, p) in &targets {
                let r = local_report(&t, p)?;
                if r.stable_snc.triple.is_false() {
                    code = 1;
                }
                let mut v = local_report_json(&r, &names);
                if let Value::Object(m) = &mut v {
                    let mut named = Map::new();
                    named.insert("name".into(), json!(name));
                    named.extend(std::mem::take(m));
                    *m = named;
                }
                results.push(v);
            }
            let report = Report { command: "check", input_digest: crate::report::digest(&bytes), mode: f.mode, results, certificate: None };
            Ok(ok(report, code))
        }
        Command::Hilbert { file, ideal, cutoff, point } => {
            let (f, bytes) = load(file)?;
            let i = f.named_ideal(ideal).ok_or_else(|| CliError::Usage(format!("no ideal named `{ideal}`")))?;
            let (pname, p) = named_point(&f, point.as_deref())?;
            let h = hs_function(&i, &p, *cutoff);
            let result = json!({
                "ideal": ideal,
                "generators": ideal_json(&i),
                "point": pname,
                "coordinates": point_json(&p),
                "cutoff": cutoff,
                "hilbert_samuel": hs_json(&h),
            });
            let report = Report { command: "hilbert", input_digest: crate::report::digest(&bytes), mode: f.mode, results: vec![result], certificate: None };
            Ok(ok(report, 0))
        }
        Command::Blowup { file, center, chart, out } => {
            let (f, bytes) = load(file)?;
            let t = f.triple()?;
            let mut vars = Vec::new();
            for name in center.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                vars.push(f.ring.index_of(name).ok_or_else(|| CliError::Usage(format!("unknown variable `{name}` in center")))?);
            }
            let c = Ideal::coordinate(&f.ring, &vars);
            let charts = make_charts(&f.ring, &c).map_err(|e| CliError::Usage(e.to_string()))?;
            let pick = match chart.parse::<usize>() {
                Ok(k) if (1..=charts.len()).contains(&k) => k - 1,
                Ok(k) => return Err(CliError::Usage(format!("chart {k} out of range 1..={}", charts.len()))),
                Err(_) => {
                    let v = f.ring.index_of(chart).ok_or_else(|| CliError::Usage(format!("unknown chart `{chart}`")))?;
                    charts.iter().position(|ch| ch.pivot == v).ok_or_else(|| CliError::Usage(format!("`{chart}` is not in the center")))?
                }
            };
            let ch = &charts[pick];
            let out_t = transform_triple(&t, ch).map_err(|e| CliError::Mode(e.to_string()))?;
            let file_out = SncFile::from_triple(&out_t.triple, &f, Some(&out_t.component_map));
            let text = file_out.to_string();
            if let Some(path) = out {
                write_out(path, &text)?;
            }
            let map: Map<String, Value> = f
                .ring
                .names()
                .iter()
                .zip(&ch.map.images)
                .map(|(n, img)| (n.clone(), json!(img.to_string())))
                .collect();
            let result = json!({
                "center": ideal_json(&c),
                "chart": ch.label(),
                "substitution": Value::Object(map),
                "exceptional": ch.exceptional.to_string(),
                "events": out_t.events.iter().map(event_json).collect::<Vec<_>>(),
                "component_map": out_t.component_map.iter().map(|k| k.map(|i| i + 1)).collect::<Vec<_>>(),
                "triple": triple_json(&out_t.triple),
            });
            let report = Report { command: "blowup", input_digest: crate::report::digest(&bytes), mode: f.mode, results: vec![result], certificate: None };
            Ok(ok(report, 0))
        }
        Command::Desing { file, max_steps, out, hs_checks } => {
            let (f, bytes) = load(file)?;
            let t = f.triple()?;
            let opts = DesingOptions { max_steps: *max_steps, hs_checks: *hs_checks };
            let digest = crate::report::digest(&bytes);
            let (report, code) = match desing_stable_snc(&t, opts) {
                Ok(cert) => {
                    let check = verify_run(&cert);
                    let accepted = cert.accepted && check.is_accepted();
                    let summary = json!({
                        "status": if accepted { "accepted" } else { "rejected" },
                        "steps": cert.steps.len(),
                        "sequence": cert.steps.iter().map(|s| json!({ "path": s.path, "center": ideal_json(&s.center), "step": s.tag.label() })).collect::<Vec<_>>(),
                    });
                    let c = certificate_json(&cert, &check);
                    (Report { command: "desing", input_digest: digest, mode: f.mode, results: vec![summary], certificate: Some(c) }, i32::from(!accepted))
                }
                Err(PipelineError::GeneralMode) => return Err(CliError::Mode("desing needs `mode arrangement`".into())),
                Err(e @ (PipelineError::NotCoordinate(_) | PipelineError::DivisorShape(_))) => return Err(CliError::Mode(e.to_string())),
                Err(e) => {
                    let r = json!({ "status": "failed", "error": e.to_string() });
                    (Report { command: "desing", input_digest: digest, mode: f.mode, results: vec![r], certificate: None }, 1)
                }
            };
            let text = report.render(cli.format);
            match out {
                Some(path) => {
                    write_out(path, &text)?;
                    Ok(Outcome { code, stdout: String::new(), stderr: String::new() })
                }
                None => Ok(Outcome { code, stdout: text, stderr: String::new() }),
            }
        }
        Command::Oracle { file, suite, cutoff } => {
            let (f, bytes) = load(file)?;
            let run = oracle::run(&f, *suite, *cutoff);
            let code = i32::from(run.disagreements > 0);
            let report = Report { command: "oracle", input_digest: crate::report::digest(&bytes), mode: f.mode, results: run.results, certificate: None };
            Ok(ok(report, code))
        }
    }
}
