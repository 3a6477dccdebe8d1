//! One entry point per mode. Each returns the text to print and whether the
//! run succeeded; output depends only on the configuration.

use mixwidth_core::Instance;
use serde::Serialize;

use crate::input::load_instance;
use crate::report::{EstimateReport, Value, WitnessReport, SCHEMA_VERSION};
use crate::suites::{render_table, run_all, SuiteOptions, SuiteReport};
use crate::sweep::{compute_sweep, write_csv, SweepRow};
use crate::{CliError, Format, Mode, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, success: true }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn instance(config: &RunConfig) -> Result<Instance, CliError> {
    let path = config
        .instance
        .as_deref()
        .ok_or_else(|| CliError::Config("--instance is required for this mode".into()))?;
    load_instance(path)
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.mode {
        Mode::Estimate => run_estimate(config),
        Mode::Sweep => run_sweep(config),
        Mode::Verify => run_verify(config),
        Mode::Witness => run_witness(config),
    }
}

pub fn run_estimate(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = EstimateReport::compute(&instance(config)?)?;
    Ok(Outcome::ok(match config.format {
        Format::Json => json(&report),
        Format::Table => report.render_table(),
        Format::Csv => return Err(CliError::Config("estimate output is table or json".into())),
    }))
}

#[derive(Serialize)]
struct SweepRowJson {
    n: u64,
    psi: Value,
    argmin: Vec<usize>,
    components: Vec<Value>,
    witness_lb: Value,
}

#[derive(Serialize)]
struct SweepJson {
    schema_version: u32,
    rows: Vec<SweepRowJson>,
}

fn sweep_json(rows: &[SweepRow]) -> SweepJson {
    SweepJson {
        schema_version: SCHEMA_VERSION,
        rows: rows
            .iter()
            .map(|r| SweepRowJson {
                n: r.n,
                psi: Value::of(r.psi),
                argmin: r.argmin.clone(),
                components: r.components.iter().map(|&c| Value::of(c)).collect(),
                witness_lb: Value::of(r.witness_lb),
            })
            .collect(),
    }
}

pub fn run_sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let inst = instance(config)?;
    let from = config.n_from.unwrap_or(0);
    let to = config.n_to.unwrap_or(inst.dims().max_n());
    let rows = compute_sweep(&inst, from, to)?;
    Ok(Outcome::ok(match config.format {
        Format::Csv => write_csv(&rows)?,
        Format::Json => json(&sweep_json(&rows)),
        Format::Table => crate::sweep::render_table(&rows),
    }))
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    schema_version: u32,
    seed: u64,
    trials: usize,
    passed: bool,
    suites: &'a [SuiteReport],
}

pub fn run_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    if config.trials == 0 {
        return Err(CliError::Config("--trials must be positive".into()));
    }
    if let Some(t) = config.tolerance_rel {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Config(format!("--tolerance-rel {t} must be finite and nonnegative")));
        }
    }
    let opts = SuiteOptions {
        seed: config.seed,
        trials: config.trials,
        tolerance_rel: config.tolerance_rel,
        fault: config.fault,
    };
    let reports = run_all(&opts)?;
    let success = reports.iter().all(SuiteReport::ok);
    let text = match config.format {
        Format::Json => json(&VerifyJson {
            schema_version: SCHEMA_VERSION,
            seed: config.seed,
            trials: config.trials,
            passed: success,
            suites: &reports,
        }),
        Format::Table => {
            let mut t = render_table(&reports);
            let failed: Vec<&str> = reports.iter().filter(|r| !r.ok()).map(|r| r.name).collect();
            if failed.is_empty() {
                t.push_str("all suites passed\n");
            } else {
                t.push_str(&format!("failed suites: {}\n", failed.join(", ")));
            }
            t
        }
        Format::Csv => return Err(CliError::Config("verify output is table or json".into())),
    };
    Ok(Outcome { text, success })
}

pub fn run_witness(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = WitnessReport::compute(&instance(config)?)?;
    Ok(Outcome::ok(match config.format {
        Format::Json => json(&report),
        Format::Table => report.render_table(),
        Format::Csv => return Err(CliError::Config("witness output is table or json".into())),
    }))
}
