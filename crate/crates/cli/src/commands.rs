use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use grover_rel::sweep::{predict_breakpoints, SweepSpec};
use grover_rel::{
    classical_asymptote, predict_single_step_velocity, run_sweep, run_transfer, Extended, InitialSpeed, Real,
    ScalarBackend, SweepRecord, Termination, TransferConfig, TransferOutcome,
};
use serde::Serialize;
use serde_json::Number;

use crate::args::{Format, PredictArgs, SimulateArgs, SweepArgs};
use crate::lists::{parse_list, parse_value};
use crate::trajectory::{number, TrajectoryFile};

/// How a successful invocation ended; maps onto exit codes 0 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    Incomplete,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Complete => 0,
            Status::Incomplete => 2,
        }
    }

    fn of(terminations: impl IntoIterator<Item = Termination>) -> Self {
        if terminations.into_iter().all(|t| t == Termination::FirstMaxFound) {
            Status::Complete
        } else {
            Status::Incomplete
        }
    }
}

pub const SWEEP_HEADER: [&str; 10] = [
    "N",
    "v0",
    "steps_to_max",
    "max_fraction",
    "classical_steps",
    "asymptote",
    "v0_ss",
    "M_b",
    "termination",
    "big_ball_reversed",
];

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<Status> {
    match ScalarBackend::from(args.precision) {
        ScalarBackend::Standard => simulate_with::<f64>(args, out),
        ScalarBackend::Extended => simulate_with::<Extended>(args, out),
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    #[serde(rename = "N")]
    n: Number,
    v0: Number,
    one_minus_v0: Number,
    precision: &'static str,
    steps_to_max: usize,
    max_fraction: Number,
    termination: &'static str,
    big_ball_reversed: bool,
    collisions: usize,
}

fn simulate_with<T: Real>(args: &SimulateArgs, out: &mut dyn Write) -> Result<Status> {
    let n: T = parse_value(&args.n, "N")?;
    let initial = match (&args.v0, &args.one_minus_v0) {
        (Some(v), None) => InitialSpeed::Velocity(parse_value(v, "v0")?),
        (None, Some(x)) => InitialSpeed::OneMinusVelocity(parse_value(x, "one-minus-v0")?),
        _ => bail!("exactly one of --v0 and --one-minus-v0 is required"),
    };
    let mut cfg = TransferConfig::new(n, initial).record_trajectory(args.trajectory.is_some());
    cfg.max_iter = args.max_iter;
    let outcome = run_transfer(&cfg)?;

    if let Some(path) = &args.trajectory {
        let points = outcome.trajectory.as_deref().unwrap_or_default();
        std::fs::write(path, TrajectoryFile::new(n, initial, points).to_json())
            .with_context(|| format!("cannot write trajectory to {}", path.display()))?;
    }

    let summary = summarize(&cfg, &outcome);
    match args.format {
        None => {
            writeln!(out, "N: {}", summary.n)?;
            writeln!(out, "v0: {}", summary.v0)?;
            writeln!(out, "one_minus_v0: {}", summary.one_minus_v0)?;
            writeln!(out, "precision: {}", summary.precision)?;
            writeln!(out, "steps_to_max: {}", summary.steps_to_max)?;
            writeln!(out, "max_fraction: {}", summary.max_fraction)?;
            writeln!(out, "termination: {}", summary.termination)?;
            writeln!(out, "big_ball_reversed: {}", summary.big_ball_reversed)?;
            writeln!(out, "collisions: {}", summary.collisions)?;
        }
        Some(Format::Csv) => write_flat_csv(&serde_json::to_value(&summary)?, out)?,
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut *out, &summary)?;
            writeln!(out)?;
        }
    }
    Ok(Status::of([outcome.termination]))
}

/// One header row and one value row from a flat JSON object.
fn write_flat_csv(value: &serde_json::Value, out: &mut dyn Write) -> Result<()> {
    let object = value.as_object().expect("flat struct");
    let mut w = csv::Writer::from_writer(out);
    w.write_record(object.keys())?;
    w.write_record(object.values().map(|v| match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }))?;
    w.flush()?;
    Ok(())
}

fn summarize<T: Real>(cfg: &TransferConfig<T>, outcome: &TransferOutcome<T>) -> SimulateSummary {
    SimulateSummary {
        n: number(cfg.n),
        v0: number(cfg.initial.velocity()),
        one_minus_v0: number(cfg.initial.one_minus_velocity()),
        precision: T::BACKEND.name(),
        steps_to_max: outcome.steps_to_max,
        max_fraction: number(outcome.max_fraction),
        termination: outcome.termination.name(),
        big_ball_reversed: outcome.big_ball_reversed,
        collisions: outcome.collisions,
    }
}

fn sorted(mut values: Vec<Extended>) -> Vec<Extended> {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    values
}

pub fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    let n_values = sorted(parse_list(&args.n_list, "N")?);
    let speeds = match (&args.v0_list, &args.one_minus_v0_list) {
        (Some(list), None) => sorted(parse_list(list, "v0")?)
            .into_iter()
            .map(InitialSpeed::Velocity)
            .collect(),
        // descending 1 − v0 is ascending v0
        (None, Some(list)) => sorted(parse_list(list, "one-minus-v0")?)
            .into_iter()
            .rev()
            .map(InitialSpeed::OneMinusVelocity)
            .collect(),
        _ => bail!("exactly one of --v0-list and --one-minus-v0-list is required"),
    };
    let mut spec = SweepSpec::new(n_values, speeds)
        .backend(args.precision.into())
        .classical(args.classical);
    spec.max_iter = args.max_iter;
    spec.validate()?;
    Ok(spec)
}

pub fn sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<Status> {
    let spec = sweep_spec(args)?;
    if args.jobs == Some(0) {
        bail!("--jobs must be at least 1");
    }
    // opened before the run so a bad path fails fast
    let mut file = args
        .out
        .as_ref()
        .map(|path| {
            File::create(path)
                .map(BufWriter::new)
                .with_context(|| format!("cannot write to {}", path.display()))
        })
        .transpose()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()?;
    let records = pool.install(|| run_sweep(&spec))?;

    let out: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => stdout,
    };
    match args.format {
        Format::Csv => write_sweep_csv(&records, out)?,
        Format::Json => write_sweep_json(&records, spec.backend, out)?,
    }
    out.flush()?;
    Ok(Status::of(records.iter().map(|r| r.termination)))
}

fn field(x: Extended, backend: ScalarBackend) -> String {
    match backend {
        ScalarBackend::Standard => x.to_f64().to_output(),
        ScalarBackend::Extended => x.to_output(),
    }
}

pub fn write_sweep_csv(records: &[SweepRecord], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        let b = r.backend;
        w.write_record([
            field(r.n, b),
            field(r.v0(), b),
            r.steps_to_max.to_string(),
            field(r.max_fraction, b),
            r.classical_steps.map(|s| s.to_string()).unwrap_or_default(),
            field(r.asymptote, b),
            field(r.v0_ss.v0, b),
            field(r.m_b, b),
            r.termination.name().to_owned(),
            r.big_ball_reversed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SweepJson {
    precision: &'static str,
    records: Vec<SweepJsonRecord>,
}

#[derive(Serialize)]
struct SweepJsonRecord {
    #[serde(rename = "N")]
    n: Number,
    v0: Number,
    one_minus_v0: Number,
    steps_to_max: usize,
    max_fraction: Number,
    classical_steps: Option<usize>,
    asymptote: Number,
    v0_ss: Number,
    one_minus_v0_ss: Number,
    #[serde(rename = "M_b")]
    m_b: Number,
    termination: &'static str,
    big_ball_reversed: bool,
}

fn json_number(x: Extended, backend: ScalarBackend) -> Number {
    field(x, backend).parse().expect("scientific notation is valid JSON")
}

pub fn write_sweep_json(records: &[SweepRecord], backend: ScalarBackend, out: &mut dyn Write) -> Result<()> {
    let doc = SweepJson {
        precision: backend.name(),
        records: records
            .iter()
            .map(|r| SweepJsonRecord {
                n: json_number(r.n, r.backend),
                v0: json_number(r.v0(), r.backend),
                one_minus_v0: json_number(r.speed.one_minus_velocity(), r.backend),
                steps_to_max: r.steps_to_max,
                max_fraction: json_number(r.max_fraction, r.backend),
                classical_steps: r.classical_steps,
                asymptote: json_number(r.asymptote, r.backend),
                v0_ss: json_number(r.v0_ss.v0, r.backend),
                one_minus_v0_ss: json_number(r.v0_ss.one_minus_v0, r.backend),
                m_b: json_number(r.m_b, r.backend),
                termination: r.termination.name(),
                big_ball_reversed: r.big_ball_reversed,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize, Default)]
struct Prediction {
    #[serde(skip_serializing_if = "Option::is_none")]
    v0_ss: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    one_minus_v0_ss: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptote: Option<Number>,
    #[serde(rename = "v0_b", skip_serializing_if = "Option::is_none")]
    v0_b: Option<Number>,
    #[serde(rename = "M_b", skip_serializing_if = "Option::is_none")]
    m_b: Option<Number>,
}

pub fn predict(args: &PredictArgs, out: &mut dyn Write) -> Result<Status> {
    match ScalarBackend::from(args.precision) {
        ScalarBackend::Standard => predict_with::<f64>(args, out),
        ScalarBackend::Extended => predict_with::<Extended>(args, out),
    }
}

fn predict_with<T: Real>(args: &PredictArgs, out: &mut dyn Write) -> Result<Status> {
    if args.n.is_none() && args.v0.is_none() {
        bail!("at least one of --n and --v0 is required");
    }
    let mut p = Prediction::default();
    if let Some(n) = &args.n {
        let n: T = parse_value(n, "N")?;
        let ss = predict_single_step_velocity(n)?;
        p.v0_ss = Some(number(ss.v0));
        p.one_minus_v0_ss = Some(number(ss.one_minus_v0));
        p.asymptote = Some(number(classical_asymptote(n)?));
        p.v0_b = predict_breakpoints(None, Some(n - T::one()))?.v0_b.map(number);
    }
    if let Some(v0) = &args.v0 {
        let v0: T = parse_value(v0, "v0")?;
        p.m_b = predict_breakpoints(Some(v0), None)?.m_b.map(number);
    }

    match args.format {
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut *out, &p)?;
            writeln!(out)?;
        }
        Some(Format::Csv) => write_flat_csv(&serde_json::to_value(&p)?, out)?,
        None => {
            let value = serde_json::to_value(&p)?;
            for (key, v) in value.as_object().expect("struct") {
                writeln!(out, "{key}: {v}")?;
            }
        }
    }
    Ok(Status::Complete)
}
