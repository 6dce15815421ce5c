//! `qgauge simulate`: propagate a JSON-described scenario.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use qgauge::closed_form::{sample, Sign, SolutionId, SolutionKind};
use qgauge::error::Error;
use qgauge::model::{FrameTrajectory, GaugeSpec, PhysicalParams, SpatialGrid, WaveField};
use qgauge::pde::{crank_nicolson_propagate, gaussian_packet, Boundary, ObservableTrace, PropagatorConfig};
use serde::{Deserialize, Serialize};

use crate::output::{csv_writer, num};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: ParamsConfig,
    pub grid: GridConfig,
    pub gauge: GaugeConfig,
    pub initial: InitialConfig,
    /// Start time of the run (default 0).
    #[serde(default)]
    pub t0: f64,
    pub propagator: PropagatorSection,
    #[serde(default)]
    pub outputs: Vec<OutputConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub mass: f64,
    pub charge: f64,
    pub field: f64,
    pub hbar: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum GaugeConfig {
    Static,
    Dynamic,
    FreeFrame,
    Accelerated { accel: f64, v0: f64, x0: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialConfig {
    Gaussian {
        x0: f64,
        p0: f64,
        sigma: f64,
    },
    Solution {
        kind: String,
        #[serde(default)]
        epsilon: f64,
        #[serde(default)]
        p: f64,
        #[serde(default)]
        sign: SignConfig,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConfig {
    #[default]
    Plus,
    Minus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagatorSection {
    pub dt: f64,
    pub n_steps: usize,
    pub boundary: BoundaryConfig,
    pub record_every: usize,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryConfig {
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Content {
    /// Observables at every recorded time.
    #[default]
    Trace,
    /// The full field at every recorded time.
    Snapshots,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: Format,
    #[serde(default)]
    pub content: Content,
}

/// Everything a run needs, validated.
pub struct Scenario {
    pub params: PhysicalParams,
    pub gauge: GaugeSpec,
    pub initial: WaveField,
    pub propagator: PropagatorConfig,
    pub outputs: Vec<OutputConfig>,
}

impl ScenarioConfig {
    /// Parses a config document. An empty document is read as `{}` so the
    /// diagnostic names the first missing field.
    pub fn parse(text: &str) -> Result<Self> {
        let text = if text.trim().is_empty() { "{}" } else { text };
        serde_json::from_str(text).map_err(|e| anyhow!("invalid config: {e}"))
    }

    pub fn build(self) -> Result<Scenario> {
        let p = &self.params;
        let params = PhysicalParams::new(p.mass, p.charge, p.field, p.hbar).context("params")?;
        let grid = SpatialGrid::new(self.grid.x_min, self.grid.x_max, self.grid.n).context("grid")?;
        let gauge = match self.gauge {
            GaugeConfig::Static => GaugeSpec::Static,
            GaugeConfig::Dynamic => GaugeSpec::Dynamic,
            GaugeConfig::FreeFrame => GaugeSpec::FreeFrame,
            GaugeConfig::Accelerated { accel, v0, x0 } => {
                GaugeSpec::Accelerated(FrameTrajectory::new(accel, v0, x0).context("gauge.accelerated")?)
            }
        };
        if !self.t0.is_finite() {
            bail!("t0 must be finite");
        }
        let initial = match self.initial {
            InitialConfig::Gaussian { x0, p0, sigma } => {
                for (v, what) in [(x0, "initial.gaussian.x0"), (p0, "initial.gaussian.p0")] {
                    if !v.is_finite() {
                        bail!("{what} must be finite");
                    }
                }
                gaussian_packet(&grid, x0, p0, sigma, params.hbar(), gauge, gauge.natural_frame(), self.t0)
                    .context("initial.gaussian")?
            }
            InitialConfig::Solution { kind, epsilon, p, sign } => {
                let kind = SolutionKind::from_name(&kind)
                    .ok_or_else(|| anyhow!("initial.solution.kind: unknown solution `{kind}`"))?;
                if kind.gauge() != gauge {
                    bail!("initial.solution: {} solves the {} equation, but the scenario gauge is {gauge}", kind.name(), kind.gauge());
                }
                let sign = match sign {
                    SignConfig::Plus => Sign::Plus,
                    SignConfig::Minus => Sign::Minus,
                };
                let sol = SolutionId::new(kind).with_epsilon(epsilon).with_momentum(p).with_sign(sign);
                sample(&sol, &grid, self.t0, &params).context("initial.solution")?
            }
        };
        let q = &self.propagator;
        let boundary = match q.boundary {
            BoundaryConfig::Dirichlet => Boundary::Dirichlet,
            BoundaryConfig::Periodic => Boundary::Periodic,
        };
        let propagator = PropagatorConfig::new(q.dt, q.n_steps, boundary, q.record_every).context("propagator")?;
        let mut seen = HashSet::new();
        for out in &self.outputs {
            if !seen.insert(out.path.clone()) {
                bail!("outputs: path {} listed twice", out.path.display());
            }
        }
        Ok(Scenario { params, gauge, initial, propagator, outputs: self.outputs })
    }
}

/// Result of a run: the trace plus the field at every recorded time.
pub struct RunOutput {
    pub trace: ObservableTrace,
    pub snapshots: Vec<WaveField>,
}

/// Propagates in chunks of `record_every` steps so that snapshots line up
/// with the trace rows.
pub fn execute(s: &Scenario) -> std::result::Result<RunOutput, Error> {
    let cfg = &s.propagator;
    let mut trace = ObservableTrace::default();
    let mut snapshots = vec![s.initial.clone()];
    let mut state = s.initial.clone();
    let mut done = 0;
    while done < cfg.n_steps {
        let steps = cfg.record_every.min(cfg.n_steps - done);
        let chunk = PropagatorConfig::new(cfg.dt, steps, cfg.boundary, steps)?;
        let (next, part) = crank_nicolson_propagate(&state, &s.gauge, &s.params, &chunk)?;
        let skip = usize::from(!trace.is_empty());
        for i in skip..part.len() {
            let r = part.row(i);
            trace.times.push(r[0]);
            trace.norm.push(r[1]);
            trace.mean_x.push(r[2]);
            trace.canonical_p.push(r[3]);
            trace.kinetic_p.push(r[4]);
            trace.var_x.push(r[5]);
        }
        snapshots.push(next.clone());
        state = next;
        done += steps;
    }
    Ok(RunOutput { trace, snapshots })
}

const TRACE_HEADER: [&str; 6] = ["t", "norm", "mean_x", "canonical_p", "kinetic_p", "var_x"];

#[derive(Serialize)]
struct TraceJson<'a> {
    t: &'a [f64],
    norm: &'a [f64],
    mean_x: &'a [f64],
    canonical_p: &'a [f64],
    kinetic_p: &'a [f64],
    var_x: &'a [f64],
}

#[derive(Serialize)]
struct SnapshotJson {
    t: f64,
    x: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    abs2: Vec<f64>,
}

pub fn write_output<W: Write>(out: &OutputConfig, run: &RunOutput, w: W) -> Result<()> {
    match (out.format, out.content) {
        (Format::Csv, Content::Trace) => {
            let mut w = csv_writer(w);
            w.write_record(TRACE_HEADER)?;
            for i in 0..run.trace.len() {
                w.write_record(run.trace.row(i).map(num))?;
            }
            w.flush()?;
        }
        (Format::Csv, Content::Snapshots) => {
            let mut w = csv_writer(w);
            w.write_record(["t", "x", "re", "im", "abs2"])?;
            for snap in &run.snapshots {
                for (x, z) in snap.grid().points().zip(snap.amplitudes()) {
                    w.write_record([num(snap.time()), num(x), num(z.re), num(z.im), num(z.norm_sqr())])?;
                }
            }
            w.flush()?;
        }
        (Format::Json, Content::Trace) => {
            let t = &run.trace;
            let doc = TraceJson {
                t: &t.times,
                norm: &t.norm,
                mean_x: &t.mean_x,
                canonical_p: &t.canonical_p,
                kinetic_p: &t.kinetic_p,
                var_x: &t.var_x,
            };
            serde_json::to_writer_pretty(w, &doc)?;
        }
        (Format::Json, Content::Snapshots) => {
            let doc: Vec<SnapshotJson> = run
                .snapshots
                .iter()
                .map(|s| SnapshotJson {
                    t: s.time(),
                    x: s.grid().points().collect(),
                    re: s.amplitudes().iter().map(|z| z.re).collect(),
                    im: s.amplitudes().iter().map(|z| z.im).collect(),
                    abs2: s.amplitudes().iter().map(|z| z.norm_sqr()).collect(),
                })
                .collect();
            serde_json::to_writer_pretty(w, &doc)?;
        }
    }
    Ok(())
}

pub fn run(config: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(config).with_context(|| format!("cannot read {}", config.display()))?;
    let scenario = ScenarioConfig::parse(&text)?.build()?;
    // open every output before the run so an unwritable path is a config error
    let mut files = Vec::new();
    for out in &scenario.outputs {
        let f = File::create(&out.path).with_context(|| format!("outputs: cannot write {}", out.path.display()))?;
        files.push(BufWriter::new(f));
    }
    let run = match execute(&scenario) {
        Ok(run) => run,
        Err(Error::Blowup { time, last_good }) => {
            eprintln!("error: non-finite amplitudes at t = {time}; last good state at t = {last_good}");
            return Ok(ExitCode::from(3));
        }
        Err(e) => {
            eprintln!("error: propagation failed: {e}");
            return Ok(ExitCode::from(3));
        }
    };
    for (out, file) in scenario.outputs.iter().zip(files) {
        let mut file = file;
        write_output(out, &run, &mut file).with_context(|| format!("writing {}", out.path.display()))?;
        file.flush()?;
    }
    if let Some(last) = run.trace.last() {
        println!(
            "t = {}  norm = {}  mean_x = {}  canonical_p = {}  kinetic_p = {}  var_x = {}",
            last[0], last[1], last[2], last[3], last[4], last[5]
        );
    }
    Ok(ExitCode::SUCCESS)
}
