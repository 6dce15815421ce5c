//! `qgauge table`: samples of Ai or one of the closed forms.

use std::io;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use qgauge::closed_form::{eval, SolutionId, SolutionKind};
use qgauge::model::PhysicalParams;
use qgauge::special::airy_ai;

use crate::output::{csv_writer, num};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Airy,
    Solution(SolutionKind),
}

fn parse_function(s: &str) -> Result<Function, String> {
    if s == "airy" {
        return Ok(Function::Airy);
    }
    SolutionKind::from_name(s).map(Function::Solution).ok_or_else(|| {
        let names: Vec<_> = SolutionKind::ALL.iter().map(|k| k.name()).collect();
        format!("expected `airy` or one of {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// `airy` or a solution name such as `Psi1Static`.
    #[arg(long, value_parser = parse_function)]
    function: Function,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    step: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    charge: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    field: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

/// Sample positions `from, from + step, …` up to `to` (inclusive, with a
/// little slack for rounding).
fn abscissae(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        bail!("range bounds and step must be finite");
    }
    if step <= 0.0 {
        bail!("step must be positive, got {step}");
    }
    if from > to {
        bail!("empty range: from ({from}) exceeds to ({to})");
    }
    let n = ((to - from) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if n > 10_000_000 {
        bail!("range would produce {n} rows");
    }
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

pub fn run(args: &TableArgs) -> Result<ExitCode> {
    let xs = abscissae(args.from, args.to, args.step)?;
    let params = PhysicalParams::new(args.mass, args.charge, args.field, args.hbar).context("invalid physical parameters")?;
    let stdout = io::stdout();
    let mut w = csv_writer(stdout.lock());
    match args.function {
        Function::Airy => {
            w.write_record(["x", "ai", "ai_prime"])?;
            for x in xs {
                let r = airy_ai(x).with_context(|| format!("Ai({x})"))?;
                w.write_record([num(x), num(r.ai), num(r.ai_prime)])?;
            }
        }
        Function::Solution(kind) => {
            let sol = SolutionId::new(kind).with_epsilon(args.epsilon).with_momentum(args.p);
            w.write_record(["x", "re", "im", "abs2"])?;
            for x in xs {
                let z = eval(&sol, x, args.t, &params).with_context(|| format!("{} at x = {x}", kind.name()))?;
                w.write_record([num(x), num(z.re), num(z.im), num(z.norm_sqr())])?;
            }
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
