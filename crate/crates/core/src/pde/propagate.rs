//! Crank–Nicolson time stepping.

use num_complex::Complex64;

use super::hamiltonian::{Boundary, DiscreteHamiltonian};
use super::observables::{observables, ObservableTrace};
use super::tridiag;
use crate::error::{Error, Result};
use crate::model::{GaugeSpec, PhysicalParams, WaveField};

/// Boundary amplitude above which a propagation logs a warning.
pub const BOUNDARY_WARNING: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub boundary: Boundary,
    pub record_every: usize,
}

impl PropagatorConfig {
    pub fn new(dt: f64, n_steps: usize, boundary: Boundary, record_every: usize) -> Result<Self> {
        let cfg = PropagatorConfig { dt, n_steps, boundary, record_every };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt", format!("must be positive and finite, got {}", self.dt));
        }
        if self.n_steps == 0 {
            return bad("n_steps", "must be at least 1".into());
        }
        if self.record_every == 0 || self.record_every > self.n_steps {
            return bad("record_every", format!("must lie in 1..={}, got {}", self.n_steps, self.record_every));
        }
        Ok(())
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.n_steps as f64
    }
}

/// Propagates `wf0` under the Hamiltonian of `g`, recording observables at
/// the start, every `record_every` steps and at the end.
///
/// Each step solves `(1 + i dt H/2ħ) ψₙ₊₁ = (1 - i dt H/2ħ) ψₙ` with `H`
/// frozen at the half step.
pub fn crank_nicolson_propagate(
    wf0: &WaveField,
    g: &GaugeSpec,
    params: &PhysicalParams,
    cfg: &PropagatorConfig,
) -> Result<(WaveField, ObservableTrace)> {
    cfg.validate()?;
    wf0.expect_tags(g, g.natural_frame())?;
    let grid = *wf0.grid();
    let t0 = wf0.time();
    let n = grid.len();
    let time_dependent = matches!(g, GaugeSpec::Dynamic | GaugeSpec::Accelerated(_));
    let factor = Complex64::new(0.0, cfg.dt / (2.0 * params.hbar()));

    let mut psi = wf0.amplitudes().to_vec();
    let mut trace = ObservableTrace::default();
    trace.push(t0, &observables(wf0, g, params)?);

    let mut h = DiscreteHamiltonian::new(g, params, &grid, t0 + 0.5 * cfg.dt, cfg.boundary);
    let mut lhs_diag = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut warned = false;

    for step in 0..cfg.n_steps {
        let t = t0 + step as f64 * cfg.dt;
        if time_dependent && step > 0 {
            h = DiscreteHamiltonian::new(g, params, &grid, t + 0.5 * cfg.dt, cfg.boundary);
        }
        for j in 0..n {
            rhs[j] = psi[j] - factor * h.apply_row(&psi, j);
            lhs_diag[j] = Complex64::new(1.0, 0.0) + factor * h.diag[j];
        }
        let (lower, upper) = (factor * h.hop.conj(), factor * h.hop);
        let t_next = t0 + (step + 1) as f64 * cfg.dt;
        if !upper.is_finite() || lhs_diag.iter().chain(&rhs).any(|z| !z.is_finite()) {
            log::error!("non-finite step coefficients at t = {t}; last finite state at t = {t}");
            return Err(Error::Blowup { time: t_next, last_good: t });
        }
        match cfg.boundary {
            Boundary::Dirichlet => tridiag::solve_with(lower, &lhs_diag, upper, &mut rhs, &mut scratch)?,
            Boundary::Periodic => tridiag::solve_cyclic(lower, &lhs_diag, upper, &mut rhs)?,
        }
        if rhs.iter().any(|z| !z.is_finite()) {
            log::error!("non-finite amplitude at t = {t_next}; last finite state at t = {t}");
            return Err(Error::Blowup { time: t_next, last_good: t });
        }
        std::mem::swap(&mut psi, &mut rhs);

        if cfg.boundary == Boundary::Dirichlet && !warned {
            let edge = psi[0].norm().max(psi[n - 1].norm());
            if edge > BOUNDARY_WARNING {
                log::warn!("boundary amplitude {edge:.3e} at t = {t_next}; reflections may contaminate the run");
                warned = true;
            }
        }
        let done = step + 1;
        if done % cfg.record_every == 0 || done == cfg.n_steps {
            let wf = WaveField::new(grid, t_next, psi.clone(), *g, g.natural_frame())?;
            trace.push(t_next, &observables(&wf, g, params)?);
        }
    }
    let t_end = t0 + cfg.n_steps as f64 * cfg.dt;
    Ok((WaveField::new(grid, t_end, psi, *g, g.natural_frame())?, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FrameLabel, SpatialGrid};
    use crate::pde::gaussian_packet;

    fn free_packet(grid: &SpatialGrid, p0: f64) -> WaveField {
        gaussian_packet(grid, 0.0, p0, 1.0, 1.0, GaugeSpec::FreeFrame, FrameLabel::Accelerated, 0.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PropagatorConfig::new(0.0, 10, Boundary::Dirichlet, 1).is_err());
        assert!(PropagatorConfig::new(0.1, 0, Boundary::Dirichlet, 1).is_err());
        assert!(PropagatorConfig::new(0.1, 10, Boundary::Dirichlet, 11).is_err());
        let cfg = PropagatorConfig::new(0.25, 8, Boundary::Periodic, 3).unwrap();
        assert_eq!(cfg.total_time(), 2.0);
    }

    #[test]
    fn free_packet_stays_put_and_spreads() {
        let grid = SpatialGrid::new(-20.0, 20.0, 801).unwrap();
        let cfg = PropagatorConfig::new(0.01, 200, Boundary::Dirichlet, 20).unwrap();
        let (_, trace) = crank_nicolson_propagate(&free_packet(&grid, 0.0), &GaugeSpec::FreeFrame, &PhysicalParams::default(), &cfg).unwrap();
        assert_eq!(trace.len(), 11);
        for w in trace.var_x.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(trace.mean_x.iter().all(|m| m.abs() < 1e-12));
        // σ² (1 + (ħt/2mσ²)²) at t = 2
        assert!((trace.var_x[10] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn record_schedule_includes_final_step() {
        let grid = SpatialGrid::new(-10.0, 10.0, 101).unwrap();
        let cfg = PropagatorConfig::new(0.1, 7, Boundary::Dirichlet, 3).unwrap();
        let (wf, trace) = crank_nicolson_propagate(&free_packet(&grid, 0.0), &GaugeSpec::FreeFrame, &PhysicalParams::default(), &cfg).unwrap();
        let times: Vec<f64> = trace.times.iter().map(|t| (t * 10.0).round()).collect();
        assert_eq!(times, vec![0.0, 3.0, 6.0, 7.0]);
        assert!((wf.time() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn periodic_packet_wraps_around() {
        let grid = SpatialGrid::new(-10.0, 10.0, 400).unwrap();
        let (p0, t) = (5.0, 3.0);
        let wf = gaussian_packet(&grid, 0.0, p0, 1.0, 1.0, GaugeSpec::FreeFrame, FrameLabel::Accelerated, 0.0).unwrap();
        let cfg = PropagatorConfig::new(0.005, 600, Boundary::Periodic, 600).unwrap();
        let (out, _) = crank_nicolson_propagate(&wf, &GaugeSpec::FreeFrame, &PhysicalParams::default(), &cfg).unwrap();
        let sum = |w: &WaveField| w.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!((sum(&out) / sum(&wf) - 1.0).abs() < 1e-12);
        // lattice group velocity sin(p dx)/dx, position taken modulo the ring length n·dx
        let dx = grid.dx();
        let ring = grid.len() as f64 * dx;
        let expected = (p0 * dx).sin() / dx * t - ring;
        let peak = out.amplitudes().iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap().0;
        assert!((grid.point(peak) - expected).abs() < 0.1, "{} vs {expected}", grid.point(peak));
    }

    #[test]
    fn norm_is_conserved_under_dynamic_gauge() {
        let grid = SpatialGrid::new(-20.0, 20.0, 801).unwrap();
        let p = PhysicalParams::unit_with_field(0.5).unwrap();
        let wf = gaussian_packet(&grid, -3.0, 0.0, 1.0, 1.0, GaugeSpec::Dynamic, FrameLabel::Inertial, 0.0).unwrap();
        let cfg = PropagatorConfig::new(0.01, 300, Boundary::Dirichlet, 300).unwrap();
        let (_, trace) = crank_nicolson_propagate(&wf, &GaugeSpec::Dynamic, &p, &cfg).unwrap();
        assert!((trace.norm[1] / trace.norm[0] - 1.0).abs() < 1e-12);
        assert!((trace.canonical_p[1] - trace.canonical_p[0]).abs() < 1e-10);
    }

    #[test]
    fn tag_mismatch_is_rejected() {
        let grid = SpatialGrid::new(-10.0, 10.0, 101).unwrap();
        let cfg = PropagatorConfig::new(0.1, 1, Boundary::Dirichlet, 1).unwrap();
        assert!(matches!(
            crank_nicolson_propagate(&free_packet(&grid, 0.0), &GaugeSpec::Static, &PhysicalParams::default(), &cfg),
            Err(Error::TagMismatch { .. })
        ));
    }
}
