//! How well an analytic field satisfies a discretised Schrödinger equation.

use num_complex::Complex64;

use super::hamiltonian::{Boundary, DiscreteHamiltonian};
use crate::closed_form::{AnalyticField, ClosedForm, SolutionId};
use crate::error::{Error, Result};
use crate::model::{GaugeSpec, PhysicalParams, ResidualReport, SpatialGrid};

pub const DEFAULT_DT_FD: f64 = 1e-4;

/// Residual of a closed-form solution against the equation of `g`.
pub fn residual(
    sol: &SolutionId,
    g: &GaugeSpec,
    grid: &SpatialGrid,
    t: f64,
    params: &PhysicalParams,
    dt_fd: f64,
) -> Result<ResidualReport> {
    residual_of(&ClosedForm::new(*sol, *params), g, grid, t, params, dt_fd)
}

/// Residual `iħ∂tψ - Hψ` of any analytic field, with a second evaluation on
/// the refined grid (`dx/2`, `dt_fd/2`) for the convergence order.
///
/// Only interior points enter the norms, since the field need not vanish
/// at the grid ends. Both norms are divided by the largest of the
/// corresponding norms of the individual terms (`ħ²/2m ∂²ψ`, drift,
/// potential, `iħ∂tψ`): `Hψ` itself vanishes for a zero-energy state.
pub fn residual_of(
    field: &dyn AnalyticField,
    g: &GaugeSpec,
    grid: &SpatialGrid,
    t: f64,
    params: &PhysicalParams,
    dt_fd: f64,
) -> Result<ResidualReport> {
    if !field.gauge().matches(g) || field.frame() != g.natural_frame() {
        return Err(Error::InvalidPairing(format!(
            "a {}/{} field does not solve the {g} equation",
            field.gauge(),
            field.frame()
        )));
    }
    if !(dt_fd.is_finite() && dt_fd > 0.0) {
        return Err(Error::InvalidParameter { name: "dt_fd", reason: format!("must be positive, got {dt_fd}") });
    }
    let coarse = single_level(field, g, grid, t, params, dt_fd)?;
    let fine = single_level(field, g, &grid.refined(), t, params, 0.5 * dt_fd)?;
    let order = (coarse.linf_residual / fine.linf_residual).log2();
    Ok(ResidualReport { convergence_order: order.is_finite().then_some(order), ..coarse })
}

fn single_level(
    field: &dyn AnalyticField,
    g: &GaugeSpec,
    grid: &SpatialGrid,
    t: f64,
    params: &PhysicalParams,
    dt_fd: f64,
) -> Result<ResidualReport> {
    let hbar = params.hbar();
    let psi = field.sample(grid, t)?.into_amplitudes();
    let at = |s: f64| field.sample(grid, s).map(|w| w.into_amplitudes());
    let (plus, minus) = (at(t + dt_fd)?, at(t - dt_fd)?);
    let (plus_half, minus_half) = (at(t + 0.5 * dt_fd)?, at(t - 0.5 * dt_fd)?);

    let h = DiscreteHamiltonian::new(g, params, grid, t, Boundary::Dirichlet);
    let (m, dx) = (params.mass(), grid.dx());
    let a = g.coupling(params, t);
    let i_hbar = Complex64::new(0.0, hbar);

    let n = grid.len();
    let mut res = Vec::with_capacity(n - 2);
    // kinetic, drift, potential, time-derivative magnitudes
    let mut terms: [Vec<f64>; 4] = Default::default();
    for j in 1..n - 1 {
        let wide = (plus[j] - minus[j]) / (2.0 * dt_fd);
        let narrow = (plus_half[j] - minus_half[j]) / dt_fd;
        let dpsi_dt = (4.0 * narrow - wide) / 3.0;
        let lhs = i_hbar * dpsi_dt;
        res.push(lhs - h.apply_row(&psi, j));

        let x = grid.point(j);
        let lap = (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (dx * dx);
        let grad = (psi[j + 1] - psi[j - 1]) / (2.0 * dx);
        terms[0].push((hbar * hbar / (2.0 * m) * lap).norm());
        terms[1].push((hbar * a / m * grad).norm());
        terms[2].push(((g.potential_energy(params, x, t) + a * a / (2.0 * m)) * psi[j]).norm());
        terms[3].push(lhs.norm());
    }
    let interior = SpatialGrid::new(grid.point(1), grid.point(n - 2), n - 2)?;
    let l2 = |v: &mut dyn Iterator<Item = f64>| interior.trapezoid(v.map(|x| x * x)).sqrt();
    let linf = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);

    let res_abs: Vec<f64> = res.iter().map(|z| z.norm()).collect();
    let ref_l2 = terms.iter().map(|v| l2(&mut v.iter().copied())).fold(0.0, f64::max);
    let ref_linf = terms.iter().map(|v| linf(v)).fold(0.0, f64::max);
    if !(ref_linf > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(ResidualReport {
        l2_residual: l2(&mut res_abs.iter().copied()) / ref_l2,
        linf_residual: linf(&res_abs) / ref_linf,
        reference_norm: ref_linf,
        convergence_order: None,
    })
}
