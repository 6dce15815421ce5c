//! Discrete Hamiltonians, PDE residuals and Crank–Nicolson propagation.

mod hamiltonian;
mod observables;
mod propagate;
mod residual;
mod tridiag;

pub use hamiltonian::{apply_hamiltonian, Boundary, DiscreteHamiltonian, DriftStencil};
pub use observables::{observables, ObservableTrace, Observables};
pub use propagate::{crank_nicolson_propagate, PropagatorConfig, BOUNDARY_WARNING};
pub use residual::{residual, residual_of, DEFAULT_DT_FD};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FrameLabel, GaugeSpec, SpatialGrid, WaveField};

/// Normalised packet `(2πσ²)^(-1/4) exp(-(x-x0)²/4σ² + i p0 x/ħ)`.
#[allow(clippy::too_many_arguments)]
pub fn gaussian_packet(
    grid: &SpatialGrid,
    x0: f64,
    p0: f64,
    sigma: f64,
    hbar: f64,
    gauge: GaugeSpec,
    frame: FrameLabel,
    t0: f64,
) -> Result<WaveField> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter { name: "sigma", reason: format!("must be positive, got {sigma}") });
    }
    let amp = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    WaveField::from_fn(*grid, t0, gauge, frame, |x| {
        let d = x - x0;
        Ok(Complex64::from_polar(amp * (-d * d / (4.0 * sigma * sigma)).exp(), p0 * x / hbar))
    })
}
