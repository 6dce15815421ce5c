//! Discrete Hamiltonians on a uniform grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{GaugeSpec, PhysicalParams, SpatialGrid, WaveField};

/// What lies beyond the ends of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// `ψ = 0` outside the grid.
    #[default]
    Dirichlet,
    /// The last point's right neighbour is the first point (period `n·dx`).
    Periodic,
}

/// How the `(-iħ∂ - a)²/2m` kinetic term is discretised when `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftStencil {
    /// Hopping `-ħ²/2m dx² · exp(∓i a dx/ħ)`. Exactly the static-gauge
    /// Laplacian conjugated by the lattice gauge phase, so the two gauges
    /// stay equivalent after discretisation.
    #[default]
    Covariant,
    /// Central differences for `∂²` and `∂` plus the `a²/2m` diagonal.
    Central,
}

/// `H = hop·shift₊ + conj(hop)·shift₋ + diag`, Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    /// Coefficient coupling `ψ[j+1]` into row `j`.
    pub hop: Complex64,
    pub diag: Vec<f64>,
    pub boundary: Boundary,
}

impl DiscreteHamiltonian {
    pub fn new(g: &GaugeSpec, params: &PhysicalParams, grid: &SpatialGrid, t: f64, boundary: Boundary) -> Self {
        Self::with_stencil(g, params, grid, t, boundary, DriftStencil::default())
    }

    pub fn with_stencil(
        g: &GaugeSpec,
        params: &PhysicalParams,
        grid: &SpatialGrid,
        t: f64,
        boundary: Boundary,
        stencil: DriftStencil,
    ) -> Self {
        let (m, hbar, dx) = (params.mass(), params.hbar(), grid.dx());
        let a = g.coupling(params, t);
        let kinetic = hbar * hbar / (2.0 * m * dx * dx);
        let (hop, shift) = match stencil {
            DriftStencil::Covariant => (Complex64::from_polar(-kinetic, -a * dx / hbar), 0.0),
            DriftStencil::Central => (Complex64::new(-kinetic, hbar * a / (2.0 * m * dx)), a * a / (2.0 * m)),
        };
        let diag = grid
            .points()
            .map(|x| 2.0 * kinetic + shift + g.potential_energy(params, x, t))
            .collect();
        DiscreteHamiltonian { hop, diag, boundary }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `(Hψ)[j]` for a single row.
    pub fn apply_row(&self, psi: &[Complex64], j: usize) -> Complex64 {
        let n = psi.len();
        let zero = Complex64::new(0.0, 0.0);
        let periodic = self.boundary == Boundary::Periodic;
        let left = if j > 0 { psi[j - 1] } else if periodic { psi[n - 1] } else { zero };
        let right = if j + 1 < n { psi[j + 1] } else if periodic { psi[0] } else { zero };
        self.hop * right + self.hop.conj() * left + self.diag[j] * psi[j]
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.len(), "state and Hamiltonian sizes differ");
        (0..psi.len()).map(|j| self.apply_row(psi, j)).collect()
    }
}

/// `Hψ` for the equation named by `g`, evaluated at `t` (which must be the
/// field's own time).
pub fn apply_hamiltonian(
    wf: &WaveField,
    g: &GaugeSpec,
    params: &PhysicalParams,
    t: f64,
    boundary: Boundary,
) -> Result<Vec<Complex64>> {
    wf.expect_tags(g, g.natural_frame())?;
    if t != wf.time() {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("Hamiltonian time {t} differs from field time {}", wf.time()),
        });
    }
    Ok(DiscreteHamiltonian::new(g, params, wf.grid(), t, boundary).apply(wf.amplitudes()))
}
