//! Expectation values of a sampled state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{GaugeSpec, PhysicalParams, WaveField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// `sqrt(∫|ψ|²)`.
    pub norm: f64,
    pub mean_x: f64,
    /// `⟨-iħ∂⟩` with the central-difference gradient.
    pub canonical_p: f64,
    /// `canonical_p - a(t)`, the gauge-invariant momentum.
    pub kinetic_p: f64,
    pub var_x: f64,
}

pub fn observables(wf: &WaveField, g: &GaugeSpec, params: &PhysicalParams) -> Result<Observables> {
    let grid = wf.grid();
    let psi = wf.amplitudes();
    let density: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    let mass = grid.trapezoid(density.iter().copied());
    if !(mass > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let mean_x = grid.trapezoid(grid.points().zip(&density).map(|(x, d)| x * d)) / mass;
    let var_x = grid.trapezoid(grid.points().zip(&density).map(|(x, d)| (x - mean_x).powi(2) * d)) / mass;
    let n = psi.len();
    let zero = Complex64::new(0.0, 0.0);
    let two_dx = 2.0 * grid.dx();
    let current = (0..n).map(|j| {
        let right = if j + 1 < n { psi[j + 1] } else { zero };
        let left = if j > 0 { psi[j - 1] } else { zero };
        // Re[ψ* (-iħ) ∂ψ] = ħ Im[ψ* ∂ψ]
        (psi[j].conj() * (right - left) / two_dx).im
    });
    let canonical_p = params.hbar() * grid.trapezoid(current) / mass;
    let kinetic_p = canonical_p - g.coupling(params, wf.time());
    let out = Observables { norm: mass.sqrt(), mean_x, canonical_p, kinetic_p, var_x };
    for (v, what) in [(mean_x, "mean_x"), (var_x, "var_x"), (canonical_p, "canonical_p")] {
        crate::error::ensure_finite(v, what)?;
    }
    Ok(out)
}

/// Observables recorded along a propagation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservableTrace {
    pub times: Vec<f64>,
    pub norm: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub canonical_p: Vec<f64>,
    pub kinetic_p: Vec<f64>,
    pub var_x: Vec<f64>,
}

impl ObservableTrace {
    pub fn push(&mut self, t: f64, o: &Observables) {
        self.times.push(t);
        self.norm.push(o.norm);
        self.mean_x.push(o.mean_x);
        self.canonical_p.push(o.canonical_p);
        self.kinetic_p.push(o.kinetic_p);
        self.var_x.push(o.var_x);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Row `i` as `(t, norm, mean_x, canonical_p, kinetic_p, var_x)`.
    pub fn row(&self, i: usize) -> [f64; 6] {
        [self.times[i], self.norm[i], self.mean_x[i], self.canonical_p[i], self.kinetic_p[i], self.var_x[i]]
    }

    pub fn last(&self) -> Option<[f64; 6]> {
        (!self.is_empty()).then(|| self.row(self.len() - 1))
    }
}
