//! Gauge transformation and extended Galilean transformations (EGTs).
//!
//! An EGT moves to a frame displaced by `η(t)`: `ξ = x - η(t)`, `τ = t`.
//! A static-gauge wave function picks up the phase
//!
//! ```text
//! ψ''(ξ, τ) = exp[-i f(ξ, τ)/ħ] ψ(ξ + η, τ),    f(ξ, τ) = ∫₀^τ ½ m η̇² dt + m ξ η̇(τ)
//! ```
//!
//! and, for the canonical frame `η = qE0 t²/2m`, one more factor
//! `exp(-i q²E0² τ³ / 6mħ)` turns it into a free particle. Returning to the
//! lab with the opposite acceleration and the same cubic phase lands in the
//! dynamic gauge. [`double_egt`] performs that round trip; it coincides with
//! [`gauge_transform`] from static to dynamic.
//!
//! Every operation is available in two flavours: on [`WaveField`] samples
//! (with [`Resample`] choosing exact re-evaluation or cubic interpolation
//! for the coordinate shift) and as lazy [`AnalyticField`] adapters that
//! compose without any discretisation.

use num_complex::Complex64;

use crate::closed_form::AnalyticField;
use crate::error::{Error, Result};
use crate::model::{FrameLabel, FrameTrajectory, GaugeSpec, PhysicalParams, SpatialGrid, WaveField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMapReport {
    pub max_abs_deviation: f64,
    pub compared_points: usize,
}

/// Pointwise comparison of two fields on the same grid.
pub fn compare_fields(a: &WaveField, b: &WaveField) -> Result<PhaseMapReport> {
    if a.grid() != b.grid() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "fields are sampled on different grids".into(),
        });
    }
    Ok(PhaseMapReport {
        max_abs_deviation: crate::model::max_abs_difference(a.amplitudes(), b.amplitudes()),
        compared_points: a.grid().len(),
    })
}

/// Coefficients of the two cubic-in-time phases. Both are `1/6`; they are
/// parameters only so that tests can corrupt one and watch the theorem
/// check fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConventions {
    /// Coefficient `c` in `exp(-i c q²E0² τ³ / mħ)` on entering the free frame.
    pub free_frame_cubic: f64,
    /// Same coefficient on leaving the free frame for the dynamic gauge.
    pub dynamic_cubic: f64,
}

impl Default for PhaseConventions {
    fn default() -> Self {
        PhaseConventions { free_frame_cubic: 1.0 / 6.0, dynamic_cubic: 1.0 / 6.0 }
    }
}

/// `E = -∂φ/∂x - (1/c)∂A/∂t`, evaluated from the gauge's potentials.
pub fn electric_field_of_gauge(g: &GaugeSpec, params: &PhysicalParams, x: f64, t: f64) -> Result<f64> {
    let e0 = params.field();
    let (phi, a_over_c): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) = match g {
        GaugeSpec::Static => (Box::new(move |x| -e0 * x), Box::new(|_| 0.0)),
        GaugeSpec::Dynamic => (Box::new(|_| 0.0), Box::new(move |t| -e0 * t)),
        other => return Err(Error::UnsupportedGauge(other.to_string())),
    };
    // Both potentials are linear, so a wide symmetric difference is exact
    // up to rounding.
    let hx = 1.0 + x.abs();
    let ht = 1.0 + t.abs();
    let dphi = (phi(x + hx) - phi(x - hx)) / (2.0 * hx);
    let da = (a_over_c(t + ht) - a_over_c(t - ht)) / (2.0 * ht);
    Ok(-dphi - da)
}

/// `exp(-i qE0 t x / ħ)`: multiplies a static-gauge solution into the
/// dynamic gauge.
pub fn gauge_phase(x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
    Complex64::from_polar(1.0, -params.force() * t * x / params.hbar())
}

/// Forward EGT phase `f(ξ, τ) = ∫₀^τ ½ m η̇² dt + m ξ η̇(τ)`.
pub fn egt_action_phase(xi: f64, tau: f64, traj: &FrameTrajectory, params: &PhysicalParams) -> f64 {
    let m = params.mass();
    traj.action_integral(tau, m) + m * xi * traj.eta_dot(tau)
}

/// Backward EGT phase `f(x, t) = ∫₀^t ½ m η̇² dτ - m x η̇(t)`, used to carry
/// a free-frame solution to the static gauge.
pub fn egt_backward_phase(x: f64, t: f64, traj: &FrameTrajectory, params: &PhysicalParams) -> f64 {
    let m = params.mass();
    traj.action_integral(t, m) - m * x * traj.eta_dot(t)
}

/// `exp(-i c q²E0² τ³ / mħ)`.
fn cubic_phase(tau: f64, params: &PhysicalParams, coefficient: f64) -> Complex64 {
    let f = params.force();
    Complex64::from_polar(1.0, -coefficient * f * f * tau * tau * tau / (params.mass() * params.hbar()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeDirection {
    StaticToDynamic,
    DynamicToStatic,
}

impl GaugeDirection {
    fn source(self) -> GaugeSpec {
        match self {
            GaugeDirection::StaticToDynamic => GaugeSpec::Static,
            GaugeDirection::DynamicToStatic => GaugeSpec::Dynamic,
        }
    }

    fn target(self) -> GaugeSpec {
        match self {
            GaugeDirection::StaticToDynamic => GaugeSpec::Dynamic,
            GaugeDirection::DynamicToStatic => GaugeSpec::Static,
        }
    }

    fn phase(self, x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
        match self {
            GaugeDirection::StaticToDynamic => gauge_phase(x, t, params),
            GaugeDirection::DynamicToStatic => gauge_phase(x, t, params).conj(),
        }
    }
}

fn check_source(found_gauge: GaugeSpec, found_frame: FrameLabel, gauge: &GaugeSpec, frame: FrameLabel) -> Result<()> {
    if !found_gauge.matches(gauge) || found_frame != frame {
        return Err(Error::TagMismatch {
            expected: format!("{gauge}/{frame}"),
            found: format!("{found_gauge}/{found_frame}"),
        });
    }
    Ok(())
}

fn check_canonical(found: GaugeSpec, params: &PhysicalParams) -> Result<()> {
    check_source(found, FrameLabel::Accelerated, &GaugeSpec::Accelerated(FrameTrajectory::canonical(params)), FrameLabel::Accelerated)
}

// Analytic adapters

/// Lazy gauge transformation of an analytic field.
#[derive(Debug, Clone)]
pub struct GaugeTransformed<S> {
    source: S,
    params: PhysicalParams,
    direction: GaugeDirection,
}

impl<S: AnalyticField> GaugeTransformed<S> {
    pub fn new(source: S, params: PhysicalParams, direction: GaugeDirection) -> Result<Self> {
        check_source(source.gauge(), source.frame(), &direction.source(), FrameLabel::Inertial)?;
        Ok(GaugeTransformed { source, params, direction })
    }
}

impl<S: AnalyticField> AnalyticField for GaugeTransformed<S> {
    fn gauge(&self) -> GaugeSpec {
        self.direction.target()
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Inertial
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        Ok(self.direction.phase(x, t, &self.params) * self.source.value(x, t)?)
    }
}

/// `ψ''(ξ, τ) = exp[-i f(ξ,τ)/ħ] ψ(ξ + η(τ), τ)` for a static-gauge source.
#[derive(Debug, Clone)]
pub struct EgtForward<S> {
    source: S,
    traj: FrameTrajectory,
    params: PhysicalParams,
}

impl<S: AnalyticField> EgtForward<S> {
    pub fn new(source: S, traj: FrameTrajectory, params: PhysicalParams) -> Result<Self> {
        check_source(source.gauge(), source.frame(), &GaugeSpec::Static, FrameLabel::Inertial)?;
        Ok(EgtForward { source, traj, params })
    }
}

impl<S: AnalyticField> AnalyticField for EgtForward<S> {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::Accelerated(self.traj)
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Accelerated
    }

    fn value(&self, xi: f64, tau: f64) -> Result<Complex64> {
        let f = egt_action_phase(xi, tau, &self.traj, &self.params);
        let x = xi + self.traj.eta(tau);
        Ok(Complex64::from_polar(1.0, -f / self.params.hbar()) * self.source.value(x, tau)?)
    }
}

/// Inverse of [`EgtForward`]: an EGT with the opposite trajectory followed
/// by the constant phase `exp[i(2∫½mη̇² - mηη̇)/ħ]` that the two opposite
/// action phases leave behind.
#[derive(Debug, Clone)]
pub struct EgtInverse<S> {
    source: S,
    traj: FrameTrajectory,
    params: PhysicalParams,
}

impl<S: AnalyticField> EgtInverse<S> {
    pub fn new(source: S, traj: FrameTrajectory, params: PhysicalParams) -> Result<Self> {
        check_source(source.gauge(), source.frame(), &GaugeSpec::Accelerated(traj), FrameLabel::Accelerated)?;
        Ok(EgtInverse { source, traj, params })
    }
}

fn inverse_offset(traj: &FrameTrajectory, tau: f64, mass: f64) -> f64 {
    2.0 * traj.action_integral(tau, mass) - mass * traj.eta(tau) * traj.eta_dot(tau)
}

impl<S: AnalyticField> AnalyticField for EgtInverse<S> {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::Static
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Inertial
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        let back = self.traj.negated();
        let f = egt_action_phase(x, t, &back, &self.params) - inverse_offset(&self.traj, t, self.params.mass());
        let xi = x + back.eta(t);
        Ok(Complex64::from_polar(1.0, -f / self.params.hbar()) * self.source.value(xi, t)?)
    }
}

/// `ψ'(ξ, τ) = exp(-i q²E0² τ³ / 6mħ) ψ''(ξ, τ)` for a source in the
/// canonical accelerated frame.
#[derive(Debug, Clone)]
pub struct FreeFrameView<S> {
    source: S,
    params: PhysicalParams,
    cubic: f64,
}

impl<S: AnalyticField> FreeFrameView<S> {
    pub fn new(source: S, params: PhysicalParams) -> Result<Self> {
        Self::with_conventions(source, params, &PhaseConventions::default())
    }

    pub fn with_conventions(source: S, params: PhysicalParams, conv: &PhaseConventions) -> Result<Self> {
        check_canonical(source.gauge(), &params)?;
        Ok(FreeFrameView { source, params, cubic: conv.free_frame_cubic })
    }
}

impl<S: AnalyticField> AnalyticField for FreeFrameView<S> {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::FreeFrame
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Accelerated
    }

    fn value(&self, xi: f64, tau: f64) -> Result<Complex64> {
        Ok(cubic_phase(tau, &self.params, self.cubic) * self.source.value(xi, tau)?)
    }
}

/// `ψ̃(x, t) = exp(-i q²E0² t³ / 6mħ) ψ'(x - η(t), t)`: back to the lab,
/// arriving in the dynamic gauge.
#[derive(Debug, Clone)]
pub struct BackToDynamic<S> {
    source: S,
    params: PhysicalParams,
    cubic: f64,
}

impl<S: AnalyticField> BackToDynamic<S> {
    pub fn new(source: S, params: PhysicalParams) -> Result<Self> {
        Self::with_conventions(source, params, &PhaseConventions::default())
    }

    pub fn with_conventions(source: S, params: PhysicalParams, conv: &PhaseConventions) -> Result<Self> {
        check_source(source.gauge(), source.frame(), &GaugeSpec::FreeFrame, FrameLabel::Accelerated)?;
        Ok(BackToDynamic { source, params, cubic: conv.dynamic_cubic })
    }
}

impl<S: AnalyticField> AnalyticField for BackToDynamic<S> {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::Dynamic
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Inertial
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        let xi = x - FrameTrajectory::canonical(&self.params).eta(t);
        Ok(cubic_phase(t, &self.params, self.cubic) * self.source.value(xi, t)?)
    }
}

/// `ψ(x, t) = exp[-i f(x,t)/ħ] ψ'(x - η(t), t)` with the backward phase
/// `f(x, t) = q²E0²t³/6m - x qE0 t`: back to the lab in the static gauge.
#[derive(Debug, Clone)]
pub struct BackToStatic<S> {
    source: S,
    params: PhysicalParams,
}

impl<S: AnalyticField> BackToStatic<S> {
    pub fn new(source: S, params: PhysicalParams) -> Result<Self> {
        check_source(source.gauge(), source.frame(), &GaugeSpec::FreeFrame, FrameLabel::Accelerated)?;
        Ok(BackToStatic { source, params })
    }
}

impl<S: AnalyticField> AnalyticField for BackToStatic<S> {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::Static
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Inertial
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        let traj = FrameTrajectory::canonical(&self.params);
        let f = egt_backward_phase(x, t, &traj, &self.params);
        let xi = x - traj.eta(t);
        Ok(Complex64::from_polar(1.0, -f / self.params.hbar()) * self.source.value(xi, t)?)
    }
}

// Sampled fields

/// How a transform obtains `ψ` at shifted coordinates.
#[derive(Clone, Copy)]
pub enum Resample<'a> {
    /// Re-evaluate an analytic field that the input was sampled from. Exact.
    Exact(&'a dyn AnalyticField),
    /// Four-point Lagrange interpolation of the input samples; `O(dx⁴)`.
    Cubic,
}

/// Four-point Lagrange interpolation; `None` outside the grid.
pub fn interpolate_cubic(wf: &WaveField, x: f64) -> Option<Complex64> {
    let grid = wf.grid();
    let dx = grid.dx();
    let slack = 1e-9 * dx;
    if x < grid.x_min() - slack || x > grid.x_max() + slack {
        return None;
    }
    let n = grid.len();
    let s = ((x - grid.x_min()) / dx).clamp(0.0, (n - 1) as f64);
    let base = (s.floor() as usize).clamp(1, n - 3);
    let u = s - base as f64;
    let w = [
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    ];
    let a = wf.amplitudes();
    Some(w.iter().enumerate().map(|(k, wk)| a[base - 1 + k] * wk).sum())
}

/// Applies `value(ξ) = phase(ξ) · ψ(source_x(ξ))` onto `target`, where `ψ`
/// is supplied by `resample`.
fn shift_map<P, X>(
    wf: &WaveField,
    target: &SpatialGrid,
    resample: Resample<'_>,
    gauge: GaugeSpec,
    frame: FrameLabel,
    source_x: X,
    phase: P,
) -> Result<WaveField>
where
    P: Fn(f64) -> Complex64,
    X: Fn(f64) -> f64,
{
    let t = wf.time();
    if let Resample::Exact(src) = resample {
        check_source(src.gauge(), src.frame(), &wf.gauge(), wf.frame())?;
    }
    WaveField::from_fn(*target, t, gauge, frame, |xi| {
        let x = source_x(xi);
        let psi = match resample {
            Resample::Exact(src) => src.value(x, t)?,
            Resample::Cubic => interpolate_cubic(wf, x).ok_or(Error::OutOfGrid {
                x,
                lo: wf.grid().x_min(),
                hi: wf.grid().x_max(),
            })?,
        };
        Ok(phase(xi) * psi)
    })
}

/// Multiplies by the gauge phase (or its conjugate) and retags.
pub fn gauge_transform(wf: &WaveField, direction: GaugeDirection, params: &PhysicalParams) -> Result<WaveField> {
    wf.expect_tags(&direction.source(), FrameLabel::Inertial)?;
    let t = wf.time();
    let amplitudes = wf
        .grid()
        .points()
        .zip(wf.amplitudes())
        .map(|(x, z)| direction.phase(x, t, params) * z)
        .collect();
    WaveField::new(*wf.grid(), t, amplitudes, direction.target(), FrameLabel::Inertial)
}

/// Forward EGT of a static-gauge field onto the frame grid `target`.
pub fn egt_forward(
    wf: &WaveField,
    traj: &FrameTrajectory,
    params: &PhysicalParams,
    target: &SpatialGrid,
    resample: Resample<'_>,
) -> Result<WaveField> {
    wf.expect_tags(&GaugeSpec::Static, FrameLabel::Inertial)?;
    let tau = wf.time();
    let (eta, hbar) = (traj.eta(tau), params.hbar());
    shift_map(
        wf,
        target,
        resample,
        GaugeSpec::Accelerated(*traj),
        FrameLabel::Accelerated,
        |xi| xi + eta,
        |xi| Complex64::from_polar(1.0, -egt_action_phase(xi, tau, traj, params) / hbar),
    )
}

/// Undoes [`egt_forward`] with the same trajectory, onto the lab grid `target`.
pub fn egt_inverse(
    wf: &WaveField,
    traj: &FrameTrajectory,
    params: &PhysicalParams,
    target: &SpatialGrid,
    resample: Resample<'_>,
) -> Result<WaveField> {
    wf.expect_tags(&GaugeSpec::Accelerated(*traj), FrameLabel::Accelerated)?;
    let t = wf.time();
    let back = traj.negated();
    let offset = inverse_offset(traj, t, params.mass());
    let (eta, hbar) = (back.eta(t), params.hbar());
    shift_map(
        wf,
        target,
        resample,
        GaugeSpec::Static,
        FrameLabel::Inertial,
        |x| x + eta,
        |x| Complex64::from_polar(1.0, -(egt_action_phase(x, t, &back, params) - offset) / hbar),
    )
}

/// Multiplies a canonical accelerated-frame field by the cubic phase that
/// makes it free.
pub fn to_free_frame(wf: &WaveField, params: &PhysicalParams) -> Result<WaveField> {
    to_free_frame_with(wf, params, &PhaseConventions::default())
}

pub fn to_free_frame_with(wf: &WaveField, params: &PhysicalParams, conv: &PhaseConventions) -> Result<WaveField> {
    check_canonical(wf.gauge(), params)?;
    let phase = cubic_phase(wf.time(), params, conv.free_frame_cubic);
    Ok(wf.scaled(phase)?.retagged(GaugeSpec::FreeFrame, FrameLabel::Accelerated))
}

/// Second EGT, from the free frame back to the lab in the dynamic gauge,
/// onto the lab grid `target`.
pub fn egt_backward_to_dynamic(
    wf: &WaveField,
    params: &PhysicalParams,
    target: &SpatialGrid,
    resample: Resample<'_>,
) -> Result<WaveField> {
    egt_backward_to_dynamic_with(wf, params, target, resample, &PhaseConventions::default())
}

pub fn egt_backward_to_dynamic_with(
    wf: &WaveField,
    params: &PhysicalParams,
    target: &SpatialGrid,
    resample: Resample<'_>,
    conv: &PhaseConventions,
) -> Result<WaveField> {
    wf.expect_tags(&GaugeSpec::FreeFrame, FrameLabel::Accelerated)?;
    let t = wf.time();
    let eta = FrameTrajectory::canonical(params).eta(t);
    let phase = cubic_phase(t, params, conv.dynamic_cubic);
    shift_map(wf, target, resample, GaugeSpec::Dynamic, FrameLabel::Inertial, |x| x - eta, |_| phase)
}

/// Free frame back to the lab in the static gauge, using the backward
/// action phase.
pub fn egt_backward_to_static(
    wf: &WaveField,
    params: &PhysicalParams,
    target: &SpatialGrid,
    resample: Resample<'_>,
) -> Result<WaveField> {
    wf.expect_tags(&GaugeSpec::FreeFrame, FrameLabel::Accelerated)?;
    let t = wf.time();
    let traj = FrameTrajectory::canonical(params);
    let (eta, hbar) = (traj.eta(t), params.hbar());
    shift_map(
        wf,
        target,
        resample,
        GaugeSpec::Static,
        FrameLabel::Inertial,
        |x| x - eta,
        |x| Complex64::from_polar(1.0, -egt_backward_phase(x, t, &traj, params) / hbar),
    )
}

/// Static gauge → canonical accelerated frame → free frame → lab (dynamic
/// gauge), returned on the input grid.
pub fn double_egt(wf: &WaveField, params: &PhysicalParams, resample: Resample<'_>) -> Result<WaveField> {
    double_egt_with(wf, params, resample, &PhaseConventions::default())
}

pub fn double_egt_with(
    wf: &WaveField,
    params: &PhysicalParams,
    resample: Resample<'_>,
    conv: &PhaseConventions,
) -> Result<WaveField> {
    wf.expect_tags(&GaugeSpec::Static, FrameLabel::Inertial)?;
    let traj = FrameTrajectory::canonical(params);
    let grid = *wf.grid();
    match resample {
        Resample::Exact(src) => {
            let forward = EgtForward::new(src, traj, *params)?;
            let free = FreeFrameView::with_conventions(forward, *params, conv)?;
            let back = BackToDynamic::with_conventions(free, *params, conv)?;
            // the source must describe `wf`
            check_source(src.gauge(), src.frame(), &wf.gauge(), wf.frame())?;
            back.sample(&grid, wf.time())
        }
        Resample::Cubic => {
            // The frame grid is the lab grid moved by -η, so both shifts land
            // on existing nodes.
            let eta = traj.eta(wf.time());
            let frame_grid = SpatialGrid::new(grid.x_min() - eta, grid.x_max() - eta, grid.len())?;
            let accelerated = egt_forward(wf, &traj, params, &frame_grid, Resample::Cubic)?;
            let free = to_free_frame_with(&accelerated, params, conv)?;
            egt_backward_to_dynamic_with(&free, params, &grid, Resample::Cubic, conv)
        }
    }
}
