//! Domain types shared by every other module.
//!
//! Everything here is an immutable value object: parameters, grids, gauge
//! tags, frame trajectories and sampled wave fields. Physics lives elsewhere.

use std::fmt;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Mass, charge, field strength and reduced Planck constant, in a
/// dimensionless unit system.
///
/// The speed of light is deliberately absent: the dynamic gauge stores the
/// combination `qA/c` directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
    charge: f64,
    field: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, charge: f64, field: f64, hbar: f64) -> Result<Self> {
        ensure_finite(mass, "mass")?;
        ensure_finite(charge, "charge")?;
        ensure_finite(field, "field")?;
        ensure_finite(hbar, "hbar")?;
        if mass <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "mass",
                reason: format!("must be > 0, got {mass}"),
            });
        }
        if hbar <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be > 0, got {hbar}"),
            });
        }
        let params = PhysicalParams { mass, charge, field, hbar };
        ensure_finite(params.force(), "force qE0")?;
        ensure_finite(params.accel(), "acceleration qE0/m")?;
        Ok(params)
    }

    /// `m = q = ħ = 1` with the given field strength.
    pub fn unit_with_field(field: f64) -> Result<Self> {
        Self::new(1.0, 1.0, field, 1.0)
    }

    pub fn with_field(&self, field: f64) -> Result<Self> {
        Self::new(self.mass, self.charge, field, self.hbar)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `F = qE0`.
    pub fn force(&self) -> f64 {
        self.charge * self.field
    }

    /// `qE0 / m`, the acceleration of a classical particle in the field.
    pub fn accel(&self) -> f64 {
        self.force() / self.mass
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams { mass: 1.0, charge: 1.0, field: 1.0, hbar: 1.0 }
    }
}

/// Uniform one-dimensional grid including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl SpatialGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        ensure_finite(x_min, "x_min")?;
        ensure_finite(x_max, "x_max")?;
        if n < Self::MIN_POINTS {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("grid needs at least {} points, got {n}", Self::MIN_POINTS),
            });
        }
        if x_max <= x_min {
            return Err(Error::InvalidParameter {
                name: "x_max",
                reason: format!("x_max ({x_max}) must exceed x_min ({x_min})"),
            });
        }
        let grid = SpatialGrid { x_min, x_max, n };
        if !(grid.dx() > 0.0) {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "spacing underflows to zero".into(),
            });
        }
        Ok(grid)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    /// `x_min + i·dx`; the last point is `x_max` exactly.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Same interval with the spacing halved (`2n - 1` points); every point
    /// of `self` is also a point of the refined grid.
    pub fn refined(&self) -> SpatialGrid {
        SpatialGrid { n: 2 * self.n - 1, ..*self }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Trapezoid quadrature of sampled values.
    pub fn trapezoid<I>(&self, values: I) -> f64
    where
        I: IntoIterator<Item = f64>,
    {
        let mut sum = 0.0;
        let last = self.n - 1;
        for (i, v) in values.into_iter().enumerate() {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            sum += w * v;
        }
        sum * self.dx()
    }
}

/// Rectilinear frame displacement `η(t) = ½at² + v0·t + x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTrajectory {
    pub accel: f64,
    pub v0: f64,
    pub x0: f64,
}

impl FrameTrajectory {
    pub fn new(accel: f64, v0: f64, x0: f64) -> Result<Self> {
        ensure_finite(accel, "trajectory acceleration")?;
        ensure_finite(v0, "trajectory velocity")?;
        ensure_finite(x0, "trajectory offset")?;
        Ok(FrameTrajectory { accel, v0, x0 })
    }

    pub fn zero() -> Self {
        FrameTrajectory { accel: 0.0, v0: 0.0, x0: 0.0 }
    }

    /// The frame that co-moves with a classical charge released from rest:
    /// `η(t) = qE0 t² / 2m`.
    pub fn canonical(params: &PhysicalParams) -> Self {
        FrameTrajectory { accel: params.accel(), v0: 0.0, x0: 0.0 }
    }

    pub fn negated(&self) -> Self {
        FrameTrajectory { accel: -self.accel, v0: -self.v0, x0: -self.x0 }
    }

    pub fn eta(&self, t: f64) -> f64 {
        0.5 * self.accel * t * t + self.v0 * t + self.x0
    }

    pub fn eta_dot(&self, t: f64) -> f64 {
        self.accel * t + self.v0
    }

    pub fn eta_ddot(&self, _t: f64) -> f64 {
        self.accel
    }

    /// `∫₀ᵗ ½ m η̇(s)² ds`, exact.
    pub fn action_integral(&self, t: f64, mass: f64) -> f64 {
        let (a, v) = (self.accel, self.v0);
        0.5 * mass * (a * a * t * t * t / 3.0 + a * v * t * t + v * v * t)
    }

    pub(crate) fn approx_eq(&self, other: &FrameTrajectory) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        close(self.accel, other.accel) && close(self.v0, other.v0) && close(self.x0, other.x0)
    }
}

/// Which equation a Hamiltonian or wave field belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeSpec {
    /// `φ = -E0 x`, `A = 0`.
    Static,
    /// `φ = 0`, `qA/c = -qE0 t`.
    Dynamic,
    /// No potential at all: the free particle in the co-moving frame.
    FreeFrame,
    /// Static-gauge physics seen from a frame displaced by `η(t)`.
    Accelerated(FrameTrajectory),
}

impl GaugeSpec {
    /// Scalar potential energy `qφ` (or its frame analogue) at `(x, t)`.
    pub fn potential_energy(&self, params: &PhysicalParams, x: f64, t: f64) -> f64 {
        let force = params.force();
        match self {
            GaugeSpec::Static => -force * x,
            GaugeSpec::Dynamic | GaugeSpec::FreeFrame => 0.0,
            GaugeSpec::Accelerated(traj) => {
                -(force * (x + traj.eta(t)) - params.mass() * x * traj.eta_ddot(t))
            }
        }
    }

    /// Effective vector potential `a(t) = qA/c`.
    pub fn coupling(&self, params: &PhysicalParams, t: f64) -> f64 {
        match self {
            GaugeSpec::Dynamic => -params.force() * t,
            _ => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GaugeSpec::Static => "static",
            GaugeSpec::Dynamic => "dynamic",
            GaugeSpec::FreeFrame => "free-frame",
            GaugeSpec::Accelerated(_) => "accelerated-frame",
        }
    }

    /// The frame a field obeying this equation lives in.
    pub fn natural_frame(&self) -> FrameLabel {
        match self {
            GaugeSpec::Static | GaugeSpec::Dynamic => FrameLabel::Inertial,
            GaugeSpec::FreeFrame | GaugeSpec::Accelerated(_) => FrameLabel::Accelerated,
        }
    }

    pub(crate) fn matches(&self, other: &GaugeSpec) -> bool {
        match (self, other) {
            (GaugeSpec::Accelerated(a), GaugeSpec::Accelerated(b)) => a.approx_eq(b),
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }
}

impl fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeSpec::Accelerated(t) => {
                write!(f, "accelerated-frame(a={}, v0={}, x0={})", t.accel, t.v0, t.x0)
            }
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameLabel {
    Inertial,
    Accelerated,
}

impl fmt::Display for FrameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameLabel::Inertial => f.write_str("inertial"),
            FrameLabel::Accelerated => f.write_str("accelerated"),
        }
    }
}

/// Complex amplitudes on a uniform grid at one instant, tagged with the
/// equation they claim to satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: SpatialGrid,
    time: f64,
    amplitudes: Vec<Complex64>,
    gauge: GaugeSpec,
    frame: FrameLabel,
}

impl WaveField {
    pub fn new(
        grid: SpatialGrid,
        time: f64,
        amplitudes: Vec<Complex64>,
        gauge: GaugeSpec,
        frame: FrameLabel,
    ) -> Result<Self> {
        ensure_finite(time, "wave field time")?;
        if amplitudes.len() != grid.len() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("length {} does not match grid size {}", amplitudes.len(), grid.len()),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("wave field amplitudes"));
        }
        Ok(WaveField { grid, time, amplitudes, gauge, frame })
    }

    pub fn from_fn<F>(
        grid: SpatialGrid,
        time: f64,
        gauge: GaugeSpec,
        frame: FrameLabel,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let amplitudes = grid.points().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, time, amplitudes, gauge, frame)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn gauge(&self) -> GaugeSpec {
        self.gauge
    }

    pub fn frame(&self) -> FrameLabel {
        self.frame
    }

    /// Same samples with different tags.
    pub fn retagged(mut self, gauge: GaugeSpec, frame: FrameLabel) -> Self {
        self.gauge = gauge;
        self.frame = frame;
        self
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        let amplitudes = self.amplitudes.iter().map(|z| z * c).collect();
        Self::new(self.grid, self.time, amplitudes, self.gauge, self.frame)
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `sqrt(∫|ψ|² dx)` by the trapezoid rule.
    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub(crate) fn expect_tags(&self, gauge: &GaugeSpec, frame: FrameLabel) -> Result<()> {
        if !self.gauge.matches(gauge) || self.frame != frame {
            return Err(Error::TagMismatch {
                expected: format!("{gauge}/{frame}"),
                found: format!("{}/{}", self.gauge, self.frame),
            });
        }
        Ok(())
    }
}

/// L² norm of a wave field by trapezoid quadrature.
pub fn norm(wf: &WaveField) -> f64 {
    wf.grid.trapezoid(wf.amplitudes.iter().map(|z| z.norm_sqr())).sqrt()
}

/// Maximum pointwise distance between two equally sized amplitude arrays.
pub fn max_abs_difference(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "amplitude arrays differ in length");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Norms of `iħ∂tψ - Hψ` for one (solution, Hamiltonian) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// L² residual divided by the L² reference scale.
    pub l2_residual: f64,
    /// L∞ residual divided by the L∞ reference scale.
    pub linf_residual: f64,
    /// L∞ size of the largest individual term of the equation.
    pub reference_norm: f64,
    /// `log2` of the L∞ ratio between this grid and the refined grid.
    pub convergence_order: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn params_reject_nonpositive_mass_and_hbar() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(PhysicalParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        let p = PhysicalParams::new(2.0, -1.5, 3.0, 1.0).unwrap();
        assert_eq!(p.force(), -4.5);
        assert_eq!(p.accel(), -2.25);
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = SpatialGrid::new(-0.3, 1.7, 1023).unwrap();
        assert_eq!(g.point(0), -0.3);
        assert_eq!(g.point(1022), 1.7);
        let r = g.refined();
        assert_eq!(r.len(), 2045);
        assert_eq!(r.point(2044), 1.7);
        assert!((r.point(2 * 511) - g.point(511)).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(SpatialGrid::new(0.0, 1.0, 7).is_err());
        assert!(SpatialGrid::new(1.0, 1.0, 64).is_err());
        assert!(SpatialGrid::new(f64::NEG_INFINITY, 1.0, 64).is_err());
    }

    #[test]
    fn norm_of_zero_field_is_zero() {
        let g = SpatialGrid::new(-3.0, 3.0, 64).unwrap();
        let wf = WaveField::new(g, 0.0, vec![Complex64::new(0.0, 0.0); 64], GaugeSpec::Static, FrameLabel::Inertial)
            .unwrap();
        assert_eq!(norm(&wf), 0.0);
    }

    #[test]
    fn norm_of_unit_constant_on_unit_interval() {
        let g = SpatialGrid::new(0.0, 1.0, 101).unwrap();
        let wf = WaveField::new(g, 0.0, vec![Complex64::new(1.0, 0.0); 101], GaugeSpec::Static, FrameLabel::Inertial)
            .unwrap();
        assert!((norm(&wf) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_of_normalized_gaussian() {
        // The integrand is entire and decays like exp(-144) at the ends, so
        // trapezoid quadrature is spectrally accurate; the exact value is 1.
        let g = SpatialGrid::new(-12.0, 12.0, 2048).unwrap();
        let c = std::f64::consts::PI.powf(-0.25);
        let wf = WaveField::from_fn(g, 0.0, GaugeSpec::FreeFrame, FrameLabel::Accelerated, |x| {
            Ok(Complex64::new(c * (-x * x / 2.0).exp(), 0.0))
        })
        .unwrap();
        assert!((norm(&wf) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wave_field_rejects_nan_and_wrong_length() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let mut amps = vec![Complex64::new(1.0, 0.0); 8];
        amps[3].im = f64::NAN;
        assert_eq!(
            WaveField::new(g, 0.0, amps, GaugeSpec::Static, FrameLabel::Inertial),
            Err(Error::NonFinite("wave field amplitudes"))
        );
        assert!(WaveField::new(g, 0.0, vec![Complex64::default(); 7], GaugeSpec::Static, FrameLabel::Inertial).is_err());
    }

    #[test]
    fn action_integral_matches_quadrature() {
        let traj = FrameTrajectory::new(0.7, -0.3, 2.0).unwrap();
        let mass = 1.3;
        let t = 2.4;
        // Simpson with 2000 panels on a cubic integrand is exact up to rounding.
        let n = 2000;
        let h = t / n as f64;
        let f = |s: f64| 0.5 * mass * traj.eta_dot(s).powi(2);
        let mut s = f(0.0) + f(t);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let quad = s * h / 3.0;
        assert!((traj.action_integral(t, mass) - quad).abs() < 1e-12);
    }

    #[test]
    fn eta_dot_has_second_order_difference_consistency() {
        let traj = FrameTrajectory::new(1.3, 0.4, -2.0).unwrap();
        // η is quadratic, so the central difference is exact; a cubic
        // perturbation exposes the O(h²) term and lets us fit its slope.
        let eta = |t: f64| traj.eta(t) + 0.25 * t * t * t;
        let eta_dot = |t: f64| traj.eta_dot(t) + 0.75 * t * t;
        let err = |h: f64| ((eta(1.1 + h) - eta(1.1 - h)) / (2.0 * h) - eta_dot(1.1)).abs();
        let slope = (err(1e-2) / err(5e-3)).log2();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
        for t in [0.0, 0.5, 3.0] {
            let d = (traj.eta(t + 1e-3) - traj.eta(t - 1e-3)) / 2e-3;
            assert!((d - traj.eta_dot(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn canonical_trajectory() {
        let p = PhysicalParams::new(2.0, 1.0, 3.0, 1.0).unwrap();
        let traj = FrameTrajectory::canonical(&p);
        assert_eq!(traj.accel, 1.5);
        assert_eq!(traj.eta(2.0), 3.0);
        assert_eq!(traj.eta_ddot(7.0), 1.5);
    }

    #[test]
    fn gauge_potentials() {
        let p = PhysicalParams::unit_with_field(2.0).unwrap();
        assert_eq!(GaugeSpec::Static.potential_energy(&p, 2.0, 5.0), -4.0);
        assert_eq!(GaugeSpec::Dynamic.coupling(&p, 1.5), -3.0);
        assert_eq!(GaugeSpec::Static.coupling(&p, 1.5), 0.0);
        let acc = GaugeSpec::Accelerated(FrameTrajectory::canonical(&p));
        // with the canonical frame the ξ dependence cancels: -qE0 η(t)
        assert!((acc.potential_energy(&p, 3.0, 1.0) - (-2.0)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn norm_is_absolutely_homogeneous(
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
            k in 0.1f64..4.0,
        ) {
            let g = SpatialGrid::new(-5.0, 5.0, 257).unwrap();
            let wf = WaveField::from_fn(g, 0.0, GaugeSpec::Static, FrameLabel::Inertial, |x| {
                Ok(Complex64::from_polar((-x * x).exp(), k * x))
            }).unwrap();
            let c = Complex64::new(re, im);
            let scaled = wf.scaled(c).unwrap();
            let expected = c.norm() * norm(&wf);
            prop_assert!((norm(&scaled) - expected).abs() <= 1e-13 * expected.max(1e-300));
        }
    }
}
