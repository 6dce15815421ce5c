//! Exact wave functions for a charge in a uniform field, in both gauges and
//! in the co-moving free frame.
//!
//! With `F = qE0` and `ζ = (2m/(q²ħ²E0²))^(1/3) (ε + F x)`:
//!
//! | id             | gauge      | value                                                                 |
//! |----------------|------------|-----------------------------------------------------------------------|
//! | `Psi1Static`   | static     | `exp(-iεt/ħ) Ai(-ζ)`                                                  |
//! | `Psi2Static`   | static     | `exp[-it(p² + F²t²/3 - 2Fxm)/2mħ] exp[±ip(x - Ft²/2m)/ħ]`             |
//! | `Psi1Dynamic`  | dynamic    | `exp[-it(ε + Fx)/ħ] Ai(-ζ)`                                           |
//! | `Psi2Dynamic`  | dynamic    | `exp[-it(p² + F²t²/3)/2mħ] exp[±ip(x - Ft²/2m)/ħ]`                    |
//! | `FreePlaneWave`| free frame | `exp[i(±pξ - E_p τ)/ħ]`, `E_p = p²/2m`                                |
//! | `BerryBalazs`  | free frame | `exp[iFτ(ξ' - Fτ²/3m)/ħ] Ai((2mF/ħ²)^(1/3) (ξ' - Fτ²/2m))`            |
//!
//! Airy-based solutions require `F > 0`; the cube roots are not continued
//! to negative forces.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::model::{FrameLabel, GaugeSpec, PhysicalParams, SpatialGrid, WaveField};
use crate::special::{airy_ai_with, AiryConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    Psi1Static,
    Psi2Static,
    Psi1Dynamic,
    Psi2Dynamic,
    FreePlaneWave,
    BerryBalazs,
}

impl SolutionKind {
    pub const ALL: [SolutionKind; 6] = [
        SolutionKind::Psi1Static,
        SolutionKind::Psi2Static,
        SolutionKind::Psi1Dynamic,
        SolutionKind::Psi2Dynamic,
        SolutionKind::FreePlaneWave,
        SolutionKind::BerryBalazs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SolutionKind::Psi1Static => "Psi1Static",
            SolutionKind::Psi2Static => "Psi2Static",
            SolutionKind::Psi1Dynamic => "Psi1Dynamic",
            SolutionKind::Psi2Dynamic => "Psi2Dynamic",
            SolutionKind::FreePlaneWave => "FreePlaneWave",
            SolutionKind::BerryBalazs => "BerryBalazs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn uses_airy(&self) -> bool {
        matches!(self, SolutionKind::Psi1Static | SolutionKind::Psi1Dynamic | SolutionKind::BerryBalazs)
    }

    pub fn gauge(&self) -> GaugeSpec {
        match self {
            SolutionKind::Psi1Static | SolutionKind::Psi2Static => GaugeSpec::Static,
            SolutionKind::Psi1Dynamic | SolutionKind::Psi2Dynamic => GaugeSpec::Dynamic,
            SolutionKind::FreePlaneWave | SolutionKind::BerryBalazs => GaugeSpec::FreeFrame,
        }
    }

    pub fn frame(&self) -> FrameLabel {
        match self.gauge() {
            GaugeSpec::FreeFrame => FrameLabel::Accelerated,
            _ => FrameLabel::Inertial,
        }
    }
}

/// The `±` in front of the momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A closed-form solution together with its constants.
///
/// `epsilon` is read by the Airy-type solutions, `p` and `sign` by the
/// plane-wave-type ones; unused values must still be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionId {
    pub kind: SolutionKind,
    pub epsilon: f64,
    pub p: f64,
    pub sign: Sign,
}

impl SolutionId {
    pub fn new(kind: SolutionKind) -> Self {
        SolutionId { kind, epsilon: 0.0, p: 0.0, sign: Sign::Plus }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_momentum(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    fn validate(&self) -> Result<()> {
        ensure_finite(self.epsilon, "epsilon")?;
        ensure_finite(self.p, "momentum p")?;
        Ok(())
    }
}

/// `ζ = (2m/(q²ħ²E0²))^(1/3) (ε + qE0 x)`.
pub fn zeta(x: f64, params: &PhysicalParams, epsilon: f64) -> Result<f64> {
    let force = params.force();
    if force == 0.0 {
        return Err(Error::DegenerateField { force });
    }
    let scale = (2.0 * params.mass() / (force * force * params.hbar() * params.hbar())).cbrt();
    Ok(scale * (epsilon + force * x))
}

/// `(2mF/ħ²)^(1/3)`, the inverse length of the accelerating Airy packet.
pub fn airy_wavenumber(params: &PhysicalParams) -> Result<f64> {
    let force = params.force();
    if !(force > 0.0) {
        return Err(Error::DegenerateField { force });
    }
    Ok((2.0 * params.mass() * force / (params.hbar() * params.hbar())).cbrt())
}

/// Maps a free-frame coordinate `ξ` to the packet coordinate
/// `ξ' = -ξ - ε/(qE0)` (origin moved to `-ε/qE0`, then reflected).
pub fn berry_coordinate(xi: f64, epsilon: f64, params: &PhysicalParams) -> Result<f64> {
    let force = params.force();
    if force == 0.0 {
        return Err(Error::DegenerateField { force });
    }
    Ok(-xi - epsilon / force)
}

/// Evaluates a closed-form solution at `(x, t)`.
///
/// For the free-frame solutions `x` and `t` are the frame coordinates `ξ`
/// and `τ` (`ξ'` for `BerryBalazs`).
pub fn eval(sol: &SolutionId, x: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    eval_with(sol, x, t, params, &AiryConstants::default())
}

pub fn eval_with(
    sol: &SolutionId,
    x: f64,
    t: f64,
    params: &PhysicalParams,
    airy: &AiryConstants,
) -> Result<Complex64> {
    sol.validate()?;
    ensure_finite(x, "position")?;
    ensure_finite(t, "time")?;
    let (m, hbar, force) = (params.mass(), params.hbar(), params.force());
    if sol.kind.uses_airy() && !(force > 0.0) {
        return Err(Error::DegenerateField { force });
    }
    let ai = |arg: f64| -> Result<f64> { Ok(airy_ai_with(arg, airy)?.ai) };
    let (eps, p) = (sol.epsilon, sol.sign.value() * sol.p);
    let value = match sol.kind {
        SolutionKind::Psi1Static => {
            Complex64::from_polar(1.0, -eps * t / hbar) * ai(-zeta(x, params, eps)?)?
        }
        SolutionKind::Psi1Dynamic => {
            Complex64::from_polar(1.0, -t * (eps + force * x) / hbar) * ai(-zeta(x, params, eps)?)?
        }
        SolutionKind::Psi2Static => {
            let envelope = -t * (sol.p * sol.p + force * force * t * t / 3.0 - 2.0 * force * x * m)
                / (2.0 * m * hbar);
            let wave = p * (x - force * t * t / (2.0 * m)) / hbar;
            Complex64::from_polar(1.0, envelope + wave)
        }
        SolutionKind::Psi2Dynamic => {
            let envelope = -t * (sol.p * sol.p + force * force * t * t / 3.0) / (2.0 * m * hbar);
            let wave = p * (x - force * t * t / (2.0 * m)) / hbar;
            Complex64::from_polar(1.0, envelope + wave)
        }
        SolutionKind::FreePlaneWave => {
            let energy = sol.p * sol.p / (2.0 * m);
            Complex64::from_polar(1.0, (p * x - energy * t) / hbar)
        }
        SolutionKind::BerryBalazs => {
            let k = airy_wavenumber(params)?;
            let phase = force * t * (x - force * t * t / (3.0 * m)) / hbar;
            Complex64::from_polar(1.0, phase) * ai(k * (x - force * t * t / (2.0 * m)))?
        }
    };
    Ok(value)
}

/// Samples a solution on a grid, tagging the result with the solution's
/// gauge and frame.
pub fn sample(sol: &SolutionId, grid: &SpatialGrid, t: f64, params: &PhysicalParams) -> Result<WaveField> {
    ClosedForm::new(*sol, *params).sample(grid, t)
}

/// A wave function known in closed form, carrying the gauge and frame of the
/// equation it solves.
///
/// Transforms accept these to re-evaluate shifted points exactly instead of
/// interpolating samples.
pub trait AnalyticField: Send + Sync {
    fn gauge(&self) -> GaugeSpec;

    fn frame(&self) -> FrameLabel;

    fn value(&self, x: f64, t: f64) -> Result<Complex64>;

    fn sample(&self, grid: &SpatialGrid, t: f64) -> Result<WaveField> {
        WaveField::from_fn(*grid, t, self.gauge(), self.frame(), |x| self.value(x, t))
    }
}

impl<T: AnalyticField + ?Sized> AnalyticField for &T {
    fn gauge(&self) -> GaugeSpec {
        (**self).gauge()
    }

    fn frame(&self) -> FrameLabel {
        (**self).frame()
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        (**self).value(x, t)
    }
}

impl<T: AnalyticField + ?Sized> AnalyticField for Box<T> {
    fn gauge(&self) -> GaugeSpec {
        (**self).gauge()
    }

    fn frame(&self) -> FrameLabel {
        (**self).frame()
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        (**self).value(x, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub solution: SolutionId,
    pub params: PhysicalParams,
    pub airy: AiryConstants,
}

impl ClosedForm {
    pub fn new(solution: SolutionId, params: PhysicalParams) -> Self {
        ClosedForm { solution, params, airy: AiryConstants::default() }
    }
}

impl AnalyticField for ClosedForm {
    fn gauge(&self) -> GaugeSpec {
        self.solution.kind.gauge()
    }

    fn frame(&self) -> FrameLabel {
        self.solution.kind.frame()
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        eval_with(&self.solution, x, t, &self.params, &self.airy)
    }
}

/// `Σ c_j exp(-iε_j t/ħ) Ai(-ζ_j)`: a static-gauge superposition of
/// stationary states with distinct energies.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySuperposition {
    params: PhysicalParams,
    terms: Vec<(Complex64, f64)>,
}

impl StationarySuperposition {
    /// `terms` holds `(coefficient, ε)` pairs; energies must be distinct.
    pub fn new(params: PhysicalParams, terms: Vec<(Complex64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter { name: "terms", reason: "empty superposition".into() });
        }
        for (i, (c, eps)) in terms.iter().enumerate() {
            ensure_finite(c.re, "superposition coefficient")?;
            ensure_finite(c.im, "superposition coefficient")?;
            ensure_finite(*eps, "superposition energy")?;
            if terms[..i].iter().any(|(_, e)| e == eps) {
                return Err(Error::InvalidParameter {
                    name: "terms",
                    reason: format!("energy {eps} appears twice"),
                });
            }
        }
        if !(params.force() > 0.0) {
            return Err(Error::DegenerateField { force: params.force() });
        }
        Ok(StationarySuperposition { params, terms })
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }
}

impl AnalyticField for StationarySuperposition {
    fn gauge(&self) -> GaugeSpec {
        GaugeSpec::Static
    }

    fn frame(&self) -> FrameLabel {
        FrameLabel::Inertial
    }

    fn value(&self, x: f64, t: f64) -> Result<Complex64> {
        self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (c, eps)| {
            let sol = SolutionId::new(SolutionKind::Psi1Static).with_epsilon(*eps);
            Ok(acc + c * eval(&sol, x, t, &self.params)?)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::airy_ai;

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(0.0, &unit(), 0.0).unwrap(), 0.0);
        // log-domain evaluation as a second arithmetic path
        let via_logs = |m: f64, q: f64, h: f64, e0: f64, eps: f64, x: f64| {
            (((2.0 * m).ln() - 2.0 * (q * h * e0).ln()) / 3.0).exp() * (eps + q * e0 * x)
        };
        let z = zeta(1.0, &unit(), 0.0).unwrap();
        assert!((z - 1.259_921_049_894_873_2).abs() < 1e-15);
        assert!((z - via_logs(1.0, 1.0, 1.0, 1.0, 0.0, 1.0)).abs() < 1e-14);
        let p = PhysicalParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let z = zeta(1.0, &p, 0.5).unwrap();
        assert!((z - 4f64.cbrt() * 1.5).abs() < 1e-14);
        assert!((z - via_logs(2.0, 1.0, 1.0, 1.0, 0.5, 1.0)).abs() < 1e-14);
    }

    #[test]
    fn zeta_rejects_zero_field() {
        let p = PhysicalParams::unit_with_field(0.0).unwrap();
        assert!(matches!(zeta(1.0, &p, 0.0), Err(Error::DegenerateField { .. })));
    }

    #[test]
    fn zeta_slope_follows_force_sign() {
        let p = PhysicalParams::unit_with_field(-2.0).unwrap();
        assert!(zeta(1.0, &p, 0.0).unwrap() < zeta(0.0, &p, 0.0).unwrap());
    }

    #[test]
    fn airy_solutions_require_positive_force() {
        let p = PhysicalParams::unit_with_field(-1.0).unwrap();
        for kind in [SolutionKind::Psi1Static, SolutionKind::Psi1Dynamic, SolutionKind::BerryBalazs] {
            assert!(matches!(
                eval(&SolutionId::new(kind), 0.0, 0.0, &p),
                Err(Error::DegenerateField { .. })
            ));
        }
        // plane-wave type solutions are fine with any field
        assert!(eval(&SolutionId::new(SolutionKind::Psi2Static), 0.3, 0.2, &p).is_ok());
    }

    #[test]
    fn rejects_nonfinite_unused_parameters() {
        let sol = SolutionId::new(SolutionKind::Psi2Static).with_epsilon(f64::NAN);
        assert!(eval(&sol, 0.0, 0.0, &unit()).is_err());
    }

    #[test]
    fn psi1_static_is_real_airy_at_t0() {
        for x in [-3.0, -0.5, 0.0, 1.2] {
            let v = eval(&SolutionId::new(SolutionKind::Psi1Static), x, 0.0, &unit()).unwrap();
            assert_eq!(v.im, 0.0);
            assert_eq!(v.re, airy_ai(-zeta(x, &unit(), 0.0).unwrap()).unwrap().ai);
        }
    }

    #[test]
    fn psi1_static_modulus_is_stationary() {
        let sol = SolutionId::new(SolutionKind::Psi1Static).with_epsilon(0.7);
        for x in [-2.0, 0.1, 1.5] {
            let a = eval(&sol, x, 0.0, &unit()).unwrap().norm();
            let b = eval(&sol, x, 3.3, &unit()).unwrap().norm();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn psi2_static_is_one_at_origin() {
        let sol = SolutionId::new(SolutionKind::Psi2Static).with_momentum(1.0);
        assert_eq!(eval(&sol, 0.0, 0.0, &unit()).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn psi2_pair_differs_by_gauge_phase() {
        let sol = |k| SolutionId::new(k).with_momentum(0.5);
        let s = eval(&sol(SolutionKind::Psi2Static), 0.7, 1.3, &unit()).unwrap();
        let d = eval(&sol(SolutionKind::Psi2Dynamic), 0.7, 1.3, &unit()).unwrap();
        let ratio = s / d;
        assert!((ratio - Complex64::from_polar(1.0, 0.91)).norm() < 1e-14);
    }

    #[test]
    fn psi1_pair_differs_by_gauge_phase() {
        let p = PhysicalParams::new(1.3, 0.8, 1.1, 0.9).unwrap();
        for (x, t) in [(-1.0, 0.4), (0.5, 1.7), (2.0, -0.3)] {
            let sol = |k| SolutionId::new(k).with_epsilon(0.25);
            let s = eval(&sol(SolutionKind::Psi1Static), x, t, &p).unwrap();
            let d = eval(&sol(SolutionKind::Psi1Dynamic), x, t, &p).unwrap();
            let phase = Complex64::from_polar(1.0, -t * p.force() * x / p.hbar());
            assert!((s * phase - d).norm() <= 1e-12 * s.norm().max(d.norm()).max(1e-300));
        }
    }

    #[test]
    fn plane_wave_types_are_unimodular() {
        let p = PhysicalParams::new(0.7, 1.4, 0.6, 1.2).unwrap();
        for kind in [SolutionKind::Psi2Static, SolutionKind::Psi2Dynamic, SolutionKind::FreePlaneWave] {
            for sign in [Sign::Plus, Sign::Minus] {
                let sol = SolutionId::new(kind).with_momentum(0.8).with_sign(sign);
                for (x, t) in [(-7.0, 0.1), (3.0, 2.5), (0.0, 10.0)] {
                    assert!((eval(&sol, x, t, &p).unwrap().norm() - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn berry_balazs_at_t0_is_plain_airy() {
        let p = PhysicalParams::unit_with_field(0.8).unwrap();
        let k = airy_wavenumber(&p).unwrap();
        let grid = SpatialGrid::new(-6.0, 4.0, 101).unwrap();
        let wf = sample(&SolutionId::new(SolutionKind::BerryBalazs), &grid, 0.0, &p).unwrap();
        for (x, z) in grid.points().zip(wf.amplitudes()) {
            assert_eq!(z.im, 0.0);
            assert_eq!(z.re, airy_ai(k * x).unwrap().ai);
        }
    }

    #[test]
    fn berry_balazs_shape_is_translated() {
        let p = PhysicalParams::new(1.5, 1.0, 0.9, 1.1).unwrap();
        let k = airy_wavenumber(&p).unwrap();
        let sol = SolutionId::new(SolutionKind::BerryBalazs);
        for tau in [0.0, 0.5, 1.0, 2.0] {
            for i in 0..=40 {
                let xi = -8.0 + 0.3 * i as f64;
                let v = eval(&sol, xi, tau, &p).unwrap().norm();
                let shifted = airy_ai(k * (xi - p.force() * tau * tau / (2.0 * p.mass()))).unwrap().ai.abs();
                assert!((v - shifted).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn berry_balazs_is_reflected_accelerated_frame_psi1() {
        // The accelerated-frame image of ψ1 in closed form:
        // exp[-iτ(F²τ²/3m + Fξ + ε)/ħ] Ai(-(2mF/ħ²)^(1/3)(ξ + Fτ²/2m + ε/F))
        let p = PhysicalParams::new(0.9, 1.2, 0.7, 1.3).unwrap();
        let (m, h, f) = (p.mass(), p.hbar(), p.force());
        let k = airy_wavenumber(&p).unwrap();
        let eps = 0.4;
        for (xi, tau) in [(-1.0, 0.3), (0.5, 1.1), (2.5, 2.0)] {
            let expected = Complex64::from_polar(1.0, -tau * (f * f * tau * tau / (3.0 * m) + f * xi + eps) / h)
                * airy_ai(-k * (xi + f * tau * tau / (2.0 * m) + eps / f)).unwrap().ai;
            let xp = berry_coordinate(xi, eps, &p).unwrap();
            let got = eval(&SolutionId::new(SolutionKind::BerryBalazs), xp, tau, &p).unwrap();
            assert!((got - expected).norm() < 1e-13, "{got} vs {expected}");
        }
    }

    #[test]
    fn sample_sets_tags() {
        let grid = SpatialGrid::new(-10.0, 5.0, 512).unwrap();
        let wf = sample(&SolutionId::new(SolutionKind::Psi1Static), &grid, 0.0, &unit()).unwrap();
        assert_eq!(wf.gauge(), GaugeSpec::Static);
        assert_eq!(wf.frame(), FrameLabel::Inertial);
        assert!(wf.amplitudes().iter().all(|z| z.im == 0.0));
        let free = sample(&SolutionId::new(SolutionKind::FreePlaneWave).with_momentum(2.0), &grid, 1.0, &unit()).unwrap();
        assert_eq!(free.gauge(), GaugeSpec::FreeFrame);
        assert_eq!(free.frame(), FrameLabel::Accelerated);
        assert!(free.amplitudes().iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        let dynamic = sample(&SolutionId::new(SolutionKind::Psi2Dynamic), &grid, 1.0, &unit()).unwrap();
        assert_eq!(dynamic.gauge(), GaugeSpec::Dynamic);
    }

    #[test]
    fn solution_names_round_trip() {
        for k in SolutionKind::ALL {
            assert_eq!(SolutionKind::from_name(k.name()), Some(k));
        }
        assert_eq!(SolutionKind::from_name("psi3"), None);
    }

    #[test]
    fn superposition_requires_distinct_energies() {
        let c = Complex64::new(1.0, 0.0);
        assert!(StationarySuperposition::new(unit(), vec![(c, 0.1), (c, 0.1)]).is_err());
        assert!(StationarySuperposition::new(unit(), vec![]).is_err());
        let s = StationarySuperposition::new(unit(), vec![(c, 0.1), (Complex64::new(0.0, 2.0), -0.4)]).unwrap();
        let a = eval(&SolutionId::new(SolutionKind::Psi1Static).with_epsilon(0.1), 0.3, 0.9, &unit()).unwrap();
        let b = eval(&SolutionId::new(SolutionKind::Psi1Static).with_epsilon(-0.4), 0.3, 0.9, &unit()).unwrap();
        assert!((s.value(0.3, 0.9).unwrap() - (a + Complex64::new(0.0, 2.0) * b)).norm() < 1e-15);
    }
}
