//! The Airy function `Ai` and its derivative on the real line.
//!
//! Three regimes are stitched together:
//!
//! * `|x| <= 5`: the two Maclaurin series `f` and `g` with
//!   `Ai = c1·f - c2·g`, where `c1 = 3^(-2/3)/Γ(2/3)` and `c2 = 3^(-1/3)/Γ(1/3)`;
//! * `x > 5`: the exponentially small asymptotic expansion;
//! * `x <= -8`: the oscillatory asymptotic expansion;
//! * `-8 < x < -5`: Taylor continuation of `Ai'' = x·Ai` from the series
//!   value at `x = -5`, because the oscillatory expansion stalls near
//!   `e^(-2ζ) ≈ 3e-7` there and the series has already lost three digits.
//!
//! [`airy_oracle`] evaluates `Ai` by quadrature of its integral
//! representation instead, and is meant for cross-checking.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::quadrature;

/// `Γ(1/3)`.
pub const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;
/// `Γ(2/3)`.
pub const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;

/// Arguments beyond this magnitude are rejected.
pub const SUPPORT: f64 = 200.0;

const SERIES_LIMIT: f64 = 5.0;
const OSCILLATORY_LIMIT: f64 = -8.0;
const TAYLOR_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryResult {
    pub ai: f64,
    pub ai_prime: f64,
    /// Conservative bound on `|ai - Ai(x)|`.
    pub est_abs_error: f64,
}

/// The two Gamma values that fix the series normalisation.
///
/// Exposed so that verification runs can inject a corrupted constant and
/// confirm the checks notice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryConstants {
    pub gamma_one_third: f64,
    pub gamma_two_thirds: f64,
}

impl Default for AiryConstants {
    fn default() -> Self {
        AiryConstants { gamma_one_third: GAMMA_ONE_THIRD, gamma_two_thirds: GAMMA_TWO_THIRDS }
    }
}

impl AiryConstants {
    /// `Ai(0)`.
    pub fn c1(&self) -> f64 {
        3f64.powf(-2.0 / 3.0) / self.gamma_two_thirds
    }

    /// `-Ai'(0)`.
    pub fn c2(&self) -> f64 {
        3f64.powf(-1.0 / 3.0) / self.gamma_one_third
    }
}

/// `Ai(x)` and `Ai'(x)` for `|x| <= 200`.
pub fn airy_ai(x: f64) -> Result<AiryResult> {
    airy_ai_with(x, &AiryConstants::default())
}

pub fn airy_ai_with(x: f64, constants: &AiryConstants) -> Result<AiryResult> {
    if !x.is_finite() || x.abs() > SUPPORT {
        return Err(Error::Domain { x, lo: -SUPPORT, hi: SUPPORT });
    }
    let r = if x.abs() <= SERIES_LIMIT {
        maclaurin(x, constants)
    } else if x > SERIES_LIMIT {
        asymptotic_decaying(x)
    } else if x > OSCILLATORY_LIMIT {
        taylor_bridge(x, constants)
    } else {
        asymptotic_oscillatory(-x)
    };
    Ok(r)
}

fn maclaurin(x: f64, constants: &AiryConstants) -> AiryResult {
    let (c1, c2) = (constants.c1(), constants.c2());
    // The series are summed in double-double: near |x| = 5 the two halves
    // c1·f and c2·g are ~10⁶ times larger than Ai, and plain f64 summation
    // would leave ~1e-13 of point-to-point noise.
    let x3 = Dd::from(x).mul(x).mul(x);

    // f = Σ t_k,  t_k = t_{k-1} x³ / ((3k-1)(3k))
    // f' = Σ d_k, d_1 = x²/2, d_k = d_{k-1} x³ / ((3k-3)(3k-1))
    // g = Σ s_k,  s_k = s_{k-1} x³ / ((3k)(3k+1))
    // g' = Σ e_k, e_k = e_{k-1} x³ / ((3k)(3k-2))
    let (mut t, mut s, mut d, mut e) = (Dd::from(1.0), Dd::from(x), Dd::from(x).mul(x).scale(0.5), Dd::from(1.0));
    let (mut f, mut g, mut fp, mut gp) = (t, s, d, e);
    let (mut fa, mut ga) = (1.0, x.abs());
    let (mut fpa, mut gpa) = (d.hi.abs(), 1.0);
    let mut truncation = 0.0f64;
    for k in 1..200 {
        let kf = k as f64;
        t = t.mul_dd(x3).div((3.0 * kf - 1.0) * (3.0 * kf));
        s = s.mul_dd(x3).div((3.0 * kf) * (3.0 * kf + 1.0));
        e = e.mul_dd(x3).div((3.0 * kf) * (3.0 * kf - 2.0));
        if k >= 2 {
            d = d.mul_dd(x3).div((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp = fp.add(d);
            fpa += d.hi.abs();
        }
        f = f.add(t);
        g = g.add(s);
        gp = gp.add(e);
        fa += t.hi.abs();
        ga += s.hi.abs();
        gpa += e.hi.abs();
        let last = t.hi.abs().max(s.hi.abs());
        if k > 2 && last <= 1e-18 * (fa + ga) && d.hi.abs().max(e.hi.abs()) <= 1e-18 * (fpa + gpa) {
            truncation = 2.0 * last * c1.max(c2);
            break;
        }
    }
    let ai = f.mul(c1).add(g.mul(-c2)).hi;
    let ai_prime = fp.mul(c1).add(gp.mul(-c2)).hi;
    // c1 and c2 themselves carry f64 rounding, which the sums magnify.
    let rounding = 2.0 * f64::EPSILON * (c1 * fa + c2 * ga);
    AiryResult { ai, ai_prime, est_abs_error: rounding + truncation + f64::EPSILON * ai.abs() }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2` (double-double).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let v = s - a;
        Dd { hi: s, lo: (a - (s - v)) + (b - v) }
    }

    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::quick(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, b: f64) -> Dd {
        let p = Dd::two_prod(self.hi, b);
        Dd::quick(p.hi, p.lo + self.lo * b)
    }

    fn mul_dd(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        Dd::quick(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn scale(self, b: f64) -> Dd {
        self.mul(b)
    }

    fn div(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::two_prod(q1, b).neg());
        let q2 = r.hi / b;
        Dd::quick(q1, q2)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

/// One Taylor step of `y'' = x·y` from `x0` over `h`.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // a_{k+2} = (x0·a_k + a_{k-1}) / ((k+2)(k+1))
    let mut a = vec![y, yp, 0.5 * x0 * y];
    let scale = y.abs() + yp.abs() * h.abs();
    for k in 1..400usize {
        let next = (x0 * a[k] + a[k - 1]) / (((k + 2) * (k + 1)) as f64);
        a.push(next);
        let size = (next * h.powi(k as i32 + 2)).abs();
        if k > 4 && size < 1e-19 * scale && size * (k + 2) as f64 / h.abs() < 1e-19 * scale {
            break;
        }
    }
    // Horner for both the value and the derivative
    let mut val = 0.0;
    let mut der = 0.0;
    for (k, c) in a.iter().enumerate().rev() {
        val = val * h + c;
        if k > 0 {
            der = der * h + k as f64 * c;
        }
    }
    (val, der)
}

fn taylor_bridge(x: f64, constants: &AiryConstants) -> AiryResult {
    let start = maclaurin(-SERIES_LIMIT, constants);
    let span = x + SERIES_LIMIT;
    let steps = (span.abs() / TAYLOR_STEP).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let (mut y, mut yp) = (start.ai, start.ai_prime);
    let mut x0 = -SERIES_LIMIT;
    for _ in 0..steps {
        let (ny, nyp) = taylor_step(x0, y, yp, h);
        y = ny;
        yp = nyp;
        x0 += h;
    }
    // Oscillatory solutions do not amplify errors; the start error is
    // carried over with a safety factor.
    let err = 4.0 * start.est_abs_error + 16.0 * steps as f64 * f64::EPSILON;
    AiryResult { ai: y, ai_prime: yp, est_abs_error: err }
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn u_coefficient(k: usize, prev: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf)
}

fn v_coefficient(k: usize, u: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
    }
}

/// Sums `Σ (-1)^k c_k ζ^-k` until the terms stop decreasing; returns the sum
/// and the size of the first omitted term.
fn alternating_sum(zeta: f64, coeffs: &[f64]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut zk = 1.0;
    for (k, c) in coeffs.iter().enumerate() {
        let term = if k % 2 == 0 { c * zk } else { -c * zk };
        if term.abs() >= prev {
            return (sum, prev);
        }
        if term.abs() < 1e-18 * sum.abs() {
            return (sum + term, term.abs());
        }
        sum += term;
        prev = term.abs();
        zk /= zeta;
    }
    (sum, prev)
}

fn expansion_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut prev = 1.0;
    for k in 0..n {
        let uk = u_coefficient(k, prev);
        prev = uk;
        u.push(uk);
        v.push(v_coefficient(k, uk));
    }
    (u, v)
}

fn asymptotic_decaying(x: f64) -> AiryResult {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (u, v) = expansion_coefficients(60);
    let (su, eu) = alternating_sum(zeta, &u);
    let (sv, _) = alternating_sum(zeta, &v);
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let x14 = x.sqrt().sqrt();
    let ai = pref / x14 * su;
    let ai_prime = -pref * x14 * sv;
    let err = pref / x14 * eu + 4.0 * f64::EPSILON * ai.abs() * (1.0 + zeta);
    AiryResult { ai, ai_prime, est_abs_error: err }
}

fn asymptotic_oscillatory(z: f64) -> AiryResult {
    // Ai(-z), Ai'(-z) for z >= 8.
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (u, v) = expansion_coefficients(80);
    let split = |c: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let even = c.iter().step_by(2).copied().collect();
        let odd = c.iter().skip(1).step_by(2).copied().collect();
        (even, odd)
    };
    let zeta2 = zeta * zeta;
    let (ue, uo) = split(&u);
    let (ve, vo) = split(&v);
    let (p_u, e1) = alternating_sum(zeta2, &ue);
    let (q_u, e2) = alternating_sum(zeta2, &uo);
    let (p_v, _) = alternating_sum(zeta2, &ve);
    let (q_v, _) = alternating_sum(zeta2, &vo);
    let (q_u, q_v) = (q_u / zeta, q_v / zeta);
    let theta = zeta - FRAC_PI_4;
    let (sin, cos) = theta.sin_cos();
    let z14 = z.sqrt().sqrt();
    let ai = (cos * p_u + sin * q_u) / (PI.sqrt() * z14);
    let ai_prime = z14 / PI.sqrt() * (sin * p_v - cos * q_v);
    // phase rounding grows with ζ
    let err = (e1 + e2 / zeta + 4.0 * f64::EPSILON * (1.0 + zeta)) / (PI.sqrt() * z14);
    AiryResult { ai, ai_prime, est_abs_error: err }
}

/// Support of [`airy_oracle`].
pub const ORACLE_DOMAIN: (f64, f64) = (-50.0, 20.0);

/// `Ai(x)` by adaptive Gauss–Kronrod quadrature of
///
/// `Ai(x) = (1/π) e^(a³/3 - a·x) ∫₀^∞ e^(-a s²) cos(a² s - s³/3 - x s) ds`,
///
/// the integral along the vertical line `Re t = a` of the contour form of
/// `Ai`. The tilt `a > 0` turns the conditionally convergent Fourier integral
/// into a Gaussian-damped one; it is set to the saddle point `√x` for
/// `x > 1` and kept small for negative `x` to limit cancellation.
///
/// Slow. Intended as an independent check of [`airy_ai`].
pub fn airy_oracle(x: f64, tol: f64) -> Result<f64> {
    let (lo, hi) = ORACLE_DOMAIN;
    if !x.is_finite() || x < lo || x > hi {
        return Err(Error::Domain { x, lo, hi });
    }
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must lie in [1e-14, 1e-6], got {tol:e}"),
        });
    }
    let a = if x > 1.0 {
        x.sqrt()
    } else if x >= 0.0 {
        1.0
    } else {
        (0.5 / (-x).sqrt()).min(1.0)
    };
    let log_pref = a * a * a / 3.0 - x * a;
    let pref = log_pref.exp() / PI;

    let tail = (1e3 / tol).ln().max(30.0);
    let cutoff = ((log_pref.max(0.0) + tail) / a).sqrt();
    let integrand = |s: f64| (-a * s * s).exp() * (a * a * s - s * s * s / 3.0 - x * s).cos();

    // Roughly one initial panel per half oscillation.
    let phase = (a * a + x.abs()) * cutoff + cutoff.powi(3) / 3.0;
    let panels = ((phase / PI).ceil() as usize).clamp(16, 20_000);
    let inner_tol = (0.25 * tol / pref).min(1e-12);
    let r = quadrature::integrate(&integrand, 0.0, cutoff, panels, inner_tol, 400_000);

    let value = pref * r.value;
    let estimate = pref * (r.error + 16.0 * f64::EPSILON * r.abs_value);
    if !r.converged || estimate > tol {
        return Err(Error::Convergence { estimate, tol });
    }
    Ok(value)
}
