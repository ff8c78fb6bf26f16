//! F, G, Γ and ζ on the strip.
//!
//! On the critical line |F(a+ib)| falls off like e^{-π|b|/2}, so the
//! real-axis integral of Eq. `F = ∫ t^{s-1}/(e^t+1)` is a massive
//! cancellation for moderate b. The kernels 1/(e^z+1), 1/(e^z-1) and e^{-z}
//! are analytic in the open right half-plane away from the imaginary axis,
//! so the path is rotated to the ray `z = r e^{iφ}` with
//! `φ = sign(b) max(0, π/2 - L/|b|)`:
//!
//! `∫_0^∞ t^{s-1} k(t) dt = e^{iφs} ∫_0^∞ r^{s-1} k(r e^{iφ}) dr`.
//!
//! On the ray the integrand is only e^L larger than the result, so relative
//! accuracy survives at any b. The real and imaginary parts of the result are
//! F₁ and F₂.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, QuadratureSpec};
use crate::report::{Check, VerificationReport};

/// s = a + ib.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub a: f64,
    pub b: f64,
}

impl ComplexPoint {
    pub fn new(a: f64, b: f64) -> Self {
        ComplexPoint { a, b }
    }

    pub fn in_strip(&self) -> bool {
        self.a > 0.0 && self.a < 1.0
    }

    pub fn conj(&self) -> Self {
        ComplexPoint { a: self.a, b: -self.b }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// A complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: ComplexValue,
    pub err_est: f64,
}

/// Excess of the integrand over the result on the rotated ray is e^L.
const ROTATION_SLACK: f64 = 2.5;
/// Below this radius the kernel is replaced by its Maclaurin head.
const HEAD_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kernel {
    /// 1/(e^z + 1)
    Fermi,
    /// 1/(e^z - 1)
    Bose,
    /// e^{-z}
    Exp,
}

impl Kernel {
    fn eval(self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Kernel::Fermi | Kernel::Bose => {
                let sign = if self == Kernel::Fermi { 1.0 } else { -1.0 };
                if z.re > 0.0 {
                    let e = (-z).exp();
                    e / (one + e * sign)
                } else {
                    one / (z.exp() + sign)
                }
            }
            Kernel::Exp => (-z).exp(),
        }
    }

    /// (power, coefficient) terms of the Laurent/Maclaurin head and C with
    /// |k(z) - head(z)| <= C |z|^5 for |z| <= 1e-2.
    fn head(self) -> (&'static [(i32, f64)], f64) {
        match self {
            Kernel::Fermi => (&[(0, 0.5), (1, -0.25), (3, 1.0 / 48.0)], 1.01 / 480.0),
            Kernel::Bose => (&[(-1, 1.0), (0, -0.5), (1, 1.0 / 12.0), (3, -1.0 / 720.0)], 1.01 / 30240.0),
            Kernel::Exp => (
                &[(0, 1.0), (1, -1.0), (2, 0.5), (3, -1.0 / 6.0), (4, 1.0 / 24.0)],
                1.02 / 120.0,
            ),
        }
    }
}

/// Rotation angle for Im(s) = b.
pub fn rotation_angle(b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    b.signum() * (PI / 2.0 - ROTATION_SLACK / b.abs()).max(0.0)
}

fn contour_integral(kernel: Kernel, s: ComplexPoint, q: &QuadratureSpec) -> Result<Evaluation> {
    let (a, b) = (s.a, s.b);
    let phi = rotation_angle(b);
    let dir = Complex64::from_polar(1.0, phi);
    let sc = s.to_complex();
    let prefactor = (Complex64::i() * phi * sc).exp();
    let one = Complex64::new(1.0, 0.0);

    // head on [0, eps]
    let (terms, c5) = kernel.head();
    let eps = HEAD_RADIUS;
    let mut head = Complex64::new(0.0, 0.0);
    for &(j, c) in terms {
        let e = sc + j as f64;
        head += dir.powi(j) * (e * eps.ln()).exp() / e * c;
    }
    let head_err = c5 * eps.powf(a + 5.0) / (a + 5.0);

    // body on [eps, r_max]
    let cos_phi = phi.cos();
    let cutoff = q.truncation_point(a) + ROTATION_SLACK + (1.0 / cos_phi).ln();
    let r_max = cutoff / cos_phi;
    let mut pts = vec![eps];
    let mut r = eps;
    let babs = b.abs();
    while r < r_max {
        let step = (PI / (babs / r + 1.0)).min(1.0);
        r = (r + step).min(r_max);
        pts.push(r);
    }
    let body_fn = |r: f64| -> Complex64 {
        let z = dir * r;
        let w = ((sc - one) * r.ln()).exp();
        w * kernel.eval(z)
    };
    let abs_floor = q.abs_tol * (phi * b).exp();
    let (body, body_err) = integrate_panels(&body_fn, &pts, q.target_tol, abs_floor, q.max_refinement_depth)
        .map_err(|e| match e {
            Error::NonConvergence { value, err_est, .. } => Error::NonConvergence {
                context: format!("contour integral at s = {a} + {b}i"),
                value: value * (-phi * b).exp(),
                err_est: err_est * (-phi * b).exp(),
            },
            other => other,
        })?;
    let tail = r_max.powf(a - 1.0) * (-r_max * cos_phi).exp() / cos_phi
        * if a > 1.0 { 1.0 / (1.0 - (a - 1.0) / (r_max * cos_phi)).max(1e-3) } else { 1.0 };

    let scale = prefactor.norm();
    let value = prefactor * (head + body);
    Ok(Evaluation {
        value: value.into(),
        err_est: scale * (head_err + body_err + tail),
    })
}

/// F(s) = ∫_0^∞ t^{s-1}/(e^t+1) dt for Re(s) > 0.
pub fn f_function(s: ComplexPoint, q: &QuadratureSpec) -> Result<Evaluation> {
    if !(s.a > 0.0) {
        return Err(Error::Domain(format!("F needs Re(s) > 0, got {}", s.a)));
    }
    contour_integral(Kernel::Fermi, s, q)
}

/// Γ(s) = ∫_0^∞ t^{s-1} e^{-t} dt for Re(s) > 0.
pub fn gamma(s: ComplexPoint, q: &QuadratureSpec) -> Result<Evaluation> {
    if !(s.a > 0.0) {
        return Err(Error::Domain(format!("Gamma needs Re(s) > 0, got {}", s.a)));
    }
    contour_integral(Kernel::Exp, s, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GMethod {
    /// Quadrature of t^{s-1}/(e^t-1); only for Re(s) > 1.
    Direct,
    /// F(s)/(1 - 2^{1-s}).
    ViaIdentity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GEvaluation {
    pub value: ComplexValue,
    pub err_est: f64,
    pub method: GMethod,
}

/// 1 - 2^{1-s}.
pub fn eta_factor(s: ComplexPoint) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    one - ((one - s.to_complex()) * 2f64.ln()).exp()
}

/// G(s). `method = None` picks direct quadrature for Re(s) > 1 and the
/// identity otherwise; asking for `Direct` with Re(s) <= 1 is refused since
/// the integral diverges at 0.
pub fn g_function(s: ComplexPoint, q: &QuadratureSpec, method: Option<GMethod>) -> Result<GEvaluation> {
    let method = method.unwrap_or(if s.a > 1.0 { GMethod::Direct } else { GMethod::ViaIdentity });
    match method {
        GMethod::Direct => {
            if !(s.a > 1.0) {
                return Err(Error::Domain(format!(
                    "G integral diverges for Re(s) = {} <= 1; use the identity with F",
                    s.a
                )));
            }
            let e = contour_integral(Kernel::Bose, s, q)?;
            Ok(GEvaluation { value: e.value, err_est: e.err_est, method })
        }
        GMethod::ViaIdentity => {
            if !(s.a > 0.0) {
                return Err(Error::Domain(format!("G needs Re(s) > 0, got {}", s.a)));
            }
            let factor = eta_factor(s);
            if factor.norm() < 1e-12 {
                return Err(Error::Domain("1 - 2^(1-s) vanishes at this s".into()));
            }
            let f = f_function(s, q)?;
            let g = f.value.to_complex() / factor;
            Ok(GEvaluation {
                value: g.into(),
                err_est: f.err_est / factor.norm(),
                method,
            })
        }
    }
}

/// ζ(s) = G(s)/Γ(s).
pub fn zeta_strip(s: ComplexPoint, q: &QuadratureSpec) -> Result<Evaluation> {
    let g = g_function(s, q, None)?;
    let gam = gamma(s, q)?;
    let den = gam.value.to_complex();
    if !(den.norm() > 0.0) || !den.norm().is_finite() {
        return Err(Error::NonConvergence {
            context: "Gamma vanished numerically".into(),
            value: den.norm(),
            err_est: gam.err_est,
        });
    }
    let z = g.value.to_complex() / den;
    let rel = g.err_est / g.value.norm().max(f64::MIN_POSITIVE) + gam.err_est / den.norm();
    Ok(Evaluation {
        value: z.into(),
        err_est: z.norm() * rel,
    })
}

/// Independent evaluator of η(s) = (1 - 2^{1-s}) ζ(s).
pub trait EtaOracle: Sync {
    fn eta(&self, s: ComplexPoint) -> Result<ComplexValue>;
}

/// Checks F = (1 - 2^{1-s}) G with G = ζ_oracle Γ, i.e. F = Γ η, at every
/// grid point. The gating discrepancy is |F - Γη| / max(|F|, 1e-9); the
/// plain relative discrepancy is reported alongside.
pub fn check_theorem1(
    grid: &[ComplexPoint],
    q: &QuadratureSpec,
    oracle: &dyn EtaOracle,
    tol: f64,
) -> Result<VerificationReport> {
    let cells: Vec<Result<Vec<Check>>> = grid
        .par_iter()
        .map(|&s| {
            if !s.in_strip() {
                return Ok(vec![Check::holds("in_strip", false)
                    .with("a", s.a)
                    .with("b", s.b)
                    .informational()
                    .note("outside 0 < a < 1; excluded")]);
            }
            let f = f_function(s, q)?.value.to_complex();
            let gam = gamma(s, q)?.value.to_complex();
            let eta = oracle.eta(s)?.to_complex();
            let rhs = gam * eta;
            let diff = (f - rhs).norm();
            let floored = diff / f.norm().max(1e-9);
            let relative = diff / f.norm();
            Ok(vec![
                Check::within("identity_floored", floored, tol)
                    .with("a", s.a)
                    .with("b", s.b)
                    .with("abs_f", f.norm()),
                Check::within("identity_relative", relative, tol)
                    .with("a", s.a)
                    .with("b", s.b)
                    .informational(),
            ])
        })
        .collect();
    let mut checks = Vec::new();
    for c in cells {
        checks.extend(c?);
    }
    Ok(VerificationReport::new("theorem1", checks))
}

/// The 3 x 5 strip grid used by default.
pub fn default_strip_grid() -> Vec<ComplexPoint> {
    let mut g = Vec::new();
    for &a in &[0.2, 0.5, 0.8] {
        for &b in &[5.0, 10.0, 14.1347, 50.0, 100.0] {
            g.push(ComplexPoint::new(a, b));
        }
    }
    g
}
