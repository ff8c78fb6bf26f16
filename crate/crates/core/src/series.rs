//! Exact series for the lower integral ∫_0^R f(t,a) sin(b log t) dt.
//!
//! When b·log R is a multiple of 2π, expanding g(t) = 1/(e^t+1) in its
//! Maclaurin series and integrating termwise gives
//!
//! ```text
//! ∫_0^R f(t,a) sin(b log t) dt = -Σ_n g^(n)(0) b R^{n+a} / (n! ((n+a)² + b²)).
//! ```
//!
//! The cosine counterpart replaces -b by (n+a) in each numerator. Both
//! series converge for R < π (g has poles at ±iπ).

use std::f64::consts::PI;

use serde::Serialize;

use crate::coeffs::{zeta_even, CoefficientTable};
use crate::error::{Error, Result};
use crate::quadrature::{compensated_sum, integrate_finite, IntegrandSpec, Phase, QuadratureSpec};
use crate::report::{Check, VerificationReport};

/// 2ζ(2): bounds |g^(n)(0)|/n! · π^{n+1} for every odd n.
const COEFF_BOUND: f64 = PI * PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: usize,
    /// Rigorous bound on the truncation error.
    pub tail_bound: f64,
    pub K: u32,
    pub R: f64,
}

/// The largest K with R = e^{2Kπ/b} <= cap, and that R.
#[allow(non_snake_case)]
pub fn choose_K_R(b: f64, cap: f64) -> Result<(u32, f64)> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("b must be positive and finite, got {b}")));
    }
    if !(cap > 1.0 && cap <= PI) {
        return Err(Error::Domain(format!("cap must lie in (1, π], got {cap}")));
    }
    // tiny slack so that b = 2π/ln 2 lands on K = 1 despite rounding
    let k = (b * cap.ln() / (2.0 * PI) * (1.0 + 4.0 * f64::EPSILON)).floor();
    if k < 1.0 {
        return Err(Error::Precondition(format!(
            "b = {b} is below 2π/ln({cap}); no K >= 1 with e^{{2Kπ/b}} <= {cap}"
        )));
    }
    let r = (2.0 * k * PI / b).exp().min(cap);
    Ok((k as u32, r))
}

/// Tail bound for the series truncated after index `n`.
fn tail_after(n: usize, a: f64, b: f64, r: f64) -> f64 {
    let q = r / PI;
    COEFF_BOUND * q.powi(n as i32 + 1) / (1.0 - q) * r.powf(a) / b
}

/// The odd indices carrying nonzero terms: 0, 1, 3, 5, ...
fn active_indices(n_max: usize) -> impl Iterator<Item = usize> {
    (0..=n_max).filter(|&n| n < 2 || n % 2 == 1)
}

/// Terms n <= `n_max` of the series (sign included), R^{n+a} built
/// incrementally and resynchronised every 16 steps.
fn series_terms(a: f64, b: f64, r: f64, n_max: usize, phase: Phase) -> Result<Vec<f64>> {
    let table = CoefficientTable::shared();
    if n_max > table.max_index() {
        return Err(Error::CoefficientLimit { requested: n_max, limit: table.max_index() });
    }
    let ln_r = r.ln();
    let mut power = r.powf(a);
    let mut terms = Vec::with_capacity(n_max / 2 + 2);
    for n in 0..=n_max {
        if n > 0 {
            power *= r;
            if n % 16 == 0 {
                power = ((n as f64 + a) * ln_r).exp();
            }
        }
        if n >= 2 && n % 2 == 0 {
            continue;
        }
        let c = table.g_over_factorial(n).expect("index checked against table");
        let na = n as f64 + a;
        let num = match phase {
            Phase::Sin => -b,
            Phase::Cos => na,
        };
        terms.push(c * num * power / (na * na + b * b));
    }
    Ok(terms)
}

/// Partial sum through index `n_max`, without tolerance control.
pub fn series_partial(a: f64, b: f64, r: f64, n_max: usize) -> Result<f64> {
    Ok(compensated_sum(series_terms(a, b, r, n_max, Phase::Sin)?.into_iter()))
}

/// Evaluates the lower-integral series ∫_0^R f sin(b log t) dt to absolute
/// tolerance `tol`.
#[allow(non_snake_case)]
pub fn series_lower_integral(a: f64, b: f64, K: u32, R: f64, tol: f64) -> Result<SeriesEval> {
    series_lower_integral_phase(a, b, K, R, tol, Phase::Sin)
}

/// As [`series_lower_integral`], for sin or cos of b log t. The tail bound
/// serves both, since max(b, n+a)/((n+a)² + b²) <= 1/b.
#[allow(non_snake_case)]
pub fn series_lower_integral_phase(a: f64, b: f64, K: u32, R: f64, tol: f64, phase: Phase) -> Result<SeriesEval> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("a must lie in (0, 1), got {a}")));
    }
    if K == 0 {
        return Err(Error::Precondition("K must be positive".into()));
    }
    if !(R < PI) {
        return Err(Error::Precondition(format!("R = {R} >= π: the series diverges")));
    }
    if !(R >= 1.0) {
        return Err(Error::Precondition(format!("R = {R} < 1")));
    }
    let turns = b * R.ln() / (2.0 * PI);
    if (turns - K as f64).abs() > 1e-9 * K as f64 {
        return Err(Error::Precondition(format!(
            "R = {R} is not e^{{2Kπ/b}} for K = {K}, b = {b}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let limit = CoefficientTable::shared().max_index();
    let mut n = 1;
    while tail_after(n, a, b, R) >= tol {
        n += 2;
        if n > limit {
            return Err(Error::CoefficientLimit { requested: n, limit });
        }
    }
    let value = compensated_sum(series_terms(a, b, R, n, phase)?.into_iter());
    Ok(SeriesEval { value, terms_used: active_indices(n).count(), tail_bound: tail_after(n, a, b, R), K, R })
}

/// Quadrature of ∫_0^R f(t,a) sin(b log t) dt, the independent side of the
/// series identity.
pub fn lower_integral_quadrature(a: f64, b: f64, r: f64, q: &QuadratureSpec) -> Result<f64> {
    lower_integral_quadrature_phase(a, b, r, q, Phase::Sin)
}

pub fn lower_integral_quadrature_phase(a: f64, b: f64, r: f64, q: &QuadratureSpec, phase: Phase) -> Result<f64> {
    Ok(integrate_finite(&IntegrandSpec::FOsc { a, b, phase }, 0.0, r, q)?.value)
}

/// Series against quadrature on an (a, b) grid with R = choose_K_R(b, 2).
pub fn check_series_identity(grid: &[(f64, f64)], tol: f64, q: &QuadratureSpec) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for &(a, b) in grid {
        let (k, r) = choose_K_R(b, 2.0)?;
        let s = series_lower_integral(a, b, k, r, tol * 1e-3)?;
        let quad = lower_integral_quadrature(a, b, r, q)?;
        checks.push(
            Check::within("series_equals_quadrature", (s.value - quad).abs(), tol)
                .with("a", a)
                .with("b", b)
                .with("K", k as f64)
                .with("R", r),
        );
    }
    Ok(VerificationReport::new("theorem2", checks))
}

/// The proof's named quantities at (a, b): the bracket of the first four
/// nonzero terms and the sum of the pairs c_m for m >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundParts {
    pub bracket: f64,
    pub pair_sum: f64,
}

fn weight(n: usize, a: f64, b: f64) -> f64 {
    let na = n as f64 + a;
    na * na / (na * na + b * b)
}

pub fn lower_bound_parts(a: f64, b: f64, r: f64) -> Result<LowerBoundParts> {
    let table = CoefficientTable::shared();
    let term = |n: usize| -> f64 {
        table.g_over_factorial(n).expect("within table") * r.powi(n as i32) * weight(n, a, b)
    };
    let bracket = compensated_sum([0, 1, 3, 5].into_iter().map(term));
    let mut pairs = Vec::new();
    let mut m = 2;
    loop {
        let n = 4 * m + 1;
        if n > table.max_index() {
            break;
        }
        let c = term(4 * m - 1) + term(n);
        pairs.push(c);
        if c.abs() < 1e-20 * pairs[0].abs() {
            break;
        }
        m += 1;
    }
    Ok(LowerBoundParts { bracket, pair_sum: compensated_sum(pairs.into_iter()) })
}

/// Verifies the lower bound on the lower integral for a <= 0.1, b >= 100,
/// both in the stated form and in the variant with +R^a/(b(e^R+1)) and 1/b²
/// (informational), together with the proof's intermediate constants.
pub fn check_theorem5(a: f64, b: f64) -> Result<VerificationReport> {
    if !(a > 0.0 && a <= 0.1) {
        return Err(Error::Precondition(format!("a must lie in (0, 0.1], got {a}")));
    }
    if !(b >= 100.0) {
        return Err(Error::Precondition(format!("b must be >= 100, got {b}")));
    }
    let (k, r) = choose_K_R(b, 2.0)?;
    let ra = r.powf(a);
    let lead = ra / (b * (r.exp() + 1.0));
    let s = series_lower_integral(a, b, k, r, 1e-12 * ra / b)?;
    let lhs = s.value;

    let stated = -lead - 0.47177 * ra / b.powi(3);
    let variant = lead - 0.47177 * ra / (b * b);
    let mut checks = vec![
        Check::strict("lower_bound", lhs, stated, false)
            .with("a", a)
            .with("b", b)
            .with("K", k as f64)
            .with("R", r)
            .note(format!("margin / (R^a/(b(e^R+1))) = {:.6e}", (lhs - stated) / lead)),
        Check::strict("lower_bound_variant", lhs, variant, false)
            .with("a", a)
            .with("b", b)
            .informational()
            .note("variant with +R^a/(b(e^R+1)) and 0.47177 R^a/b^2"),
    ];

    let table = CoefficientTable::shared();
    let mac: Vec<f64> = (0..=table.max_index())
        .map(|n| table.g_over_factorial(n).unwrap() * r.powi(n as i32))
        .collect();
    let mac_sum = compensated_sum(mac.into_iter());
    let closed = 1.0 / (r.exp() + 1.0);
    checks.push(Check::within("maclaurin_at_R", (mac_sum - closed).abs(), 1e-12).with("R", r));

    let parts = lower_bound_parts(a, b, r)?;
    let b2 = b * b;
    checks.push(
        Check::strict("bracket_magnitude", parts.bracket.abs() * b2, 0.76667, true)
            .with("a", a)
            .with("b", b)
            .note("b² |bracket of terms n = 0, 1, 3, 5|"),
    );
    checks.push(
        Check::strict("pair_sum_lower", parts.pair_sum * b2, 0.29490, false)
            .with("a", a)
            .with("b", b)
            .note("b² Σ_{m>=2} c_m"),
    );
    // ζ(2) is the constant behind the tail bound; keep it honest
    let z2 = zeta_even(1, 1e-15)?;
    checks.push(Check::within("tail_constant", (2.0 * z2 - COEFF_BOUND).abs(), 1e-12));
    Ok(VerificationReport::new("theorem5", checks))
}
