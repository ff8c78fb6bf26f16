//! Zeros of F on the critical line, and the alternating-series oracle for
//! η(s) that they are checked against.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::special::{f_function, gamma, ComplexPoint, ComplexValue, EtaOracle};

/// η(s) = Σ (-1)^{n-1} n^{-s} by weighted averaging of partial sums.
///
/// With n terms the weights are `1 - d_k/d_n`, where
/// `d_k = n Σ_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)`; the weighted sum of the
/// alternating terms equals the same average of the partial sums. The error
/// is below `3 (1 + 2|b|) e^{π|b|/2} / (|Γ(s)| (3+√8)^n)`.
pub fn eta_with_terms(s: ComplexPoint, n: usize) -> Complex64 {
    let n = n.max(1);
    // log of e_i = (n+i-1)! 4^i / ((n-i)! (2i)!), up to a constant
    let mut log_e = Vec::with_capacity(n + 1);
    let mut cur = 0.0_f64;
    log_e.push(cur);
    for i in 1..=n {
        let fi = i as f64;
        let fnn = n as f64;
        cur += ((fnn + fi - 1.0) * 4.0 * (fnn - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0))).ln();
        log_e.push(cur);
    }
    let max = log_e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = log_e.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = e.iter().sum();
    let sc = s.to_complex();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cum = 0.0;
    // sum in reverse so the small late terms are accumulated first
    let mut terms = Vec::with_capacity(n);
    for (k, ek) in e.iter().take(n).enumerate() {
        cum += ek;
        let weight = (total - cum) / total;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = (-sc * ((k + 1) as f64).ln()).exp();
        terms.push(term * (sign * weight));
    }
    for t in terms.into_iter().rev() {
        acc += t;
    }
    acc
}

/// Terms needed for `tol`: at least `1.5|b| + 20`, and enough that the
/// a-priori bound drops below `tol`.
pub fn eta_term_count(s: ComplexPoint, tol: f64) -> usize {
    let b = s.b.abs();
    let base = (1.5 * b).ceil() as usize + 20;
    // |Γ(s)| >= c e^{-π|b|/2} |b|^{a-1/2} roughly; bound numerator e^{π|b|}
    let log_bound = PI * b + (3.0 * (1.0 + 2.0 * b)).ln() + 2.0 + (1.0 / tol).ln();
    let needed = (log_bound / (3.0 + 8f64.sqrt()).ln()).ceil() as usize;
    base.max(needed)
}

/// The default η oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlternatingEta {
    pub tol: f64,
}

impl Default for AlternatingEta {
    fn default() -> Self {
        AlternatingEta { tol: 1e-13 }
    }
}

impl AlternatingEta {
    /// η(s) with the achieved error, estimated as the change when the
    /// number of terms grows by a quarter.
    pub fn eval(&self, s: ComplexPoint) -> Result<(Complex64, f64)> {
        if !(s.a > 0.0) {
            return Err(Error::Domain(format!("eta oracle needs Re(s) > 0, got {}", s.a)));
        }
        let n = eta_term_count(s, self.tol);
        let v1 = eta_with_terms(s, n);
        let v2 = eta_with_terms(s, n + n / 4 + 8);
        let err = (v1 - v2).norm();
        if err > self.tol.max(1e-15) * v2.norm().max(1.0) * 10.0 {
            return Err(Error::NonConvergence {
                context: format!("eta series at s = {} + {}i", s.a, s.b),
                value: v2.norm(),
                err_est: err,
            });
        }
        Ok((v2, err))
    }
}

impl EtaOracle for AlternatingEta {
    fn eta(&self, s: ComplexPoint) -> Result<ComplexValue> {
        Ok(self.eval(s)?.0.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub b: f64,
    pub f1: f64,
    pub f2: f64,
    pub abs_f: f64,
    /// |F| / |Γ|, i.e. |η|; free of the e^{-π|b|/2} decay.
    pub scaled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroBracket {
    pub b_lo: f64,
    pub b_hi: f64,
    /// Value of the bisected component at each end.
    pub indicator_lo: f64,
    pub indicator_hi: f64,
    /// Which component of F changes sign: 1 for F₁, 2 for F₂.
    pub component: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroMethod {
    Integral,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocatedZero {
    pub b_star: f64,
    /// |F(1/2 + i b*)| / |Γ(1/2 + i b*)|.
    pub residual: f64,
    /// |F(1/2 + i b*)| itself.
    pub abs_f: f64,
    pub method: ZeroMethod,
}

/// Default residual tolerance on |F|/|Γ|.
pub const DEFAULT_ZERO_TOL: f64 = 1e-6;

fn f_on_line(b: f64, q: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let s = ComplexPoint::new(0.5, b);
    let f = f_function(s, q)?.value.to_complex();
    let g = gamma(s, q)?.value.norm();
    Ok((f, g))
}

/// Samples F(1/2 + ib) on a grid.
pub fn sample_critical_line(b_min: f64, b_max: f64, step: f64, q: &QuadratureSpec) -> Result<Vec<ScanPoint>> {
    if !(b_max > b_min) || !(step > 0.0) {
        return Err(Error::Domain("need b_min < b_max and step > 0".into()));
    }
    let n = ((b_max - b_min) / step + 1e-9).floor() as usize;
    let bs: Vec<f64> = (0..=n).map(|i| b_min + i as f64 * step).collect();
    let pts: Vec<Result<ScanPoint>> = bs
        .par_iter()
        .map(|&b| {
            let (f, g) = f_on_line(b, q)?;
            Ok(ScanPoint { b, f1: f.re, f2: f.im, abs_f: f.norm(), scaled: f.norm() / g })
        })
        .collect();
    pts.into_iter().collect()
}

/// Brackets zeros from a sampled line.
///
/// A sample is a dip when the scaled modulus |F|/|Γ| is a strict local
/// minimum and below half the median of a ±8-sample window. The bracket is
/// the adjacent step, on the side of the smaller neighbour, across which F₁
/// or F₂ changes sign; a dip without any sign change yields nothing.
pub fn brackets_from_samples(pts: &[ScanPoint]) -> Vec<ZeroBracket> {
    let n = pts.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for i in 1..n - 1 {
        let here = pts[i].scaled;
        if !(here < pts[i - 1].scaled && here < pts[i + 1].scaled) {
            continue;
        }
        let lo = i.saturating_sub(8);
        let hi = (i + 9).min(n);
        let mut window: Vec<f64> = pts[lo..hi].iter().map(|p| p.scaled).collect();
        window.sort_by(f64::total_cmp);
        let median = window[window.len() / 2];
        if !(here < 0.5 * median) {
            continue;
        }
        let steps = if pts[i - 1].scaled <= pts[i + 1].scaled { [i - 1, i] } else { [i, i + 1] };
        let found = steps.iter().find_map(|&j| step_bracket(&pts[j], &pts[j + 1]));
        if let Some(br) = found {
            out.push(br);
        }
    }
    out
}

fn step_bracket(p: &ScanPoint, r: &ScanPoint) -> Option<ZeroBracket> {
    let c1 = p.f1 * r.f1 <= 0.0;
    let c2 = p.f2 * r.f2 <= 0.0;
    let d1 = if c1 { (p.f1 - r.f1).abs() } else { -1.0 };
    let d2 = if c2 { (p.f2 - r.f2).abs() } else { -1.0 };
    if !(c1 || c2) {
        return None;
    }
    let (component, lo, hi) = if d1 >= d2 { (1, p.f1, r.f1) } else { (2, p.f2, r.f2) };
    Some(ZeroBracket { b_lo: p.b, b_hi: r.b, indicator_lo: lo, indicator_hi: hi, component })
}

/// Scans [b_min, b_max] and returns brackets of zeros of F(1/2 + ib).
pub fn scan_critical_line(b_min: f64, b_max: f64, step: f64, q: &QuadratureSpec) -> Result<Vec<ZeroBracket>> {
    if step > 0.5 {
        return Err(Error::Domain("scan step must be <= 0.5".into()));
    }
    let pts = sample_critical_line(b_min, b_max, step, q)?;
    Ok(brackets_from_samples(&pts))
}

/// One zero found along both paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroPair {
    pub integral: LocatedZero,
    pub oracle: LocatedZero,
}

/// A bracket whose refinement did not reach the residual tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RejectedBracket {
    pub bracket: ZeroBracket,
    pub b: f64,
    pub residual: f64,
}

/// Result of a full scan: the samples, confirmed zeros and rejected brackets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroScan {
    pub samples: Vec<ScanPoint>,
    pub zeros: Vec<ZeroPair>,
    pub rejected: Vec<RejectedBracket>,
}

/// Scans, brackets and refines every candidate on both paths. Spurious
/// brackets are collected rather than treated as errors.
pub fn find_zeros(b_min: f64, b_max: f64, step: f64, zero_tol: f64, q: &QuadratureSpec) -> Result<ZeroScan> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::Domain("scan step must lie in (0, 0.5]".into()));
    }
    let samples = sample_critical_line(b_min, b_max, step, q)?;
    let mut zeros = Vec::new();
    let mut rejected = Vec::new();
    for bracket in brackets_from_samples(&samples) {
        let found = refine_zero(&bracket, zero_tol, q)
            .and_then(|integral| Ok((integral, refine_zero_oracle(&bracket, zero_tol, step)?)));
        match found {
            Ok((integral, oracle)) => zeros.push(ZeroPair { integral, oracle }),
            Err(Error::SpuriousBracket { b, residual, .. }) => rejected.push(RejectedBracket { bracket, b, residual }),
            Err(e) => return Err(e),
        }
    }
    Ok(ZeroScan { samples, zeros, rejected })
}

fn bisect(mut lo: f64, mut hi: f64, mut f_lo: f64, eval: &dyn Fn(f64) -> Result<f64>, width: f64) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo < width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton steps on a complex function of the real ordinate, keeping the
/// real part of each step; fails if an iterate leaves [lo, hi].
fn polish(b0: f64, lo: f64, hi: f64, eval: &dyn Fn(f64) -> Result<Complex64>) -> Result<Option<f64>> {
    let mut b = b0;
    for _ in 0..30 {
        let h = 1e-5;
        let v = eval(b)?;
        let d = (eval(b + h)? - eval(b - h)?) / (2.0 * h);
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = (v / d).re;
        b -= step;
        if !(b >= lo && b <= hi) {
            return Ok(None);
        }
        if step.abs() < 1e-13 * b.abs().max(1.0) {
            break;
        }
    }
    Ok(Some(b))
}

/// Bisects the sign-changing component of F until the bracket is narrower
/// than 1e-9, polishes with Newton steps on F itself (a component's root is
/// only a first-order approximation of the zero), then requires
/// |F|/|Γ| < zero_tol at the result. The residual is confirmed against η
/// from the oracle.
pub fn refine_zero(bracket: &ZeroBracket, zero_tol: f64, q: &QuadratureSpec) -> Result<LocatedZero> {
    if !(bracket.indicator_lo * bracket.indicator_hi <= 0.0) || !(bracket.b_hi > bracket.b_lo) {
        return Err(Error::Domain("invalid bracket".into()));
    }
    let component = bracket.component;
    let eval = |b: f64| -> Result<f64> {
        let f = f_function(ComplexPoint::new(0.5, b), q)?.value;
        Ok(if component == 1 { f.re } else { f.im })
    };
    let b_cut = bisect(bracket.b_lo, bracket.b_hi, bracket.indicator_lo, &eval, 1e-9)?;
    let width = bracket.b_hi - bracket.b_lo;
    let f_complex = |b: f64| -> Result<Complex64> { Ok(f_function(ComplexPoint::new(0.5, b), q)?.value.to_complex()) };
    let b_star = polish(b_cut, bracket.b_lo - width, bracket.b_hi + width, &f_complex)?.unwrap_or(b_cut);
    let (f, g) = f_on_line(b_star, q)?;
    let residual = f.norm() / g;
    let oracle = AlternatingEta::default().eval(ComplexPoint::new(0.5, b_star))?.0.norm();
    let worst = residual.max(oracle);
    if !(worst < zero_tol) {
        return Err(Error::SpuriousBracket { b: b_star, residual: worst, zero_tol });
    }
    Ok(LocatedZero { b_star, residual, abs_f: f.norm(), method: ZeroMethod::Integral })
}

/// Locates the same zero from η alone: a fine scan of the bracket widened by
/// `pad` for a sign change of Re η or Im η, then bisection.
pub fn refine_zero_oracle(bracket: &ZeroBracket, zero_tol: f64, pad: f64) -> Result<LocatedZero> {
    let oracle = AlternatingEta::default();
    let eta = |b: f64| -> Result<Complex64> { Ok(oracle.eval(ComplexPoint::new(0.5, b))?.0) };
    let lo = bracket.b_lo - pad;
    let hi = bracket.b_hi + pad;
    let n = 64;
    let samples: Vec<(f64, Complex64)> = (0..=n)
        .map(|i| {
            let b = lo + (hi - lo) * i as f64 / n as f64;
            eta(b).map(|v| (b, v))
        })
        .collect::<Result<_>>()?;
    // the sign change (of either part) with the smallest |η| at its ends
    let mut best: Option<(f64, usize, u8)> = None;
    for i in 0..n {
        let (_, v0) = samples[i];
        let (_, v1) = samples[i + 1];
        let m = v0.norm().min(v1.norm());
        for part in [1u8, 2] {
            let (x0, x1) = if part == 1 { (v0.re, v1.re) } else { (v0.im, v1.im) };
            if x0 * x1 <= 0.0 && best.is_none_or(|(bm, _, _)| m < bm) {
                best = Some((m, i, part));
            }
        }
    }
    let Some((_, i, part)) = best else {
        return Err(Error::SpuriousBracket { b: 0.5 * (lo + hi), residual: f64::INFINITY, zero_tol });
    };
    let sel = |v: Complex64| if part == 1 { v.re } else { v.im };
    let eval = |b: f64| -> Result<f64> { Ok(sel(eta(b)?)) };
    let b_cut = bisect(samples[i].0, samples[i + 1].0, sel(samples[i].1), &eval, 1e-9)?;
    let b_star = polish(b_cut, lo, hi, &eta)?.unwrap_or(b_cut);
    let residual = eta(b_star)?.norm();
    if !(residual < zero_tol) {
        return Err(Error::SpuriousBracket { b: b_star, residual, zero_tol });
    }
    let abs_f = residual * gamma(ComplexPoint::new(0.5, b_star), &QuadratureSpec::default())?.value.norm();
    Ok(LocatedZero { b_star, residual, abs_f, method: ZeroMethod::Oracle })
}
