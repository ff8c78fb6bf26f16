//! Exact Bernoulli numbers and the Maclaurin coefficients of the logistic
//! kernel `g(t) = 1/(e^t + 1)`.
//!
//! Everything here is computed in exact rational arithmetic. Floating values
//! are produced from the exact rationals by a single final conversion.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Check, VerificationReport};

/// Largest derivative order a [`CoefficientTable`] will hold.
pub const MAX_TABLE_INDEX: usize = 200;

/// Arbitrary-size exact rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Parses `p/q`, an integer, or a plain decimal such as `3.14159`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a rational literal: {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(ExactRational::new(p, q));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            let digits = format!("{ip}{fp}");
            let p = BigInt::from_str(&digits).map_err(|_| bad())?;
            let q = num_traits::pow(BigInt::from(10u32), fp.len());
            return Ok(ExactRational::new(p, q));
        }
        Ok(ExactRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        ))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactRational({self})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Extends the memo so that it holds B_0..=B_n.
fn ensure_bernoulli(n: usize) {
    if BERNOULLI.read().unwrap().len() > n {
        return;
    }
    let mut memo = BERNOULLI.write().unwrap();
    while memo.len() <= n {
        let m = memo.len();
        if m == 0 {
            memo.push(BigRational::one());
            continue;
        }
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut acc = BigRational::zero();
        for (k, bk) in memo.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m) = m+1
        let bm = -acc / BigRational::from_integer(binom);
        memo.push(bm);
    }
}

/// B_n with B_1 = -1/2 (generating function t/(e^t - 1)).
pub fn bernoulli(n: usize) -> ExactRational {
    ensure_bernoulli(n);
    ExactRational(BERNOULLI.read().unwrap()[n].clone())
}

/// Exact g^(n)(0) = (1 - 2^{n+1}) B_{n+1} / (n+1).
pub fn g_deriv_at_zero(n: usize) -> ExactRational {
    let b = bernoulli(n + 1);
    let two_pow = num_traits::pow(BigInt::from(2u32), n + 1);
    let factor = BigRational::new(BigInt::one() - two_pow, BigInt::from(n + 1));
    ExactRational(factor * b.0)
}

/// Exact g^(n)(0) / n!, the n-th Maclaurin coefficient of g.
pub fn g_taylor_coefficient(n: usize) -> ExactRational {
    let g = g_deriv_at_zero(n);
    ExactRational(g.0 / BigRational::from_integer(factorial(n)))
}

/// Exact derivative values and their floating Maclaurin coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    max_index: usize,
    bernoulli: Vec<ExactRational>,
    g_deriv: Vec<ExactRational>,
    g_over_factorial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub g_n_numerator: String,
    pub g_n_denominator: String,
    pub g_n_over_n_factorial: f64,
}

impl CoefficientTable {
    pub fn new(max_index: usize) -> Result<Self> {
        if max_index > MAX_TABLE_INDEX {
            return Err(Error::CoefficientLimit {
                requested: max_index,
                limit: MAX_TABLE_INDEX,
            });
        }
        ensure_bernoulli(max_index + 1);
        let bernoulli: Vec<_> = (0..=max_index + 1).map(bernoulli).collect();
        let g_deriv: Vec<_> = (0..=max_index).map(g_deriv_at_zero).collect();
        let mut fact = BigInt::one();
        let mut g_over_factorial = Vec::with_capacity(max_index + 1);
        for (n, g) in g_deriv.iter().enumerate() {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            let q = g.as_big_rational() / BigRational::from_integer(fact.clone());
            g_over_factorial.push(q.to_f64().unwrap_or(f64::NAN));
        }
        Ok(CoefficientTable {
            max_index,
            bernoulli,
            g_deriv,
            g_over_factorial,
        })
    }

    /// The process-wide table at [`MAX_TABLE_INDEX`], built on first use.
    pub fn shared() -> &'static CoefficientTable {
        static TABLE: OnceLock<CoefficientTable> = OnceLock::new();
        TABLE.get_or_init(|| CoefficientTable::new(MAX_TABLE_INDEX).expect("within limit"))
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn bernoulli(&self, n: usize) -> &ExactRational {
        &self.bernoulli[n]
    }

    pub fn g_deriv(&self, n: usize) -> &ExactRational {
        &self.g_deriv[n]
    }

    /// g^(n)(0)/n! as a float; `None` beyond the table.
    pub fn g_over_factorial(&self, n: usize) -> Option<f64> {
        self.g_over_factorial.get(n).copied()
    }

    pub fn g_over_factorial_all(&self) -> &[f64] {
        &self.g_over_factorial
    }

    pub fn rows(&self, n_max: usize) -> Vec<CoefficientRow> {
        (0..=n_max.min(self.max_index))
            .map(|n| CoefficientRow {
                n,
                g_n_numerator: self.g_deriv[n].numerator().to_string(),
                g_n_denominator: self.g_deriv[n].denominator().to_string(),
                g_n_over_n_factorial: self.g_over_factorial[n],
            })
            .collect()
    }
}

/// 100 correct decimals of pi; the enclosure below is [PI_DIGITS, PI_DIGITS + 10^-100].
const PI_DIGITS: &str = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

/// Rational lower and upper bounds for pi, 1e-100 apart.
pub fn pi_enclosure() -> (ExactRational, ExactRational) {
    static ENC: OnceLock<(ExactRational, ExactRational)> = OnceLock::new();
    ENC.get_or_init(|| {
        let lo: ExactRational = PI_DIGITS.parse().expect("valid literal");
        let ulp = ExactRational::new(1, num_traits::pow(BigInt::from(10u32), 100));
        let hi = &lo + &ulp;
        (lo, hi)
    })
    .clone()
}

/// zeta(s) for real s > 1 by direct summation with a midpoint tail
/// correction; returns (value, rigorous truncation bound).
///
/// The sum over n <= N is completed by the integral of x^-s from N + 1/2,
/// whose error is at most s (N - 1/2)^{-s-1} / 24. N is chosen so that this
/// bound is below `tol / 10`.
pub fn zeta_direct(s: f64, tol: f64) -> (f64, f64) {
    assert!(s > 1.0, "zeta_direct needs s > 1");
    let tol = tol.max(1e-16);
    let bound = |n: f64| s / 24.0 * (n - 0.5).powf(-s - 1.0);
    // (N - 1/2)^{s+1} >= 10 s / (24 tol)
    let mut n = ((10.0 * s / (24.0 * tol)).powf(1.0 / (s + 1.0)) + 0.5).ceil().max(2.0);
    while bound(n) >= tol / 10.0 {
        n += 1.0;
    }
    let n_int = n as u64;
    let mut sum = (n + 0.5).powf(1.0 - s) / (s - 1.0);
    for k in (1..=n_int).rev() {
        sum += (k as f64).powf(-s);
    }
    (sum, bound(n))
}

/// zeta(2m) from the Bernoulli closed form with exact B_{2m}.
pub fn zeta_even(m: usize, tol: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("zeta_even needs m >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let b = bernoulli(2 * m);
    // |B_2m| / (2m)! exactly, then one conversion
    let q = b.abs().as_big_rational() / BigRational::from_integer(factorial(2 * m));
    let q = q.to_f64().unwrap_or(f64::NAN);
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(0.5 * q * two_pi.powi(2 * m as i32))
}

/// The ratio of consecutive odd Maclaurin coefficients of g, evaluated by two
/// independent routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRatio {
    pub m: usize,
    /// [g^(4m-1)(0)/(4m-1)!] / [-g^(4m+1)(0)/(4m+1)!] from exact rationals.
    pub exact: f64,
    /// pi^2 (1-2^{-4m}) zeta(4m) / ((1-2^{-4m-2}) zeta(4m+2)).
    pub zeta_form: f64,
    /// exact / pi^2 - 1 computed from the odd-integer sums, which keeps full
    /// relative accuracy where `exact / pi^2` rounds to 1.
    pub excess: f64,
}

/// Sum over odd n >= 3 of n^{-s}: the amount by which (1 - 2^-s) zeta(s)
/// exceeds 1. Only used for s >= 6, where the terms fall off fast.
fn odd_zeta_excess(s: f64) -> f64 {
    let mut acc = 0.0;
    let mut n = 3.0_f64;
    loop {
        let t = n.powf(-s);
        acc += t;
        if t < acc * 1e-18 {
            break;
        }
        n += 2.0;
    }
    acc
}

pub fn coefficient_ratio(m: usize) -> Result<CoefficientRatio> {
    if m == 0 {
        return Err(Error::Domain("coefficient_ratio needs m >= 1".into()));
    }
    let lo = g_taylor_coefficient(4 * m - 1);
    let hi = g_taylor_coefficient(4 * m + 1);
    let exact = (&lo / &(-hi)).to_f64();

    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let s_lo = (4 * m) as f64;
    let s_hi = (4 * m + 2) as f64;
    let (z_lo, _) = zeta_direct(s_lo, 1e-16);
    let (z_hi, _) = zeta_direct(s_hi, 1e-16);
    let zeta_form =
        pi2 * (1.0 - 2f64.powf(-s_lo)) * z_lo / ((1.0 - 2f64.powf(-s_hi)) * z_hi);

    // lambda(s) = 1 + e(s); ratio - 1 = (e(s_lo) - e(s_hi)) / (1 + e(s_hi))
    let e_hi = odd_zeta_excess(s_hi);
    let mut diff = 0.0;
    let mut n = 3.0_f64;
    loop {
        let t = n.powf(-s_lo) - n.powf(-s_hi);
        diff += t;
        if t < diff * 1e-18 {
            break;
        }
        n += 2.0;
    }
    let excess = diff / (1.0 + e_hi);
    Ok(CoefficientRatio {
        m,
        exact,
        zeta_form,
        excess,
    })
}

/// The constant bounding the coefficient ratio from above for m >= 2.
pub const RATIO_UPPER_CONSTANT: &str = "1.00013814";

fn g_closed(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (t.exp() + 1.0)
    }
}

/// Verifies the sign pattern, the zeta form, the coefficient sandwich, the
/// lower bound and the tanh form of g for all m <= m_max.
pub fn check_theorem4(m_max: usize, tol: f64) -> Result<VerificationReport> {
    if m_max < 2 {
        return Err(Error::Precondition("check_theorem4 needs m_max >= 2".into()));
    }
    let (pi_lo, pi_hi) = pi_enclosure();
    let pi_mid = &(&pi_lo + &pi_hi) / &ExactRational::from_integer(2);
    let mut checks = Vec::new();

    for n in 1..=(4 * m_max + 1) {
        let g = g_deriv_at_zero(n);
        if n % 2 == 0 {
            checks.push(Check::holds("even_derivative_zero", g.is_zero()).with("n", n as f64));
        } else if n % 4 == 1 {
            checks.push(Check::holds("derivative_4m+1_negative", g.signum() < 0).with("n", n as f64));
        } else {
            checks.push(Check::holds("derivative_4m-1_positive", g.signum() > 0).with("n", n as f64));
        }
    }

    let pi = std::f64::consts::PI;
    for m in 1..=m_max {
        let coeff = g_taylor_coefficient(2 * m - 1);
        let exact = coeff.to_f64();
        let s = (2 * m) as f64;
        let (z, _) = zeta_direct(s, 1e-16);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let zeta_form = sign * (1.0 - 2f64.powf(-s)) * z * 2.0 / pi.powi(2 * m as i32);
        let rel = ((exact - zeta_form) / zeta_form).abs();
        checks.push(Check::within("zeta_form", rel, tol).with("m", m as f64));

        // |coeff| > 2/pi^{2m}: exact comparison against the upper end of pi's
        // enclosure (2/pi_lo^{2m} >= 2/pi^{2m})
        let abs = coeff.abs();
        let two = ExactRational::from_integer(2);
        let lower = &two / &pi_lo.pow(2 * m as i32);
        let holds = abs > lower;
        let rel_slack = (&(&abs * &pi_mid.pow(2 * m as i32)) / &two - ExactRational::one()).to_f64();
        let mut c = Check::strict("lower_bound_2_over_pi_2m", rel_slack, 0.0, false)
            .with("m", m as f64)
            .note("margin is |c|pi^{2m}/2 - 1; sign decided exactly");
        c.passed = holds;
        checks.push(c);
    }

    let upper_const: ExactRational = RATIO_UPPER_CONSTANT.parse()?;
    for m in 1..=m_max {
        let lo = g_taylor_coefficient(4 * m - 1);
        let hi = -g_taylor_coefficient(4 * m + 1);
        let ratio = &lo / &hi;
        let pi2_mid = pi_mid.pow(2);
        let scaled = (&(&ratio / &pi2_mid) - &ExactRational::one()).to_f64();
        // ratio > pi^2 and ratio < 1.00013814 pi^2, decided exactly
        let lower_ok = ratio > pi_hi.pow(2);
        let upper_ok = ratio < &upper_const * &pi_lo.pow(2);
        let upper_margin = (&upper_const - &(&ratio / &pi2_mid)).to_f64();
        let mut lower = Check::strict("ratio_sandwich_lower", scaled, 0.0, false).with("m", m as f64);
        lower.passed = lower_ok;
        let mut upper = Check::strict("ratio_sandwich_upper", 1.0 + scaled, 1.000_138_14, true)
            .with("m", m as f64);
        upper.margin = upper_margin;
        upper.passed = upper_ok;
        if m == 1 {
            lower = lower.informational().note("m = 1 is outside the m >= 2 hypothesis");
            upper = upper.informational().note("m = 1 is outside the m >= 2 hypothesis");
        }
        checks.push(lower);
        checks.push(upper);
    }

    // the m = 2 constant: (1-2^{-8})ζ(8) / ((1-2^{-10})ζ(10)) in (1, 1.00013814)
    let r2 = coefficient_ratio(2)?;
    let constant = 1.0 + r2.excess;
    checks.push(
        Check::strict("ratio_constant_upper", constant, 1.000_138_14, true)
            .with("m", 2.0)
            .note(format!("excess over 1: {:.10e}", r2.excess)),
    );
    checks.push(Check::strict("ratio_constant_lower", r2.excess, 0.0, false).with("m", 2.0));

    for &t in &[0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0] {
        let direct = g_closed(t);
        let tanh_form = 0.5 - 0.5 * (t / 2.0).tanh();
        checks.push(Check::within("tanh_form", (direct - tanh_form).abs(), tol).with("t", t));
    }

    Ok(VerificationReport::new("theorem4", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> ExactRational {
        ExactRational::new(p, q)
    }

    /// Maclaurin coefficients of 1/(e^t + 1) by series division:
    /// (2 + t + t^2/2! + ...) * c = 1.
    fn series_division_oracle(n_max: usize) -> Vec<ExactRational> {
        let mut denom = vec![ExactRational::from_integer(2)];
        let mut fact = BigInt::one();
        for k in 1..=n_max {
            fact *= BigInt::from(k);
            denom.push(ExactRational::new(1, fact.clone()));
        }
        let mut c: Vec<ExactRational> = Vec::new();
        for n in 0..=n_max {
            let mut acc = if n == 0 { ExactRational::one() } else { ExactRational::zero() };
            for k in 1..=n {
                acc = &acc - &(&denom[k] * &c[n - k]);
            }
            c.push(&acc / &denom[0]);
        }
        c
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(3), ExactRational::zero());
        assert_eq!(bernoulli(12), r(-691, 2730));
    }

    #[test]
    fn tabulated_values_are_exact() {
        let expected = [
            (0, r(1, 2)),
            (1, r(-1, 4)),
            (3, r(1, 8)),
            (5, r(-1, 4)),
            (7, r(17, 16)),
            (9, r(-31, 4)),
            (11, r(691, 8)),
            (13, r(-5461, 4)),
            (15, r(929569, 32)),
        ];
        for (n, v) in expected {
            assert_eq!(g_deriv_at_zero(n), v, "n = {n}");
        }
        assert!(g_deriv_at_zero(4).is_zero());
    }

    #[test]
    fn derivatives_match_series_division() {
        let oracle = series_division_oracle(40);
        let mut fact = BigInt::one();
        for (n, c) in oracle.iter().enumerate() {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            let from_oracle = c * &ExactRational::from_integer(fact.clone());
            assert_eq!(g_deriv_at_zero(n), from_oracle, "n = {n}");
        }
    }

    #[test]
    fn table_refuses_beyond_limit() {
        assert!(matches!(
            CoefficientTable::new(MAX_TABLE_INDEX + 1),
            Err(Error::CoefficientLimit { .. })
        ));
        let t = CoefficientTable::new(15).unwrap();
        assert_eq!(t.rows(15).len(), 16);
        assert_eq!(t.rows(15)[11].g_n_numerator, "691");
        assert_eq!(t.rows(15)[11].g_n_denominator, "8");
        assert_eq!(t.g_over_factorial(0), Some(0.5));
    }

    #[test]
    fn zeta_even_matches_direct_sum() {
        let pi = std::f64::consts::PI;
        assert!((zeta_even(1, 1e-14).unwrap() - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta_even(2, 1e-14).unwrap() - pi.powi(4) / 90.0).abs() < 1e-14);
        for m in 1..=20 {
            let (d, bound) = zeta_direct(2.0 * m as f64, 1e-15);
            assert!(bound < 1e-15);
            let z = zeta_even(m, 1e-14).unwrap();
            assert!(((z - d) / d).abs() < 2e-14, "m = {m}: {z} vs {d}");
        }
        let z20 = zeta_even(20, 1e-14).unwrap();
        assert!((z20 - (1.0 + 2f64.powi(-40) + 3f64.powi(-40))).abs() < 1e-14);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("691/8".parse::<ExactRational>().unwrap(), r(691, 8));
        assert_eq!("1.25".parse::<ExactRational>().unwrap(), r(5, 4));
        assert_eq!("-3".parse::<ExactRational>().unwrap(), r(-3, 1));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert_eq!(r(6, -4).to_string(), "-3/2");
    }

    #[test]
    fn pi_enclosure_brackets_f64_pi() {
        let (lo, hi) = pi_enclosure();
        assert!(lo < hi);
        assert!((lo.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn ratio_at_m2_is_below_published_constant() {
        let v = coefficient_ratio(2).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(v.exact > pi2);
        assert!(v.exact < 1.000_138_14 * pi2);
        assert!(v.excess > 0.0 && v.excess < 1.381_4e-4);
    }

    #[test]
    fn ratio_two_routes_agree_and_excess_decreases() {
        let pi2 = std::f64::consts::PI.powi(2);
        let mut prev = f64::INFINITY;
        for m in 1..=12 {
            let v = coefficient_ratio(m).unwrap();
            assert!(((v.exact - v.zeta_form) / v.exact).abs() < 1e-12, "m = {m}");
            assert!(((v.exact / pi2 - 1.0) - v.excess).abs() < 1e-14, "m = {m}");
            assert!(v.excess > 0.0 && v.excess < prev, "m = {m}");
            prev = v.excess;
        }
        let v10 = coefficient_ratio(10).unwrap();
        assert!((v10.exact / pi2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn theorem4_passes_to_m15() {
        let rep = check_theorem4(15, 1e-12).unwrap();
        let failed: Vec<_> = rep.failures().collect();
        assert!(rep.passed, "{failed:?}");
        let m1: Vec<_> = rep
            .relation("ratio_sandwich_lower")
            .filter(|c| c.params["m"] == 1.0)
            .collect();
        assert_eq!(m1.len(), 1);
        assert!(!m1[0].gating);
        let t0 = rep.relation("tanh_form").find(|c| c.params["t"] == 0.0).unwrap();
        assert_eq!(t0.value, 0.0);
        assert!(check_theorem4(1, 1e-12).is_err());
    }
}
