use std::f64::consts::PI;

use zetastrip::decomposition::{
    check_theorem10, check_theorem6, check_theorem7, check_theorem8, check_theorem9, interval_contributions,
    positivity_a_limit, upper_integral, upper_integral_direct, DecompositionPlan, PositivityGrid,
};
use zetastrip::quadrature::{h_kernel, integrate_finite, IntegrandSpec, Phase, QuadratureSpec};

fn quad() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-13).unwrap().abs_tol(1e-15)
}

#[test]
fn paired_sum_equals_direct_upper_integral() {
    for &(a, b) in &[(0.5, 100.0), (0.1, 316.0), (0.9, 1000.0)] {
        let plan = DecompositionPlan::new(a, b, &quad()).unwrap();
        let paired = upper_integral(&plan, &quad()).unwrap();
        let direct = upper_integral_direct(&plan, Phase::Sin, &quad()).unwrap();
        assert!((paired.value - direct.value).abs() < 1e-9, "a={a} b={b}: {} vs {}", paired.value, direct.value);
        let paired = zetastrip::decomposition::upper_integral_phase(&plan, Phase::Cos, &quad()).unwrap();
        let direct = upper_integral_direct(&plan, Phase::Cos, &quad()).unwrap();
        assert!((paired.value - direct.value).abs() < 1e-9, "cos a={a} b={b}");
    }
}

#[test]
fn pairing_report_passes() {
    let r = check_theorem6(0.5, 100.0, &quad(), 1e-9).unwrap();
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(r.checks.len(), 3);
}

#[test]
fn telescoped_integral_and_bounds() {
    for &(a, b, r) in &[(0.5, 100.0, 2.0), (0.5, 1e4, 2.0), (0.2, 316.0, 1.0), (0.9, 50.0, 3.0)] {
        let rep = check_theorem7(a, b, r, &quad()).unwrap();
        assert!(rep.passed, "a={a} b={b} R={r}: {:?}", rep.failures().collect::<Vec<_>>());
    }
    // margins shrink as c -> 1 but stay positive
    let near = check_theorem7(0.5, 100.0, 2.0, &quad()).unwrap();
    let far = check_theorem7(0.5, 1e4, 2.0, &quad()).unwrap();
    let m = |r: &zetastrip::VerificationReport| r.min_slack["integral_upper_bound"];
    assert!(m(&far) < m(&near) && m(&far) > 0.0);
}

#[test]
fn telescoping_over_consecutive_periods() {
    // Σ_{k=K}^{K+m} ∫_{t_{2k}}^{t_{2k+2}} h = ∫_{t_{2K}}^{t_{2K+1}} f - ∫_{t_{2K+2m+2}}^{t_{2K+2m+3}} f
    let (a, b, m) = (0.5, 100.0, 5u64);
    let plan = DecompositionPlan::new(a, b, &quad()).unwrap();
    let k0 = plan.K as u64;
    let h = IntegrandSpec::H { a, b };
    let f = IntegrandSpec::F { a };
    let lhs: f64 = (k0..=k0 + m)
        .map(|k| integrate_finite(&h, plan.endpoint(2 * k), plan.endpoint(2 * k + 2), &quad()).unwrap().value)
        .sum();
    let head = integrate_finite(&f, plan.endpoint(2 * k0), plan.endpoint(2 * k0 + 1), &quad()).unwrap().value;
    let j = 2 * (k0 + m + 1);
    let tail = integrate_finite(&f, plan.endpoint(j), plan.endpoint(j + 1), &quad()).unwrap().value;
    assert!((lhs - (head - tail)).abs() < 1e-11, "{lhs} vs {}", head - tail);
}

#[test]
fn every_paired_interval_is_positive() {
    let plan = DecompositionPlan::new(0.5, 100.0, &quad()).unwrap();
    let parts = interval_contributions(&plan, Phase::Sin, &quad()).unwrap();
    for p in parts.iter().take(21) {
        assert!(p.t_lo >= 1.0);
        assert!(p.value > 0.0, "k={} value {}", p.k, p.value);
    }
}

#[test]
fn sine_average_bounds() {
    let r = check_theorem8(&[10.0, 31.6, 100.0, 316.0, 1000.0], &[0, 1, 37]).unwrap();
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn min_max_sandwich() {
    for &(k, b, a) in &[(11, 100.0, 0.5), (200, 1000.0, 0.7), (0, 100.0, 0.3)] {
        let r = check_theorem9(k, b, a, &quad()).unwrap();
        assert!(r.passed, "k={k} b={b} a={a}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn positivity_on_default_grid() {
    let r = check_theorem10(&PositivityGrid::default()).unwrap();
    assert!(r.passed);
    let probe: Vec<_> = r.relation("outside_probe").collect();
    assert!(probe.iter().all(|c| !c.gating));
    // a = 0.9 is negative at t = 1 for b >= 10
    assert!(probe.iter().any(|c| c.value < 0.0));
}

#[test]
fn positivity_at_the_edge() {
    let a = positivity_a_limit();
    for &b in &[1.0, 10.0, 100.0, 1e3, 1e4] {
        assert!(h_kernel(1.0, a, b) > 0.0, "b={b}");
    }
    let lead = zetastrip::decomposition::positivity_factor(1.0, a, 1e6);
    assert!(lead.abs() < 1e-20);
    // far tail: h ≈ t^{a-1} e^{-t}(1 - e^{aπ/b - t(e^{π/b}-1)})
    let (t, a, b): (f64, f64, f64) = (32.0, 0.5, 10.0);
    let approx = t.powf(a - 1.0) * (-t).exp() * (1.0 - (a * PI / b - t * (PI / b).exp_m1()).exp());
    assert!((h_kernel(t, a, b) / approx - 1.0).abs() < 1e-10);
    assert!(check_theorem10(&PositivityGrid { t: vec![1.0], a: vec![0.9], b: vec![1.0] }).is_err());
}

#[test]
fn series_and_pairing_reassemble_f() {
    use zetastrip::decomposition::f_series_decomposition;
    use zetastrip::special::{f_function, ComplexPoint};
    let q = quad();
    for &(a, b) in &[(0.5, 100.0), (0.5, 200.0), (0.3, 40.0), (0.7, -60.0)] {
        let split = f_series_decomposition(a, b, &q).unwrap();
        let direct = f_function(ComplexPoint::new(a, b), &q).unwrap();
        assert!((split.value.im - direct.value.im).abs() < 1e-8, "a={a} b={b}");
        assert!((split.value.re - direct.value.re).abs() < 1e-8, "a={a} b={b}");
        assert!(split.err_est < 1e-8);
    }
}
