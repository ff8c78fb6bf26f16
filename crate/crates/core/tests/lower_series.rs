use std::f64::consts::PI;
use std::time::Instant;

use zetastrip::quadrature::QuadratureSpec;
use zetastrip::series::{
    check_series_identity, check_theorem5, choose_K_R, lower_bound_parts, lower_integral_quadrature,
    series_lower_integral, series_partial,
};

fn quad() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-13).unwrap().abs_tol(1e-14)
}

#[test]
fn series_matches_quadrature_on_grid() {
    let start = Instant::now();
    let grid: Vec<(f64, f64)> = [0.1, 0.5, 0.9]
        .iter()
        .flat_map(|&a| [100.0, 316.0, 1000.0].into_iter().map(move |b| (a, b)))
        .collect();
    let report = check_series_identity(&grid, 1e-9, &quad()).unwrap();
    for c in &report.checks {
        println!("{:?} diff {:.3e}", c.params, c.value);
    }
    assert!(report.passed);
    println!("elapsed {:?}", start.elapsed());
}

#[test]
fn series_at_b100_within_1e10() {
    let (k, r) = choose_K_R(100.0, 2.0).unwrap();
    let s = series_lower_integral(0.5, 100.0, k, r, 1e-14).unwrap();
    let q = lower_integral_quadrature(0.5, 100.0, r, &quad()).unwrap();
    assert!((s.value - q).abs() < 1e-10, "{} vs {}", s.value, q);
}

#[test]
fn off_lattice_radius_breaks_the_identity() {
    for &(a, b) in &[(0.5, 100.0), (0.1, 316.0)] {
        let (k, r) = choose_K_R(b, 2.0).unwrap();
        let shifted = r * (PI / (2.0 * b)).exp();
        let s = series_lower_integral(0.5, b, k, r, 1e-14).unwrap();
        // same termwise formula at the shifted radius, bypassing the lattice check
        let formula = series_partial(a, b, shifted, s.terms_used * 2 + 1).unwrap();
        let q = lower_integral_quadrature(a, b, shifted, &quad()).unwrap();
        assert!((formula - q).abs() > 1e-6, "a={a} b={b}: {formula} vs {q}");
    }
}

#[test]
fn tail_bound_is_honest() {
    for &(a, b) in &[(0.1, 100.0), (0.5, 316.0), (0.9, 1000.0)] {
        let (k, r) = choose_K_R(b, 2.0).unwrap();
        for &tol in &[1e-6, 1e-9, 1e-12] {
            let s = series_lower_integral(a, b, k, r, tol).unwrap();
            assert!(s.tail_bound < tol);
            let n = 2 * s.terms_used - 3; // last odd index used
            let longer = series_partial(a, b, r, n + 10).unwrap();
            assert!((longer - s.value).abs() <= s.tail_bound, "a={a} b={b} tol={tol}");
        }
    }
}

#[test]
fn lower_bound_holds_on_grid() {
    let mut margins = Vec::new();
    for &a in &[0.01, 0.05, 0.1] {
        for &b in &[100.0, 300.0, 1000.0] {
            let r = check_theorem5(a, b).unwrap();
            assert!(r.passed, "a={a} b={b}: {:?}", r.failures().collect::<Vec<_>>());
            let c = r.relation("lower_bound").next().unwrap();
            margins.push((a, b, c.margin));
        }
    }
    // LHS is -R^a/(b(e^R+1)) up to a relative O(1/b²) correction, so the
    // margin (which subtracts that term) scales like R^a/b³
    for &(a, b, margin) in &margins {
        let (k, r) = choose_K_R(b, 2.0).unwrap();
        let lead = r.powf(a) / (b * (r.exp() + 1.0));
        let s = series_lower_integral(a, b, k, r, 1e-15).unwrap();
        assert!((s.value / -lead - 1.0).abs() < 10.0 / (b * b), "a={a} b={b}");
        let scaled = margin * b.powi(3) / r.powf(a);
        assert!(scaled > 0.1 && scaled < 2.0, "a={a} b={b} scaled {scaled}");
    }
}

#[test]
fn proof_constants() {
    let (_, r) = choose_K_R(100.0, 2.0).unwrap();
    let p = lower_bound_parts(0.05, 100.0, r).unwrap();
    let b2 = 1e4;
    assert!(p.bracket.abs() < 0.76667 / b2, "{}", p.bracket * b2);
    assert!(p.pair_sum > 0.29490 / b2, "{}", p.pair_sum * b2);
}

#[test]
fn theorem5_preconditions() {
    assert!(check_theorem5(0.2, 100.0).is_err());
    assert!(check_theorem5(0.05, 50.0).is_err());
}
