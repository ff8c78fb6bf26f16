//! Default grids and report assembly for `verify`.

use serde::Serialize;

use zetastrip::coeffs::check_theorem4;
use zetastrip::decomposition::{
    check_theorem10, check_theorem6, check_theorem7, check_theorem8, check_theorem9, PositivityGrid,
};
use zetastrip::quadrature::QuadratureSpec;
use zetastrip::series::{check_series_identity, check_theorem5, choose_K_R};
use zetastrip::special::{check_theorem1, default_strip_grid, ComplexPoint};
use zetastrip::zerofinder::AlternatingEta;
use zetastrip::{Result, VerificationReport};

pub const THEOREMS: [u32; 9] = [1, 2, 4, 5, 6, 7, 8, 9, 10];

/// Grid overrides from the command line; `None` means the embedded default.
#[derive(Debug, Clone, Default)]
pub struct Grids {
    pub a: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub r: Option<Vec<f64>>,
    pub k: Option<Vec<u64>>,
    /// Explicit (a, b) points.
    pub points: Option<Vec<(f64, f64)>>,
}

impl Grids {
    fn a_or(&self, d: &[f64]) -> Vec<f64> {
        self.a.clone().unwrap_or_else(|| d.to_vec())
    }

    fn b_or(&self, d: &[f64]) -> Vec<f64> {
        self.b.clone().unwrap_or_else(|| d.to_vec())
    }

    /// Explicit points, else the product of the a- and b-grids.
    fn points_or(&self, a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
        if let Some(p) = &self.points {
            return p.clone();
        }
        let (a, b) = (self.a_or(a), self.b_or(b));
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

fn merge(name: &str, parts: Vec<VerificationReport>) -> VerificationReport {
    VerificationReport::new(name, parts.into_iter().flat_map(|r| r.checks).collect())
}

pub fn run(theorem: u32, grids: &Grids, q: &QuadratureSpec) -> Result<VerificationReport> {
    match theorem {
        1 => {
            let grid: Vec<ComplexPoint> = match &grids.points {
                Some(p) => p.iter().map(|&(a, b)| ComplexPoint::new(a, b)).collect(),
                None if grids.a.is_some() || grids.b.is_some() => grids
                    .points_or(&[0.2, 0.5, 0.8], &[5.0, 10.0, 14.1347, 50.0, 100.0])
                    .into_iter()
                    .map(|(a, b)| ComplexPoint::new(a, b))
                    .collect(),
                None => default_strip_grid(),
            };
            check_theorem1(&grid, q, &AlternatingEta::default(), 1e-7)
        }
        2 => check_series_identity(&grids.points_or(&[0.1, 0.5, 0.9], &[100.0, 316.0, 1000.0]), 1e-9, q),
        4 => check_theorem4(10, 1e-12),
        5 => {
            let parts = grids
                .points_or(&[0.01, 0.05, 0.1], &[100.0, 300.0, 1000.0])
                .into_iter()
                .map(|(a, b)| check_theorem5(a, b))
                .collect::<Result<Vec<_>>>()?;
            Ok(merge("theorem5", parts))
        }
        6 => {
            let parts = grids
                .points_or(&[0.5], &[100.0, 1000.0])
                .into_iter()
                .map(|(a, b)| check_theorem6(a, b, q, 1e-9))
                .collect::<Result<Vec<_>>>()?;
            Ok(merge("theorem6", parts))
        }
        7 => {
            let rs = grids.r.clone().unwrap_or_else(|| vec![1.0, 2.0]);
            let mut parts = Vec::new();
            for &r in &rs {
                for (a, b) in grids.points_or(&[0.2, 0.5, 0.731], &[100.0, 1000.0]) {
                    parts.push(check_theorem7(a, b, r, q)?);
                }
            }
            Ok(merge("theorem7", parts))
        }
        8 => {
            let bs = grids.b_or(&[10.0, 31.6, 100.0, 316.0, 1000.0]);
            let ks = grids.k.clone().unwrap_or_else(|| vec![0, 5, 50]);
            check_theorem8(&bs, &ks)
        }
        9 => {
            let mut parts = Vec::new();
            for (a, b) in grids.points_or(&[0.2, 0.5], &[100.0, 1000.0]) {
                let ks = match &grids.k {
                    Some(k) => k.clone(),
                    None => {
                        let (k0, _) = choose_K_R(b, 2.0)?;
                        vec![k0 as u64, k0 as u64 + 10]
                    }
                };
                for k in ks {
                    parts.push(check_theorem9(k, b, a, q)?);
                }
            }
            Ok(merge("theorem9", parts))
        }
        10 => {
            let d = PositivityGrid::default();
            let grid = PositivityGrid {
                t: grids.t.clone().unwrap_or(d.t),
                a: grids.a.clone().unwrap_or(d.a),
                b: grids.b.clone().unwrap_or(d.b),
            };
            check_theorem10(&grid)
        }
        other => Err(zetastrip::Error::Domain(format!(
            "no check {other}; available: 1, 2, 4, 5, 6, 7, 8, 9, 10"
        ))),
    }
}

pub fn run_all(theorems: &[u32], grids: &Grids, q: &QuadratureSpec) -> Result<Summary> {
    let reports = theorems.iter().map(|&t| run(t, grids, q)).collect::<Result<Vec<_>>>()?;
    Ok(Summary { passed: reports.iter().all(|r| r.passed), reports })
}

/// One line per check, then a verdict per report.
pub fn text(summary: &Summary) -> String {
    let mut out = String::new();
    for r in &summary.reports {
        for c in &r.checks {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let status = match (c.passed, c.gating) {
                (true, true) => "ok",
                (false, true) => "FAIL",
                (true, false) => "info",
                (false, false) => "info!",
            };
            out.push_str(&format!(
                "{:<8} {:<6} {:<30} value={} bound={} margin={} {}\n",
                r.name,
                status,
                c.relation,
                crate::render::num(c.value),
                crate::render::num(c.bound),
                crate::render::num(c.margin),
                params.join(" ")
            ));
            if let Some(note) = &c.note {
                out.push_str(&format!("{:<8} {:<6} note: {note}\n", "", ""));
            }
        }
        out.push_str(&format!("{}: {}\n", r.name, if r.passed { "PASS" } else { "FAIL" }));
    }
    out.push_str(&format!("overall: {}\n", if summary.passed { "PASS" } else { "FAIL" }));
    out
}
