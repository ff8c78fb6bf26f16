//! `zetastrip`: evaluate F(s), print coefficient tables, run the theorem
//! checks, dump the upper-integral decomposition and scan for zeros.
//!
//! Exit status: 0 success, 1 a verification check failed, 2 a computation
//! did not converge, 3 bad usage or parameters outside a precondition.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod render;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use zetastrip::coeffs::CoefficientTable;
use zetastrip::decomposition::{f_series_decomposition, interval_contributions, DecompositionPlan};
use zetastrip::quadrature::{Phase, QuadratureSpec};
use zetastrip::special::{eta_factor, f_function, gamma, ComplexPoint, Evaluation};
use zetastrip::zerofinder::{find_zeros, AlternatingEta, DEFAULT_ZERO_TOL};
use zetastrip::Error;

use render::num;

#[derive(Parser)]
#[command(name = "zetastrip", version)]
#[command(about = "Integral representations of zeta on the critical strip, checked numerically")]
struct Cli {
    /// Quadrature target tolerance (relative)
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Output format; each subcommand has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Integral,
    #[value(name = "series+decomposition")]
    SeriesDecomposition,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F(s) and ζ(s) at s = a + ib
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_enum, default_value = "integral")]
        method: Method,
    },
    /// Table of g^(n)(0) as exact rationals, with g^(n)(0)/n!
    Coeffs {
        #[arg(long, default_value_t = 15)]
        n_max: usize,
    },
    /// Run the numerical checks and report margins
    Verify {
        /// Check number: 1, 2, 4, 5, 6, 7, 8, 9 or 10
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        theorem: Option<u32>,
        /// Run every check
        #[arg(long)]
        all: bool,
        /// Comma-separated a values
        #[arg(long, value_delimiter = ',')]
        a_grid: Option<Vec<f64>>,
        /// Comma-separated b values
        #[arg(long, value_delimiter = ',')]
        b_grid: Option<Vec<f64>>,
        /// Comma-separated t values (check 10)
        #[arg(long, value_delimiter = ',')]
        t_grid: Option<Vec<f64>>,
        /// Comma-separated R values (check 7)
        #[arg(long, value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
        /// Comma-separated interval indices (checks 8, 9)
        #[arg(long, value_delimiter = ',')]
        k_grid: Option<Vec<u64>>,
        /// Explicit points a:b,a:b,... (overrides the a/b grids)
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
    },
    /// Pairing plan and per-interval contributions of ∫_R^∞ f sin(b log t) dt
    Decompose {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    /// Scan F(1/2 + ib) for zeros and refine them
    Zeros {
        #[arg(long)]
        b_min: f64,
        #[arg(long)]
        b_max: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Residual tolerance on |F|/|Γ| at an accepted zero
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
        /// Also write the scan samples as CSV here
        #[arg(long)]
        scan_out: Option<PathBuf>,
    },
}

enum Failure {
    Verification,
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Verification => 1,
        Failure::Lib(e) if e.is_non_convergence() => 2,
        Failure::Lib(_) | Failure::Usage(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verification => eprintln!("verification failed"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let q = QuadratureSpec::with_tol(cli.tol)?.abs_tol(cli.tol * 1e-3);
    match cli.command {
        Command::Eval { a, b, method } => {
            let text = eval(a, b, method, &q)?;
            emit(&cli.out, &text)
        }
        Command::Coeffs { n_max } => {
            let text = coeffs(n_max, cli.format.unwrap_or(Format::Json))?;
            emit(&cli.out, &text)
        }
        Command::Verify { theorem, all, a_grid, b_grid, t_grid, r_grid, k_grid, grid } => {
            let points = grid.map(|g| g.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()).transpose()?;
            let grids = verify::Grids { a: a_grid, b: b_grid, t: t_grid, r: r_grid, k: k_grid, points };
            let theorems: Vec<u32> = if all { verify::THEOREMS.to_vec() } else { theorem.into_iter().collect() };
            if let Some(&t) = theorems.iter().find(|t| !verify::THEOREMS.contains(t)) {
                return Err(Failure::Usage(format!("no check {t}; available: 1, 2, 4, 5, 6, 7, 8, 9, 10")));
            }
            let summary = verify::run_all(&theorems, &grids, &q)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => render::json(&summary),
                Format::Text => verify::text(&summary),
                Format::Csv => verify_csv(&summary),
            };
            emit(&cli.out, &text)?;
            if summary.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Decompose { a, b } => {
            let text = decompose(a, b, cli.format.unwrap_or(Format::Csv), &q)?;
            emit(&cli.out, &text)
        }
        Command::Zeros { b_min, b_max, step, zero_tol, scan_out } => {
            if !(b_max > b_min) {
                return Err(Failure::Usage("--b-max must exceed --b-min".into()));
            }
            let scan = find_zeros(b_min, b_max, step, zero_tol, &q)?;
            for r in &scan.rejected {
                eprintln!(
                    "rejected bracket [{}, {}]: residual {:.3e} at b = {}",
                    r.bracket.b_lo, r.bracket.b_hi, r.residual, r.b
                );
            }
            let samples_csv = render::csv(
                &["b", "F1", "F2", "absF", "absF_over_absGamma"],
                scan.samples.iter().map(|p| vec![num(p.b), num(p.f1), num(p.f2), num(p.abs_f), num(p.scaled)]),
            );
            if let Some(path) = &scan_out {
                emit(&Some(path.clone()), &samples_csv)?;
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Csv => samples_csv,
                _ => {
                    let zeros: Vec<_> = scan
                        .zeros
                        .iter()
                        .map(|z| {
                            json!({
                                "b_star": z.integral.b_star,
                                "residual": z.integral.residual,
                                "abs_f": z.integral.abs_f,
                                "method": z.integral.method,
                                "oracle_b_star": z.oracle.b_star,
                                "oracle_residual": z.oracle.residual,
                            })
                        })
                        .collect();
                    render::json(&zeros)
                }
            };
            emit(&cli.out, &text)
        }
    }
}

fn parse_point(p: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Usage(format!("grid point {p:?} is not of the form a:b"));
    let (a, b) = p.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct EvalOutput {
    a: f64,
    b: f64,
    F_re: f64,
    F_im: f64,
    zeta_re: f64,
    zeta_im: f64,
    /// Absolute error estimate of F.
    err_est: f64,
    /// Absolute error estimate of ζ, propagated through F/(Γ(1 - 2^{1-s})).
    zeta_err_est: f64,
    method: &'static str,
}

fn eval(a: f64, b: f64, method: Method, q: &QuadratureSpec) -> Result<String, Failure> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Failure::Usage(format!("need a > 0 and finite b; got a = {a}, b = {b}")));
    }
    let s = ComplexPoint::new(a, b);
    let factor = eta_factor(s);
    if factor.norm() < 1e-12 {
        return Err(Failure::Usage("1 - 2^(1-s) vanishes here (s = 1 + 2πik/ln 2); ζ is not recovered from F".into()));
    }
    let gam = gamma(s, q)?;
    let g = gam.value.to_complex();
    let (f, eta, err_est, name) = match method {
        Method::Integral | Method::SeriesDecomposition => {
            let (ev, name): (Evaluation, _) = if method == Method::Integral {
                (f_function(s, q)?, "integral")
            } else {
                (f_series_decomposition(a, b, q)?, "series+decomposition")
            };
            let f = ev.value.to_complex();
            (f, f / g, ev.err_est, name)
        }
        Method::Oracle => {
            let (eta, e) = AlternatingEta::default().eval(s)?;
            let f = g * eta;
            (f, eta, g.norm() * e + eta.norm() * gam.err_est, "oracle")
        }
    };
    let zeta = eta / factor;
    let zeta_err_est = err_est / (g.norm() * factor.norm()) + zeta.norm() * gam.err_est / g.norm();
    Ok(render::json(&EvalOutput {
        a,
        b,
        F_re: f.re,
        F_im: f.im,
        zeta_re: zeta.re,
        zeta_im: zeta.im,
        err_est,
        zeta_err_est,
        method: name,
    }))
}

fn coeffs(n_max: usize, format: Format) -> Result<String, Failure> {
    let table = CoefficientTable::new(n_max)?;
    let rows = table.rows(n_max);
    Ok(match format {
        Format::Json => render::json(&rows),
        Format::Csv => render::csv(
            &["n", "numerator", "denominator", "g_n_over_n_factorial"],
            rows.iter().map(|r| {
                vec![r.n.to_string(), r.g_n_numerator.clone(), r.g_n_denominator.clone(), num(r.g_n_over_n_factorial)]
            }),
        ),
        Format::Text => {
            let cells: Vec<Vec<String>> = (0..=n_max)
                .map(|n| vec![n.to_string(), table.g_deriv(n).to_string(), num(rows[n].g_n_over_n_factorial)])
                .collect();
            render::table(&["n", "g^(n)(0)", "g^(n)(0)/n!"], &cells)
        }
    })
}

fn verify_csv(summary: &verify::Summary) -> String {
    let rows = summary.reports.iter().flat_map(|r| {
        r.checks.iter().map(move |c| {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            vec![
                r.name.clone(),
                c.relation.clone(),
                params.join(";"),
                num(c.value),
                num(c.bound),
                num(c.margin),
                c.passed.to_string(),
                c.gating.to_string(),
            ]
        })
    });
    render::csv(&["report", "relation", "params", "value", "bound", "margin", "passed", "gating"], rows)
}

fn decompose(a: f64, b: f64, format: Format, q: &QuadratureSpec) -> Result<String, Failure> {
    let plan = DecompositionPlan::new(a, b, q)?;
    let parts = interval_contributions(&plan, Phase::Sin, q)?;
    let mut cumulative = 0.0;
    let rows: Vec<(u64, f64, f64, f64, f64)> = parts
        .iter()
        .map(|p| {
            cumulative += p.value;
            (p.k, p.t_lo, p.t_hi, p.value, cumulative)
        })
        .collect();
    Ok(match format {
        Format::Json => render::json(&json!({
            "plan": plan,
            "endpoints": plan.endpoints(10),
            "intervals": rows.iter().map(|r| json!({
                "k": r.0, "t_2k": r.1, "t_2k+1": r.2, "contribution": r.3, "cumulative": r.4
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = format!(
                "# a={} b={} K={} R={} c={} truncation_k={}\n# endpoints: {}\n",
                num(plan.a),
                num(plan.b),
                plan.K,
                num(plan.R),
                num(plan.c),
                plan.truncation_k,
                plan.endpoints(10).iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
            );
            out.push_str(&render::csv(
                &["k", "t_2k", "t_2k+1", "contribution", "cumulative"],
                rows.iter().map(|r| vec![r.0.to_string(), num(r.1), num(r.2), num(r.3), num(r.4)]),
            ));
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Failure::Verification), 1);
        let nc = Error::NonConvergence { context: "x".into(), value: 0.0, err_est: 1.0 };
        assert_eq!(exit_code(&Failure::Lib(nc)), 2);
        assert_eq!(exit_code(&Failure::Lib(Error::Domain("x".into()))), 3);
        assert_eq!(exit_code(&Failure::Usage("x".into())), 3);
    }

    #[test]
    fn grid_points_parse() {
        assert!(matches!(parse_point("0.5:100"), Ok((a, b)) if a == 0.5 && b == 100.0));
        assert!(parse_point("0.5").is_err());
        assert!(parse_point("x:1").is_err());
    }
}
