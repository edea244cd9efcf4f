//! Self-asserting scenarios runnable from the binary alone.
//!
//! Each demo writes a CSV of its plot data and a JSON summary holding the
//! expected values, the measured values and a one-line verdict.

use crate::commands::{gelfand_hille_summary, kt_passes, kt_summary, power_table, KtSummary, ResonanceProblem};
use crate::config::RunConfig;
use crate::outcome::{Failure, Verdict};
use crate::output::{write_report, Table};
use harmonic_core::almostper::example_7_13;
use harmonic_core::evolution::{gelfand_hille_check, homogeneous_solutions, kt_check, resonance_set, KtCase, KtVerdict};
use harmonic_core::{CMatrix, Complex64};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

pub const DEMOS: &[&str] = &["example-7-13", "example-8-4", "gelfand-hille", "kt"];

/// Bundled input of the `example-8-4` demo, also shipped as `data/example-8-4.json`.
pub const EXAMPLE_8_4: &str = include_str!("../data/example-8-4.json");

#[derive(Serialize)]
struct Summary<T: Serialize> {
    summary: String,
    expected: serde_json::Value,
    measured: T,
}

pub fn run(cfg: &RunConfig, name: &str) -> Result<Verdict, Failure> {
    match name {
        "example-7-13" => series_bounds(cfg),
        "example-8-4" => resonance_demo(cfg),
        "gelfand-hille" => power_nilpotency(cfg),
        "kt" => power_decay(cfg),
        other => Err(Failure::invalid(format!("unknown demo `{other}`; available: {}", DEMOS.join(", ")))),
    }
}

fn finish<T: Serialize>(
    cfg: &RunConfig,
    name: &str,
    verdict: Verdict,
    summary: String,
    expected: serde_json::Value,
    measured: T,
) -> Result<Verdict, Failure> {
    let summary = format!("{summary}; {}", verdict.label());
    println!("{summary}");
    write_report(cfg, &format!("demo-{name}"), verdict, &Summary { summary, expected, measured })?;
    Ok(verdict)
}

#[derive(Serialize)]
struct SeriesMeasured {
    terms: u64,
    upper_holds: bool,
    lower_holds: bool,
    min_upper_margin: f64,
    min_lower_margin: f64,
    max_budget: f64,
}

fn series_bounds(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let ex = example_7_13(20.0, 1_000_000, 0.1)?;
    let r = &ex.bound_report;
    let mut table = Table::new(&["t", "p2_psi", "budget", "upper_margin", "lower_margin"]);
    for row in &r.rows {
        table.row(&[row.t, row.p2_psi, row.budget, row.upper_margin, row.lower_margin]);
    }
    table.write(cfg, "demo-example-7-13")?;
    let lower = r.rows.iter().filter(|x| x.t >= r.lower_from - 1e-9);
    let measured = SeriesMeasured {
        terms: r.terms,
        upper_holds: r.upper_holds,
        lower_holds: r.lower_holds,
        min_upper_margin: r.rows.iter().map(|x| x.upper_margin).fold(f64::INFINITY, f64::min),
        min_lower_margin: lower.map(|x| x.lower_margin).fold(f64::INFINITY, f64::min),
        max_budget: r.rows.iter().map(|x| x.budget).fold(0.0, f64::max),
    };
    let verdict = Verdict::from_bool(r.upper_holds && r.lower_holds);
    let summary = format!(
        "P²ψ within [6t²(π(t³+π³))^(-1/3), 9(1+t)] on the grid: upper {}, lower from t = {} {}",
        r.upper_holds, r.lower_from, r.lower_holds
    );
    let expected = serde_json::json!({
        "upper_bound": "9(1+t) for t in [0, 20]",
        "lower_bound": "6t^2 (pi (t^3 + pi^3))^(-1/3) for t in [5, 20]",
    });
    finish(cfg, "example-7-13", verdict, summary, expected, measured)
}

#[derive(Serialize)]
struct ResonanceMeasured {
    points: Vec<f64>,
    max_residual: f64,
    solutions: usize,
}

fn resonance_demo(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let p: ResonanceProblem = serde_json::from_str(EXAMPLE_8_4).map_err(|e| Failure::Check(e.into()))?;
    let set = resonance_set(&p.operator, &p.matrix, cfg.tol("resonance"))?;
    let sols = homogeneous_solutions(&p.operator, &p.matrix, cfg.tol("resonance"))?;
    let expected_points = [-3.0, -2.0, 0.0, 1.0];
    let points = set.values();
    let max_residual = sols.iter().map(|s| s.residual).fold(0.0, f64::max);
    let mut table = Table::new(&["frequency", "lambda_re", "lambda_im", "v0_re", "v0_im", "v1_re", "v1_im", "residual"]);
    for s in &sols {
        let v = &s.eigenvector;
        table.row(&[s.frequency, s.lambda.re, s.lambda.im, v[0].re, v[0].im, v[1].re, v[1].im, s.residual]);
    }
    table.write(cfg, "demo-example-8-4")?;
    let points_ok = points.len() == 4 && points.iter().zip(expected_points).all(|(a, b)| (a - b).abs() <= 1e-9);
    let verdict = Verdict::from_bool(points_ok && sols.len() == 4 && max_residual <= 1e-9);
    let shown: Vec<String> = points.iter().map(|x| format!("{}", x.round() as i64)).collect();
    let summary = format!("resonance = {{{}}}; homogeneous residual ≤ 1e-9: {}", shown.join(","), max_residual <= 1e-9);
    let expected = serde_json::json!({ "resonance": expected_points, "max_residual": 1e-9 });
    finish(cfg, "example-8-4", verdict, summary, expected, ResonanceMeasured { points, max_residual, solutions: sols.len() })
}

fn power_nilpotency(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let x = harmonic_core::MatrixOp::new(CMatrix::jordan_block(3, Complex64::new(1.0, 0.0)))?;
    let r = gelfand_hille_check(&x, 2, 10_000)?;
    power_table(&r).write(cfg, "demo-gelfand-hille")?;
    let verdict = Verdict::from_bool(r.dominated && r.spectrum_is_one && r.nilpotency_defect == 0.0 && r.sharp);
    let summary = format!(
        "J_3(1): dominated by (1+|n|)^2 {}, σ = {{1}} {}, (x−e)³ = 0 {}, (x−e)² ≠ 0 {}",
        r.dominated,
        r.spectrum_is_one,
        r.nilpotency_defect == 0.0,
        r.sharp
    );
    let expected = serde_json::json!({ "dominated": true, "spectrum_is_one": true, "nilpotency_defect": 0.0, "sharp": true });
    finish(cfg, "gelfand-hille", verdict, summary, expected, gelfand_hille_summary(&r))
}

#[derive(Serialize)]
struct KtMeasured {
    empty: KtSummary,
    one: KtSummary,
    control: KtSummary,
}

fn power_decay(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let horizon = 10_000;
    let ones = vec![1.0; horizon + 2];
    let diag = |d: &[Complex64]| harmonic_core::MatrixOp::new(CMatrix::diagonal(d));
    let a = kt_check(&diag(&[Complex64::from_polar(0.9, FRAC_PI_3), Complex64::new(0.5, 0.0)])?, &ones, horizon)?;
    let b = kt_check(&diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)])?, &ones, horizon)?;
    let c = kt_check(&diag(&[Complex64::from_polar(1.0, FRAC_PI_4)])?, &ones, horizon)?;
    let mut table = Table::new(&["n", "power_empty", "difference_one", "difference_control"]);
    for n in 0..=horizon {
        table.row(&[n as f64, a.power_curve[n], b.difference_curve[n], c.difference_curve[n]]);
    }
    table.write(cfg, "demo-kt")?;
    let measured = KtMeasured { empty: kt_summary(&a), one: kt_summary(&b), control: kt_summary(&c) };
    let ok = a.case == KtCase::Empty
        && measured.empty.settles_at.is_some_and(|n| n <= 400)
        && b.case == KtCase::One
        && measured.one.settles_at.is_some_and(|n| n <= 25)
        && c.case == KtCase::Other
        && c.verdict == KtVerdict::NotAsserted
        && [a.verdict, b.verdict].iter().all(|&v| kt_passes(v));
    let summary = format!(
        "‖x^n‖ ≤ 1e-6 from n = {:?}; ‖x^(n+1)−x^n‖ ≤ 1e-6 from n = {:?}; unimodular control not asserted",
        measured.empty.settles_at, measured.one.settles_at
    );
    let expected = serde_json::json!({ "empty_settles_by": 400, "one_settles_by": 25, "control": "NotAsserted" });
    finish(cfg, "kt", Verdict::from_bool(ok), summary, expected, measured)
}
