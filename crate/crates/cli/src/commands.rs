//! Thin wrappers: read input, call the library, write a report and a table.

use crate::config::RunConfig;
use crate::outcome::{Failure, Verdict};
use crate::output::{read_json, write_report, Table};
use harmonic_core::almostper::decompose_ap_w;
use harmonic_core::ergodic::{maak_mean, w_mean};
use harmonic_core::evolution::{
    gelfand_hille_check, kt_check, recurrence_residual, resonance_set, settles_below, solve_recurrence,
    EvolutionOp, KtCase, KtVerdict,
};
use harmonic_core::polycalc::degree_test;
use harmonic_core::spectrum::sp_estimate;
use harmonic_core::weights::{check_axioms, growth_order, symmetric_integer_grid, symmetric_real_grid};
use harmonic_core::{AxiomReport, Domain, MatrixOp, RecurrenceOp, ResonanceSet, Signal, Weight};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

fn input(cfg: &RunConfig) -> &Path {
    &cfg.inputs[0]
}

fn read_weight(path: &Path) -> Result<Weight, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(Weight::from_json(&text)?)
}

#[derive(Serialize)]
struct WeightCheck {
    axioms: AxiomReport,
    growth_order: Option<u32>,
}

pub fn weight_check(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let w = read_weight(input(cfg))?;
    let grid = match w.domain {
        Domain::IntegerLine => symmetric_integer_grid(1, 200),
        Domain::RealLine => symmetric_real_grid(0.25, 50.0),
    };
    let axioms = check_axioms(&w, &grid, cfg.tol("axiom"))?;
    let growth_order = growth_order(&w, &[1.0], 10_000)?;
    let verdict = Verdict::from_bool(axioms.all_passed());
    write_report(cfg, "weight-check", verdict, &WeightCheck { axioms, growth_order })?;
    Ok(verdict)
}

#[derive(Serialize)]
struct PolyReport {
    h: f64,
    n_max: usize,
    degree: Option<usize>,
}

pub fn poly(cfg: &RunConfig, h: f64, n_max: usize) -> Result<Verdict, Failure> {
    let phi: Signal = read_json(input(cfg))?;
    let degree = degree_test(&phi, h, n_max, cfg.tol("degree"))?;
    let verdict = Verdict::from_bool(degree.is_some());
    write_report(cfg, "poly", verdict, &PolyReport { h, n_max, degree })?;
    Ok(verdict)
}

pub fn mean(cfg: &RunConfig, weight: Option<&Path>, order: usize) -> Result<Verdict, Failure> {
    let phi: Signal = read_json(input(cfg))?;
    let tol = cfg.tol("mean");
    match weight {
        None => {
            let l = phi.len() / 2;
            let mut lengths: Vec<usize> = [l / 4, l / 2, l].into_iter().filter(|&x| x > 0).collect();
            lengths.dedup();
            let est = maak_mean(&phi, &lengths, tol)?;
            let verdict = Verdict::from_bool(est.converged);
            let mut table = Table::new(&["window_length", "defect"]);
            for &(l, d) in &est.defects {
                table.row(&[l as f64, d]);
            }
            table.write(cfg, "mean")?;
            write_report(cfg, "mean", verdict, &est)?;
            Ok(verdict)
        }
        Some(path) => {
            let w = read_weight(path)?;
            let est = w_mean(&phi, &w, order, tol)?;
            let verdict = Verdict::from_bool(est.converged);
            write_report(cfg, "mean", verdict, &est)?;
            Ok(verdict)
        }
    }
}

pub fn decompose(cfg: &RunConfig, order: usize, tail_start: f64) -> Result<Verdict, Failure> {
    let phi: Signal = read_json(input(cfg))?;
    let d = decompose_ap_w(&phi, order, None, None, tail_start)?;
    let verdict = Verdict::from_bool(d.norm_inequality_holds(cfg.tol("slack")));
    let mut table = Table::new(&["frequency", "power", "component", "re", "im"]);
    for (s, p) in d.psi.terms() {
        for (k, coeff) in p.coeffs().iter().enumerate() {
            for (j, z) in coeff.iter().enumerate() {
                table.row(&[*s, k as f64, j as f64, z.re, z.im]);
            }
        }
    }
    table.write(cfg, "decompose")?;
    write_report(cfg, "decompose", verdict, &d)?;
    Ok(verdict)
}

pub fn spectrum(cfg: &RunConfig, weight: Option<&Path>) -> Result<Verdict, Failure> {
    let phi: Signal = read_json(input(cfg))?;
    let w = match weight {
        Some(path) => read_weight(path)?,
        None => Weight::poly(0, phi.domain()),
    };
    let est = sp_estimate(&phi, &w, None, None)?;
    let mut table = Table::new(&["frequency", "mass"]);
    for a in &est.atoms {
        table.row(&[a.freq, a.mass]);
    }
    table.write(cfg, "spectrum")?;
    write_report(cfg, "spectrum", Verdict::Pass, &est)?;
    Ok(Verdict::Pass)
}

/// `{"operator": {...}, "matrix": [[...]]}`
#[derive(Deserialize)]
pub struct ResonanceProblem {
    pub operator: EvolutionOp,
    #[serde(flatten)]
    pub matrix: MatrixOp,
}

#[derive(Serialize)]
struct ResonanceReport<'a> {
    spectrum: &'a [harmonic_core::linalg::Eigenvalue],
    resonance: &'a ResonanceSet,
}

pub fn resonance(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let p: ResonanceProblem = read_json(input(cfg))?;
    let set = resonance_set(&p.operator, &p.matrix, cfg.tol("resonance"))?;
    let mut table = Table::new(&["point", "multiplicity", "lambda_re", "lambda_im", "residual"]);
    for q in &set.points {
        table.row(&[q.point, q.multiplicity as f64, q.lambda.re, q.lambda.im, q.residual]);
    }
    table.write(cfg, "resonance")?;
    write_report(cfg, "resonance", Verdict::Pass, &ResonanceReport { spectrum: p.matrix.spectrum(), resonance: &set })?;
    Ok(Verdict::Pass)
}

/// `{"recurrence": [...], "matrix": [[...]], "psi": Signal, "init": Signal}`
#[derive(Deserialize)]
struct SolveProblem {
    recurrence: RecurrenceOp,
    #[serde(flatten)]
    matrix: MatrixOp,
    psi: Signal,
    init: Signal,
}

#[derive(Serialize)]
struct SolveReport {
    residual: f64,
    scale: f64,
    start: f64,
    len: usize,
}

pub fn solve(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let p: SolveProblem = read_json(input(cfg))?;
    let phi = solve_recurrence(&p.recurrence, &p.matrix, &p.psi, &p.init)?;
    let residual = recurrence_residual(&p.recurrence, &p.matrix, &phi, &p.psi)?;
    let scale = phi.sup_norm().max(1.0);
    let verdict = Verdict::from_bool(residual <= cfg.tol("residual") * scale);
    let mut cols = vec!["n".to_string()];
    for j in 0..phi.dim() {
        cols.push(format!("re{j}"));
        cols.push(format!("im{j}"));
    }
    let mut table = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    for i in 0..phi.len() {
        let mut row = vec![phi.time(i)];
        row.extend(phi.sample(i).iter().flat_map(|z| [z.re, z.im]));
        table.row(&row);
    }
    table.write(cfg, "solve")?;
    write_report(cfg, "solve", verdict, &SolveReport { residual, scale, start: phi.start(), len: phi.len() })?;
    Ok(verdict)
}

/// `{"matrix": [[...]], "a": [...], "horizon": n}`; `a` defaults to the constant 1.
#[derive(Deserialize)]
struct KtProblem {
    #[serde(flatten)]
    matrix: MatrixOp,
    #[serde(default)]
    a: Option<Vec<f64>>,
    horizon: usize,
}

#[derive(Serialize)]
pub struct KtSummary {
    pub case: KtCase,
    pub dominated: bool,
    pub verdict: KtVerdict,
    /// First `n` from which the asserted curve stays at or below `1e-6`.
    pub settles_at: Option<usize>,
}

pub fn kt_table(r: &harmonic_core::evolution::KtReport) -> Table {
    let mut table = Table::new(&["n", "power", "difference"]);
    for (n, (p, d)) in r.power_curve.iter().zip(&r.difference_curve).enumerate() {
        table.row(&[n as f64, *p, *d]);
    }
    table
}

pub fn kt_summary(r: &harmonic_core::evolution::KtReport) -> KtSummary {
    KtSummary {
        case: r.case,
        dominated: r.dominated,
        verdict: r.verdict,
        settles_at: settles_below(r.asserted_curve(), 1e-6),
    }
}

pub fn kt_passes(v: KtVerdict) -> bool {
    matches!(v, KtVerdict::DecayConfirmed | KtVerdict::NotAsserted)
}

pub fn kt(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let p: KtProblem = read_json(input(cfg))?;
    let a = p.a.unwrap_or_else(|| vec![1.0; p.horizon + 2]);
    let r = kt_check(&p.matrix, &a, p.horizon)?;
    let verdict = Verdict::from_bool(kt_passes(r.verdict));
    kt_table(&r).write(cfg, "kt")?;
    write_report(cfg, "kt", verdict, &kt_summary(&r))?;
    Ok(verdict)
}

fn default_horizon() -> i64 {
    10_000
}

/// `{"matrix": [[...]], "order": N, "horizon": n}`
#[derive(Deserialize)]
struct GelfandHilleProblem {
    #[serde(flatten)]
    matrix: MatrixOp,
    order: usize,
    #[serde(default = "default_horizon")]
    horizon: i64,
}

/// Everything in the report except the curve, which goes to CSV.
#[derive(Serialize)]
pub struct GelfandHilleSummary {
    pub order: usize,
    pub horizon: i64,
    pub sup_ratio: f64,
    pub tail_slope_forward: f64,
    pub tail_slope_backward: f64,
    pub dominated: bool,
    pub spectrum_is_one: bool,
    pub nilpotency_defect: f64,
    pub nilpotent: bool,
    pub sharp: bool,
    pub consistent: bool,
}

pub fn gelfand_hille_summary(r: &harmonic_core::evolution::GelfandHilleReport) -> GelfandHilleSummary {
    GelfandHilleSummary {
        order: r.order,
        horizon: r.horizon,
        sup_ratio: r.sup_ratio,
        tail_slope_forward: r.tail_slope_forward,
        tail_slope_backward: r.tail_slope_backward,
        dominated: r.dominated,
        spectrum_is_one: r.spectrum_is_one,
        nilpotency_defect: r.nilpotency_defect,
        nilpotent: r.nilpotent,
        sharp: r.sharp,
        consistent: r.consistent,
    }
}

pub fn power_table(r: &harmonic_core::evolution::GelfandHilleReport) -> Table {
    let mut table = Table::new(&["n", "norm"]);
    for &(n, v) in &r.curve {
        table.row(&[n as f64, v]);
    }
    table
}

pub fn gelfand_hille(cfg: &RunConfig) -> Result<Verdict, Failure> {
    let p: GelfandHilleProblem = read_json(input(cfg))?;
    let r = gelfand_hille_check(&p.matrix, p.order, p.horizon)?;
    let verdict = Verdict::from_bool(r.consistent);
    power_table(&r).write(cfg, "gelfand-hille")?;
    write_report(cfg, "gelfand-hille", verdict, &gelfand_hille_summary(&r))?;
    Ok(verdict)
}
