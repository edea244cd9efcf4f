//! Evolution equations `Bφ = Aφ + ψ` with `B` a recurrence operator on `Z`
//! or a constant-coefficient differential operator on `R`, and `A` a matrix.
//!
//! Resonance sets `θ_B^{-1}(σ(A))` come from the roots of `p_B − λ`; on `Z`
//! the characters are unit-circle points reported by their angles, on `R`
//! they are real frequencies.

mod asymptotics;

pub use asymptotics::{
    gelfand_hille_check, group_nilpotency_check, kt_check, settles_below, GelfandHilleReport, GroupNilpotencyReport, KtCase,
    KtReport, KtVerdict,
};

use crate::almostper::TrigPoly;
use crate::cjson;
use crate::domain::{reduce_angle, Domain};
use crate::error::{Error, Result};
use crate::linalg::{cluster, eigenvalues, null_space, poly_eval, poly_roots, CMatrix, Eigenvalue};
use crate::polycalc::{GroupPoly, Signal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const MAX_MATRIX_DIM: usize = 64;
/// Eigenvalues closer than this (relative) are one cluster.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-8;
/// Certified eigenpairs satisfy `‖Av − λv‖ <= EIGEN_RESIDUAL_TOL ‖A‖ ‖v‖`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;
/// Default tolerance on `||ζ| − 1|` and on `|Im s|`.
pub const RESONANCE_TOL: f64 = 1e-7;
/// Roots closer than this are one resonance point of higher multiplicity.
const ROOT_MERGE_TOL: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceTerm {
    #[serde(with = "cjson::complex")]
    pub b: Complex64,
    pub shift: i64,
}

/// `(Bφ)(n) = Σ_j b_j φ(n + n_j)` with distinct shifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<RecurrenceTerm>", into = "Vec<RecurrenceTerm>")]
pub struct RecurrenceOp {
    terms: Vec<RecurrenceTerm>,
}

impl TryFrom<Vec<RecurrenceTerm>> for RecurrenceOp {
    type Error = Error;
    fn try_from(terms: Vec<RecurrenceTerm>) -> Result<Self> {
        RecurrenceOp::new(terms)
    }
}

impl From<RecurrenceOp> for Vec<RecurrenceTerm> {
    fn from(op: RecurrenceOp) -> Self {
        op.terms
    }
}

impl RecurrenceOp {
    pub fn new(mut terms: Vec<RecurrenceTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a recurrence operator needs at least one term"));
        }
        terms.sort_by_key(|t| t.shift);
        if terms.windows(2).any(|w| w[0].shift == w[1].shift) {
            return Err(Error::invalid("recurrence shifts must be distinct"));
        }
        Ok(RecurrenceOp { terms })
    }

    /// From `(b, shift)` pairs with real or complex `b`.
    pub fn from_pairs(pairs: &[(Complex64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(b, shift)| RecurrenceTerm { b, shift }).collect())
    }

    pub fn terms(&self) -> &[RecurrenceTerm] {
        &self.terms
    }

    pub fn min_shift(&self) -> i64 {
        self.terms[0].shift
    }

    pub fn max_shift(&self) -> i64 {
        self.terms[self.terms.len() - 1].shift
    }

    /// Coefficients of `ζ^{-lo}(p_B(ζ) − λ)`, `lo = min(0, n_min)`, ascending.
    fn cleared(&self, lambda: Complex64) -> (Vec<Complex64>, i64) {
        let lo = self.min_shift().min(0);
        let hi = self.max_shift().max(0);
        let mut c = vec![ZERO; (hi - lo + 1) as usize];
        for t in &self.terms {
            c[(t.shift - lo) as usize] += t.b;
        }
        c[(-lo) as usize] -= lambda;
        (c, lo)
    }
}

/// `B = Σ_j b_j (d/dt)^j` with nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiffOpJson", into = "DiffOpJson")]
pub struct DiffOp {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DiffOpJson {
    #[serde(with = "cjson::complex_vec")]
    coeffs: Vec<Complex64>,
}

impl TryFrom<DiffOpJson> for DiffOp {
    type Error = Error;
    fn try_from(j: DiffOpJson) -> Result<Self> {
        DiffOp::new(j.coeffs)
    }
}

impl From<DiffOp> for DiffOpJson {
    fn from(d: DiffOp) -> Self {
        DiffOpJson { coeffs: d.coeffs }
    }
}

impl DiffOp {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::invalid("a differential operator needs coefficients")),
            Some(z) if *z == ZERO => Err(Error::invalid("leading coefficient must be nonzero")),
            Some(_) => Ok(DiffOp { coeffs }),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of `p_B(s) − λ` in `s`, ascending.
    fn symbol(&self, lambda: Complex64) -> Vec<Complex64> {
        let mut ip = Complex64::new(1.0, 0.0);
        let mut c: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(|&b| {
                let v = b * ip;
                ip *= Complex64::new(0.0, 1.0);
                v
            })
            .collect();
        c[0] -= lambda;
        c
    }
}

/// Either kind of operator, in its JSON form `{"recurrence": [...]}` or `{"diff": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvolutionOp {
    Recurrence(RecurrenceOp),
    Diff(DiffOp),
}

impl EvolutionOp {
    pub fn domain(&self) -> Domain {
        match self {
            EvolutionOp::Recurrence(_) => Domain::IntegerLine,
            EvolutionOp::Diff(_) => Domain::RealLine,
        }
    }
}

/// `p_B(ζ) = Σ b_j ζ^{n_j}`
pub fn char_fn_recurrence(b: &RecurrenceOp, zeta: Complex64) -> Result<Complex64> {
    if zeta == ZERO && b.min_shift() < 0 {
        return Err(Error::invalid("ζ = 0 with negative shifts"));
    }
    Ok(b.terms.iter().map(|t| t.b * zeta.powi(t.shift as i32)).sum())
}

/// `p_B(s) = Σ b_j (is)^j`
pub fn char_fn_diff(b: &DiffOp, s: f64) -> Complex64 {
    poly_eval(&b.symbol(ZERO), Complex64::new(s, 0.0))
}

/// A square matrix with its certified spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOp {
    matrix: CMatrix,
    spectrum: Vec<Eigenvalue>,
    /// Per spectrum cluster: a basis of eigenvectors, normalised so the last
    /// significant component is 1.
    eigenvectors: Vec<Vec<Vec<Complex64>>>,
    spectral_condition_diag: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixOpJson {
    #[serde(with = "cjson::complex_rows")]
    matrix: Vec<Vec<Complex64>>,
    #[serde(default, skip_deserializing)]
    spectrum: Vec<Eigenvalue>,
    #[serde(default, skip_deserializing)]
    spectral_condition_diag: Option<f64>,
}

impl Serialize for MatrixOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixOpJson {
            matrix: self.matrix.rows(),
            spectrum: self.spectrum.clone(),
            spectral_condition_diag: self.spectral_condition_diag,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixOpJson::deserialize(d)?;
        let m = CMatrix::from_rows(&raw.matrix).map_err(serde::de::Error::custom)?;
        MatrixOp::new(m).map_err(serde::de::Error::custom)
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl MatrixOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = matrix.dim();
        if d == 0 || d > MAX_MATRIX_DIM {
            return Err(Error::invalid(format!("matrix dimension must be in 1..={MAX_MATRIX_DIM}")));
        }
        if !matrix.is_finite() {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        let spectrum = matrix_spectrum(&matrix)?;
        let scale = matrix.norm2().max(f64::MIN_POSITIVE);
        let mut eigenvectors = Vec::with_capacity(spectrum.len());
        for ev in &spectrum {
            let shifted = matrix.shift(ev.value);
            let basis: Vec<Vec<Complex64>> = null_space(&shifted, 1e-8 * scale.max(1.0))
                .into_iter()
                .map(|v| {
                    let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    let pivot = *v.iter().rev().find(|z| z.norm() > 1e-9 * big).expect("nonzero vector");
                    v.iter().map(|z| z / pivot).collect()
                })
                .collect();
            if basis.is_empty() {
                return Err(Error::Degenerate(format!("no eigenvector found for eigenvalue {}", ev.value)));
            }
            for v in &basis {
                let r: Vec<Complex64> =
                    matrix.mul_vec(v).iter().zip(v).map(|(av, x)| av - ev.value * x).collect();
                if vec_norm(&r) > EIGEN_RESIDUAL_TOL * scale.max(1.0) * vec_norm(v) {
                    return Err(Error::Degenerate(format!(
                        "eigenpair for {} failed residual certification",
                        ev.value
                    )));
                }
            }
            eigenvectors.push(basis);
        }
        let geometric: usize = eigenvectors.iter().map(Vec::len).sum();
        let spectral_condition_diag = if geometric == d {
            let cols: Vec<&Vec<Complex64>> = eigenvectors.iter().flatten().collect();
            let mut v = CMatrix::zeros(d);
            for (j, col) in cols.iter().enumerate() {
                for i in 0..d {
                    v[(i, j)] = col[i];
                }
            }
            v.inverse().ok().map(|inv| v.norm2() * inv.norm2())
        } else {
            None
        };
        Ok(MatrixOp { matrix, spectrum, eigenvectors, spectral_condition_diag })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows)?)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> &[Eigenvalue] {
        &self.spectrum
    }

    /// Eigenvector bases aligned with [`MatrixOp::spectrum`].
    pub fn eigenvectors(&self) -> &[Vec<Vec<Complex64>>] {
        &self.eigenvectors
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.spectral_condition_diag.is_some()
    }

    /// `cond(V)` for the eigenvector matrix `V`, absent when `A` is defective.
    pub fn spectral_condition_diag(&self) -> Option<f64> {
        self.spectral_condition_diag
    }
}

/// Eigenvalues with algebraic multiplicities, clustered at [`EIGEN_CLUSTER_TOL`].
pub fn matrix_spectrum(a: &CMatrix) -> Result<Vec<Eigenvalue>> {
    if a.dim() > MAX_MATRIX_DIM {
        return Err(Error::invalid(format!("matrix dimension exceeds {MAX_MATRIX_DIM}")));
    }
    let ev = eigenvalues(a)?;
    let mut cl = cluster(&ev, EIGEN_CLUSTER_TOL);
    cl.sort_by(|x, y| x.value.re.total_cmp(&y.value.re).then(x.value.im.total_cmp(&y.value.im)));
    Ok(cl)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResonanceKind {
    UnitCircleAngles,
    RealFrequencies,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePoint {
    /// Angle in `(-π, π]` or real frequency.
    pub point: f64,
    pub multiplicity: usize,
    #[serde(with = "cjson::complex")]
    pub lambda: Complex64,
    /// `|θ_B(point) − λ|`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub kind: ResonanceKind,
    pub points: Vec<ResonancePoint>,
    pub residual_tol: f64,
}

impl ResonanceSet {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.point).collect()
    }

    /// Whether `s` is a resonance point within `tol`.
    pub fn contains(&self, s: f64, tol: f64) -> bool {
        self.points.iter().any(|p| match self.kind {
            ResonanceKind::UnitCircleAngles => reduce_angle(p.point - s).abs() <= tol,
            ResonanceKind::RealFrequencies => (p.point - s).abs() <= tol,
        })
    }
}

fn push_point(points: &mut Vec<ResonancePoint>, kind: ResonanceKind, p: ResonancePoint) {
    let close = |a: f64, b: f64| match kind {
        ResonanceKind::UnitCircleAngles => reduce_angle(a - b).abs() <= ROOT_MERGE_TOL,
        ResonanceKind::RealFrequencies => (a - b).abs() <= ROOT_MERGE_TOL * a.abs().max(1.0),
    };
    match points.iter_mut().find(|q| q.lambda == p.lambda && close(q.point, p.point)) {
        Some(q) => {
            q.multiplicity += 1;
            q.residual = q.residual.max(p.residual);
        }
        None => points.push(p),
    }
}

/// Roots of `p − λ` for one eigenvalue; `Ok(None)` when `p − λ` is a nonzero constant.
fn roots_or_none(coeffs: &[Complex64]) -> Result<Option<Vec<Complex64>>> {
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if coeffs.iter().skip(1).all(|z| z.norm() <= 1e-14 * scale.max(1.0)) {
        if coeffs[0].norm() <= 1e-14 * scale.max(1.0) {
            return Err(Error::Degenerate("p_B − λ vanishes identically: every character resonates".into()));
        }
        return Ok(None);
    }
    poly_roots(coeffs).map(Some)
}

/// Angles `θ` with `p_B(e^{iθ}) ∈ σ(A)`.
pub fn resonance_set_recurrence(b: &RecurrenceOp, a: &MatrixOp, tol: f64) -> Result<ResonanceSet> {
    if b.terms.iter().all(|t| t.shift == 0) {
        return Err(Error::Degenerate("p_B is constant".into()));
    }
    let kind = ResonanceKind::UnitCircleAngles;
    let mut points = Vec::new();
    for ev in a.spectrum() {
        let (coeffs, _) = b.cleared(ev.value);
        let Some(roots) = roots_or_none(&coeffs)? else { continue };
        for z in roots {
            if (z.norm() - 1.0).abs() > tol {
                continue;
            }
            let theta = reduce_angle(z.arg());
            let on_circle = Complex64::from_polar(1.0, theta);
            let residual = (char_fn_recurrence(b, on_circle)? - ev.value).norm();
            push_point(&mut points, kind, ResonancePoint { point: theta, multiplicity: 1, lambda: ev.value, residual });
        }
    }
    points.sort_by(|x, y| x.point.total_cmp(&y.point));
    Ok(ResonanceSet { kind, points, residual_tol: tol })
}

/// Real `s` with `p_B(s) ∈ σ(A)`.
pub fn resonance_set_diff(b: &DiffOp, a: &MatrixOp, tol: f64) -> Result<ResonanceSet> {
    if b.order() == 0 {
        return Err(Error::Degenerate("p_B is constant".into()));
    }
    let kind = ResonanceKind::RealFrequencies;
    let mut points = Vec::new();
    for ev in a.spectrum() {
        let Some(roots) = roots_or_none(&b.symbol(ev.value))? else { continue };
        for z in roots {
            if z.im.abs() > tol {
                continue;
            }
            let residual = (char_fn_diff(b, z.re) - ev.value).norm();
            push_point(&mut points, kind, ResonancePoint { point: z.re, multiplicity: 1, lambda: ev.value, residual });
        }
    }
    points.sort_by(|x, y| x.point.total_cmp(&y.point));
    Ok(ResonanceSet { kind, points, residual_tol: tol })
}

pub fn resonance_set(op: &EvolutionOp, a: &MatrixOp, tol: f64) -> Result<ResonanceSet> {
    match op {
        EvolutionOp::Recurrence(b) => resonance_set_recurrence(b, a, tol),
        EvolutionOp::Diff(b) => resonance_set_diff(b, a, tol),
    }
}

fn add_scaled(acc: &mut [Complex64], v: &[Complex64], s: Complex64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * s;
    }
}

/// Forward iteration of `Σ_j b_j φ(n+n_j) = Aφ(n) + ψ(n)` for `n` over ψ's window.
///
/// With `lo = min(0, n_min)` and `hi = n_max >= 1`, `init` covers
/// `[a + lo, a + hi)` where `a` is ψ's first time; the output covers
/// `[a + lo, b + hi]`.
pub fn solve_recurrence(b: &RecurrenceOp, a: &MatrixOp, psi: &Signal, init: &Signal) -> Result<Signal> {
    let hi = b.max_shift();
    if hi < 1 {
        return Err(Error::invalid("forward iteration needs a positive largest shift"));
    }
    let b_max = b.terms.last().expect("nonempty").b;
    if b_max == ZERO {
        return Err(Error::invalid("leading recurrence coefficient is zero"));
    }
    let lo = b.min_shift().min(0);
    let d = a.dim();
    if psi.domain() != Domain::IntegerLine || init.domain() != Domain::IntegerLine {
        return Err(Error::invalid("recurrences live on the integer line"));
    }
    if psi.dim() != d || init.dim() != d {
        return Err(Error::invalid("signal dimension must match the matrix"));
    }
    let a0 = psi.start() as i64;
    let need = (hi - lo) as usize;
    if init.start() as i64 != a0 + lo || init.len() != need {
        return Err(Error::invalid(format!(
            "initial segment must start at {} and hold {need} samples",
            a0 + lo
        )));
    }
    let total = need + psi.len();
    let mut phi: Vec<Complex64> = Vec::with_capacity(total * d);
    phi.extend_from_slice(init.raw());
    let inv = Complex64::new(1.0, 0.0) / b_max;
    for k in 0..psi.len() {
        // φ(n) lives at index k - lo for n = a0 + k
        let base = (k as i64 - lo) as usize;
        let mut rhs = a.matrix().mul_vec(&phi[base * d..(base + 1) * d]);
        add_scaled(&mut rhs, psi.sample(k), Complex64::new(1.0, 0.0));
        for t in &b.terms[..b.terms.len() - 1] {
            let idx = (base as i64 + t.shift) as usize;
            let src: Vec<Complex64> = phi[idx * d..(idx + 1) * d].to_vec();
            add_scaled(&mut rhs, &src, -t.b);
        }
        phi.extend(rhs.into_iter().map(|z| z * inv));
    }
    Signal::new(Domain::IntegerLine, (a0 + lo) as f64, 1.0, d, phi)
}

/// `sup_n ‖(Bφ)(n) − Aφ(n) − ψ(n)‖` over the `n` in ψ's window where all shifts are sampled.
pub fn recurrence_residual(b: &RecurrenceOp, a: &MatrixOp, phi: &Signal, psi: &Signal) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..psi.len() {
        let n = psi.time(k);
        let Some(x) = phi.at(n) else { continue };
        let mut acc = a.matrix().mul_vec(x);
        add_scaled(&mut acc, psi.sample(k), Complex64::new(1.0, 0.0));
        let mut complete = true;
        let mut lhs = vec![ZERO; a.dim()];
        for t in &b.terms {
            match phi.at(n + t.shift as f64) {
                Some(y) => add_scaled(&mut lhs, y, t.b),
                None => complete = false,
            }
        }
        if complete {
            let r: Vec<Complex64> = lhs.iter().zip(&acc).map(|(l, r)| l - r).collect();
            worst = worst.max(vec_norm(&r));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousSolution {
    /// `e^{ist} v`
    pub solution: TrigPoly,
    pub frequency: f64,
    #[serde(with = "cjson::complex")]
    pub lambda: Complex64,
    #[serde(with = "cjson::complex_vec")]
    pub eigenvector: Vec<Complex64>,
    /// `sup ‖Bφ − Aφ‖` over the verification points.
    pub residual: f64,
}

/// Character solutions `e^{ist} v` of `Bφ = Aφ`, one per simple resonance point and eigenvector.
pub fn homogeneous_solutions(op: &EvolutionOp, a: &MatrixOp, tol: f64) -> Result<Vec<HomogeneousSolution>> {
    if !a.is_diagonalizable() {
        return Err(Error::Declined("A is not diagonalizable; polynomial-in-t solutions are not constructed".into()));
    }
    let res = resonance_set(op, a, tol)?;
    if let Some(p) = res.points.iter().find(|p| p.multiplicity > 1) {
        return Err(Error::Declined(format!(
            "resonance point {} is a multiple root; polynomial-in-t solutions are not constructed",
            p.point
        )));
    }
    let domain = op.domain();
    let mut out = Vec::new();
    for p in &res.points {
        let idx = a.spectrum().iter().position(|e| e.value == p.lambda).expect("lambda from spectrum");
        for v in &a.eigenvectors()[idx] {
            let poly = GroupPoly::constant(domain, v.clone());
            let solution = TrigPoly::new(domain, v.len(), vec![(p.point, poly)])?;
            let residual = verify_homogeneous(op, a, &solution)?;
            out.push(HomogeneousSolution {
                solution,
                frequency: p.point,
                lambda: p.lambda,
                eigenvector: v.clone(),
                residual,
            });
        }
    }
    Ok(out)
}

/// `sup ‖Bφ(t) − Aφ(t)‖` for `t ∈ {-5, …, 5}` (recurrences) or `t ∈ {-5, -4.5, …, 5}` (differential).
pub fn verify_homogeneous(op: &EvolutionOp, a: &MatrixOp, phi: &TrigPoly) -> Result<f64> {
    let mut worst: f64 = 0.0;
    match op {
        EvolutionOp::Recurrence(b) => {
            for n in -5..=5 {
                let t = n as f64;
                let mut lhs = vec![ZERO; a.dim()];
                for term in b.terms() {
                    add_scaled(&mut lhs, &phi.eval(t + term.shift as f64), term.b);
                }
                let rhs = a.matrix().mul_vec(&phi.eval(t));
                let r: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
                worst = worst.max(vec_norm(&r));
            }
        }
        EvolutionOp::Diff(b) => {
            // derivatives termwise: (d/dt)^j applied to the trigonometric polynomial
            let mut derivs = vec![phi.clone()];
            for _ in 0..b.order() {
                let next = derivs.last().expect("nonempty").derivative()?;
                derivs.push(next);
            }
            for k in -10..=10 {
                let t = k as f64 * 0.5;
                let mut lhs = vec![ZERO; a.dim()];
                for (j, &bj) in b.coeffs().iter().enumerate() {
                    add_scaled(&mut lhs, &derivs[j].eval(t), bj);
                }
                let rhs = a.matrix().mul_vec(&phi.eval(t));
                let r: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
                worst = worst.max(vec_norm(&r));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
