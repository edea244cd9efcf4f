//! Ergodic means of sampled signals.
//!
//! Maak means are estimated with interval windows `F = {0, …, L-1}` (counted
//! in samples) swept over every admissible offset of the sampled window. The
//! sweep supplies the uniformity over translates; the mean reported is the
//! average of the window averages at the largest `L`.

use crate::cjson;
use crate::error::{Error, Result};
use crate::linalg::lstsq_real;
use crate::polycalc::{antiderivative, norm, GroupPoly, Signal};
use crate::weights::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    #[serde(with = "cjson::complex_vec")]
    pub mean: Vec<Complex64>,
    pub window_length: usize,
    pub uniformity_defect: f64,
    pub converged: bool,
    pub tol: f64,
    /// `(L, defect)` for every requested window length.
    pub defects: Vec<(usize, f64)>,
}

/// All window averages of length `l`, one per offset.
fn window_averages(phi: &Signal, l: usize) -> Vec<Vec<Complex64>> {
    let (n, dim) = (phi.len(), phi.dim());
    let mut prefix = vec![vec![Complex64::new(0.0, 0.0); dim]; n + 1];
    for i in 0..n {
        for c in 0..dim {
            prefix[i + 1][c] = prefix[i][c] + phi.sample(i)[c];
        }
    }
    (0..=n - l)
        .map(|a| (0..dim).map(|c| (prefix[a + l][c] - prefix[a][c]) / l as f64).collect())
        .collect()
}

fn sup_distance(avgs: &[Vec<Complex64>], center: &[Complex64]) -> f64 {
    avgs.iter()
        .map(|r| {
            let d: Vec<Complex64> = r.iter().zip(center).map(|(x, y)| x - y).collect();
            norm(&d)
        })
        .fold(0.0, f64::max)
}

pub fn maak_mean(phi: &Signal, window_lengths: &[usize], tol: f64) -> Result<MeanEstimate> {
    let &l_max = window_lengths.last().ok_or_else(|| Error::invalid("no window lengths given"))?;
    if window_lengths.windows(2).any(|w| w[0] >= w[1]) || window_lengths[0] == 0 {
        return Err(Error::invalid("window lengths must be positive and increasing"));
    }
    if phi.len() < 2 * l_max {
        return Err(Error::WindowTooShort { needed: 2 * l_max, available: phi.len() });
    }
    let dim = phi.dim();
    let mut defects = Vec::with_capacity(window_lengths.len());
    let mut mean = vec![Complex64::new(0.0, 0.0); dim];
    for &l in window_lengths {
        let avgs = window_averages(phi, l);
        let center: Vec<Complex64> = (0..dim)
            .map(|c| avgs.iter().map(|r| r[c]).sum::<Complex64>() / avgs.len() as f64)
            .collect();
        defects.push((l, sup_distance(&avgs, &center)));
        mean = center;
    }
    let uniformity_defect = defects.last().expect("nonempty").1;
    Ok(MeanEstimate {
        mean,
        window_length: l_max,
        uniformity_defect,
        converged: uniformity_defect <= tol,
        tol,
        defects,
    })
}

/// `φ / w` sample by sample.
pub fn divide_by_weight(phi: &Signal, w: &Weight) -> Result<Signal> {
    let inv: Vec<f64> = phi.times().map(|t| w.eval(t).map(|x| 1.0 / x)).collect::<Result<_>>()?;
    let mut out = phi.clone();
    out = out.scale_by(|t| {
        let i = phi.index_of(t).expect("own lattice");
        Complex64::new(inv[i], 0.0)
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub samples: usize,
    /// Ratio of extreme `|R_kk|` in the scaled design matrix.
    pub condition: f64,
    pub rms_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WMeanEstimate {
    pub poly: GroupPoly,
    pub residual_defect: f64,
    pub converged: bool,
    pub tol: f64,
    pub fit_diagnostics: FitDiagnostics,
}

/// Fit the w-mean of degree `<= n` by unweighted least squares on monomials,
/// then measure the Maak defect of `(φ - p)/w`.
pub fn w_mean(phi: &Signal, w: &Weight, n: usize, tol: f64) -> Result<WMeanEstimate> {
    let len = phi.len();
    if len < 10 * (n + 1) {
        return Err(Error::WindowTooShort { needed: 10 * (n + 1), available: len });
    }
    let center = 0.5 * (phi.start() + phi.end());
    let half = 0.5 * (phi.end() - phi.start());
    if half <= 0.0 {
        return Err(Error::invalid("degenerate window"));
    }
    let cols: Vec<Vec<f64>> = (0..=n)
        .map(|k| phi.times().map(|t| ((t - center) / half).powi(k as i32)).collect())
        .collect();
    let rhs: Vec<Vec<Complex64>> = (0..phi.dim()).map(|c| phi.component(c)).collect();
    let (sols, condition) = lstsq_real(&cols, &rhs)?;

    // Expand Σ β_k ((t - c)/h)^k into monomials in t.
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); phi.dim()]; n + 1];
    for (c, beta) in sols.iter().enumerate() {
        for (k, &b) in beta.iter().enumerate() {
            let scale = b / half.powi(k as i32);
            let mut binom = 1.0;
            for i in 0..=k {
                // C(k,i) t^i (-c)^{k-i}
                coeffs[i][c] += scale * binom * (-center).powi((k - i) as i32);
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
        }
    }
    let poly = GroupPoly::new(phi.domain(), phi.dim(), coeffs)?;

    let resid = phi.map(|t, x| {
        let p = poly.eval(t);
        x.iter().zip(&p).map(|(a, b)| a - b).collect()
    })?;
    let rms_residual = (resid.raw().iter().map(|z| z.norm_sqr()).sum::<f64>() / len as f64).sqrt();
    let scaled = divide_by_weight(&resid, w)?;
    let est = maak_mean(&scaled, &[len / 2], tol)?;
    Ok(WMeanEstimate {
        poly,
        residual_defect: est.uniformity_defect,
        converged: est.uniformity_defect <= tol,
        tol,
        fit_diagnostics: FitDiagnostics { samples: len, condition, rms_residual },
    })
}

/// Whether `φ/w` has Maak mean zero; the defect is `sup_a |R_F(φ/w)(a)|` at `L = len/2`.
pub fn is_mean_zero_w_ergodic(phi: &Signal, w: &Weight, tol: f64) -> Result<(bool, f64)> {
    let scaled = divide_by_weight(phi, w)?;
    let l = scaled.len() / 2;
    if l == 0 {
        return Err(Error::WindowTooShort { needed: 2, available: scaled.len() });
    }
    let avgs = window_averages(&scaled, l);
    let defect = sup_distance(&avgs, &vec![Complex64::new(0.0, 0.0); scaled.dim()]);
    Ok((defect <= tol, defect))
}

/// Thresholds for judging decay of `S^m φ / (w w_m)` on a finite window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    /// Absolute ceiling for the tail statistic.
    pub abs_threshold: f64,
    /// The tail statistic may not exceed this multiple of the midpoint statistic.
    pub midpoint_factor: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig { abs_threshold: 1e-2, midpoint_factor: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub m: usize,
    pub tail_sup: f64,
    pub midpoint_sup: f64,
    pub threshold: f64,
    pub passes: bool,
}

pub fn iterated_sum_decay(phi: &Signal, w: &Weight, m: usize, tail_fraction: f64) -> Result<DecayReport> {
    iterated_sum_decay_with(phi, w, m, tail_fraction, DecayConfig::default())
}

/// Sup of `|S^m φ(t)| / (w(t)(1+|t|)^m)` over `|t| >= (1-f)T`, compared with the
/// same statistic over `(1-f)T/2 <= |t| <= T/2`, where `T` is the window radius.
pub fn iterated_sum_decay_with(
    phi: &Signal,
    w: &Weight,
    m: usize,
    tail_fraction: f64,
    cfg: DecayConfig,
) -> Result<DecayReport> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::invalid("tail fraction must lie in (0, 1)"));
    }
    if phi.len() <= m + 1 {
        return Err(Error::WindowTooShort { needed: m + 2, available: phi.len() });
    }
    let s = antiderivative(phi, m)?;
    let radius = phi.start().abs().max(phi.end().abs());
    let mut tail_sup: f64 = 0.0;
    let mut midpoint_sup: f64 = 0.0;
    for i in 0..s.len() {
        let t = s.time(i);
        let a = t.abs();
        let in_tail = a >= (1.0 - tail_fraction) * radius;
        let in_mid = a >= (1.0 - tail_fraction) * radius / 2.0 && a <= radius / 2.0;
        if !(in_tail || in_mid) {
            continue;
        }
        let g = norm(s.sample(i)) / (w.eval(t)? * (1.0 + a).powi(m as i32));
        if in_tail {
            tail_sup = tail_sup.max(g);
        }
        if in_mid {
            midpoint_sup = midpoint_sup.max(g);
        }
    }
    let threshold = cfg.abs_threshold.min(cfg.midpoint_factor * midpoint_sup);
    Ok(DecayReport { m, tail_sup, midpoint_sup, threshold, passes: tail_sup <= threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::difference;
    use crate::Domain;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Z: Domain = Domain::IntegerLine;

    fn zsig(lo: i64, hi: i64, f: impl Fn(f64) -> f64) -> Signal {
        Signal::from_real_fn(Z, lo as f64, 1.0, (hi - lo + 1) as usize, f).unwrap()
    }

    #[test]
    fn maak_examples() {
        let k = zsig(0, 299, |_| 5.0);
        let e = maak_mean(&k, &[100], 1e-12).unwrap();
        assert!((e.mean[0].re - 5.0).abs() < 1e-12);
        assert!(e.uniformity_defect < 1e-12 && e.converged);

        let c = zsig(0, 20_000, |t| 3.0 + (2.0 * t).cos());
        let e = maak_mean(&c, &[1000, 10_000], 1e-3).unwrap();
        assert!((e.mean[0].re - 3.0).abs() < 1e-3);
        assert!(e.converged);

        let alt = zsig(0, 4000, |t| if t as i64 % 2 == 0 { 1.0 } else { -1.0 });
        let e = maak_mean(&alt, &[2000], 1e-3).unwrap();
        assert!(e.mean[0].norm() < 1e-3);

        assert!(matches!(maak_mean(&k, &[200], 1e-3), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn w_mean_examples() {
        let w2 = Weight::poly(2, Z);
        let phi = zsig(-10_000, 10_000, |t| t * t + t.cos());
        let est = w_mean(&phi, &w2, 2, 1e-2).unwrap();
        let want = [0.0, 0.0, 1.0];
        for (k, c) in est.poly.coeffs().iter().enumerate() {
            assert!((c[0] - Complex64::new(want[k], 0.0)).norm() < 1e-3, "coefficient {k}: {:?}", c[0]);
        }
        assert!(est.converged);

        let w0 = Weight::poly(0, Z);
        let cos = zsig(-10_000, 10_000, f64::cos);
        let est = w_mean(&cos, &w0, 0, 1e-2).unwrap();
        assert!(est.poly.coeff_norm() < 1e-3);
        assert!(est.converged);

        let p = GroupPoly::real(Z, &[1.5, -2.0, 0.25]);
        let samp = Signal::from_fn(Z, -300.0, 1.0, 601, |t| p.eval(t)[0]).unwrap();
        let est = w_mean(&samp, &w2, 2, 1e-9).unwrap();
        for (a, b) in est.poly.coeffs().iter().zip(p.coeffs()) {
            assert!((a[0] - b[0]).norm() <= 1e-9);
        }

        assert!(matches!(w_mean(&zsig(0, 5, |t| t), &w0, 1, 1e-2), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn mean_zero_examples() {
        let w0 = Weight::poly(0, Z);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let psi: Vec<f64> = (0..4001).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let d = difference(&Signal::integer(-2000, &psi).unwrap(), 1.0).unwrap();
        assert!(is_mean_zero_w_ergodic(&d, &w0, 1e-2).unwrap().0);

        let (ok, defect) = is_mean_zero_w_ergodic(&zsig(-100, 100, |_| 1.0), &w0, 1e-2).unwrap();
        assert!(!ok);
        assert!((defect - 1.0).abs() < 1e-12);

        let irr = zsig(-5000, 5000, |t| (2f64.sqrt() * t).cos());
        assert!(is_mean_zero_w_ergodic(&irr, &w0, 1e-2).unwrap().0);
    }

    #[test]
    fn decay_examples() {
        let w0 = Weight::poly(0, Z);
        let cos = zsig(-10_000, 10_000, f64::cos);
        let r1 = iterated_sum_decay(&cos, &w0, 1, 0.2).unwrap();
        assert!(r1.tail_sup <= 1e-2 && r1.passes);
        let r2 = iterated_sum_decay(&cos, &w0, 2, 0.2).unwrap();
        assert!(r2.tail_sup <= 1e-2 && r2.passes);
        let ones = zsig(-10_000, 10_000, |_| 1.0);
        assert!(!iterated_sum_decay(&ones, &w0, 1, 0.2).unwrap().passes);
    }

    #[test]
    fn real_line_decay_uses_primitives() {
        let w0 = Weight::poly(0, Domain::RealLine);
        let phi = Signal::from_real_fn(Domain::RealLine, -500.0, 0.05, 20_001, f64::cos).unwrap();
        assert!(iterated_sum_decay(&phi, &w0, 1, 0.2).unwrap().passes);
    }

    #[test]
    fn decay_after_subtracting_w_mean() {
        // φ = 2t + sin t has w_1-mean 2t; Δ_h φ = 2h + bounded stays w-bounded and
        // (φ - p)/w decays along the tail.
        let w1 = Weight::poly(1, Z);
        let phi = zsig(-20_000, 20_000, |t| 2.0 * t + t.sin());
        let est = w_mean(&phi, &w1, 1, 1e-2).unwrap();
        let resid = phi.map(|t, x| vec![x[0] - est.poly.eval(t)[0]]).unwrap();
        let scaled = divide_by_weight(&resid, &w1).unwrap();
        let tail = scaled.slice(0, 4000).unwrap().sup_norm().max(scaled.slice(36_001, 40_001).unwrap().sup_norm());
        assert!(tail <= 1e-2);
    }

    fn bounded_signal(seed: u64, len: usize) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Signal::integer(-(len as i64 / 2), &v).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn differences_of_bounded_signals_are_mean_zero(seed in any::<u64>(), h in prop::sample::select(vec![1.0, 2.0, 5.0])) {
            let phi = bounded_signal(seed, 100_000);
            let d = difference(&phi, h).unwrap();
            prop_assert!(is_mean_zero_w_ergodic(&d, &Weight::poly(0, Z), 1e-2).unwrap().0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn maak_translation_invariant(a in -3.0f64..3.0, f in 0.2f64..3.0, h in 1i64..50) {
            let tol = 1e-2;
            let phi = zsig(0, 8000, |t| a + (f * t).cos());
            let m0 = maak_mean(&phi, &[4000], tol).unwrap();
            let m1 = maak_mean(&phi.translate(h as f64).unwrap(), &[3900], tol).unwrap();
            prop_assert!((m0.mean[0] - m1.mean[0]).norm() <= 2.0 * tol);
        }

        #[test]
        fn maak_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, f in 0.2f64..3.0) {
            let tol = 1e-2;
            let phi = zsig(0, 6000, |t| 1.0 + (f * t).cos());
            let psi = zsig(0, 6000, |t| -2.0 + (f * t).sin());
            let combo = zsig(0, 6000, |t| a * (1.0 + (f * t).cos()) + b * (-2.0 + (f * t).sin()));
            let (m1, m2, m3) = (
                maak_mean(&phi, &[3000], tol).unwrap(),
                maak_mean(&psi, &[3000], tol).unwrap(),
                maak_mean(&combo, &[3000], tol).unwrap(),
            );
            prop_assert!(m1.converged && m2.converged);
            prop_assert!((m3.mean[0] - (m1.mean[0] * a + m2.mean[0] * b)).norm() <= tol);
        }

        #[test]
        fn mean_of_long_difference_scales(c in -2.0f64..2.0, n in 1usize..6, h in 1usize..4) {
            // Δ_h φ has mean c·h for φ(t) = c t + cos t, so Δ_{nh} φ has mean n c h.
            let tol = 1e-2;
            let phi = zsig(0, 12_000, |t| c * t + t.cos());
            let d1 = difference(&phi, h as f64).unwrap();
            let dn = difference(&phi, (n * h) as f64).unwrap();
            let m1 = maak_mean(&d1, &[5000], tol).unwrap();
            let mn = maak_mean(&dn, &[5000], tol).unwrap();
            prop_assert!((mn.mean[0] - m1.mean[0] * n as f64).norm() <= n as f64 * tol);
        }
    }
}
