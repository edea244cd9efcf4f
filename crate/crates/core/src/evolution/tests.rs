use super::*;
use crate::spectrum::sp_of_trigpoly;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rec(pairs: &[(Complex64, i64)]) -> RecurrenceOp {
    RecurrenceOp::from_pairs(pairs).unwrap()
}

fn shift1() -> RecurrenceOp {
    rec(&[(c(1.0, 0.0), 1)])
}

fn two_by_two_diff_problem() -> (DiffOp, MatrixOp) {
    let b = DiffOp::new(vec![c(-1.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)]).unwrap();
    let a = MatrixOp::from_real_rows(&[vec![2.0, -6.0], vec![3.0, -7.0]]).unwrap();
    (b, a)
}

fn scalar_op(z: Complex64) -> MatrixOp {
    MatrixOp::new(CMatrix::diagonal(&[z])).unwrap()
}

#[test]
fn char_fn_recurrence_examples() {
    assert!((char_fn_recurrence(&shift1(), c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
    let delta = rec(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 0)]);
    assert_eq!(char_fn_recurrence(&delta, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    let b = rec(&[(c(1.0, 0.0), 2), (c(0.0, 2.0), 1), (c(-1.0, 0.0), 0)]);
    assert!((char_fn_recurrence(&b, c(1.0, 0.0)).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
    let th = 0.7;
    let z = Complex64::from_polar(1.0, th);
    let want = z * z + c(0.0, 2.0) * z - 1.0;
    assert!((char_fn_recurrence(&b, z).unwrap() - want).norm() < 1e-14);
    let back = rec(&[(c(1.0, 0.0), -1)]);
    assert!(char_fn_recurrence(&back, c(0.0, 0.0)).is_err());
}

#[test]
fn char_fn_diff_examples() {
    let (b, _) = two_by_two_diff_problem();
    assert!((char_fn_diff(&b, 1.0) - c(-4.0, 0.0)).norm() < 1e-15);
    assert!((char_fn_diff(&b, 0.0) - c(-1.0, 0.0)).norm() < 1e-15);
    let d = DiffOp::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    for s in [-2.5, 0.0, 3.0] {
        assert_eq!(char_fn_diff(&d, s), c(0.0, s));
    }
}

#[test]
fn operator_validation() {
    assert!(RecurrenceOp::new(vec![]).is_err());
    assert!(RecurrenceOp::from_pairs(&[(c(1.0, 0.0), 1), (c(2.0, 0.0), 1)]).is_err());
    assert!(DiffOp::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    assert!(MatrixOp::new(CMatrix::zeros(65)).is_err());
}

#[test]
fn matrix_spectrum_examples() {
    let a = CMatrix::from_real_rows(&[vec![2.0, -6.0], vec![3.0, -7.0]]).unwrap();
    let sp = matrix_spectrum(&a).unwrap();
    assert_eq!(sp.len(), 2);
    assert!((sp[0].value - c(-4.0, 0.0)).norm() < 1e-12);
    assert!((sp[1].value - c(-1.0, 0.0)).norm() < 1e-12);
    for m in [CMatrix::identity(3), CMatrix::jordan_block(3, c(1.0, 0.0))] {
        let sp = matrix_spectrum(&m).unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].multiplicity, 3);
        assert!((sp[0].value - c(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn matrix_op_diagonalizability() {
    let j = MatrixOp::new(CMatrix::jordan_block(3, c(1.0, 0.0))).unwrap();
    assert!(!j.is_diagonalizable());
    assert_eq!(j.eigenvectors()[0].len(), 1);
    let (_, a) = two_by_two_diff_problem();
    assert!(a.is_diagonalizable());
    let total: usize = a.spectrum().iter().map(|e| e.multiplicity).sum();
    assert_eq!(total, 2);
    assert!(a.spectral_condition_diag().unwrap() >= 1.0);
}

#[test]
fn matrix_op_json_roundtrip() {
    let (_, a) = two_by_two_diff_problem();
    let s = serde_json::to_string(&a).unwrap();
    let back: MatrixOp = serde_json::from_str(&s).unwrap();
    assert_eq!(back.matrix(), a.matrix());
    let raw: MatrixOp = serde_json::from_str(r#"{"matrix":[[2,-6],[3,-7]]}"#).unwrap();
    assert_eq!(raw.matrix(), a.matrix());
}

#[test]
fn operator_json_forms() {
    let op: EvolutionOp = serde_json::from_str(r#"{"recurrence":[{"b":1,"shift":1},{"b":[-1,0],"shift":0}]}"#).unwrap();
    assert!(matches!(op, EvolutionOp::Recurrence(ref r) if r.terms().len() == 2));
    let op: EvolutionOp = serde_json::from_str(r#"{"diff":{"coeffs":[-1,[0,2],1]}}"#).unwrap();
    assert_eq!(op, EvolutionOp::Diff(two_by_two_diff_problem().0));
    let s = serde_json::to_string(&op).unwrap();
    assert_eq!(serde_json::from_str::<EvolutionOp>(&s).unwrap(), op);
    assert!(serde_json::from_str::<EvolutionOp>(r#"{"diff":{"coeffs":[1,0]}}"#).is_err());
}

#[test]
fn resonance_recurrence_examples() {
    let r = resonance_set_recurrence(&shift1(), &scalar_op(c(1.0, 0.0)), RESONANCE_TOL).unwrap();
    assert_eq!(r.kind, ResonanceKind::UnitCircleAngles);
    assert_eq!(r.points.len(), 1);
    assert!(r.points[0].point.abs() < 1e-15);
    let r = resonance_set_recurrence(&shift1(), &scalar_op(c(0.0, 1.0)), RESONANCE_TOL).unwrap();
    assert!((r.values()[0] - PI / 2.0).abs() < 1e-15);
    let r = resonance_set_recurrence(&shift1(), &scalar_op(c(2.0, 0.0)), RESONANCE_TOL).unwrap();
    assert!(r.points.is_empty());
    let constant = rec(&[(c(3.0, 0.0), 0)]);
    assert!(matches!(
        resonance_set_recurrence(&constant, &scalar_op(c(1.0, 0.0)), RESONANCE_TOL),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn resonance_with_negative_shifts() {
    // ζ + ζ^{-1} = 2cos θ; λ = 1 gives θ = ±π/3
    let b = rec(&[(c(1.0, 0.0), 1), (c(1.0, 0.0), -1)]);
    let r = resonance_set_recurrence(&b, &scalar_op(c(1.0, 0.0)), RESONANCE_TOL).unwrap();
    let v = r.values();
    assert_eq!(v.len(), 2);
    assert!((v[0] + PI / 3.0).abs() < 1e-12 && (v[1] - PI / 3.0).abs() < 1e-12);
    // λ = 2 gives the double root ζ = 1
    let r = resonance_set_recurrence(&b, &scalar_op(c(2.0, 0.0)), RESONANCE_TOL).unwrap();
    assert_eq!(r.points.len(), 1);
    assert_eq!(r.points[0].multiplicity, 2);
}

#[test]
fn resonance_diff_examples() {
    let (b, a) = two_by_two_diff_problem();
    let r = resonance_set_diff(&b, &a, RESONANCE_TOL).unwrap();
    assert_eq!(r.kind, ResonanceKind::RealFrequencies);
    let v = r.values();
    let want = [-3.0, -2.0, 0.0, 1.0];
    assert_eq!(v.len(), 4);
    for (x, y) in v.iter().zip(want) {
        assert!((x - y).abs() < 1e-9, "{v:?}");
    }
    assert!(r.points.iter().all(|p| p.residual < 1e-12 && p.multiplicity == 1));
    let d = DiffOp::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let r = resonance_set_diff(&d, &scalar_op(c(0.0, 0.0)), RESONANCE_TOL).unwrap();
    assert_eq!(r.values(), vec![0.0]);
    let r = resonance_set_diff(&d, &scalar_op(c(1.0, 0.0)), RESONANCE_TOL).unwrap();
    assert!(r.points.is_empty());
}

#[test]
fn solve_recurrence_examples() {
    let psi0 = Signal::integer(0, &vec![0.0; 20]).unwrap();
    let init = Signal::integer(0, &[1.0]).unwrap();
    let phi = solve_recurrence(&shift1(), &scalar_op(c(0.5, 0.0)), &psi0, &init).unwrap();
    assert_eq!(phi.len(), 21);
    for i in 0..phi.len() {
        assert!((phi.scalar(i).re - 0.5f64.powi(i as i32)).abs() < 1e-15);
    }

    let ones = Signal::integer(0, &vec![1.0; 30]).unwrap();
    let zero = Signal::integer(0, &[0.0]).unwrap();
    let phi = solve_recurrence(&shift1(), &scalar_op(c(1.0, 0.0)), &ones, &zero).unwrap();
    for i in 0..phi.len() {
        assert_eq!(phi.scalar(i).re, i as f64);
    }

    let delta = rec(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 0)]);
    let cosn = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 200, f64::cos).unwrap();
    let phi = solve_recurrence(&delta, &scalar_op(c(0.0, 0.0)), &cosn, &zero).unwrap();
    let s = crate::polycalc::sum_s(&cosn).unwrap();
    for i in 0..s.len() {
        let t = s.time(i);
        assert!((phi.at(t).unwrap()[0] - s.scalar(i)).norm() < 1e-12);
    }
    assert!(phi.sup_norm() < 2.0);
}

#[test]
fn solve_recurrence_errors() {
    let psi = Signal::integer(0, &[0.0; 5]).unwrap();
    let a = scalar_op(c(1.0, 0.0));
    assert!(solve_recurrence(&shift1(), &a, &psi, &Signal::integer(0, &[1.0, 2.0]).unwrap()).is_err());
    let zero_lead = rec(&[(c(0.0, 0.0), 1), (c(1.0, 0.0), 0)]);
    assert!(solve_recurrence(&zero_lead, &a, &psi, &Signal::integer(0, &[1.0]).unwrap()).is_err());
    let backward = rec(&[(c(1.0, 0.0), -1)]);
    assert!(solve_recurrence(&backward, &a, &psi, &Signal::integer(0, &[1.0]).unwrap()).is_err());
}

#[test]
fn homogeneous_two_by_two_diff() {
    let (b, a) = two_by_two_diff_problem();
    let op = EvolutionOp::Diff(b);
    let sols = homogeneous_solutions(&op, &a, RESONANCE_TOL).unwrap();
    assert_eq!(sols.len(), 4);
    for s in &sols {
        assert!(s.residual <= 1e-9, "residual {}", s.residual);
        let v = &s.eigenvector;
        let want = if (s.lambda - c(-1.0, 0.0)).norm() < 1e-9 { [2.0, 1.0] } else { [1.0, 1.0] };
        assert!((v[0] - c(want[0], 0.0)).norm() < 1e-9 && (v[1] - c(want[1], 0.0)).norm() < 1e-9);
        let paired = [(0.0, -1.0), (-2.0, -1.0), (1.0, -4.0), (-3.0, -4.0)];
        assert!(paired.iter().any(|&(f, l)| (s.frequency - f).abs() < 1e-9 && (s.lambda.re - l).abs() < 1e-9));
    }
}

#[test]
fn homogeneous_trivial_cases() {
    let d = DiffOp::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let sols = homogeneous_solutions(&EvolutionOp::Diff(d), &scalar_op(c(0.0, 0.0)), RESONANCE_TOL).unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0].frequency, 0.0);
    assert_eq!(sols[0].solution.eval(3.7), vec![c(1.0, 0.0)]);

    let op = EvolutionOp::Recurrence(shift1());
    let sols = homogeneous_solutions(&op, &scalar_op(c(0.0, 1.0)), RESONANCE_TOL).unwrap();
    assert_eq!(sols.len(), 1);
    for n in 0..8 {
        let want = c(0.0, 1.0).powi(n);
        assert!((sols[0].solution.eval(n as f64)[0] - want).norm() < 1e-12);
    }
}

#[test]
fn homogeneous_declines_defective_and_multiple() {
    let d = DiffOp::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let j = MatrixOp::new(CMatrix::jordan_block(2, c(0.0, 0.0))).unwrap();
    assert!(matches!(homogeneous_solutions(&EvolutionOp::Diff(d), &j, RESONANCE_TOL), Err(Error::Declined(_))));
    let b = rec(&[(c(1.0, 0.0), 1), (c(1.0, 0.0), -1)]);
    assert!(matches!(
        homogeneous_solutions(&EvolutionOp::Recurrence(b), &scalar_op(c(2.0, 0.0)), RESONANCE_TOL),
        Err(Error::Declined(_))
    ));
}

#[test]
fn gelfand_hille_examples() {
    let x = MatrixOp::new(CMatrix::jordan_block(3, c(1.0, 0.0))).unwrap();
    let r = gelfand_hille_check(&x, 2, 10_000).unwrap();
    assert!(r.dominated && r.spectrum_is_one && r.nilpotent && r.sharp && r.consistent);
    assert_eq!(r.nilpotency_defect, 0.0);
    assert_eq!(r.curve.len(), 20_001);

    let x = MatrixOp::new(CMatrix::identity(2)).unwrap();
    let r = gelfand_hille_check(&x, 0, 1000).unwrap();
    assert!(r.dominated && r.spectrum_is_one && r.nilpotent);
    assert!(r.curve.iter().all(|p| (p.1 - 1.0).abs() < 1e-12));

    let x = MatrixOp::new(CMatrix::jordan_block(2, c(1.001, 0.0))).unwrap();
    let r = gelfand_hille_check(&x, 1, 10_000).unwrap();
    assert!(!r.dominated && !r.spectrum_is_one && r.consistent);

    assert!(gelfand_hille_check(&x, 1, 999).is_err());
}

#[test]
fn gelfand_hille_sharpness() {
    for n in 0..4usize {
        let x = MatrixOp::new(CMatrix::jordan_block(n + 1, c(1.0, 0.0))).unwrap();
        let r = gelfand_hille_check(&x, n, 1000).unwrap();
        assert!(r.nilpotent && r.sharp, "N = {n}");
        if n > 0 {
            let lower = gelfand_hille_check(&x, n - 1, 1000).unwrap();
            assert!(!lower.nilpotent);
        }
    }
}

#[test]
fn kt_examples() {
    let ones = vec![1.0; 10_002];
    let x = MatrixOp::new(CMatrix::diagonal(&[Complex64::from_polar(0.9, PI / 3.0), c(0.5, 0.0)])).unwrap();
    let r = kt_check(&x, &ones, 10_000).unwrap();
    assert_eq!(r.case, KtCase::Empty);
    assert_eq!(r.verdict, KtVerdict::DecayConfirmed);
    for n in [10usize, 100, 400] {
        assert!(r.power_curve[n] <= 0.9f64.powi(n as i32) * (1.0 + 1e-12));
    }
    assert!(settles_below(&r.power_curve, 1e-6).unwrap() <= 400);

    let x = MatrixOp::new(CMatrix::diagonal(&[c(1.0, 0.0), c(0.5, 0.0)])).unwrap();
    let r = kt_check(&x, &ones, 10_000).unwrap();
    assert_eq!(r.case, KtCase::One);
    assert_eq!(r.verdict, KtVerdict::DecayConfirmed);
    for n in 0..50 {
        assert!((r.difference_curve[n] - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
    }
    assert!(settles_below(&r.difference_curve, 1e-6).unwrap() <= 25);

    let x = MatrixOp::new(CMatrix::diagonal(&[Complex64::from_polar(1.0, PI / 4.0)])).unwrap();
    let r = kt_check(&x, &ones, 1000).unwrap();
    assert_eq!(r.case, KtCase::Other);
    assert_eq!(r.verdict, KtVerdict::NotAsserted);
    let gap = (Complex64::from_polar(1.0, PI / 4.0) - 1.0).norm();
    assert!((gap - 0.765).abs() < 1e-3);
    assert!(r.difference_curve.iter().all(|&d| (d - gap).abs() < 1e-9));
}

#[test]
fn kt_errors_and_domination() {
    let x = MatrixOp::new(CMatrix::diagonal(&[c(0.5, 0.0)])).unwrap();
    let geometric: Vec<f64> = (0..1002).map(|n| 1.1f64.powi(n)).collect();
    assert!(kt_check(&x, &geometric, 1000).is_err());
    assert!(kt_check(&x, &[1.0; 10], 1000).is_err());
    let grow = MatrixOp::new(CMatrix::diagonal(&[c(1.01, 0.0)])).unwrap();
    let r = kt_check(&grow, &vec![1.0; 1002], 1000).unwrap();
    assert_eq!(r.verdict, KtVerdict::NotDominated);
    // polynomial weight dominates the Jordan block J_2(1)
    let j = MatrixOp::new(CMatrix::jordan_block(2, c(1.0, 0.0))).unwrap();
    let a: Vec<f64> = (0..2002).map(|n| 1.0 + n as f64).collect();
    let r = kt_check(&j, &a, 2000).unwrap();
    assert!(r.dominated);
    assert_eq!(r.case, KtCase::One);
}

#[test]
fn kt_case_b_decay_rate() {
    for r in [0.5, 0.8, 0.95] {
        let x = MatrixOp::new(CMatrix::diagonal(&[c(1.0, 0.0), c(r, 0.0)])).unwrap();
        let rep = kt_check(&x, &vec![1.0; 1002], 1000).unwrap();
        let d = &rep.difference_curve;
        for n in 100..300 {
            if d[n] > 1e-280 {
                assert!((d[n + 1] / d[n] / r - 1.0).abs() < 1e-2);
            }
        }
    }
}

#[test]
fn group_nilpotency_examples() {
    let mut m = CMatrix::jordan_block(3, c(0.0, 0.0));
    m = m.add(&CMatrix::identity(3).scale(c(0.0, 2.0)));
    let a = MatrixOp::new(m).unwrap();
    let r = group_nilpotency_check(&a, 2, 2.0, 1000.0).unwrap();
    assert!(r.dominated && r.spectrum_is_is && r.nilpotent && r.consistent);
    for &(t, v) in &r.curve {
        assert!(v <= 1.01 * (1.0 + t.abs() + t * t / 2.0), "t = {t}");
    }

    let a = MatrixOp::new(CMatrix::identity(2).scale(c(0.0, 1.5))).unwrap();
    let r = group_nilpotency_check(&a, 0, 1.5, 100.0).unwrap();
    assert!(r.dominated && r.spectrum_is_is && r.nilpotent);
    assert!(r.curve.iter().all(|p| (p.1 - 1.0).abs() < 1e-9));

    let a = MatrixOp::new(CMatrix::diagonal(&[c(0.0, 2.0), c(0.0, 3.0)])).unwrap();
    let r = group_nilpotency_check(&a, 0, 2.0, 100.0).unwrap();
    assert!(r.dominated && !r.spectrum_is_is && !r.nilpotent && r.consistent);
}

#[test]
fn group_overflow_is_domination_failure() {
    let a = MatrixOp::new(CMatrix::diagonal(&[c(5.0, 0.0)])).unwrap();
    let r = group_nilpotency_check(&a, 1, 0.0, 1000.0).unwrap();
    assert!(!r.dominated);
    assert!(r.consistent);
}

fn arb_c() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn arb_rec() -> impl Strategy<Value = RecurrenceOp> {
    prop::collection::btree_map(-2i64..=2, arb_c(), 1..=4).prop_filter_map("nonconstant", |m| {
        if m.keys().all(|&k| k == 0) {
            return None;
        }
        RecurrenceOp::from_pairs(&m.into_iter().map(|(k, v)| (v, k)).collect::<Vec<_>>()).ok()
    })
}

/// A matrix with a planted eigenvalue `p_B(e^{iθ0})` so resonances exist.
fn planted(b: &RecurrenceOp, theta0: f64, extra: Vec<Complex64>) -> MatrixOp {
    let mut diag = vec![char_fn_recurrence(b, Complex64::from_polar(1.0, theta0)).unwrap()];
    diag.extend(extra);
    MatrixOp::new(CMatrix::diagonal(&diag)).unwrap()
}

fn min_residual(b: &RecurrenceOp, a: &MatrixOp, theta: f64) -> f64 {
    let v = char_fn_recurrence(b, Complex64::from_polar(1.0, theta)).unwrap();
    a.spectrum().iter().map(|e| (v - e.value).norm()).fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn resonance_oracle(b in arb_rec(), theta0 in -3.1..3.1f64, extra in prop::collection::vec(arb_c(), 0..3)) {
        let a = planted(&b, theta0, extra);
        let r = resonance_set_recurrence(&b, &a, RESONANCE_TOL).unwrap();
        for p in &r.points {
            prop_assert!(p.residual <= 1e-7);
        }
        prop_assert!(r.contains(theta0, 1e-5), "planted {theta0} not in {:?}", r.values());
        // dense scan: any grid point with tiny residual sits next to a returned point
        let n = 20_000;
        for k in 0..n {
            let th = -PI + 2.0 * PI * k as f64 / n as f64;
            if min_residual(&b, &a, th) <= 1e-7 {
                prop_assert!(r.contains(th, 2.0 * PI / n as f64));
            }
        }
    }

    #[test]
    fn diff_resonance_oracle(coeffs in prop::collection::vec(arb_c(), 2..5), s0 in -3.0..3.0f64) {
        prop_assume!(coeffs.last().unwrap().norm() > 0.1);
        let b = DiffOp::new(coeffs).unwrap();
        let a = MatrixOp::new(CMatrix::diagonal(&[char_fn_diff(&b, s0)])).unwrap();
        let r = resonance_set_diff(&b, &a, RESONANCE_TOL).unwrap();
        prop_assert!(r.contains(s0, 1e-5));
        for p in &r.points {
            prop_assert!(p.residual <= 1e-7);
        }
    }

    #[test]
    fn homogeneous_spectra_inside_resonance(b in arb_rec(), theta0 in -3.1..3.1f64, extra in prop::collection::vec(arb_c(), 0..2)) {
        let a = planted(&b, theta0, extra);
        let op = EvolutionOp::Recurrence(b);
        let res = resonance_set(&op, &a, RESONANCE_TOL).unwrap();
        if let Ok(sols) = homogeneous_solutions(&op, &a, RESONANCE_TOL) {
            for s in sols {
                for f in sp_of_trigpoly(&s.solution) {
                    prop_assert!(res.values().contains(&f));
                }
                prop_assert!(s.residual <= 1e-7 * (1.0 + a.matrix().norm2()));
            }
        }
    }

    #[test]
    fn solver_residual(
        b in arb_rec(),
        diag in prop::collection::vec(-1.0..1.0f64, 1..4),
        seed in prop::collection::vec(-1.0..1.0f64, 40),
    ) {
        let lead = b.terms().last().unwrap();
        prop_assume!(lead.shift >= 1 && lead.b.norm() > 0.5);
        let d = diag.len();
        let a = MatrixOp::new(CMatrix::diagonal(&diag.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())).unwrap();
        let len = 30;
        let psi = Signal::from_vec_fn(Domain::IntegerLine, 0.0, 1.0, len, d, |t| {
            (0..d).map(|j| c(seed[(t as usize + j) % 40], 0.0)).collect()
        }).unwrap();
        let lo = b.min_shift().min(0);
        let need = (b.max_shift() - lo) as usize;
        let init = Signal::from_vec_fn(Domain::IntegerLine, lo as f64, 1.0, need, d, |_| vec![c(1.0, 0.0); d]).unwrap();
        let phi = solve_recurrence(&b, &a, &psi, &init).unwrap();
        let res = recurrence_residual(&b, &a, &phi, &psi).unwrap();
        let scale = phi.sup_norm().max(1.0) * (1.0 + b.terms().iter().map(|t| t.b.norm()).sum::<f64>());
        prop_assert!(res <= 1e-10 * scale, "residual {res} scale {scale}");
    }
}
