//! JSON interchange formats through the public API.

use harmonic_core::almostper::FreqGrid;
use harmonic_core::evolution::{resonance_set, EvolutionOp, RESONANCE_TOL};
use harmonic_core::{Complex64, Domain, GroupPoly, MatrixOp, ResonanceSet, Signal, TrigPoly, Weight, WeightForm};

#[test]
fn weight_json_forms() {
    let w = Weight::from_json(r#"{"form":"poly","N":2,"domain":"Z"}"#).unwrap();
    assert_eq!(w.form, WeightForm::PolynomialGrowth { n: 2 });
    assert_eq!(w.eval(3.0).unwrap(), 16.0);
    let p = Weight::from_json(
        r#"{"form":"product","left":{"form":"poly","N":1,"domain":"R"},"right":{"form":"sine_modulated","N":0,"domain":"R"},"domain":"R"}"#,
    )
    .unwrap();
    assert!((p.eval(1.0).unwrap() - 2.0 * (1.0 + 1f64.sin())).abs() < 1e-12);
    assert!(Weight::from_json(r#"{"form":"stretched_exp","p":1.5,"domain":"R"}"#).is_err());
    assert!(Weight::from_json(r#"{"form":"poly","N":2}"#).is_err());
    let back = Weight::from_json(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn signal_json_roundtrip_and_validation() {
    let s = Signal::from_fn(Domain::IntegerLine, -3.0, 1.0, 7, |t| Complex64::new(t, -t)).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: Signal = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
    // real entries may be given as plain numbers
    let r: Signal = serde_json::from_str(r#"{"domain":"R","start":0.5,"step":0.25,"dim":1,"values":[[1],[[2,1]]]}"#).unwrap();
    assert_eq!(r.sample(1), &[Complex64::new(2.0, 1.0)]);
    assert!(serde_json::from_str::<Signal>(r#"{"domain":"Z","start":0.5,"step":1,"dim":1,"values":[[1]]}"#).is_err());
    assert!(serde_json::from_str::<Signal>(r#"{"domain":"Z","start":0,"step":1,"dim":2,"values":[[1]]}"#).is_err());
}

#[test]
fn trigpoly_json_roundtrip() {
    let p = TrigPoly::new(
        Domain::RealLine,
        1,
        vec![(0.5, GroupPoly::real(Domain::RealLine, &[1.0, -2.0])), (-1.25, GroupPoly::real(Domain::RealLine, &[3.0]))],
    )
    .unwrap();
    let back: TrigPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
    let parsed: TrigPoly =
        serde_json::from_str(r#"{"domain":"Z","terms":[{"freq":7.0,"coeffs":[[1]]},{"freq":0.0,"coeffs":[[0]]}]}"#).unwrap();
    // 7 reduces into (-π, π] and the zero term is dropped
    assert_eq!(parsed.terms().len(), 1);
    assert!((parsed.frequencies()[0] - (7.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-12);
}

#[test]
fn operator_and_resonance_json() {
    let op: EvolutionOp = serde_json::from_str(r#"{"diff":{"coeffs":[-1,[0,2],1]}}"#).unwrap();
    let a: MatrixOp = serde_json::from_str(r#"{"matrix":[[2,-6],[3,-7]]}"#).unwrap();
    let r = resonance_set(&op, &a, RESONANCE_TOL).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: ResonanceSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert!(text.contains("RealFrequencies"));
    assert!(serde_json::from_str::<MatrixOp>(r#"{"matrix":[[1,2],[3]]}"#).is_err());
    assert!(serde_json::from_str::<EvolutionOp>(r#"{"recurrence":[{"b":1,"shift":1},{"b":2,"shift":1}]}"#).is_err());
}

#[test]
fn freq_grid_validation() {
    assert!(FreqGrid { lo: -1.0, hi: 1.0, step: 1e-3 }.validate().is_ok());
    assert!(FreqGrid { lo: 1.0, hi: -1.0, step: 1e-3 }.validate().is_err());
    assert!(FreqGrid { lo: -1.0, hi: 1.0, step: 0.0 }.validate().is_err());
}
