//! Polynomials and signals on `Z` and `R`, with the difference operators
//! `Δ_h`, the discrete sums `S^m`, the primitives `P^m`, the extension of
//! polynomials from `Z_+` to `Z`, and exact coefficient identities for
//! expanding `S^m(t^N φ)`.

mod lemma76;
mod poly;
mod signal;

pub use lemma76::{lemma76_a, lemma76_identity, Lemma76Branch, Lemma76Identity};
pub use poly::GroupPoly;
pub use signal::Signal;
pub(crate) use signal::norm;

use crate::domain::Domain;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Objects supporting `Δ_h φ = φ_h − φ`.
pub trait Difference: Sized {
    fn difference(&self, h: f64) -> Result<Self>;
}

impl Difference for GroupPoly {
    fn difference(&self, h: f64) -> Result<Self> {
        if self.domain() == Domain::IntegerLine && h.fract() != 0.0 {
            return Err(Error::NotOnLattice { h, step: 1.0 });
        }
        Ok(self.difference_exact(h))
    }
}

impl Difference for Signal {
    /// The window loses `|h|/step` samples: at the end for `h > 0`, at the start for `h < 0`.
    fn difference(&self, h: f64) -> Result<Self> {
        let shifted = self.translate(h)?;
        shifted.sub(self)
    }
}

pub fn difference<T: Difference>(x: &T, h: f64) -> Result<T> {
    x.difference(h)
}

pub fn iterated_difference<T: Difference + Clone>(x: &T, ts: &[f64]) -> Result<T> {
    ts.iter().try_fold(x.clone(), |acc, &h| acc.difference(h))
}

/// Smallest `n <= n_max` with `sup|Δ_h^{n+1} φ| <= tol * sup|φ|`.
///
/// Degrees whose `n+1` differences would exhaust the window are not tested.
pub fn degree_test(phi: &Signal, h: f64, n_max: usize, tol: f64) -> Result<Option<usize>> {
    let k = phi.lattice_steps(h)?.unsigned_abs() as usize;
    if k == 0 {
        return Err(Error::invalid("degree test needs a nonzero shift"));
    }
    if phi.len() <= n_max * k {
        return Err(Error::WindowTooShort { needed: n_max * k + 1, available: phi.len() });
    }
    let scale = phi.sup_norm();
    if scale == 0.0 {
        return Ok(Some(0));
    }
    let mut d = phi.clone();
    for n in 0..=n_max {
        if d.len() <= k {
            return Ok(None);
        }
        d = d.difference(h)?;
        if d.sup_norm() <= tol * scale {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Value at `t` of the unique polynomial extension of `q` from `0..L` to `Z`,
/// using `t = u - v` with `u = 0`, `v = -t`.
pub fn extend_from_semigroup(q: &Signal, n: usize, t: i64) -> Result<Vec<Complex64>> {
    if t >= 0 {
        if q.start() != 0.0 || q.domain() != Domain::IntegerLine {
            return Err(Error::invalid("semigroup window must be an integer window starting at 0"));
        }
        return q
            .at(t as f64)
            .map(<[Complex64]>::to_vec)
            .ok_or(Error::WindowTooShort { needed: t as usize + 1, available: q.len() });
    }
    extend_from_semigroup_with(q, n, 0, -t)
}

/// `p(u - v) = Σ_{j<=n} (-1)^j Δ_v^j q(u)`; requires `u + n v <= L`.
pub fn extend_from_semigroup_with(q: &Signal, n: usize, u: i64, v: i64) -> Result<Vec<Complex64>> {
    if q.domain() != Domain::IntegerLine || q.start() != 0.0 {
        return Err(Error::invalid("semigroup window must be an integer window starting at 0"));
    }
    if u < 0 || v < 0 {
        return Err(Error::invalid("decomposition needs u, v >= 0"));
    }
    let reach = u as usize + n * v as usize;
    if reach >= q.len() {
        return Err(Error::WindowTooShort { needed: reach + 1, available: q.len() });
    }
    let dim = q.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..=n {
        // Δ_v^j q(u) = Σ_i (-1)^{j-i} C(j,i) q(u + i v)
        let mut binom = 1.0;
        for i in 0..=j {
            // (-1)^j (-1)^{j-i} = (-1)^i
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            let sample = q.sample(u as usize + i * v as usize);
            for (o, z) in out.iter_mut().zip(sample) {
                *o += z * (s * binom);
            }
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    Ok(out)
}

fn origin_index(phi: &Signal) -> Result<usize> {
    phi.index_of(0.0).ok_or(Error::OriginNotInWindow)
}

/// Neumaier-compensated running accumulator.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: Complex64,
    comp: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        self.sum = Complex64::new(neumaier(&mut self.comp.re, self.sum.re, x.re), neumaier(&mut self.comp.im, self.sum.im, x.im));
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(c: &mut f64, s: f64, x: f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}

/// Shared cumulative engine: `out[i0] = 0`, forward increments `inc(i-1, i)`
/// and backward decrements `inc(i, i+1)`.
fn cumulative(phi: &Signal, inc: impl Fn(&[Complex64], &[Complex64]) -> Vec<Complex64>) -> Result<Signal> {
    let i0 = origin_index(phi)?;
    let (n, dim) = (phi.len(), phi.dim());
    let mut values = vec![Complex64::new(0.0, 0.0); n * dim];
    let mut acc = vec![Compensated::default(); dim];
    for i in i0 + 1..n {
        for (c, d) in inc(phi.sample(i - 1), phi.sample(i)).into_iter().enumerate() {
            acc[c].add(d);
            values[i * dim + c] = acc[c].value();
        }
    }
    let mut acc = vec![Compensated::default(); dim];
    for i in (0..i0).rev() {
        for (c, d) in inc(phi.sample(i), phi.sample(i + 1)).into_iter().enumerate() {
            acc[c].add(-d);
            values[i * dim + c] = acc[c].value();
        }
    }
    Signal::new(phi.domain(), phi.start(), phi.step(), dim, values)
}

/// `Sφ(t) = Σ_{k<t} φ(k)` for `t > 0` and `-Σ_{t<=k<0} φ(k)` for `t < 0`.
pub fn sum_s(phi: &Signal) -> Result<Signal> {
    if phi.domain() != Domain::IntegerLine {
        return Err(Error::invalid("discrete sums are defined on the integer line"));
    }
    cumulative(phi, |prev, _| prev.to_vec())
}

/// `Pφ(t) = ∫_0^t φ` by the composite trapezoid rule.
pub fn primitive_p(phi: &Signal) -> Result<Signal> {
    if phi.domain() != Domain::RealLine {
        return Err(Error::invalid("primitives are defined on the real line"));
    }
    let half = 0.5 * phi.step();
    cumulative(phi, |a, b| a.iter().zip(b).map(|(x, y)| (x + y) * half).collect())
}

pub fn iterated_sum(phi: &Signal, m: usize) -> Result<Signal> {
    (0..m).try_fold(phi.clone(), |acc, _| sum_s(&acc))
}

pub fn iterated_primitive(phi: &Signal, m: usize) -> Result<Signal> {
    (0..m).try_fold(phi.clone(), |acc, _| primitive_p(&acc))
}

/// `S` on `Z`, `P` on `R`.
pub fn antiderivative(phi: &Signal, m: usize) -> Result<Signal> {
    match phi.domain() {
        Domain::IntegerLine => iterated_sum(phi, m),
        Domain::RealLine => iterated_primitive(phi, m),
    }
}

/// Both sides of the expansion of `S^m(t^N φ)`.
#[derive(Debug, Clone)]
pub struct SumIdentity {
    pub lhs: Signal,
    pub rhs: Signal,
    pub maxerr: f64,
}

/// `R(m,0) = S^m φ`, `R(m,N+1) = t R(m,N) - m R(m+1,N)(· + 1)`.
fn expansion(phi: &Signal, n: usize, m: usize) -> Result<Signal> {
    if n == 0 {
        return iterated_sum(phi, m);
    }
    let a = expansion(phi, n - 1, m)?.scale_by(|t| Complex64::new(t, 0.0));
    let b = expansion(phi, n - 1, m + 1)?.translate(1.0)?;
    a.zip_with(&b, |x, y| x - y * m as f64)
}

pub fn expand_sum_identity(phi: &Signal, n: usize, m: usize) -> Result<SumIdentity> {
    if phi.domain() != Domain::IntegerLine {
        return Err(Error::invalid("the sum expansion lives on the integer line"));
    }
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    origin_index(phi)?;
    if phi.len() <= n + 1 {
        return Err(Error::WindowTooShort { needed: n + 2, available: phi.len() });
    }
    let weighted = phi.scale_by(|t| Complex64::new(t.powi(n as i32), 0.0));
    let lhs_full = iterated_sum(&weighted, m)?;
    let rhs = expansion(phi, n, m)?;
    let diff = lhs_full.sub(&rhs)?;
    let lhs = lhs_full.slice(0, rhs.len())?;
    Ok(SumIdentity { lhs, rhs, maxerr: diff.sup_norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn poly_difference_examples() {
        let p = GroupPoly::real(Domain::IntegerLine, &[0.0, 0.0, 1.0]);
        assert_eq!(difference(&p, 1.0).unwrap(), GroupPoly::real(Domain::IntegerLine, &[1.0, 2.0]));
        let k = GroupPoly::real(Domain::RealLine, &[3.5]);
        assert!(difference(&k, 0.7).unwrap().is_zero());
        assert!(difference(&p, 0.5).is_err());
    }

    #[test]
    fn signal_difference_of_powers_of_two() {
        let phi = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 11, |t| 2f64.powf(t)).unwrap();
        let d = difference(&phi, 1.0).unwrap();
        assert_eq!(d.len(), 10);
        assert_eq!(d, phi.slice(0, 10).unwrap());
    }

    #[test]
    fn signal_difference_negative_shift_and_lattice() {
        let phi = Signal::from_real_fn(Domain::RealLine, 0.0, 0.5, 9, |t| t * t).unwrap();
        let d = difference(&phi, -1.0).unwrap();
        assert_eq!(d.start(), 1.0);
        assert_eq!(d.len(), 7);
        assert!((d.scalar(0).re - (0.0 - 1.0)).abs() < 1e-15);
        assert!(matches!(difference(&phi, 0.3), Err(Error::NotOnLattice { .. })));
    }

    #[test]
    fn iterated_difference_examples() {
        let sq = GroupPoly::real(Domain::IntegerLine, &[0.0, 0.0, 1.0]);
        assert!(iterated_difference(&sq, &[1.0, 1.0, 1.0]).unwrap().is_zero());
        let cube = GroupPoly::real(Domain::IntegerLine, &[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            iterated_difference(&cube, &[1.0, 1.0, 1.0]).unwrap(),
            GroupPoly::real(Domain::IntegerLine, &[6.0])
        );
        assert_eq!(iterated_difference(&cube, &[]).unwrap(), cube);
        let short = Signal::integer(0, &[1.0, 2.0]).unwrap();
        assert!(matches!(
            iterated_difference(&short, &[1.0, 1.0]),
            Err(Error::WindowTooShort { .. })
        ));
    }

    #[test]
    fn degree_test_examples() {
        let cube = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 101, |t| t.powi(3)).unwrap();
        assert_eq!(degree_test(&cube, 1.0, 5, 1e-9).unwrap(), Some(3));
        let cos = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 101, f64::cos).unwrap();
        assert_eq!(degree_test(&cos, 1.0, 5, 1e-9).unwrap(), None);
        let zero = Signal::integer(0, &[0.0; 20]).unwrap();
        assert_eq!(degree_test(&zero, 1.0, 5, 1e-9).unwrap(), Some(0));
        assert!(degree_test(&Signal::integer(0, &[1.0; 3]).unwrap(), 1.0, 5, 1e-9).is_err());
    }

    #[test]
    fn extension_examples() {
        let sq = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 21, |t| t * t).unwrap();
        assert_eq!(extend_from_semigroup(&sq, 2, -2).unwrap(), vec![c(4.0)]);
        let cub = Signal::from_real_fn(Domain::IntegerLine, 0.0, 1.0, 31, |t| t.powi(3) - t).unwrap();
        assert_eq!(extend_from_semigroup(&cub, 3, -3).unwrap(), vec![c(-24.0)]);
        let k = Signal::integer(0, &[7.0; 4]).unwrap();
        assert_eq!(extend_from_semigroup(&k, 0, -5).unwrap(), vec![c(7.0)]);
        assert!(extend_from_semigroup(&sq, 2, -11).is_err());
    }

    #[test]
    fn sum_and_primitive_examples() {
        let ones = Signal::integer(-5, &[1.0; 11]).unwrap();
        let s = sum_s(&ones).unwrap();
        assert_eq!(s.at(3.0).unwrap()[0], c(3.0));
        assert_eq!(s.at(0.0).unwrap()[0], c(0.0));
        let ramp = Signal::from_real_fn(Domain::IntegerLine, -5.0, 1.0, 11, |t| t).unwrap();
        assert_eq!(sum_s(&ramp).unwrap().at(-2.0).unwrap()[0], c(3.0));

        let lin = Signal::from_real_fn(Domain::RealLine, 0.0, 1e-3, 1001, |t| 2.0 * t).unwrap();
        assert!((primitive_p(&lin).unwrap().at(1.0).unwrap()[0].re - 1.0).abs() < 1e-6);

        let off = Signal::integer(1, &[1.0; 4]).unwrap();
        assert!(matches!(sum_s(&off), Err(Error::OriginNotInWindow)));
    }

    #[test]
    fn iterated_examples() {
        let ones = Signal::integer(-10, &[1.0; 31]).unwrap();
        let s2 = iterated_sum(&ones, 2).unwrap();
        for n in 0..=20 {
            assert_eq!(s2.at(n as f64).unwrap()[0], c((n * (n - 1) / 2) as f64));
        }
        let zero = Signal::integer(-3, &[0.0; 7]).unwrap();
        assert_eq!(iterated_sum(&zero, 4).unwrap().sup_norm(), 0.0);
        let one = Signal::from_real_fn(Domain::RealLine, 0.0, 1e-3, 1001, |_| 1.0).unwrap();
        assert!((iterated_primitive(&one, 2).unwrap().at(1.0).unwrap()[0].re - 0.5).abs() < 1e-6);
    }

    #[test]
    fn expansion_examples() {
        let ones = Signal::integer(-20, &[1.0; 41]).unwrap();
        assert!(expand_sum_identity(&ones, 1, 1).unwrap().maxerr <= 1e-12);
        let cos = Signal::from_real_fn(Domain::IntegerLine, -50.0, 1.0, 101, f64::cos).unwrap();
        assert!(expand_sum_identity(&cos, 2, 2).unwrap().maxerr <= 1e-9);
        let zero = Signal::integer(-5, &[0.0; 11]).unwrap();
        let id = expand_sum_identity(&zero, 3, 2).unwrap();
        assert_eq!((id.lhs.sup_norm(), id.rhs.sup_norm()), (0.0, 0.0));
    }

    #[test]
    fn signal_json_round_trip() {
        let s = Signal::from_vec_fn(Domain::RealLine, -1.0, 0.25, 5, 2, |t| vec![c(t), Complex64::new(0.0, t)]).unwrap();
        let txt = serde_json::to_string(&s).unwrap();
        assert!(txt.contains("\"domain\":\"R\""));
        assert_eq!(serde_json::from_str::<Signal>(&txt).unwrap(), s);
        let p = GroupPoly::real(Domain::IntegerLine, &[1.0, 0.0, 2.0]);
        let txt = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<GroupPoly>(&txt).unwrap(), p);
        assert!(serde_json::from_str::<Signal>(r#"{"domain":"Z","start":0,"step":0.5,"dim":1,"values":[[1]]}"#).is_err());
    }

    #[test]
    fn sum_inverts_difference_exactly() {
        let phi = Signal::from_real_fn(Domain::IntegerLine, -30.0, 1.0, 61, |t| (t * t - 3.0 * t) % 17.0).unwrap();
        let back = difference(&sum_s(&phi).unwrap(), 1.0).unwrap();
        assert_eq!(back, phi.slice(0, 60).unwrap());
    }

    #[test]
    fn identity_holds_on_full_range() {
        for m in 1..=12 {
            for k in 0..=12 {
                for n in 0..=8 {
                    assert!(lemma76_identity(m, k, n).unwrap().equal, "m={m} k={k} N={n}");
                }
            }
        }
    }

    fn int_poly() -> impl Strategy<Value = Vec<i64>> {
        (0usize..=5).prop_flat_map(|deg| {
            proptest::collection::vec(-9i64..=9, deg).prop_map(|mut v| {
                v.push(1);
                v
            })
        })
    }

    fn eval_int(p: &[i64], t: i64) -> f64 {
        p.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128) as f64
    }

    proptest! {
        #[test]
        fn poly_difference_linear_and_translation_invariant(
            a in proptest::collection::vec(-5.0f64..5.0, 1..7),
            b in proptest::collection::vec(-5.0f64..5.0, 1..7),
            h in -3i32..=3,
            s in -3i32..=3,
        ) {
            let pa = GroupPoly::real(Domain::IntegerLine, &a);
            let pb = GroupPoly::real(Domain::IntegerLine, &b);
            let h = h as f64;
            let lhs = pa.add(&pb).unwrap().difference(h).unwrap();
            let rhs = pa.difference(h).unwrap().add(&pb.difference(h).unwrap()).unwrap();
            for t in -4..=4 {
                let (x, y) = (lhs.eval(t as f64)[0], rhs.eval(t as f64)[0]);
                prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()));
            }
            // Δ_h commutes with translation by s
            let d = pa.difference(h).unwrap();
            for t in -4..=4 {
                let t = t as f64;
                let via_shift = pa.eval(t + s as f64 + h)[0] - pa.eval(t + s as f64)[0];
                prop_assert!((d.eval(t + s as f64)[0] - via_shift).norm() <= 1e-9 * (1.0 + via_shift.norm()));
            }
        }

        #[test]
        fn signal_difference_commutes_with_translation(
            vals in proptest::collection::vec(-10.0f64..10.0, 12..40),
            h in 1i64..4,
            s in 1i64..4,
        ) {
            let phi = Signal::integer(0, &vals).unwrap();
            let a = phi.difference(h as f64).unwrap().translate(s as f64).unwrap();
            let b = phi.translate(s as f64).unwrap().difference(h as f64).unwrap();
            let e = a.sub(&b).unwrap().sup_norm();
            prop_assert!(e <= 1e-12);
        }

        #[test]
        fn degree_test_recovers_degree(deg in 0usize..=8, seed in proptest::collection::vec(-3.0f64..3.0, 9)) {
            let mut coeffs = seed[..=deg].to_vec();
            coeffs[deg] = if coeffs[deg].abs() < 0.5 { 1.0 } else { coeffs[deg] };
            let p = GroupPoly::real(Domain::IntegerLine, &coeffs);
            let phi = Signal::from_fn(Domain::IntegerLine, -20.0, 1.0, 41, |t| p.eval(t)[0]).unwrap();
            prop_assert_eq!(degree_test(&phi, 1.0, 9, 1e-9).unwrap(), Some(deg));
        }

        #[test]
        fn extension_independent_of_decomposition(
            p in int_poly(),
            us in proptest::collection::vec(0i64..6, 10),
            t in -12i64..0,
        ) {
            let n = p.len() - 1;
            let q = Signal::from_fn(Domain::IntegerLine, 0.0, 1.0, 80, |x| c(eval_int(&p, x as i64))).unwrap();
            let canonical = extend_from_semigroup(&q, n, t).unwrap();
            prop_assert_eq!(canonical[0].re, eval_int(&p, t));
            for u in us {
                let v = u - t;
                if (u + n as i64 * v) as usize >= q.len() {
                    continue;
                }
                prop_assert_eq!(extend_from_semigroup_with(&q, n, u, v).unwrap(), canonical.clone());
            }
        }
    }
}
