//! Small dense complex linear algebra.
//!
//! Everything here targets desk-scale matrices (dimension at most a few dozen):
//! eigenvalues by Hessenberg reduction followed by shifted QR sweeps, null
//! spaces by complete-pivoting elimination, the matrix exponential by
//! scaling-and-squaring with a degree-13 Padé approximant, and polynomial roots
//! as companion-matrix eigenvalues polished by Newton steps.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square"));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(CMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let c: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&c)
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Jordan block of size `n` with eigenvalue `lambda` (ones on the superdiagonal).
    pub fn jordan_block(n: usize, lambda: Complex64) -> Self {
        let mut m = Self::diagonal(&vec![lambda; n]);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self - lambda * I`
    pub fn shift(&self, lambda: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Integer power by repeated squaring; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator 2-norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        match self.n {
            0 => 0.0,
            1 => self.data[0].norm(),
            _ => {
                if !self.is_finite() {
                    return f64::INFINITY;
                }
                let scale = self.norm_max();
                if scale == 0.0 {
                    return 0.0;
                }
                let m = self.scale(Complex64::new(1.0 / scale, 0.0));
                let gram = m.adjoint().mul(&m);
                match eigenvalues(&gram) {
                    Ok(ev) => ev.iter().map(|z| z.re).fold(0.0, f64::max).max(0.0).sqrt() * scale,
                    // Frobenius is an upper bound within sqrt(n)
                    Err(_) => self.norm_fro(),
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = Lu::factor(self)?;
        let n = self.n;
        let mut inv = Self::zeros(n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = ZERO);
            e[j] = ONE;
            let col = lu.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Solve `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Self) -> Result<Self> {
        let lu = Lu::factor(self)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        let mut col = vec![ZERO; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = rhs[(i, j)];
            }
            let x = lu.solve(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }
}

/// LU factorisation with partial pivoting.
struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &CMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= 1e-14 * scale {
                return Err(Error::invalid("matrix is singular to working precision"));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f != ZERO {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.n;
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                y[i] = y[i] - l * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }
}

/// Reduce to upper Hessenberg form by Householder similarity transforms.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.n;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // H <- (I - 2vv*) H
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * dot;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let dot: Complex64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= 2.0 * dot * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Eigenvalues of a general complex matrix by Hessenberg reduction and
/// Wilkinson-shifted QR sweeps with deflation.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.n;
    if n == 0 {
        return Ok(vec![]);
    }
    if !a.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let mut h = hessenberg(a);
    let mut eig = vec![ZERO; n];
    let budget = 60 * n.max(4);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    let eps = f64::EPSILON;
    let anorm = a.norm_fro().max(f64::MIN_POSITIVE);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let s = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let s = if s == 0.0 { anorm } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mu = if since_deflation % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.4) * h[(hi, hi - 1)].norm()
        } else {
            let a11 = h[(hi - 1, hi - 1)];
            let a12 = h[(hi - 1, hi)];
            let a21 = h[(hi, hi - 1)];
            let a22 = h[(hi, hi)];
            let half = (a11 - a22) * 0.5;
            let disc = (half * half + a12 * a21).sqrt();
            let m1 = (a11 + a22) * 0.5 + disc;
            let m2 = (a11 + a22) * 0.5 - disc;
            if (m1 - a22).norm() < (m2 - a22).norm() {
                m1
            } else {
                m2
            }
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + c * y;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(eig)
}

/// Null space basis of a square matrix by complete-pivoting elimination.
/// Pivots below `tol` count as zero.
pub fn null_space(m: &CMatrix, tol: f64) -> Vec<Vec<Complex64>> {
    let n = m.n;
    let mut a = m.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..n {
        let mut best = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (p, q, _) = best;
        for j in 0..n {
            a.data.swap(k * n + j, p * n + j);
        }
        for i in 0..n {
            a.data.swap(i * n + k, i * n + q);
        }
        col_perm.swap(k, q);
        let piv = a[(k, k)];
        for j in k..n {
            a[(k, j)] /= piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[(i, k)];
            if f != ZERO {
                for j in k..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= f * u;
                }
            }
        }
        rank += 1;
    }
    // reduced form: [I B; 0 0] in permuted columns; kernel = [-B; I]
    let mut basis = Vec::with_capacity(n - rank);
    for free in rank..n {
        let mut v = vec![ZERO; n];
        v[col_perm[free]] = ONE;
        for r in 0..rank {
            v[col_perm[r]] = -a[(r, free)];
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        basis.push(v);
    }
    basis
}

/// Coefficients b_0..b_13 of the degree-13 Padé approximant to exp.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling-and-squaring with the degree-13 Padé approximant.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n;
    if n == 0 {
        return Ok(CMatrix::zeros(0));
    }
    if !a.is_finite() {
        return Err(Error::Overflow("non-finite generator".into()));
    }
    let norm = a.norm_one();
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale(Complex64::new(0.5f64.powi(s), 0.0));
    let id = CMatrix::identity(n);
    let a2 = a.mul(&a);
    let a4 = a2.mul(&a2);
    let a6 = a4.mul(&a2);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = a6
        .scale(b(13))
        .add(&a4.scale(b(11)))
        .add(&a2.scale(b(9)));
    let u = a.mul(
        &a6.mul(&u_inner)
            .add(&a6.scale(b(7)))
            .add(&a4.scale(b(5)))
            .add(&a2.scale(b(3)))
            .add(&id.scale(b(1))),
    );
    let v_inner = a6
        .scale(b(12))
        .add(&a4.scale(b(10)))
        .add(&a2.scale(b(8)));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(b(6)))
        .add(&a4.scale(b(4)))
        .add(&a2.scale(b(2)))
        .add(&id.scale(b(0)));
    let mut r = v.sub(&u).solve_matrix(&v.add(&u))?;
    for _ in 0..s {
        r = r.mul(&r);
        if !r.is_finite() {
            return Err(Error::Overflow("matrix exponential overflowed while squaring".into()));
        }
    }
    Ok(r)
}

/// Horner evaluation of `sum c_k z^k` (ascending coefficients).
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

fn poly_eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of `sum c_k z^k` (ascending coefficients), with multiplicity.
///
/// Trailing zero leading coefficients are stripped; a constant polynomial is
/// rejected as degenerate.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().map(|z| z.norm() <= 1e-300_f64.max(scale * 1e-15)).unwrap_or(false) {
        c.pop();
    }
    if c.len() <= 1 {
        return Err(Error::Degenerate("polynomial is constant".into()));
    }
    let mut zero_roots = 0;
    while c.len() > 1 && c[0] == ZERO {
        c.remove(0);
        zero_roots += 1;
    }
    let d = c.len() - 1;
    let mut roots = vec![ZERO; zero_roots];
    if d == 0 {
        return Ok(roots);
    }
    let lead = c[d];
    let mut comp = CMatrix::zeros(d);
    for j in 0..d {
        comp[(0, j)] = -c[d - 1 - j] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    let raw = eigenvalues(&comp)?;
    for mut z in raw {
        for _ in 0..4 {
            let (p, dp) = poly_eval_with_derivative(&c, z);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = z - p / dp;
            if poly_eval(&c, cand).norm() < p.norm() {
                z = cand;
            } else {
                break;
            }
        }
        roots.push(z);
    }
    Ok(roots)
}

/// Least-squares solution of `A x = b` for a real design matrix given by
/// columns and several complex right-hand sides, by Householder QR.
///
/// Returns the solutions (one per right-hand side) and the ratio of the
/// largest to smallest `|R_kk|`.
pub fn lstsq_real(cols: &[Vec<f64>], rhs: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let p = cols.len();
    let n = cols.first().map_or(0, Vec::len);
    if p == 0 || n < p || cols.iter().any(|c| c.len() != n) || rhs.iter().any(|b| b.len() != n) {
        return Err(Error::invalid("least-squares shapes are inconsistent"));
    }
    let mut a: Vec<Vec<f64>> = cols.to_vec();
    let mut b: Vec<Vec<Complex64>> = rhs.to_vec();
    let mut diag = vec![0.0; p];
    for k in 0..p {
        let norm = a[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::RankDeficient);
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        diag[k] = alpha;
        a[k][k] = alpha;
        for x in a[k][k + 1..].iter_mut() {
            *x = 0.0;
        }
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k + 1) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (y, x) in col[k..].iter_mut().zip(&v) {
                *y -= f * x;
            }
        }
        for col in b.iter_mut() {
            let dot: Complex64 = v.iter().zip(&col[k..]).map(|(x, y)| y * x).sum();
            let f = dot * (2.0 / vnorm2);
            for (y, x) in col[k..].iter_mut().zip(&v) {
                *y -= f * x;
            }
        }
    }
    let dmax = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let dmin = diag.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
    if dmin <= 1e-12 * dmax {
        return Err(Error::RankDeficient);
    }
    let sols = b
        .iter()
        .map(|col| {
            let mut x = vec![ZERO; p];
            for k in (0..p).rev() {
                let mut acc = col[k];
                for j in k + 1..p {
                    acc -= x[j] * a[j][k];
                }
                x[k] = acc / a[k][k];
            }
            x
        })
        .collect();
    Ok((sols, dmax / dmin))
}

/// Eigenvalue with its algebraic multiplicity after cluster merging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    #[serde(with = "crate::cjson::complex")]
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Merge values closer than `tol * max(1, |z|)` into clusters (mean value, count).
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<Eigenvalue> {
    let mut sorted: Vec<Complex64> = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    'outer: for z in sorted {
        for g in groups.iter_mut() {
            let center: Complex64 = g.iter().sum::<Complex64>() / g.len() as f64;
            if (center - z).norm() <= tol * center.norm().max(1.0) {
                g.push(z);
                continue 'outer;
            }
        }
        groups.push(vec![z]);
    }
    groups
        .into_iter()
        .map(|g| Eigenvalue {
            value: g.iter().sum::<Complex64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect()
}
