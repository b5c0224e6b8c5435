//! Monic real polynomials: roots, hyperbolicity, discriminants, Nuij
//! smoothing and the two companion matrix forms.

use std::cmp::Ordering;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Default relative tolerance on imaginary parts when testing for real roots.
pub const DEFAULT_HYPERBOLIC_TOL: f64 = 1e-9;

/// Default target for the scaled root residual.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

const EPS: f64 = f64::EPSILON;

/// `ζ^m + a₁ζ^{m-1} + … + a_m`, stored as `[a₁, …, a_m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient a{} is not finite",
                i + 1
            )));
        }
        Ok(Self { coeffs })
    }

    /// Expands `∏ (ζ − rᵢ)`.
    pub fn from_roots(roots: &[f64]) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        // descending, leading 1
        let mut desc = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; desc.len() + 1];
            for (i, &c) in desc.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            desc = next;
        }
        Self::new(desc[1..].to_vec())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `[a₁, …, a_m]`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients `[1, a₁, …, a_m]` in descending powers.
    pub fn descending(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.coeffs.iter().copied()).collect()
    }

    /// Coefficients in ascending powers: index `k` holds the coefficient of `ζ^k`.
    pub fn ascending(&self) -> Vec<f64> {
        let mut v = self.descending();
        v.reverse();
        v
    }

    /// Ascending coefficients of `p′`.
    pub fn derivative_ascending(&self) -> Vec<f64> {
        derivative(&self.ascending())
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, &c| acc * z + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `max(1, max|aᵢ|)`.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()))
    }

    /// `ρ^{-m} p(ρζ)`, whose roots are those of `p` divided by `ρ`.
    pub fn rescaled(&self, rho: f64) -> Self {
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                scale *= rho;
                c / scale
            })
            .collect();
        Self { coeffs }
    }

    /// Power of two close to the Fujiwara root bound. Rescaling by it is exact.
    pub fn root_scale(&self) -> f64 {
        let bound = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs().powf(1.0 / (k + 1) as f64))
            .fold(0.0_f64, f64::max);
        if bound == 0.0 {
            1.0
        } else {
            2f64.powi(bound.log2().round() as i32)
        }
    }
}

/// Derivative of an ascending coefficient vector.
pub(crate) fn derivative(asc: &[f64]) -> Vec<f64> {
    asc.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn eval_ascending(asc: &[f64], z: f64) -> f64 {
    asc.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// All `m` roots, sorted by real part then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<Complex64>,
    residual: f64,
}

impl RootSet {
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Largest scaled residual `|p(λ)| / (max(1, max|aᵢ|) · Σ_k |λ|^k)` over the roots.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_real(&self) -> f64 {
        self.roots.iter().map(|z| z.re.abs()).fold(0.0, f64::max)
    }

    /// True when every imaginary part is below `tol · (1 + max|Re|)`.
    pub fn all_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol * (1.0 + self.max_abs_real())
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.roots.iter().map(|z| z.re).collect()
    }

    /// Smallest distance between two roots (infinite for a single root).
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                gap = gap.min((self.roots[i] - self.roots[j]).norm());
            }
        }
        gap
    }
}

fn cmp_roots(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn scaled_residual(p: &MonicPolynomial, z: Complex64) -> f64 {
    let r = z.norm();
    let powers = (0..=p.degree()).fold(0.0, |acc, _| acc * r + 1.0);
    p.eval_complex(z).norm() / (p.coeff_scale() * powers)
}

/// Roots of `p`. Closed forms for degree ≤ 3, companion eigenvalues otherwise.
pub fn roots(p: &MonicPolynomial, tol: f64) -> Result<RootSet> {
    let a = p.coeffs();
    let mut zs = match a.len() {
        1 => vec![Complex64::new(-a[0], 0.0)],
        2 => quadratic_roots(a[0], a[1]).to_vec(),
        3 => cubic_roots(a[0], a[1], a[2]).to_vec(),
        _ => companion_roots(p)?,
    };
    for z in zs.iter_mut() {
        *z = polish(p, *z);
    }
    zs.sort_by(cmp_roots);
    let residual = zs
        .iter()
        .map(|&z| scaled_residual(p, z))
        .fold(0.0, f64::max);
    if !(residual <= tol) {
        return Err(Error::NonConvergence {
            residual,
            target: tol,
        });
    }
    Ok(RootSet {
        roots: zs,
        residual,
    })
}

/// A few Newton steps, each accepted only if the residual drops.
fn polish(p: &MonicPolynomial, z: Complex64) -> Complex64 {
    let asc = p.ascending();
    let d_asc = derivative(&asc);
    let eval_d = |w: Complex64| {
        d_asc
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    };
    let mut best = z;
    let mut best_res = scaled_residual(p, z);
    for _ in 0..4 {
        if best_res == 0.0 {
            break;
        }
        let d = eval_d(best);
        if d.norm() == 0.0 {
            break;
        }
        let mut next = best - p.eval_complex(best) / d;
        if best.im == 0.0 {
            next.im = 0.0;
        }
        let res = scaled_residual(p, next);
        if res < best_res {
            best = next;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

fn quadratic_roots(a: f64, b: f64) -> [Complex64; 2] {
    let mut d = a * a - 4.0 * b;
    if d < 0.0 && -d <= 8.0 * EPS * (a * a + 4.0 * b.abs()) {
        d = 0.0;
    }
    if d >= 0.0 {
        let s = d.sqrt();
        let r1 = -0.5 * (a + s.copysign(a));
        let r2 = if r1 != 0.0 { b / r1 } else { 0.0 };
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let im = 0.5 * (-d).sqrt();
        [Complex64::new(-0.5 * a, -im), Complex64::new(-0.5 * a, im)]
    }
}

/// Roots of `ζ³ + aζ² + bζ + c`. Multiple roots within rounding of the
/// coefficients come back exactly real.
fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let sigma = a.abs().max(b.abs().sqrt()).max(c.abs().cbrt());
    let shift = -a / 3.0;
    if sigma == 0.0 {
        return [Complex64::new(0.0, 0.0); 3];
    }
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let ep = 32.0 * EPS * sigma * sigma;
    let eq = 32.0 * EPS * sigma * sigma * sigma;
    if p.abs() <= ep && q.abs() <= eq {
        return [Complex64::new(shift, 0.0); 3];
    }
    let real = |y: f64| Complex64::new(y + shift, 0.0);
    if p < 0.0 {
        let r = (-p / 3.0).sqrt();
        let r3 = r * r * r;
        let arg = -q / (2.0 * r3);
        let slack = (eq + q.abs() * ep / (r * r)) / (2.0 * r3) + 4.0 * EPS;
        if arg.abs() <= 1.0 + slack {
            let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
            let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
            return [
                real(2.0 * r * theta.cos()),
                real(2.0 * r * (theta - two_pi_3).cos()),
                real(2.0 * r * (theta + two_pi_3).cos()),
            ];
        }
    }
    // one real root and a conjugate pair
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let s = disc.max(0.0).sqrt();
    let w = -q / 2.0 - s.copysign(q);
    let u = w.cbrt();
    let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
    let y1 = u + v;
    let re = -0.5 * y1 + shift;
    let im = 0.5 * 3f64.sqrt() * (u - v).abs();
    [
        real(y1),
        Complex64::new(re, -im),
        Complex64::new(re, im),
    ]
}

fn companion_roots(p: &MonicPolynomial) -> Result<Vec<Complex64>> {
    let rho = p.root_scale();
    let scaled = p.rescaled(rho);
    let a = companion(&scaled).a_p;
    let schur = nalgebra::linalg::Schur::try_new(a, EPS, 10_000).ok_or(Error::NonConvergence {
        residual: f64::INFINITY,
        target: DEFAULT_ROOT_TOL,
    })?;
    let mut zs: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    zs.sort_by(cmp_roots);
    let zs = merge_clusters(&scaled, zs);
    Ok(zs.into_iter().map(|z| z * rho).collect())
}

/// `p(x)` with a running bound on its rounding error.
fn eval_with_bound(asc: &[f64], x: f64) -> (f64, f64) {
    let v = eval_ascending(asc, x);
    let mag = asc.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs());
    (v, 2.0 * asc.len() as f64 * EPS * mag)
}

/// When the sign of `p` provably alternates between the sorted real parts of
/// a cluster, each gap holds a distinct real root; they are isolated by
/// bisection.
fn separate_real_cluster(p: &MonicPolynomial, centres: &[f64], others: &[Complex64]) -> Option<Vec<f64>> {
    let asc = p.ascending();
    let mut r = centres.to_vec();
    r.sort_by(f64::total_cmp);
    let k = r.len();
    if r.windows(2).any(|w| !(w[1] > w[0])) {
        return None;
    }
    let diameter = r[k - 1] - r[0];
    // outer fences may move away from the cluster, but never past halfway to
    // the nearest eigenvalue outside it
    let outer = |x: f64, dir: f64, first: f64| {
        let room = others
            .iter()
            .filter(|z| (z.re - x) * dir > 0.0)
            .map(|z| 0.5 * (*z - Complex64::new(x, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        [first, 2.0 * first, diameter]
            .into_iter()
            .filter(|&d| d <= room)
            .map(|d| x + dir * d)
            .find(|&y| {
                let (v, err) = eval_with_bound(&asc, y);
                v.abs() > err
            })
    };
    let mut fences = vec![outer(r[0], -1.0, (r[1] - r[0]) / 2.0)?];
    fences.extend(r.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    fences.push(outer(r[k - 1], 1.0, (r[k - 1] - r[k - 2]) / 2.0)?);
    let mut signs = Vec::with_capacity(k + 1);
    for &x in &fences {
        let (v, err) = eval_with_bound(&asc, x);
        if !(v.abs() > err) {
            return None;
        }
        signs.push(v.signum());
    }
    if signs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(
        fences
            .windows(2)
            .zip(&signs)
            .map(|(w, &s_lo)| {
                let (mut lo, mut hi) = (w[0], w[1]);
                loop {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break mid;
                    }
                    if eval_ascending(&asc, mid).signum() == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            })
            .collect(),
    )
}

/// Replaces clusters of eigenvalues that sit on a genuine multiple real root
/// by copies of their real centroid.
fn merge_clusters(p: &MonicPolynomial, zs: Vec<Complex64>) -> Vec<Complex64> {
    const RADIUS: f64 = 5e-3;
    const DERIV_TOL: f64 = 1e-9;
    const CLUSTER_FACTOR: f64 = 100.0;
    let n = zs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (zs[i] - zs[j]).norm() <= RADIUS * (1.0 + zs[i].norm()) {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                label[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut out = zs.clone();
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut label, i) == root).collect();
        let k = members.len();
        if k < 2 {
            continue;
        }
        let centres: Vec<f64> = members.iter().map(|&i| zs[i].re).collect();
        let others: Vec<Complex64> = (0..n).filter(|i| !members.contains(i)).map(|i| zs[i]).collect();
        if let Some(xs) = separate_real_cluster(p, &centres, &others) {
            for (&i, x) in members.iter().zip(xs) {
                out[i] = Complex64::new(x, 0.0);
            }
            continue;
        }
        let mean_re = members.iter().map(|&i| zs[i].re).sum::<f64>() / k as f64;
        let mean_im = members.iter().map(|&i| zs[i].im).sum::<f64>() / k as f64;
        if mean_im.abs() > RADIUS {
            continue;
        }
        let mut asc = p.ascending();
        let mut genuine = true;
        let den0 = asc.iter().rev().fold(0.0, |acc, c| acc * mean_re.abs() + c.abs());
        for _ in 0..k {
            let den = asc
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * mean_re.abs() + c.abs());
            let val = eval_ascending(&asc, mean_re).abs();
            if den > 0.0 && val / den > DERIV_TOL {
                genuine = false;
                break;
            }
            asc = derivative(&asc);
        }
        // a k-fold root spreads by about (ε·|p|/|p⁽ᵏ⁾/k!|)^{1/k} under rounding;
        // wider clusters are distinct roots
        let kfact: f64 = (1..=k).map(|j| j as f64).product();
        let lead = eval_ascending(&asc, mean_re).abs() / kfact;
        let noise = (EPS * den0 / lead).powf(1.0 / k as f64);
        let diameter = members
            .iter()
            .flat_map(|&i| members.iter().map(move |&j| (i, j)))
            .map(|(i, j)| (zs[i] - zs[j]).norm())
            .fold(0.0, f64::max);
        if !(diameter <= CLUSTER_FACTOR * noise) {
            genuine = false;
        }
        if genuine {
            for &i in &members {
                out[i] = Complex64::new(mean_re, 0.0);
            }
        }
    }
    out.sort_by(cmp_roots);
    out
}

/// Returns whether all roots are real (relative to root magnitude) together
/// with the largest imaginary part.
pub fn is_hyperbolic(p: &MonicPolynomial, tol: f64) -> Result<(bool, f64)> {
    let rs = roots(p, DEFAULT_ROOT_TOL)?;
    Ok((rs.all_real(tol), rs.max_imag()))
}

/// `∏_{i<j} (λᵢ − λⱼ)` over the sorted roots. Only its square is independent of
/// the ordering convention.
pub fn difference_product(rs: &RootSet) -> Result<f64> {
    if !rs.all_real(DEFAULT_HYPERBOLIC_TOL) {
        return Err(Error::NotHyperbolic {
            max_imag: rs.max_imag(),
        });
    }
    let re = rs.real_parts();
    let mut prod = 1.0;
    for i in 0..re.len() {
        for j in i + 1..re.len() {
            prod *= re[i] - re[j];
        }
    }
    Ok(prod)
}

/// Discriminant normalized so that it equals `Δ²` for hyperbolic `p`.
///
/// It is the determinant of the Bézout matrix evaluated in exact arithmetic:
/// floating-point formulas lose most of their relative accuracy once roots
/// cluster, and cannot return an exact zero at a multiple root.
pub fn discriminant(p: &MonicPolynomial) -> f64 {
    crate::bezout::exact_determinant(p)
}

/// The discriminant through the Sylvester resultant of `p` and `p′` in
/// binary64, after rescaling the roots to unit size.
pub fn sylvester_discriminant(p: &MonicPolynomial) -> f64 {
    let m = p.degree();
    let rho = p.root_scale();
    let scaled = p.rescaled(rho);
    let res = resultant(&scaled.descending(), &derivative_descending(&scaled));
    let sign = if (m * (m - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * res * rho.powi((m * (m - 1)) as i32)
}

/// `18pqr − 4p³r + p²q² − 4q³ − 27r²` for `τ³ + pτ² + qτ + r`.
pub fn cubic_discriminant(p: f64, q: f64, r: f64) -> f64 {
    18.0 * p * q * r - 4.0 * p * p * p * r + p * p * q * q - 4.0 * q * q * q - 27.0 * r * r
}

fn derivative_descending(p: &MonicPolynomial) -> Vec<f64> {
    let mut d = p.derivative_ascending();
    d.reverse();
    d
}

/// Determinant of the Sylvester matrix of two polynomials given in
/// descending coefficients.
pub fn resultant(f: &[f64], g: &[f64]) -> f64 {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return 1.0;
    }
    let mut syl = DMatrix::<f64>::zeros(size, size);
    for row in 0..n {
        for (k, &c) in f.iter().enumerate() {
            syl[(row, row + k)] = c;
        }
    }
    for row in 0..m {
        for (k, &c) in g.iter().enumerate() {
            syl[(n + row, row + k)] = c;
        }
    }
    syl.determinant()
}

/// `(1 + ε d/dζ)^{m-1} p`.
pub fn nuij_smooth(p: &MonicPolynomial, eps: f64) -> MonicPolynomial {
    if eps == 0.0 {
        return p.clone();
    }
    let mut asc = p.ascending();
    for _ in 1..p.degree() {
        let d = derivative(&asc);
        for (k, dk) in d.iter().enumerate() {
            asc[k] += eps * dk;
        }
    }
    asc.pop();
    asc.reverse();
    MonicPolynomial { coeffs: asc }
}

/// The last-row and first-row companion forms and the flip permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionPair {
    pub a_p: DMatrix<f64>,
    pub a_tilde: DMatrix<f64>,
    pub j_flip: DMatrix<f64>,
}

pub fn companion(p: &MonicPolynomial) -> CompanionPair {
    let m = p.degree();
    let a = p.coeffs();
    let a_p = DMatrix::from_fn(m, m, |i, j| {
        if i + 1 == m {
            -a[m - 1 - j]
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    });
    let a_tilde = DMatrix::from_fn(m, m, |i, j| {
        if i == 0 {
            -a[j]
        } else if j + 1 == i {
            1.0
        } else {
            0.0
        }
    });
    CompanionPair {
        a_p,
        a_tilde,
        j_flip: flip_matrix(m),
    }
}

/// `J = (δ_{i,m+1-j})`.
pub fn flip_matrix(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if i + j + 1 == m { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> MonicPolynomial {
        MonicPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MonicPolynomial::new(vec![]).is_err());
        assert!(MonicPolynomial::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn linear_root() {
        let rs = roots(&poly(&[-2.0]), 1e-12).unwrap();
        assert_eq!(rs.roots(), &[Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn cubic_x3_minus_x() {
        let rs = roots(&poly(&[0.0, -1.0, 0.0]), 1e-12).unwrap();
        let re = rs.real_parts();
        for (got, want) in re.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14, "{re:?}");
        }
        assert_eq!(rs.max_imag(), 0.0);
    }

    #[test]
    fn triple_root_at_zero() {
        let rs = roots(&poly(&[0.0, 0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(rs.real_parts(), vec![0.0; 3]);
    }

    #[test]
    fn inexact_triple_root_stays_real() {
        // (ζ − 0.1)³ with rounded coefficients
        let p = MonicPolynomial::from_roots(&[0.1, 0.1, 0.1]).unwrap();
        let rs = roots(&p, 1e-9).unwrap();
        assert_eq!(rs.max_imag(), 0.0);
        for r in rs.real_parts() {
            assert!((r - 0.1).abs() < 1e-5);
        }
    }

    #[test]
    fn inexact_double_root_stays_real() {
        let p = MonicPolynomial::from_roots(&[0.3, 0.3, -1.7]).unwrap();
        let (hyp, imag) = is_hyperbolic(&p, DEFAULT_HYPERBOLIC_TOL).unwrap();
        assert!(hyp, "max imag {imag}");
    }

    #[test]
    fn quartic_with_double_root_is_hyperbolic() {
        let p = MonicPolynomial::from_roots(&[1.25, 1.25, -3.0, 0.5]).unwrap();
        let rs = roots(&p, 1e-9).unwrap();
        assert!(rs.all_real(DEFAULT_HYPERBOLIC_TOL), "{:?}", rs.roots());
    }

    #[test]
    fn hyperbolicity_examples() {
        let (h, im) = is_hyperbolic(&poly(&[0.0, 1.0]), 1e-9).unwrap();
        assert!(!h);
        assert!((im - 1.0).abs() < 1e-15);
        assert!(is_hyperbolic(&poly(&[0.0, -1.0]), 1e-9).unwrap().0);
        assert!(is_hyperbolic(&poly(&[0.0, -1.0, 0.0]), 1e-9).unwrap().0);
    }

    #[test]
    fn difference_product_examples() {
        let rs = roots(&poly(&[0.0, -1.0]), 1e-12).unwrap();
        assert_eq!(difference_product(&rs).unwrap(), -2.0);
        let rs = roots(&poly(&[0.0, 0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(difference_product(&rs).unwrap(), 0.0);
        let rs = roots(&poly(&[-5.0]), 1e-12).unwrap();
        assert_eq!(difference_product(&rs).unwrap(), 1.0);
        let rs = roots(&poly(&[0.0, 1.0]), 1e-12).unwrap();
        assert!(matches!(
            difference_product(&rs),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&poly(&[0.0, -1.0, 0.0])), 4.0);
        assert_eq!(discriminant(&poly(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(discriminant(&poly(&[0.0, -1.0])), 4.0);
    }

    #[test]
    fn sylvester_route_matches_roots_for_quartic() {
        let r = [-2.0, -0.5, 1.0, 3.0];
        let p = MonicPolynomial::from_roots(&r).unwrap();
        let mut want = 1.0;
        for i in 0..4 {
            for j in i + 1..4 {
                want *= (r[i] - r[j]) * (r[i] - r[j]);
            }
        }
        let got = sylvester_discriminant(&p);
        assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
        assert_eq!(discriminant(&p), want);
    }

    #[test]
    fn nuij_examples() {
        assert_eq!(nuij_smooth(&poly(&[0.0, 0.0]), 0.0), poly(&[0.0, 0.0]));
        assert_eq!(nuij_smooth(&poly(&[0.0, 0.0]), 0.5), poly(&[1.0, 0.0]));
        let p = nuij_smooth(&poly(&[0.0, 0.0, 0.0]), 1.0);
        assert_eq!(p, poly(&[6.0, 6.0, 0.0]));
        let rs = roots(&p, 1e-12).unwrap();
        assert!(rs.all_real(1e-12));
        assert!(rs.min_gap() > 0.1);
    }

    #[test]
    fn companion_examples() {
        let cp = companion(&poly(&[3.0]));
        assert_eq!(cp.a_p, DMatrix::from_row_slice(1, 1, &[-3.0]));
        let cp = companion(&poly(&[1.0, 2.0, 3.0]));
        let want = DMatrix::from_row_slice(3, 3, &[0., 1., 0., 0., 0., 1., -3., -2., -1.]);
        assert_eq!(cp.a_p, want);
        let want_t = DMatrix::from_row_slice(3, 3, &[-1., -2., -3., 1., 0., 0., 0., 1., 0.]);
        assert_eq!(cp.a_tilde, want_t);
        assert_eq!(&cp.j_flip * &cp.a_p * cp.j_flip.transpose(), cp.a_tilde);
        let cp = companion(&poly(&[0.0, -1.0]));
        assert_eq!(cp.a_p, DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.]));
        let ev = cp.a_p.symmetric_eigenvalues();
        let mut ev: Vec<f64> = ev.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_roots_expands() {
        assert_eq!(
            MonicPolynomial::from_roots(&[1.0, -1.0, 0.0]).unwrap(),
            poly(&[0.0, -1.0, 0.0])
        );
    }
}
