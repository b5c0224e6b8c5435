//! The Bézout form of `p` and `p′` as a symmetrizer of the companion matrix.

use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::max_abs;
use crate::poly::{self, flip_matrix, MonicPolynomial};

#[derive(Debug, Clone, PartialEq)]
pub struct BezoutSymmetrizer {
    pub h: DMatrix<f64>,
    /// Discriminant of the source, equal to `Δ²` when it is hyperbolic.
    pub delta_sq: f64,
    pub source: MonicPolynomial,
}

/// Coefficients `hᵢⱼ` of `ζ^{i-1} w^{j-1}` in `(p(ζ)p′(w) − p(w)p′(ζ))/(ζ − w)`.
///
/// Each monomial pair `pₐ q_b (ζ^a w^b − w^a ζ^b)` divides exactly by `ζ − w`,
/// so the matrix is accumulated from the coefficients alone.
pub fn bezout_matrix(p: &MonicPolynomial) -> BezoutSymmetrizer {
    let m = p.degree();
    let rows = bezout_entries(&p.ascending());
    BezoutSymmetrizer {
        h: DMatrix::from_fn(m, m, |i, j| rows[i][j]),
        delta_sq: poly::discriminant(p),
        source: p.clone(),
    }
}

/// The recurrence behind [`bezout_matrix`] over any number type, given the
/// ascending coefficients of `p` (leading one included).
pub fn bezout_entries<T: Num + Clone + FromPrimitive>(pc: &[T]) -> Vec<Vec<T>> {
    let m = pc.len() - 1;
    let qc: Vec<T> = (1..pc.len())
        .map(|k| T::from_usize(k).expect("small integer") * pc[k].clone())
        .collect();
    let mut h = vec![vec![T::zero(); m]; m];
    for (a, pa) in pc.iter().enumerate() {
        for (b, qb) in qc.iter().enumerate() {
            if a == b || pa.is_zero() || qb.is_zero() {
                continue;
            }
            let w = pa.clone() * qb.clone();
            // upper triangle only, mirrored below
            if a > b {
                for l in 0..a - b {
                    let (i, j) = (b + l, a - 1 - l);
                    if i <= j {
                        h[i][j] = h[i][j].clone() + w.clone();
                    }
                }
            } else {
                for l in 0..b - a {
                    let (i, j) = (a + l, b - 1 - l);
                    if i <= j {
                        h[i][j] = h[i][j].clone() - w.clone();
                    }
                }
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            h[i][j] = h[j][i].clone();
        }
    }
    h
}

/// `H` of `p` scaled to integers, with the power of two it was scaled by.
fn integer_bezout(p: &MonicPolynomial) -> (Vec<Vec<BigInt>>, i32) {
    // every finite double is an integer times a power of two, so a common
    // shift makes the coefficients integral and H scales by 2^{2·shift}
    let parts: Vec<(BigInt, i32)> = p.ascending().iter().map(|&c| dyadic(c)).collect();
    let shift = parts.iter().map(|&(_, e)| -e).max().unwrap_or(0).max(0);
    let pc: Vec<BigInt> = parts.into_iter().map(|(n, e)| n << (e + shift) as usize).collect();
    (bezout_entries(&pc), 2 * shift)
}

/// Bareiss elimination without pivoting. Entry `k` is the leading principal
/// minor of order `k + 1`; `None` once a zero pivot appears.
fn leading_minors(mut a: Vec<Vec<BigInt>>) -> Vec<Option<BigInt>> {
    let m = a.len();
    let mut out = Vec::with_capacity(m);
    let mut prev = BigInt::one();
    for k in 0..m {
        if a[k][k].is_zero() {
            out.resize(m, None);
            break;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
        out.push(Some(prev.clone()));
    }
    out
}

/// `det H` computed in exact arithmetic from the binary64 coefficients of `p`,
/// then rounded. Unlike the floating-point determinant it is insensitive to
/// the conditioning of `H`.
pub fn exact_determinant(p: &MonicPolynomial) -> f64 {
    let (mut a, scale) = integer_bezout(p);
    let m = a.len();
    // Bareiss elimination keeps every intermediate integral
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..m {
        let Some(piv) = (k..m).find(|&r| !a[r][k].is_zero()) else {
            return 0.0;
        };
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[m - 1][m - 1].to_f64().unwrap_or(f64::NAN);
    f64::from(sign) * scale_pow2(det, -scale * m as i32)
}

/// Whether the binary64 polynomial `p` has `m` distinct real roots, decided
/// exactly: the Bézout form is positive definite precisely in that case.
pub fn exactly_strictly_hyperbolic(p: &MonicPolynomial) -> bool {
    let (a, _) = integer_bezout(p);
    leading_minors(a)
        .iter()
        .all(|d| d.as_ref().is_some_and(|d| d.sign() == Sign::Plus))
}

/// Whether every root of the binary64 polynomial `p` is real, multiplicities
/// allowed, decided exactly: the Bézout form is positive semidefinite
/// precisely in that case.
pub fn exactly_hyperbolic(p: &MonicPolynomial) -> bool {
    let (a, _) = integer_bezout(p);
    is_psd(a)
}

/// Symmetric elimination on an integer matrix. A positive pivot is replaced by
/// a positive multiple of its Schur complement; a zero pivot needs a zero row.
fn is_psd(mut a: Vec<Vec<BigInt>>) -> bool {
    while !a.is_empty() {
        let d = a[0][0].clone();
        if d.sign() == Sign::Minus {
            return false;
        }
        let rest = a.len() - 1;
        let mut next: Vec<Vec<BigInt>> = if d.is_zero() {
            if a[0].iter().any(|v| !v.is_zero()) {
                return false;
            }
            a.iter().skip(1).map(|row| row[1..].to_vec()).collect()
        } else {
            (1..=rest)
                .map(|i| (1..=rest).map(|j| &d * &a[i][j] - &a[i][0] * &a[0][j]).collect())
                .collect()
        };
        let g = next.iter().flatten().fold(BigInt::zero(), |g, v| num_integer::Integer::gcd(&g, v));
        if !g.is_zero() && !g.is_one() {
            for v in next.iter_mut().flatten() {
                *v /= &g;
            }
        }
        a = next;
    }
    true
}

fn dyadic(c: f64) -> (BigInt, i32) {
    if c == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = c.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let n = BigInt::from(mant);
    (if c < 0.0 { -n } else { n }, e)
}

fn scale_pow2(x: f64, e: i32) -> f64 {
    // split so neither factor under- or overflows on its own
    let mut x = x;
    let mut e = e;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        x *= 2f64.powi(step);
        e -= step;
    }
    x
}

/// The factor `C` with `ᵗC·C = H`, built from the roots.
#[derive(Debug, Clone, PartialEq)]
pub struct CFactor {
    pub c: DMatrix<f64>,
    /// `sigma_table[k][l]` is the elementary symmetric function of degree `l`
    /// of the roots other than root `k`.
    pub sigma_table: Vec<Vec<f64>>,
}

/// `c_{ij} = (−1)^{i+j} σ_{m−j,i}`. Requires distinct real roots.
pub fn c_factor(p: &MonicPolynomial, tol: f64) -> Result<CFactor> {
    let rs = poly::roots(p, poly::DEFAULT_ROOT_TOL)?;
    if !rs.all_real(poly::DEFAULT_HYPERBOLIC_TOL) {
        return Err(Error::NotHyperbolic {
            max_imag: rs.max_imag(),
        });
    }
    let gap = rs.min_gap();
    if gap <= tol {
        return Err(Error::RootsNotSeparated { min_gap: gap, tol });
    }
    let lambda = rs.real_parts();
    let m = lambda.len();
    let sigma_table: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            // coefficients of ∏_{j≠k} (1 + λⱼ z)
            let mut e = vec![1.0];
            for (j, &l) in lambda.iter().enumerate() {
                if j == k {
                    continue;
                }
                let mut next = e.clone();
                next.push(0.0);
                for d in 1..next.len() {
                    next[d] += l * e[d - 1];
                }
                e = next;
            }
            e
        })
        .collect();
    let c = DMatrix::from_fn(m, m, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * sigma_table[i][m - 1 - j]
    });
    Ok(CFactor { c, sigma_table })
}

/// `‖HA − ᵗ(HA)‖ / max(1, ‖H‖‖A‖)` in the max-entry norm.
pub fn symmetrizer_residual(h: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<f64> {
    if h.shape() != a.shape() || h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.shape(),
            found: a.shape(),
        });
    }
    let ha = h * a;
    let skew = &ha - ha.transpose();
    Ok(max_abs(&skew) / (max_abs(h) * max_abs(a)).max(1.0))
}

/// `J·H·ᵗJ`, which symmetrizes the first-row companion form.
pub fn flipped_symmetrizer(bs: &BezoutSymmetrizer) -> DMatrix<f64> {
    let j = flip_matrix(bs.h.nrows());
    &j * &bs.h * j.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::companion;

    fn poly(c: &[f64]) -> MonicPolynomial {
        MonicPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn linear() {
        let bs = bezout_matrix(&poly(&[7.0]));
        assert_eq!(bs.h, DMatrix::from_element(1, 1, 1.0));
        assert_eq!(c_factor(&poly(&[-2.0]), 1e-9).unwrap().c, DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn quadratic() {
        let p = poly(&[0.0, -1.0]);
        let bs = bezout_matrix(&p);
        assert_eq!(bs.h, DMatrix::from_row_slice(2, 2, &[2., 0., 0., 2.]));
        assert_eq!(bs.delta_sq, 4.0);
        assert_eq!(bs.h.determinant(), 4.0);
        let cf = c_factor(&p, 1e-9).unwrap();
        assert_eq!(cf.c.transpose() * &cf.c, bs.h);
        let cp = companion(&p);
        assert!(symmetrizer_residual(&bs.h, &cp.a_p).unwrap() < 1e-15);
        assert_eq!(flipped_symmetrizer(&bs), bs.h);
    }

    #[test]
    fn monomial_cube() {
        let bs = bezout_matrix(&poly(&[0.0, 0.0, 0.0]));
        let mut want = DMatrix::zeros(3, 3);
        want[(2, 2)] = 3.0;
        assert_eq!(bs.h, want);
        assert_eq!(bs.delta_sq, 0.0);
        let mut flipped = DMatrix::zeros(3, 3);
        flipped[(0, 0)] = 3.0;
        assert_eq!(flipped_symmetrizer(&bs), flipped);
        assert!(matches!(
            c_factor(&poly(&[0.0, 0.0, 0.0]), 1e-9),
            Err(Error::RootsNotSeparated { .. })
        ));
    }

    #[test]
    fn cubic_x3_minus_x() {
        let p = poly(&[0.0, -1.0, 0.0]);
        let bs = bezout_matrix(&p);
        assert!((bs.h.determinant() - 4.0).abs() < 1e-12);
        let cf = c_factor(&p, 1e-9).unwrap();
        let diff = cf.c.transpose() * &cf.c - &bs.h;
        assert!(max_abs(&diff) < 1e-10);
        let cp = companion(&p);
        let ht = flipped_symmetrizer(&bs);
        assert!(symmetrizer_residual(&ht, &cp.a_tilde).unwrap() < 1e-15);
    }

    #[test]
    fn exact_determinant_of_ill_conditioned_case() {
        // roots on a dyadic grid make the coefficients exact, so det H = Δ²
        // must hold to rounding even though H is badly conditioned
        let roots = [-8.96875, -8.9375, -8.8125, -8.1875, -6.65625, 3.1875];
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let mut want = 1.0;
        for i in 0..6 {
            for j in i + 1..6 {
                want *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
            }
        }
        let got = exact_determinant(&p);
        assert!((got - want).abs() <= 1e-14 * want);
        assert_eq!(exact_determinant(&poly(&[-2.0, 1.0])), 0.0);
    }

    #[test]
    fn exact_hyperbolicity() {
        assert!(exactly_strictly_hyperbolic(&poly(&[0.0, -1.0, 0.0])));
        // double root, then a complex pair
        assert!(!exactly_strictly_hyperbolic(&poly(&[-2.0, 1.0])));
        assert!(!exactly_strictly_hyperbolic(&poly(&[0.0, 1.0, 0.0])));
        // the local minimum of x³ − x crosses zero near 0.3849
        assert!(!exactly_strictly_hyperbolic(&poly(&[0.0, -1.0, 0.4])));
        assert!(exactly_strictly_hyperbolic(&poly(&[0.0, -1.0, 0.38])));
    }

    #[test]
    fn exact_weak_hyperbolicity() {
        assert!(exactly_hyperbolic(&poly(&[-2.0, 1.0])));
        assert!(exactly_hyperbolic(&poly(&[0.0, 0.0, 0.0])));
        assert!(exactly_hyperbolic(&poly(&[0.0, -1.0, 0.0])));
        assert!(!exactly_hyperbolic(&poly(&[0.0, 1.0])));
        assert!(!exactly_hyperbolic(&poly(&[0.0, 1.0, 0.0])));
        // (x² + 1)²: repeated complex pair
        assert!(!exactly_hyperbolic(&poly(&[0.0, 2.0, 0.0, 1.0])));
        assert!(exactly_hyperbolic(&MonicPolynomial::from_roots(&[0.25, 0.25, -1.5, 3.0, 3.0]).unwrap()));
        assert!(!exactly_hyperbolic(&poly(&[0.0, -1.0, 0.4])));
    }

    #[test]
    fn residual_rejects_mismatch() {
        let h = DMatrix::identity(2, 2);
        let a = DMatrix::identity(3, 3);
        assert!(matches!(
            symmetrizer_residual(&h, &a),
            Err(Error::DimensionMismatch { .. })
        ));
        let sym = DMatrix::from_row_slice(2, 2, &[1., 5., 5., -3.]);
        assert_eq!(symmetrizer_residual(&h, &sym).unwrap(), 0.0);
    }
}
