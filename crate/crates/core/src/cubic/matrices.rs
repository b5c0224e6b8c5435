//! The explicit cubic symmetrizer and its companions.

use nalgebra::Matrix3;

/// `S = (1/3)[[3, 2a, −b], [2a, 2(a²+b), −ab−3c], [−b, −ab−3c, b²−2ac]]`.
pub fn s_matrix(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    let off = -a * b - 3.0 * c;
    Matrix3::new(
        3.0,
        2.0 * a,
        -b,
        2.0 * a,
        2.0 * (a * a + b),
        off,
        -b,
        off,
        b * b - 2.0 * a * c,
    ) / 3.0
}

/// `A = [[−a, b, −c], [1, 0, 0], [0, 1, 0]]`, the principal part of the
/// reduced first-order system.
pub fn a_matrix(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    Matrix3::new(-a, b, -c, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
}

/// `SA = (1/3)[[−a, 2b, −3c], [2b, ab−3c, −2ac], [−3c, −2ac, bc]]`.
pub fn sa_matrix(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    Matrix3::new(
        -a,
        2.0 * b,
        -3.0 * c,
        2.0 * b,
        a * b - 3.0 * c,
        -2.0 * a * c,
        -3.0 * c,
        -2.0 * a * c,
        b * c,
    ) / 3.0
}

/// `det S = (1/27)(b²(a²+4b) − 4a³c − 18abc − 27c²)`.
pub fn det_s(a: f64, b: f64, c: f64) -> f64 {
    (b * b * (a * a + 4.0 * b) - 4.0 * a * a * a * c - 18.0 * a * b * c - 27.0 * c * c) / 27.0
}

/// `∂ₜS` from `(a, b, c)` and their `t`-derivatives.
pub fn ds_matrix(a: f64, b: f64, c: f64, da: f64, db: f64, dc: f64) -> Matrix3<f64> {
    let off = -(da * b + a * db) - 3.0 * dc;
    Matrix3::new(
        0.0,
        2.0 * da,
        -db,
        2.0 * da,
        2.0 * (2.0 * a * da + db),
        off,
        -db,
        off,
        2.0 * b * db - 2.0 * (da * c + a * dc),
    ) / 3.0
}

/// `J_b = diag(1, 1, b)`.
pub fn j_b(b: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, b))
}

/// `27·det S`, the discriminant of `τ³ + aτ² − bτ + c`.
pub fn normalized_delta(a: f64, b: f64, c: f64) -> f64 {
    b * b * (a * a + 4.0 * b) - 4.0 * a * a * a * c - 18.0 * a * b * c - 27.0 * c * c
}

/// `4(a² + 3b)`, the discriminant of `3μ² + 2aμ − b`.
pub fn normalized_delta0(a: f64, b: f64) -> f64 {
    4.0 * (a * a + 3.0 * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezout::{bezout_matrix, flipped_symmetrizer};
    use crate::poly::{cubic_discriminant, MonicPolynomial};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn s_examples() {
        assert_eq!(
            s_matrix(0.0, 0.0, 0.0),
            Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(
            s_matrix(0.0, 1.0, 0.0) * 3.0,
            Matrix3::new(3.0, 0.0, -1.0, 0.0, 2.0, 0.0, -1.0, 0.0, 1.0)
        );
    }

    #[test]
    fn sa_examples() {
        assert_eq!(
            sa_matrix(0.0, 1.0, 0.0) * 3.0,
            Matrix3::new(0.0, 2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(sa_matrix(0.0, 0.0, 0.0), Matrix3::zeros());
    }

    #[test]
    fn det_examples() {
        assert_relative_eq!(det_s(0.0, 1.0, 0.0), 4.0 / 27.0, epsilon = 1e-16);
        assert_eq!(det_s(0.0, 0.0, 1.0), -1.0);
        let (a, b) = (1.5_f64, 0.7_f64);
        assert_eq!(det_s(a, b, 0.0), b * b * (a * a + 4.0 * b) / 27.0);
    }

    #[test]
    fn ds_for_linear_b() {
        let d = ds_matrix(0.0, 0.4, 0.0, 0.0, 1.0, 0.0) * 3.0;
        assert_eq!(d, Matrix3::new(0.0, 0.0, -1.0, 0.0, 2.0, 0.0, -1.0, 0.0, 0.8));
    }

    proptest! {
        #[test]
        fn sa_is_product_and_symmetric(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
            let prod = s_matrix(a, b, c) * a_matrix(a, b, c);
            let sa = sa_matrix(a, b, c);
            let scale = 1.0 + a.abs().max(b.abs()).max(c.abs()).powi(3);
            prop_assert!((prod - sa).abs().max() <= 1e-12 * scale);
            prop_assert!((prod - prod.transpose()).abs().max() <= 1e-12 * scale);
        }

        #[test]
        fn det_is_discriminant(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
            let lhs = 27.0 * det_s(a, b, c);
            let rhs = cubic_discriminant(a, -b, c);
            let scale = (a * a * b * b).abs() + 4.0 * (b * b * b).abs() + 4.0 * (a * a * a * c).abs()
                + 18.0 * (a * b * c).abs() + 27.0 * c * c;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
            let m = s_matrix(a, b, c);
            prop_assert!((m.determinant() - det_s(a, b, c)).abs() <= 1e-10 * (1.0 + scale));
        }

        #[test]
        fn s_is_scaled_flipped_bezout(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64) {
            let p = MonicPolynomial::new(vec![a, -b, c]).unwrap();
            let ht = flipped_symmetrizer(&bezout_matrix(&p));
            let s = s_matrix(a, b, c);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!((ht[(i, j)] / 3.0 - s[(i, j)]).abs() <= 1e-10 * (1.0 + s[(i, j)].abs()));
                }
            }
        }

        #[test]
        fn ds_matches_difference_quotient(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64,
                                          da in -3.0..3.0f64, db in -3.0..3.0f64, dc in -3.0..3.0f64) {
            let h = 1e-6;
            let fd = (s_matrix(a + h * da, b + h * db, c + h * dc) - s_matrix(a - h * da, b - h * db, c - h * dc)) / (2.0 * h);
            prop_assert!((fd - ds_matrix(a, b, c, da, db, dc)).abs().max() < 1e-6);
        }
    }
}
