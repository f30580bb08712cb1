//! Minimal complex 2x2 matrix arithmetic for the transfer recurrences.

use num_complex::Complex64;

pub const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex 2x2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Mat2 {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn identity() -> Self {
        Mat2::new(ONE_C, ZERO_C, ZERO_C, ONE_C)
    }

    pub fn zero() -> Self {
        Mat2::new(ZERO_C, ZERO_C, ZERO_C, ZERO_C)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2::new(a, ZERO_C, ZERO_C, d)
    }

    /// diag(1, 0), the rank-one projector the hyperbolic product collapses to.
    pub fn e11() -> Self {
        Mat2::new(ONE_C, ZERO_C, ZERO_C, ZERO_C)
    }

    pub fn diagonal_part(&self) -> Self {
        Mat2::diag(self.m[0][0], self.m[1][1])
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat2::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn add(&self, o: &Mat2) -> Self {
        Mat2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }

    pub fn sub(&self, o: &Mat2) -> Self {
        Mat2::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }

    pub fn mul(&self, o: &Mat2) -> Self {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Inverse; caller guarantees the determinant is nonzero.
    pub fn inverse(&self) -> Self {
        let d = self.det();
        Mat2::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        )
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// Operator (spectral) norm from the closed-form 2x2 singular values:
    /// sigma_max^2 = (F + sqrt(F^2 - 4 |det|^2)) / 2 with F the squared
    /// Frobenius norm.
    pub fn op_norm(&self) -> f64 {
        let f = self.frobenius_sq();
        let d = self.det().norm_sqr();
        let disc = (f * f - 4.0 * d).max(0.0);
        (0.5 * (f + disc.sqrt())).sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Product over a slice in descending index order: `M[last] * ... * M[first]`.
/// Matches the ordering convention of every transfer-matrix product here.
pub fn product_desc(mats: &[Mat2]) -> Mat2 {
    let mut acc = Mat2::identity();
    for m in mats {
        acc = m.mul(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn op_norm_matches_known_cases() {
        let id = Mat2::identity();
        assert!((id.op_norm() - 1.0).abs() < 1e-15);

        // Rank-one projector has norm 1, diag(3, 2) has norm 3.
        assert!((Mat2::e11().op_norm() - 1.0).abs() < 1e-15);
        assert!((Mat2::diag(c(3.0, 0.0), c(2.0, 0.0)).op_norm() - 3.0).abs() < 1e-14);

        // [[0, 2], [0, 0]] has singular values {2, 0}.
        let n = Mat2::new(ZERO_C, c(2.0, 0.0), ZERO_C, ZERO_C);
        assert!((n.op_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn op_norm_bounds_vector_image() {
        // |A v| <= |A| |v| on a few concrete vectors.
        let a = Mat2::new(c(1.0, 0.5), c(-0.3, 0.2), c(0.0, -1.1), c(0.7, 0.0));
        let norm = a.op_norm();
        for v in [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.3, -0.4), c(0.5, 0.12)],
            [c(-2.0, 1.0), c(0.25, 3.0)],
        ] {
            let image = a.mul_vec(v);
            let vn = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let imn = (image[0].norm_sqr() + image[1].norm_sqr()).sqrt();
            assert!(imn <= norm * vn * (1.0 + 1e-12));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat2::new(c(2.0, 1.0), c(0.5, -0.25), c(-1.0, 0.0), c(0.0, 3.0));
        let prod = a.mul(&a.inverse());
        assert!(prod.sub(&Mat2::identity()).max_abs_entry() < 1e-14);
    }

    #[test]
    fn product_desc_ordering() {
        let a = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), ZERO_C, c(1.0, 0.0));
        let b = Mat2::new(c(1.0, 0.0), ZERO_C, c(1.0, 0.0), c(1.0, 0.0));
        // product_desc([a, b]) must be b * a.
        let p = product_desc(&[a, b]);
        assert_eq!(p, b.mul(&a));
    }
}
