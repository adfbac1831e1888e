//! Minimal complex 2x2 matrix arithmetic used by the contour-integral
//! verification routines.

use num_complex::Complex64;
use serde::Serialize;

/// Complex 2x2 matrix, row-major: [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

pub const ZERO2: Mat2 = Mat2::new(
    Complex64::new(0.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(0.0, 0.0),
);

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// sigma_1 = [[0,1],[1,0]].
    pub fn sigma1() -> Self {
        Mat2::from_re(0.0, 1.0, 1.0, 0.0)
    }

    /// sigma_3 = [[1,0],[0,-1]].
    pub fn sigma3() -> Self {
        Mat2::from_re(1.0, 0.0, 0.0, -1.0)
    }

    /// sigma_3 * sigma_1 = [[0,1],[-1,0]].
    pub fn sigma3_sigma1() -> Self {
        Mat2::from_re(0.0, 1.0, -1.0, 0.0)
    }

    /// Lower-left unit matrix [[0,0],[1,0]].
    pub fn e_lower() -> Self {
        Mat2::from_re(0.0, 0.0, 1.0, 0.0)
    }

    /// Upper-right unit matrix [[0,1],[0,0]].
    pub fn e_upper() -> Self {
        Mat2::from_re(0.0, 1.0, 0.0, 0.0)
    }

    pub fn from_re(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn scale(self, z: Complex64) -> Self {
        Mat2::new(self.a * z, self.b * z, self.c * z, self.d * z)
    }

    pub fn add(self, o: Mat2) -> Self {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn sub(self, o: Mat2) -> Self {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match (i, j) {
            (0, 0) => self.a,
            (0, 1) => self.b,
            (1, 0) => self.c,
            (1, 1) => self.d,
            _ => panic!("Mat2 index out of range"),
        }
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        self.sub(*o).max_abs()
    }
}
