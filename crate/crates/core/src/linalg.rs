//! Minimal fixed-size complex linear algebra shared by the other modules.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

/// Unit complex number `e^{i t}`.
#[inline]
pub fn cis(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

/// Wrap an angle into `[0, 2pi)`.
pub fn mod_two_pi(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = t.rem_euclid(tau);
    // rem_euclid can round up to tau itself for tiny negative inputs.
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn new(m: [[C64; 2]; 2]) -> Self {
        Mat2(m)
    }

    pub fn zeros() -> Self {
        Mat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2::diag(C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn diag(a: C64, b: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2([[a, z], [z, b]])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn adjoint(&self) -> Self {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn mulv(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Inverse, or `None` when the determinant vanishes to rounding.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() < 1e-300 * self.norm_max().max(1.0) {
            return None;
        }
        let inv = 1.0 / d;
        Some(Mat2([
            [self.0[1][1] * inv, -self.0[0][1] * inv],
            [-self.0[1][0] * inv, self.0[0][0] * inv],
        ]))
    }

    /// `max |(M† M - I)_{ij}|`, zero for a unitary matrix.
    pub fn unitary_defect(&self) -> f64 {
        (self.adjoint() * *self - Mat2::identity()).norm_max()
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for row in &mut out.0 {
            for z in row {
                *z *= s;
            }
        }
        out
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }
}

/// Sesquilinear dot product, conjugating the first argument.
pub fn vdot(a: [C64; 2], b: [C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn vnorm(a: [C64; 2]) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}
