//! Algebra of the programmable U(2) point interaction at the origin.
//!
//! A barrier is a unitary `U = sigma(mu, nu) · diag(e^{i theta_+}, e^{i theta_-}) · sigma(mu, nu)`
//! where `sigma(mu, nu)` is the Hermitian involution
//!
//! ```text
//! sigma(mu, nu) = [ cos(mu/2)              e^{+i nu} sin(mu/2) ]
//!                 [ e^{-i nu} sin(mu/2)   -cos(mu/2)           ]
//! ```
//!
//! The boundary condition it imposes on the two half-line traces is
//! `(U - I) Psi + i (U + I) Psi' = 0` with `Psi = (psi(0+), psi(0-))` and
//! `Psi' = (psi'(0+), -psi'(0-))`, in units hbar = m = 1 and an implicit unit
//! length scale.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{cis, mod_two_pi, vnorm, Mat2, C64};

/// Construction tolerance on `max |(U† U - I)_{ij}|`.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum BarrierError {
    #[error("matrix is not unitary: defect {defect:.3e} exceeds {UNITARITY_TOL:.0e}")]
    NotUnitary { defect: f64 },
    #[error("mu = 0 decouples the half-lines; the connection parameter diverges")]
    DegenerateDecoupled,
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
}

/// Canonical coordinates on the barrier family.
///
/// Canonical form: all angles wrapped into `[0, 2pi)`, `mu` folded into
/// `[0, pi]` (the fold `(mu, nu) -> (2pi - mu, nu + pi)` flips the sign of
/// `sigma` and leaves the composed barrier unchanged), `nu = 0` whenever the
/// mixing is degenerate (`mu = 0` or `theta_+ = theta_-`, where `nu` drops
/// out of the composition).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub mu: f64,
    pub nu: f64,
}

impl BarrierParams {
    pub fn new(theta_plus: f64, theta_minus: f64, mu: f64, nu: f64) -> Self {
        let theta_plus = mod_two_pi(theta_plus);
        let theta_minus = mod_two_pi(theta_minus);
        let mut mu = mod_two_pi(mu);
        let mut nu = mod_two_pi(nu);
        if mu > std::f64::consts::PI {
            mu = std::f64::consts::TAU - mu;
            nu = mod_two_pi(nu + std::f64::consts::PI);
        }
        let degenerate_d = (theta_plus - theta_minus).abs() < 1e-12
            || (theta_plus - theta_minus).abs() > std::f64::consts::TAU - 1e-12;
        if mu < 1e-15 || degenerate_d {
            if degenerate_d {
                mu = 0.0;
            }
            nu = 0.0;
        }
        BarrierParams {
            theta_plus,
            theta_minus,
            mu,
            nu,
        }
    }
}

/// A 2x2 unitary, checked on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryMatrix2(Mat2);

impl UnitaryMatrix2 {
    pub fn new(m: Mat2) -> Result<Self, BarrierError> {
        let defect = m.unitary_defect();
        if defect < UNITARITY_TOL {
            Ok(UnitaryMatrix2(m))
        } else {
            Err(BarrierError::NotUnitary { defect })
        }
    }

    pub fn identity() -> Self {
        UnitaryMatrix2(Mat2::identity())
    }

    pub fn minus_identity() -> Self {
        UnitaryMatrix2(-Mat2::identity())
    }

    pub fn sigma1() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        UnitaryMatrix2(Mat2([[z, o], [o, z]]))
    }

    pub fn sigma3() -> Self {
        UnitaryMatrix2(Mat2::diag(C64::new(1.0, 0.0), C64::new(-1.0, 0.0)))
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix2(Mat2([
            [C64::new(s, 0.0), C64::new(s, 0.0)],
            [C64::new(s, 0.0), C64::new(-s, 0.0)],
        ]))
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0.at(i, j)
    }
}

/// One-sided boundary values and derivatives at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryData {
    pub psi_plus: C64,
    pub psi_minus: C64,
    pub dpsi_plus: C64,
    pub dpsi_minus: C64,
}

impl BoundaryData {
    /// Boundary vector `(psi(0+), psi(0-))`.
    pub fn values(&self) -> [C64; 2] {
        [self.psi_plus, self.psi_minus]
    }

    /// Signed derivative vector `(psi'(0+), -psi'(0-))`.
    pub fn signed_derivs(&self) -> [C64; 2] {
        [self.dpsi_plus, -self.dpsi_minus]
    }
}

/// Plane-wave reflection/transmission amplitudes at wavenumber `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterCoeffs {
    pub r_left: C64,
    pub t_left: C64,
    pub r_right: C64,
    pub t_right: C64,
    pub k: f64,
}

impl ScatterCoeffs {
    pub fn transmission_left(&self) -> f64 {
        self.t_left.norm_sqr()
    }

    pub fn reflection_left(&self) -> f64 {
        self.r_left.norm_sqr()
    }

    pub fn transmission_right(&self) -> f64 {
        self.t_right.norm_sqr()
    }

    pub fn reflection_right(&self) -> f64 {
        self.r_right.norm_sqr()
    }

    /// `max_side | |r|^2 + |t|^2 - 1 |`; vanishes for a unitary barrier.
    pub fn flux_defect(&self) -> f64 {
        let l = (self.reflection_left() + self.transmission_left() - 1.0).abs();
        let r = (self.reflection_right() + self.transmission_right() - 1.0).abs();
        l.max(r)
    }
}

/// The Hermitian involution `sigma(mu, nu)`.
pub fn sigma_matrix(mu: f64, nu: f64) -> Mat2 {
    let c = (0.5 * mu).cos();
    let s = (0.5 * mu).sin();
    Mat2([
        [C64::new(c, 0.0), cis(nu) * s],
        [cis(-nu) * s, C64::new(-c, 0.0)],
    ])
}

/// Build the barrier unitary from its canonical coordinates.
pub fn compose_u(p: &BarrierParams) -> UnitaryMatrix2 {
    let sigma = sigma_matrix(p.mu, p.nu);
    let d = Mat2::diag(cis(p.theta_plus), cis(p.theta_minus));
    UnitaryMatrix2::new(sigma * d * sigma)
        .expect("product of unitary factors stays unitary to rounding")
}

/// Impenetrable barrier whose per-side boundary angles use the same
/// convention as the half-line Robin spectrum: on each side the condition is
/// `dpsi/dn(0) = tan(theta/2) psi(0)` with the outward normal, so energies
/// grow monotonically from Neumann (`theta = 0`) to Dirichlet (`theta = pi`).
/// In eigenphase coordinates this is `diag(e^{-i theta_+}, e^{-i theta_-})`;
/// note the sign relative to the `theta`-coordinates of [`BarrierParams`].
pub fn wall_matrix(theta_plus: f64, theta_minus: f64) -> UnitaryMatrix2 {
    UnitaryMatrix2::new(Mat2::diag(cis(-theta_plus), cis(-theta_minus)))
        .expect("diagonal phases are unitary")
}

/// Eigendecompose a barrier into canonical coordinates.
///
/// Tie-break: when the eigenphases differ, the smaller phase in `[0, 2pi)`
/// is reported as `theta_plus`, and its eigenvector, re-phased to a
/// nonnegative real first component, defines `(mu, nu)` through
/// `v = (cos(mu/2), e^{-i nu} sin(mu/2))`. A degenerate barrier
/// `e^{i theta} I` maps to `(theta, theta, 0, 0)`.
pub fn decompose_u(u: &UnitaryMatrix2) -> BarrierParams {
    let m = *u.mat();
    let tr = m.trace();
    let det = m.det();
    let disc = (tr * tr - det.scale(4.0)).sqrt();
    let l1 = (tr + disc).scale(0.5);
    let l2 = (tr - disc).scale(0.5);

    if (l1 - l2).norm() < 1e-13 {
        let theta = mod_two_pi((tr.scale(0.5)).arg());
        return BarrierParams::new(theta, theta, 0.0, 0.0);
    }

    let p1 = mod_two_pi(l1.arg());
    let p2 = mod_two_pi(l2.arg());
    let (theta_plus, theta_minus, lam) = if p1 <= p2 { (p1, p2, l1) } else { (p2, p1, l2) };

    // Null vector of (U - lam I): bilinear-orthogonal to the larger row.
    let r0 = [m.at(0, 0) - lam, m.at(0, 1)];
    let r1 = [m.at(1, 0), m.at(1, 1) - lam];
    let row = if vnorm(r0) >= vnorm(r1) { r0 } else { r1 };
    let mut v = [row[1], -row[0]];
    let n = vnorm(v);
    v[0] /= n;
    v[1] /= n;

    let (mu, nu) = if v[0].norm() < 1e-14 {
        // The barrier is diagonal in this case and nu drops out.
        (std::f64::consts::PI, 0.0)
    } else {
        let phase = v[0].conj() / v[0].norm();
        let v0 = (v[0] * phase).re;
        let v1 = v[1] * phase;
        let mu = 2.0 * v1.norm().atan2(v0);
        let nu = if v1.norm() < 1e-14 { 0.0 } else { -v1.arg() };
        (mu, nu)
    };

    BarrierParams::new(theta_plus, theta_minus, mu, nu)
}

/// Residual of the boundary condition `(U - I) Psi + i (U + I) Psi'`.
pub fn boundary_residual(u: &UnitaryMatrix2, bd: &BoundaryData) -> [C64; 2] {
    let m = *u.mat();
    let id = Mat2::identity();
    let a = (m - id).mulv(bd.values());
    let b = (m + id).mulv(bd.signed_derivs());
    let i = C64::new(0.0, 1.0);
    [a[0] + i * b[0], a[1] + i * b[1]]
}

/// Connection parameter of the scale-invariant subfamily:
/// `psi(0+) = lambda psi(0-)`, `psi'(0+) = psi'(0-)/conj(lambda)`, with
/// `lambda = e^{i nu} sqrt((1 + cos(mu/2)) / (1 - cos(mu/2)))`.
///
/// The cosine takes the half angle `mu/2`; reading it as `cos(mu)/2` would
/// disagree with the `cos(mu/2)` coefficient of the half-period map, so the
/// half-angle form is the one used throughout.
pub fn lambda_param(mu: f64, nu: f64) -> Result<C64, BarrierError> {
    let c = (0.5 * mu).cos();
    if !(mu > 0.0) || 1.0 - c <= 0.0 {
        return Err(BarrierError::DegenerateDecoupled);
    }
    Ok(cis(nu) * ((1.0 + c) / (1.0 - c)).sqrt())
}

/// Plane-wave scattering amplitudes at energy `k^2/2`.
///
/// Matching `e^{ikx} + r e^{-ikx} | t e^{ikx}` (and mirrored) against the
/// boundary condition reduces to the 2x2 system
/// `W = -[(1-k)U - (1+k)I]^{-1} [(1+k)U - (1-k)I]`,
/// whose columns hold the right- and left-incidence amplitudes. The pencil
/// is invertible for every unitary `U` and `k > 0` because the required
/// eigenvalue `(1+k)/(1-k)` never lies on the unit circle.
pub fn scattering_coefficients(u: &UnitaryMatrix2, k: f64) -> Result<ScatterCoeffs, BarrierError> {
    if !(k > 0.0) {
        return Err(BarrierError::NonPositiveWavenumber(k));
    }
    let m = *u.mat();
    let id = Mat2::identity();
    let a = m.scale(C64::new(1.0 - k, 0.0)) - id.scale(C64::new(1.0 + k, 0.0));
    let b = m.scale(C64::new(1.0 + k, 0.0)) - id.scale(C64::new(1.0 - k, 0.0));
    let w = -(a
        .inverse()
        .expect("pencil is invertible for unitary U and k > 0"))
        * b;
    Ok(ScatterCoeffs {
        r_left: w.at(1, 1),
        t_left: w.at(0, 1),
        r_right: w.at(0, 0),
        t_right: w.at(1, 0),
        k,
    })
}
