//! Locational-qubit bookkeeping: encoding amplitudes onto two-lobe
//! wavefunctions, decoding them back with leakage accounting, gate fidelity,
//! and the reflection-conjugate basis change.
//!
//! The qubit identification is positional: |0> is the envelope profile
//! parked on x > 0, |1> the mirror profile on x < 0, with no extra phase on
//! the mirror. Leakage is the probability weight a state carries outside
//! this two-dimensional subspace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Mat2, C64};
use crate::oracle::{Grid, GridState, OracleError};
use crate::spectral::{expand_localized, Envelope, OscCoeffs, Side, SpectralError};

/// Failures in qubit encoding/extraction.
#[derive(Debug, Error)]
pub enum GateError {
    #[error("extracted matrix is not unitary: defect {defect:.3e} exceeds the bound for leakage {leakage:.3e}")]
    NotUnitary { defect: f64, leakage: f64 },
    #[error("qubit amplitudes must have unit norm, got {0:.12}")]
    InvalidAmplitudes(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Pure qubit state plus the envelope that realizes it in space.
#[derive(Clone, Debug)]
pub struct QubitState {
    pub alpha0: C64,
    pub alpha1: C64,
    envelope: Envelope,
}

impl QubitState {
    pub fn new(alpha0: C64, alpha1: C64, envelope: Envelope) -> Result<Self, GateError> {
        let n2 = alpha0.norm_sqr() + alpha1.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-10 {
            return Err(GateError::InvalidAmplitudes(n2));
        }
        Ok(Self {
            alpha0,
            alpha1,
            envelope,
        })
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }
}

/// Wavefunction stored as per-side weights over the even half-side basis
/// `sqrt(2) chi_{2m}(|x|)`; `right[m]` weights the x > 0 copy, `left[m]` the
/// mirror.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSidedState {
    pub(crate) omega: f64,
    pub(crate) right: Vec<C64>,
    pub(crate) left: Vec<C64>,
}

impl TwoSidedState {
    pub(crate) fn from_parts(omega: f64, right: Vec<C64>, left: Vec<C64>) -> Self {
        debug_assert_eq!(right.len(), left.len());
        Self { omega, right, left }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn len(&self) -> usize {
        self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.right.is_empty()
    }

    pub fn right(&self) -> &[C64] {
        &self.right
    }

    pub fn left(&self) -> &[C64] {
        &self.left
    }

    pub fn norm_sq(&self) -> f64 {
        self.right.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.left.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Position amplitude; x >= 0 reads the right lobe.
    pub fn evaluate(&self, x: f64) -> C64 {
        let side = if x >= 0.0 { &self.right } else { &self.left };
        side.iter()
            .enumerate()
            .map(|(m, &c)| {
                c * (std::f64::consts::SQRT_2
                    * crate::spectral::hermite::ho_eigenfunction(2 * m, self.omega, x.abs()))
            })
            .sum()
    }
}

/// Place qubit amplitudes onto the state's envelope.
pub fn encode_state(q: &QubitState) -> TwoSidedState {
    let c = q.envelope.coeffs();
    let right = c.iter().map(|&w| q.alpha0 * w).collect();
    let left = c.iter().map(|&w| q.alpha1 * w).collect();
    TwoSidedState::from_parts(q.envelope.omega(), right, left)
}

/// Project a two-sided state back onto the envelope's qubit subspace.
/// Returns the amplitudes and the weight left outside, `1 - |a0|^2 - |a1|^2`;
/// a state that is not unit norm counts its missing weight as leaked.
pub fn decode_state(state: &TwoSidedState, env: &Envelope) -> (C64, C64, f64) {
    let c = env.coeffs();
    let mut a0 = Complex64::new(0.0, 0.0);
    let mut a1 = Complex64::new(0.0, 0.0);
    for ((w, r), l) in c.iter().zip(&state.right).zip(&state.left) {
        a0 += w * r;
        a1 += w * l;
    }
    let leakage = 1.0 - a0.norm_sqr() - a1.norm_sqr();
    (a0, a1, leakage)
}

/// Expand the encoded state in the eigenbasis of the cut oscillator whose
/// interface is the reflection `sigma(mu, nu)`.
pub fn encode_osc(
    q: &QubitState,
    mu: f64,
    nu: f64,
    n_modes: usize,
) -> Result<OscCoeffs, GateError> {
    let right = expand_localized(mu, nu, &q.envelope, Side::Right, n_modes)?;
    let left = expand_localized(mu, nu, &q.envelope, Side::Left, n_modes)?;
    let a = right
        .a
        .iter()
        .zip(&left.a)
        .map(|(&r, &l)| q.alpha0 * r + q.alpha1 * l)
        .collect();
    Ok(OscCoeffs {
        omega: right.omega,
        lambda: right.lambda,
        a,
    })
}

/// Qubit amplitudes of an eigenbasis expansion, using the two localized
/// lobe expansions as analysis vectors.
pub fn decode_osc(
    coeffs: &OscCoeffs,
    mu: f64,
    nu: f64,
    env: &Envelope,
) -> Result<(C64, C64, f64), GateError> {
    let n_modes = coeffs.a.len();
    let right = expand_localized(mu, nu, env, Side::Right, n_modes)?;
    let left = expand_localized(mu, nu, env, Side::Left, n_modes)?;
    let dot = |basis: &OscCoeffs| -> C64 {
        basis
            .a
            .iter()
            .zip(&coeffs.a)
            .map(|(&b, &c)| b.conj() * c)
            .sum()
    };
    let a0 = dot(&right);
    let a1 = dot(&left);
    Ok((a0, a1, 1.0 - a0.norm_sqr() - a1.norm_sqr()))
}

/// Containment required of a sampled lobe before grid encoding is trusted.
const GRID_LOBE_NORM_TOL: f64 = 1e-3;

fn sampled_lobe(env: &Envelope, grid: &Grid, side: Side) -> Result<Vec<f64>, OracleError> {
    let n = grid.n();
    let h = grid.h();
    let mut lobe = vec![0.0; n];
    let mut norm2 = 0.0;
    for (i, l) in lobe.iter_mut().enumerate() {
        let x = grid.x(i);
        let on_side = match side {
            Side::Right => x > 0.0,
            Side::Left => x < 0.0,
        };
        if on_side {
            *l = env.evaluate(x);
            norm2 += h * *l * *l;
        }
    }
    if (norm2 - 1.0).abs() > GRID_LOBE_NORM_TOL {
        return Err(OracleError::Resolution(format!(
            "envelope lobe poorly contained by the grid: discrete norm {norm2:.6}"
        )));
    }
    let inv = 1.0 / norm2.sqrt();
    for l in &mut lobe {
        *l *= inv;
    }
    Ok(lobe)
}

/// Sample the encoded state onto a grid; each lobe is renormalized in the
/// discrete norm so the result is exactly unit norm for the propagator.
pub fn encode_grid(q: &QubitState, grid: &Grid) -> Result<GridState, GateError> {
    let right = sampled_lobe(&q.envelope, grid, Side::Right)?;
    let left = sampled_lobe(&q.envelope, grid, Side::Left)?;
    let psi = right
        .iter()
        .zip(&left)
        .map(|(&r, &l)| q.alpha0 * r + q.alpha1 * l)
        .collect();
    Ok(GridState::new(*grid, psi)?)
}

/// Qubit amplitudes of a sampled wavefunction, via discrete inner products
/// with the two sampled-and-renormalized lobes.
pub fn decode_grid(state: &GridState, env: &Envelope) -> Result<(C64, C64, f64), GateError> {
    let grid = state.grid();
    let right = sampled_lobe(env, &grid, Side::Right)?;
    let left = sampled_lobe(env, &grid, Side::Left)?;
    let h = grid.h();
    let mut a0 = Complex64::new(0.0, 0.0);
    let mut a1 = Complex64::new(0.0, 0.0);
    for (i, &p) in state.psi().iter().enumerate() {
        a0 += h * right[i] * p;
        a1 += h * left[i] * p;
    }
    Ok((a0, a1, 1.0 - a0.norm_sqr() - a1.norm_sqr()))
}

/// Extracted 2x2 gate action together with the worst-case weight that left
/// the qubit subspace while producing it.
#[derive(Clone, Debug)]
pub struct GateMatrix {
    matrix: Mat2,
    leakage: f64,
}

impl GateMatrix {
    /// Accepts the matrix if its unitarity defect is explained by the
    /// reported leakage: defect <= max(3 leakage, 1e-8).
    pub fn new(matrix: Mat2, leakage: f64) -> Result<Self, GateError> {
        let leakage = if leakage > -1e-9 && leakage < 0.0 {
            0.0
        } else {
            leakage
        };
        if !(0.0..=1.0).contains(&leakage) {
            return Err(GateError::InvalidAmplitudes(leakage));
        }
        let defect = matrix.unitary_defect();
        if defect > (3.0 * leakage).max(1e-8) {
            return Err(GateError::NotUnitary { defect, leakage });
        }
        Ok(Self { matrix, leakage })
    }

    /// A leakage-free gate; the matrix must be unitary to 1e-8.
    pub fn ideal(matrix: Mat2) -> Result<Self, GateError> {
        Self::new(matrix, 0.0)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }
}

/// Global-phase-invariant overlap |Tr(A^dag B)| / 2 of two 2x2 matrices.
pub fn matrix_fidelity(a: &Mat2, b: &Mat2) -> f64 {
    (a.adjoint() * *b).trace().norm() / 2.0
}

pub fn gate_fidelity(g1: &GateMatrix, g2: &GateMatrix) -> f64 {
    matrix_fidelity(g1.matrix(), g2.matrix())
}

/// The two natural qubit frames: lobes left/right of the cut, or their
/// symmetric/antisymmetric combinations. The frames are connected by the
/// balanced reflection (Hadamard matrix), which is its own inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisFrame {
    Locational,
    SymAntisym,
}

/// Express a gate in the other frame by conjugating with the balanced
/// reflection; applying it twice returns the original.
pub fn change_basis(g: &GateMatrix, _to: BasisFrame) -> GateMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let had = Mat2::new([
        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
    ]);
    GateMatrix {
        matrix: had * *g.matrix() * had,
        leakage: g.leakage,
    }
}
