//! Finite-difference ground truth. Everything here is built directly from
//! the boundary condition `(U - I) Psi + i (U + I) Psi' = 0` on a staggered
//! grid, with no input from the analytic layer beyond the interaction
//! matrix itself, so agreement between the two is meaningful evidence.
//!
//! The grid straddles the cut: nodes sit at `x_i = -L + (i + 1/2) h`, so the
//! interface falls exactly between the two middle nodes and one-sided
//! stencils never touch `x = 0`. Ghost values across the cut are eliminated
//! through the boundary condition, which turns the Hamiltonian into a
//! Hermitian tridiagonal matrix with a single complex coupling between the
//! middle nodes.

use num_complex::Complex64;
use thiserror::Error;

use crate::barrier::{BarrierError, BoundaryData, UnitaryMatrix2};
use crate::linalg::{Mat2, C64};
use crate::spectral::{PotentialSpec, SpectralError};

pub(crate) mod tridiag;

mod convergence;
mod propagate;
mod scatter;
mod verify;

pub use convergence::{convergence_study, ConvergenceReport, ConvergenceRow, ConvergenceScenario};
pub use propagate::{propagate, propagate_observed};
pub use scatter::{wavepacket_scatter, WavepacketReport};
pub use verify::{
    compare_schedule, oracle_effective_gate, oracle_run_schedule, ComparisonReport, OracleGate,
    ScheduleOracle, VerifyError,
};

/// Failures of the grid machinery.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("grid cannot resolve the request: {0}")]
    Resolution(String),
    #[error("interface elimination is singular: {0}")]
    SingularInterface(String),
    #[error("tridiagonal solve broke down: {0}")]
    LinearSolve(String),
    #[error("iteration did not converge: {0}")]
    Convergence(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Barrier(#[from] BarrierError),
}

/// Symmetric staggered grid on `[-L, L]` with an even number of nodes at
/// `x_i = -L + (i + 1/2) h`; hard walls sit half a step beyond the last
/// nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self, OracleError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(OracleError::Resolution(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if n < 16 || n % 2 != 0 {
            return Err(OracleError::Resolution(format!(
                "node count must be even and at least 16, got {n}"
            )));
        }
        Ok(Self { half_width, n })
    }

    /// Default box for a trap frequency: ten oscillator lengths per side,
    /// 2048 nodes.
    pub fn default_for(omega: f64) -> Result<Self, OracleError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(OracleError::Resolution(format!(
                "default grid needs a positive trap frequency, got {omega}"
            )));
        }
        Self::new(10.0 / omega.sqrt(), 2048)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.h()
    }

    /// Check that this grid can carry the potential: the box must hold the
    /// low trap states and the step must resolve the largest node value of
    /// the potential.
    pub fn validate_against(&self, pot: &PotentialSpec) -> Result<(), OracleError> {
        pot.validate()?;
        if pot.omega > 0.0 && self.half_width < 8.0 / pot.omega.sqrt() {
            return Err(OracleError::Resolution(format!(
                "box half width {} is below eight oscillator lengths",
                self.half_width
            )));
        }
        let h = self.h();
        let mut vmax = 0.0f64;
        for i in 0..self.n {
            vmax = vmax.max(pot.v(self.x(i)).abs());
        }
        if h * vmax.sqrt() >= 0.5 {
            return Err(OracleError::Resolution(format!(
                "step {h:.3e} cannot resolve potential scale {vmax:.3e}"
            )));
        }
        Ok(())
    }
}

/// Wavefunction samples on a grid, kept at exactly unit discrete norm.
#[derive(Clone, Debug)]
pub struct GridState {
    grid: Grid,
    psi: Vec<C64>,
}

impl GridState {
    /// Accepts a sample vector whose discrete norm is already close to one
    /// and renormalizes it exactly.
    pub fn new(grid: Grid, mut psi: Vec<C64>) -> Result<Self, OracleError> {
        if psi.len() != grid.n {
            return Err(OracleError::InvalidState(format!(
                "state length {} does not match grid size {}",
                psi.len(),
                grid.n
            )));
        }
        let n2: f64 = grid.h() * psi.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-6 {
            return Err(OracleError::InvalidState(format!(
                "state norm {n2:.9} is too far from one"
            )));
        }
        let inv = Complex64::new(1.0 / n2.sqrt(), 0.0);
        for c in &mut psi {
            *c *= inv;
        }
        Ok(Self { grid, psi })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn psi(&self) -> &[C64] {
        &self.psi
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid.h() * self.psi.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Probability weight on each side of the cut, `(right, left)`.
    pub fn side_masses(&self) -> (f64, f64) {
        let h = self.grid.h();
        let mid = self.grid.n / 2;
        let left: f64 = self.psi[..mid].iter().map(|c| c.norm_sqr()).sum::<f64>() * h;
        let right: f64 = self.psi[mid..].iter().map(|c| c.norm_sqr()).sum::<f64>() * h;
        (right, left)
    }

    pub fn position_expectation(&self) -> f64 {
        let h = self.grid.h();
        self.psi
            .iter()
            .enumerate()
            .map(|(i, c)| self.grid.x(i) * c.norm_sqr())
            .sum::<f64>()
            * h
    }
}

/// Eliminate the ghost pair through the boundary condition: with node pair
/// `p = (psi(i+), psi(i-))` and ghosts `g` mirrored across the cut, midpoint
/// values `Psi = (p + g)/2` and signed derivatives `Psi' = (p - g)/h` turn
/// the condition into `(A + B) p + (A - B) g = 0`, so `g = C p` with
/// `C = -(A - B)^{-1} (A + B)`. For unitary `U`, `C` is Hermitian; for a
/// Hermitian `U` it equals `U` itself and is step-independent.
fn interface_coupling(u: &UnitaryMatrix2, h: f64) -> Result<Mat2, OracleError> {
    let m = *u.mat();
    let id = Mat2::identity();
    let a = (m - id).scale(Complex64::new(0.5, 0.0));
    let b = (m + id).scale(Complex64::new(0.0, 1.0 / h));
    let denom = a - b;
    let det_scale = 1.0 + 4.0 / (h * h);
    if denom.det().norm() < 1e-8 * det_scale {
        return Err(OracleError::SingularInterface(format!(
            "interaction has an eigenphase at 2 atan(2/{h:.3e}); refine the step"
        )));
    }
    let inv = denom.inverse().ok_or_else(|| {
        OracleError::SingularInterface("ghost elimination matrix is not invertible".into())
    })?;
    let c = (inv * (a + b)).scale(Complex64::new(-1.0, 0.0));
    let defect = (c - c.adjoint()).norm_max();
    debug_assert!(
        defect < 1e-9 * (1.0 + c.norm_max()),
        "coupling lost Hermiticity: defect {defect:.3e}"
    );
    let sym = (c + c.adjoint()).scale(Complex64::new(0.5, 0.0));
    Ok(sym)
}

/// Discrete Hamiltonian: Hermitian tridiagonal with real diagonal. `off[i]`
/// is the entry coupling node `i` to node `i + 1`; the lower coupling is its
/// conjugate. Only the middle coupling is ever complex.
#[derive(Clone, Debug)]
pub struct DiscreteHamiltonian {
    grid: Grid,
    diag: Vec<f64>,
    off: Vec<C64>,
    interface: Mat2,
}

impl DiscreteHamiltonian {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[C64] {
        &self.off
    }

    /// The ghost coupling matrix `C` used to eliminate the interface.
    pub fn interface(&self) -> &Mat2 {
        &self.interface
    }

    /// Apply the Hamiltonian to a sample vector.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let n = self.diag.len();
        debug_assert_eq!(psi.len(), n);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = psi[i] * self.diag[i];
            if i > 0 {
                acc += self.off[i - 1].conj() * psi[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * psi[i + 1];
            }
            out[i] = acc;
        }
        out
    }
}

/// Assemble the grid Hamiltonian for a potential and an interaction matrix
/// at the cut.
pub fn build_hamiltonian(
    u: &UnitaryMatrix2,
    pot: &PotentialSpec,
    grid: &Grid,
) -> Result<DiscreteHamiltonian, OracleError> {
    grid.validate_against(pot)?;
    let n = grid.n();
    let h = grid.h();
    let c = interface_coupling(u, h)?;
    let inv2h2 = 1.0 / (2.0 * h * h);
    let i_minus = n / 2 - 1;
    let i_plus = n / 2;
    let mut diag = vec![0.0f64; n];
    let mut off = vec![Complex64::new(0.0, 0.0); n - 1];
    for i in 0..n {
        diag[i] = 2.0 * inv2h2 + pot.v(grid.x(i));
        if i + 1 < n {
            off[i] = Complex64::new(-inv2h2, 0.0);
        }
    }
    // The ghost across the cut folds into the two middle rows: the ghost of
    // row i+ is C00 psi(i+) + C01 psi(i-), and mirrored for row i-.
    diag[i_plus] -= c.at(0, 0).re * inv2h2;
    diag[i_minus] -= c.at(1, 1).re * inv2h2;
    off[i_minus] = -c.at(1, 0) * inv2h2;
    Ok(DiscreteHamiltonian {
        grid: *grid,
        diag,
        off,
        interface: c,
    })
}

/// Hard cap on how many stationary levels the bisection solver returns.
pub const MAX_STATIONARY: usize = 12;

/// Lowest `count` eigenvalues of the discrete Hamiltonian. The complex
/// middle coupling is removed by a diagonal phase similarity (eigenvalues
/// only depend on coupling magnitudes), then Sturm bisection does the rest.
pub fn stationary_spectrum(
    ham: &DiscreteHamiltonian,
    count: usize,
) -> Result<Vec<f64>, OracleError> {
    if count == 0 || count > MAX_STATIONARY {
        return Err(OracleError::Resolution(format!(
            "stationary solver serves 1..={MAX_STATIONARY} levels, got {count}"
        )));
    }
    let t = tridiag::SymTridiag {
        diag: ham.diag.clone(),
        off: ham.off.iter().map(|c| c.norm()).collect(),
    };
    Ok(t.lowest_eigenvalues(count))
}

/// One-sided quadratic extrapolation of boundary values and derivatives
/// from the three nodes nearest the cut on each side. Never uses ghost
/// data, so feeding the result to the boundary-condition residual is an
/// independent check on a propagated state.
pub fn boundary_extrapolants(grid: &Grid, psi: &[C64]) -> BoundaryData {
    let n = grid.n();
    debug_assert!(psi.len() == n && n >= 6);
    let h = grid.h();
    let ip = n / 2;
    let im = n / 2 - 1;
    let (r0, r1, r2) = (psi[ip], psi[ip + 1], psi[ip + 2]);
    let (l0, l1, l2) = (psi[im], psi[im - 1], psi[im - 2]);
    let eighth = Complex64::new(0.125, 0.0);
    let inv_h = Complex64::new(1.0 / h, 0.0);
    BoundaryData {
        psi_plus: (r0 * 15.0 - r1 * 10.0 + r2 * 3.0) * eighth,
        psi_minus: (l0 * 15.0 - l1 * 10.0 + l2 * 3.0) * eighth,
        dpsi_plus: (-r0 * 2.0 + r1 * 3.0 - r2) * inv_h,
        dpsi_minus: (l0 * 2.0 - l1 * 3.0 + l2) * inv_h,
    }
}

/// Largest component of the boundary-condition residual evaluated on
/// one-sided extrapolants of the state.
pub fn max_boundary_residual(u: &UnitaryMatrix2, grid: &Grid, psi: &[C64]) -> f64 {
    let bd = boundary_extrapolants(grid, psi);
    let r = crate::barrier::boundary_residual(u, &bd);
    r[0].norm().max(r[1].norm())
}

/// Lowest `count` half-line oscillator levels under the boundary condition
/// `psi'(0) = tan(theta/2) psi(0)`, from a staggered half-line grid with
/// `n` nodes on `[0, 10/sqrt(omega)]`. The boundary node pair straddles the
/// origin, so the ghost weight `(cos/h - sin/2) / (cos/h + sin/2)` is a
/// centered, second-order accurate elimination.
pub fn robin_grid_spectrum(
    theta: f64,
    omega: f64,
    count: usize,
    n: usize,
) -> Result<Vec<f64>, OracleError> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(OracleError::Resolution(format!(
            "half-line solver needs a positive trap frequency, got {omega}"
        )));
    }
    if count == 0 || count > MAX_STATIONARY {
        return Err(OracleError::Resolution(format!(
            "stationary solver serves 1..={MAX_STATIONARY} levels, got {count}"
        )));
    }
    if n < 64 {
        return Err(OracleError::Resolution(format!(
            "half-line grid needs at least 64 nodes, got {n}"
        )));
    }
    let l = 10.0 / omega.sqrt();
    let h = l / n as f64;
    let half = theta / 2.0;
    let (s, c) = half.sin_cos();
    let denom = c / h + s / 2.0;
    if denom.abs() < 1e-10 / h {
        return Err(OracleError::SingularInterface(format!(
            "boundary angle {theta:.6} hits the ghost pole at this step"
        )));
    }
    let rho = (c / h - s / 2.0) / denom;
    let inv2h2 = 1.0 / (2.0 * h * h);
    let mut diag = vec![0.0f64; n];
    for (i, d) in diag.iter_mut().enumerate() {
        let x = (i as f64 + 0.5) * h;
        *d = 2.0 * inv2h2 + 0.5 * omega * omega * x * x;
    }
    diag[0] -= rho * inv2h2;
    let t = tridiag::SymTridiag {
        diag,
        off: vec![-inv2h2; n - 1],
    };
    Ok(t.lowest_eigenvalues(count))
}

/// Half-line levels with one step of Richardson extrapolation across a grid
/// doubling, removing the leading second-order error.
pub fn robin_grid_spectrum_refined(
    theta: f64,
    omega: f64,
    count: usize,
    n: usize,
) -> Result<Vec<f64>, OracleError> {
    let coarse = robin_grid_spectrum(theta, omega, count, n)?;
    let fine = robin_grid_spectrum(theta, omega, count, 2 * n)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(&a, &b)| (4.0 * b - a) / 3.0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barrier::{sigma_matrix, wall_matrix};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_geometry_straddles_the_cut() {
        let g = Grid::new(10.0, 2048).unwrap();
        assert_abs_diff_eq!(g.h(), 20.0 / 2048.0, epsilon = 1e-15);
        let im = g.n() / 2 - 1;
        let ip = g.n() / 2;
        assert_abs_diff_eq!(g.x(im), -g.h() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.x(ip), g.h() / 2.0, epsilon = 1e-12);
        assert!(Grid::new(10.0, 2047).is_err());
        assert!(Grid::new(10.0, 8).is_err());
        assert!(Grid::new(-1.0, 64).is_err());
        let d = Grid::default_for(4.0).unwrap();
        assert_abs_diff_eq!(d.half_width(), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn grid_validation_enforces_box_and_resolution() {
        let pot = PotentialSpec::harmonic(1.0);
        assert!(Grid::new(10.0, 2048)
            .unwrap()
            .validate_against(&pot)
            .is_ok());
        assert!(Grid::new(5.0, 2048)
            .unwrap()
            .validate_against(&pot)
            .is_err());
        // A coarse grid cannot resolve the trap edge where V ~ 50.
        assert!(Grid::new(10.0, 64).unwrap().validate_against(&pot).is_err());
        // The inverse-square ridge contributes 2 sqrt(g) at the innermost
        // node independently of h, so small couplings stay resolvable.
        let ridge = PotentialSpec {
            g: 0.05,
            ..PotentialSpec::harmonic(1.0)
        };
        assert!(Grid::new(10.0, 2048)
            .unwrap()
            .validate_against(&ridge)
            .is_ok());
    }

    #[test]
    fn coupling_is_exact_for_swap_and_signs() {
        let h = 0.01;
        let free = interface_coupling(&UnitaryMatrix2::sigma1(), h).unwrap();
        assert!((free - *UnitaryMatrix2::sigma1().mat()).norm_max() < 1e-12);
        let neumann = interface_coupling(&UnitaryMatrix2::identity(), h).unwrap();
        assert!((neumann - Mat2::identity()).norm_max() < 1e-12);
        let dirichlet = interface_coupling(&UnitaryMatrix2::minus_identity(), h).unwrap();
        assert!((dirichlet + Mat2::identity()).norm_max() < 1e-12);
        // Any Hermitian member reproduces itself, independent of h.
        for (mu, nu) in [(FRAC_PI_2, 0.3), (0.4, 1.1), (PI, 2.0)] {
            let u = UnitaryMatrix2::new(sigma_matrix(mu, nu)).unwrap();
            for step in [0.05, 0.01, 0.002] {
                let cc = interface_coupling(&u, step).unwrap();
                assert!((cc - *u.mat()).norm_max() < 1e-10);
            }
        }
    }

    #[test]
    fn coupling_detects_the_eigenphase_pole() {
        let h = 0.01;
        // U = e^{i phi} I is singular when phi = 2 atan(2/h).
        let phi = 2.0 * (2.0_f64 / h).atan();
        let m = Mat2::identity().scale(crate::linalg::cis(phi));
        let u = UnitaryMatrix2::new(m).unwrap();
        assert!(matches!(
            interface_coupling(&u, h),
            Err(OracleError::SingularInterface(_))
        ));
        // Slightly away from the pole it inverts fine.
        let m = Mat2::identity().scale(crate::linalg::cis(phi - 0.05));
        let u = UnitaryMatrix2::new(m).unwrap();
        assert!(interface_coupling(&u, h).is_ok());
    }

    #[test]
    fn free_spectrum_matches_the_oscillator_ladder() {
        // The swap interaction stitches the halves into a free line; the
        // lowest levels must be (n + 1/2) omega to second order in h.
        let grid = Grid::default_for(1.0).unwrap();
        let ham = build_hamiltonian(
            &UnitaryMatrix2::sigma1(),
            &PotentialSpec::harmonic(1.0),
            &grid,
        )
        .unwrap();
        let evs = stationary_spectrum(&ham, 6).unwrap();
        // The h^2 defect carries the quartic momentum moment, which grows
        // roughly like the level squared.
        for (k, &e) in evs.iter().enumerate() {
            let eps = 2e-5 * (1.0 + (k * k) as f64);
            assert_abs_diff_eq!(e, k as f64 + 0.5, epsilon = eps);
        }
    }

    #[test]
    fn dirichlet_wall_doubles_the_odd_ladder() {
        // U = -I cuts the line into two Dirichlet half-lines, each with
        // levels (2n + 3/2) omega, so everything is doubly degenerate.
        let grid = Grid::default_for(1.0).unwrap();
        let ham = build_hamiltonian(
            &UnitaryMatrix2::minus_identity(),
            &PotentialSpec::harmonic(1.0),
            &grid,
        )
        .unwrap();
        let evs = stationary_spectrum(&ham, 6).unwrap();
        let want = [1.5, 1.5, 3.5, 3.5, 5.5, 5.5];
        for (i, (&e, &w)) in evs.iter().zip(&want).enumerate() {
            // Half-line level i sits at full-line mode 2 floor(i/2) + 1.
            let m = 2 * (i / 2) + 1;
            let eps = 2e-5 * (1.0 + (m * m) as f64);
            assert_abs_diff_eq!(e, w, epsilon = eps);
        }
    }

    #[test]
    fn wall_hamiltonian_decouples_the_sides() {
        let grid = Grid::default_for(1.0).unwrap();
        let u = wall_matrix(0.7, 2.1);
        let ham = build_hamiltonian(&u, &PotentialSpec::harmonic(1.0), &grid).unwrap();
        let mid = grid.n() / 2 - 1;
        assert!(ham.off()[mid].norm() < 1e-14);
        assert!(ham.off()[mid - 1].norm() > 0.0);
    }

    #[test]
    fn hamiltonian_apply_matches_rows() {
        let grid = Grid::new(10.0, 64).unwrap();
        // Free particle dodges the resolution guard on a coarse grid.
        let pot = PotentialSpec::free_line();
        let u = UnitaryMatrix2::new(sigma_matrix(1.0, 0.7)).unwrap();
        let ham = build_hamiltonian(&u, &pot, &grid).unwrap();
        let n = grid.n();
        let psi: Vec<C64> = (0..n)
            .map(|i| c((i as f64 * 0.1).sin(), (i as f64 * 0.07).cos()))
            .collect();
        let hpsi = ham.apply(&psi);
        // Spot-check an interior row and the two interface rows.
        let inv2h2 = 1.0 / (2.0 * grid.h() * grid.h());
        let i = 10;
        let want = psi[i] * ham.diag()[i] - (psi[i - 1] + psi[i + 1]) * inv2h2;
        assert!((hpsi[i] - want).norm() < 1e-9);
        let im = n / 2 - 1;
        let ip = n / 2;
        let want_m = psi[im] * ham.diag()[im] - psi[im - 1] * inv2h2 + ham.off()[im] * psi[ip];
        assert!((hpsi[im] - want_m).norm() < 1e-9);
        let want_p =
            psi[ip] * ham.diag()[ip] - psi[ip + 1] * inv2h2 + ham.off()[im].conj() * psi[im];
        assert!((hpsi[ip] - want_p).norm() < 1e-9);
    }

    #[test]
    fn extrapolants_recover_a_smooth_profile() {
        let grid = Grid::new(10.0, 2048).unwrap();
        let k = 1.3;
        let psi: Vec<C64> = (0..grid.n())
            .map(|i| {
                let x = grid.x(i);
                c((k * x).cos(), (0.4 * x).sin())
            })
            .collect();
        let bd = boundary_extrapolants(&grid, &psi);
        let h = grid.h();
        assert!((bd.psi_plus - c(1.0, 0.0)).norm() < h * h);
        assert!((bd.psi_minus - c(1.0, 0.0)).norm() < h * h);
        assert!((bd.dpsi_plus - c(0.0, 0.4)).norm() < 10.0 * h * h);
        assert!((bd.dpsi_minus - c(0.0, 0.4)).norm() < 10.0 * h * h);
    }

    #[test]
    fn grid_state_guards_and_measures() {
        let grid = Grid::new(10.0, 64).unwrap();
        let h = grid.h();
        let amp = (1.0 / (h * 64.0)).sqrt();
        let psi = vec![c(amp, 0.0); 64];
        let st = GridState::new(grid, psi.clone()).unwrap();
        assert_abs_diff_eq!(st.norm_sq(), 1.0, epsilon = 1e-14);
        let (r, l) = st.side_masses();
        assert_abs_diff_eq!(r, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(l, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(st.position_expectation(), 0.0, epsilon = 1e-12);
        assert!(GridState::new(grid, vec![c(amp, 0.0); 63]).is_err());
        assert!(GridState::new(grid, vec![c(2.0 * amp, 0.0); 64]).is_err());
    }

    #[test]
    fn robin_grid_endpoints_match_the_exact_ladders() {
        for (theta, base) in [(0.0, 0.5), (PI, 1.5)] {
            let evs = robin_grid_spectrum_refined(theta, 1.0, 6, 1024).unwrap();
            for (k, &e) in evs.iter().enumerate() {
                let want = 2.0 * k as f64 + base;
                assert!(
                    ((e - want) / want).abs() < 1e-6,
                    "theta {theta}: level {k} got {e}, want {want}"
                );
            }
        }
    }

    #[test]
    fn robin_grid_interpolates_between_ladders() {
        let evs = robin_grid_spectrum(FRAC_PI_2, 1.0, 4, 1024).unwrap();
        for (k, &e) in evs.iter().enumerate() {
            let lo = 2.0 * k as f64 + 0.5;
            let hi = 2.0 * k as f64 + 1.5;
            assert!(lo < e && e < hi, "level {k} = {e} outside ({lo}, {hi})");
        }
    }
}
