//! Crank-Nicolson propagation of grid states. The Cayley form
//! `(I + i dt H / 2) psi' = (I - i dt H / 2) psi` is exactly norm-preserving
//! for a Hermitian tridiagonal `H`, so norm drift measures only rounding and
//! solver quality, never the scheme.

use num_complex::Complex64;

use super::tridiag::thomas_solve;
use super::{DiscreteHamiltonian, GridState, OracleError};
use crate::linalg::C64;

/// Practical ceiling on time steps in one call; long schedules should not
/// silently turn into hour-long solves.
const MAX_STEPS: usize = 20_000_000;

/// Propagate for time `t` using steps of nominal size `dt` (rounded so the
/// steps tile `t` exactly). The observer sees the raw, unrenormalized
/// samples after every step.
pub fn propagate_observed(
    ham: &DiscreteHamiltonian,
    state: &GridState,
    t: f64,
    dt: f64,
    mut observer: impl FnMut(usize, &[C64]),
) -> Result<GridState, OracleError> {
    if !(t.is_finite() && t > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(OracleError::InvalidState(format!(
            "propagation needs positive time and step, got t={t}, dt={dt}"
        )));
    }
    if state.grid() != ham.grid() {
        return Err(OracleError::InvalidState(
            "state and Hamiltonian live on different grids".into(),
        ));
    }
    let steps_f = (t / dt).round().max(1.0);
    if steps_f > MAX_STEPS as f64 {
        return Err(OracleError::Resolution(format!(
            "{steps_f:.0} steps exceed the propagation budget"
        )));
    }
    let steps = steps_f as usize;
    let dt_eff = t / steps as f64;
    let n = ham.diag().len();
    let half = 0.5 * dt_eff;
    let mut diag_a = Vec::with_capacity(n);
    let mut diag_b = Vec::with_capacity(n);
    for &d in ham.diag() {
        diag_a.push(Complex64::new(1.0, half * d));
        diag_b.push(Complex64::new(1.0, -half * d));
    }
    let i_half = Complex64::new(0.0, half);
    let upper_a: Vec<C64> = ham.off().iter().map(|&o| i_half * o).collect();
    let lower_a: Vec<C64> = ham.off().iter().map(|&o| i_half * o.conj()).collect();
    let mut psi = state.psi().to_vec();
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for step in 0..steps {
        for i in 0..n {
            let mut acc = diag_b[i] * psi[i];
            if i > 0 {
                acc -= lower_a[i - 1] * psi[i - 1];
            }
            if i + 1 < n {
                acc -= upper_a[i] * psi[i + 1];
            }
            rhs[i] = acc;
        }
        psi = thomas_solve(&lower_a, &diag_a, &upper_a, &rhs).ok_or_else(|| {
            OracleError::LinearSolve(format!("implicit step {step} lost its pivot"))
        })?;
        observer(step, &psi);
    }
    GridState::new(state.grid(), psi)
}

/// Propagate without observation.
pub fn propagate(
    ham: &DiscreteHamiltonian,
    state: &GridState,
    t: f64,
    dt: f64,
) -> Result<GridState, OracleError> {
    propagate_observed(ham, state, t, dt, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barrier::{sigma_matrix, wall_matrix, UnitaryMatrix2};
    use crate::oracle::{build_hamiltonian, Grid};
    use crate::spectral::PotentialSpec;
    use std::f64::consts::PI;

    fn sampled(grid: &Grid, f: impl Fn(f64) -> C64) -> GridState {
        let psi: Vec<C64> = (0..grid.n()).map(|i| f(grid.x(i))).collect();
        let n2: f64 = grid.h() * psi.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let scaled = psi
            .into_iter()
            .map(|c| c / Complex64::new(n2.sqrt(), 0.0))
            .collect();
        GridState::new(*grid, scaled).unwrap()
    }

    fn overlap(a: &GridState, b: &GridState) -> C64 {
        let h = a.grid().h();
        a.psi()
            .iter()
            .zip(b.psi())
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            * h
    }

    #[test]
    fn ground_state_accumulates_the_right_phase() {
        let omega = 1.0;
        let grid = Grid::default_for(omega).unwrap();
        let ham = build_hamiltonian(
            &UnitaryMatrix2::sigma1(),
            &PotentialSpec::harmonic(omega),
            &grid,
        )
        .unwrap();
        let init = sampled(&grid, |x| {
            Complex64::new((omega / PI).powf(0.25) * (-0.5 * omega * x * x).exp(), 0.0)
        });
        let t = PI / omega;
        let fin = propagate(&ham, &init, t, t / 2048.0).unwrap();
        let ov = overlap(&init, &fin);
        // e^{-i E0 t} with E0 = omega/2 gives exactly -i over a half period.
        assert!(ov.norm() > 1.0 - 1e-6, "overlap magnitude {}", ov.norm());
        assert!((ov + Complex64::new(0.0, 1.0)).norm() < 1e-3, "phase {ov}");
    }

    #[test]
    fn norm_is_conserved_to_rounding() {
        let omega = 1.0;
        let grid = Grid::default_for(omega).unwrap();
        let u = UnitaryMatrix2::new(sigma_matrix(1.2, 0.7)).unwrap();
        let ham = build_hamiltonian(&u, &PotentialSpec::harmonic(omega), &grid).unwrap();
        let init = sampled(&grid, |x| {
            Complex64::new((-(x - 3.0) * (x - 3.0) / 2.0).exp(), 0.0)
        });
        let h = grid.h();
        let mut worst = 0.0f64;
        propagate_observed(&ham, &init, 0.1, 1e-3, |_, psi| {
            let n2: f64 = h * psi.iter().map(|c| c.norm_sqr()).sum::<f64>();
            worst = worst.max((n2 - 1.0).abs());
        })
        .unwrap();
        assert!(worst < 1e-12, "norm drift {worst:.3e}");
    }

    #[test]
    fn half_period_swings_a_packet_across_a_swap_interface() {
        // sigma(pi, 0) is the plain swap: the line is free and a displaced
        // packet crosses to the mirror point in half a period.
        let omega = 1.0;
        let grid = Grid::default_for(omega).unwrap();
        let u = UnitaryMatrix2::new(sigma_matrix(PI, 0.0)).unwrap();
        let ham = build_hamiltonian(&u, &PotentialSpec::harmonic(omega), &grid).unwrap();
        let init = sampled(&grid, |x| {
            Complex64::new((-(x - 4.5) * (x - 4.5) / 2.0).exp(), 0.0)
        });
        let t = PI / omega;
        let fin = propagate(&ham, &init, t, t / 2048.0).unwrap();
        let (right, left) = fin.side_masses();
        assert!(left > 0.999, "left mass {left}");
        assert!(right < 1e-3, "right mass {right}");
        // Mode dephasing from the h^2 eigenvalue error distorts the packet
        // at the percent level; the mean position is looser than the mass.
        assert!((fin.position_expectation() + 4.5).abs() < 0.05);
    }

    #[test]
    fn neumann_walls_revive_the_packet_in_place() {
        let omega = 1.0;
        let grid = Grid::default_for(omega).unwrap();
        let ham = build_hamiltonian(
            &wall_matrix(0.0, 0.0),
            &PotentialSpec::harmonic(omega),
            &grid,
        )
        .unwrap();
        let init = sampled(&grid, |x| {
            Complex64::new((-(x - 4.5) * (x - 4.5) / 2.0).exp(), 0.0)
        });
        let t = PI / omega;
        let fin = propagate(&ham, &init, t, t / 2048.0).unwrap();
        let (right, left) = fin.side_masses();
        assert!(right > 0.999, "right mass {right}");
        assert!(left < 1e-3, "left mass {left}");
        // The packet bounced off the wall and returned to its start.
        assert!((fin.position_expectation() - 4.5).abs() < 0.05);
    }

    #[test]
    fn propagation_rejects_bad_requests() {
        let grid = Grid::default_for(1.0).unwrap();
        let ham = build_hamiltonian(
            &UnitaryMatrix2::sigma1(),
            &PotentialSpec::harmonic(1.0),
            &grid,
        )
        .unwrap();
        let init = sampled(&grid, |x| {
            Complex64::new((-0.5 * (x - 2.0) * (x - 2.0)).exp(), 0.0)
        });
        assert!(propagate(&ham, &init, -1.0, 0.1).is_err());
        assert!(propagate(&ham, &init, 1.0, 0.0).is_err());
        assert!(propagate(&ham, &init, 1e9, 1e-9).is_err());
        let other = Grid::new(10.0, 1024).unwrap();
        let small = sampled(&other, |x| {
            Complex64::new((-0.5 * (x - 2.0) * (x - 2.0)).exp(), 0.0)
        });
        assert!(propagate(&ham, &small, 1.0, 0.1).is_err());
    }
}
