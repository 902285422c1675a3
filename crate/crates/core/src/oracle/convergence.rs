//! Step-refinement studies: rerun a fixed scenario on a sequence of grids
//! with `h` halving (and the time step tied to `h`), collect the error
//! against the exact answer, and report the observed orders
//! `log2(e_i / e_{i+1})`.

use num_complex::Complex64;

use super::verify::{compare_schedule, VerifyError};
use super::{build_hamiltonian, stationary_spectrum, Grid, OracleError};
use crate::barrier::UnitaryMatrix2;
use crate::evolve::{Pulse, PulseSchedule};
use crate::spectral::{Envelope, PotentialSpec};

/// What gets refined. Energies probe the bulk discretization; the two gate
/// scenarios probe the interface elimination and the time stepping through
/// a full half-period map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceScenario {
    /// Ground energy of the stitched free line against `omega / 2`.
    /// Attains second order.
    FreeGroundEnergy,
    /// Half-period balanced reflection on a displaced carrier against the
    /// exact amplitude map. The comparison aligns the global phase, which
    /// cancels the uniform second-order phase error; the residual deviation
    /// refines at fourth order on the default box.
    BalancedReflectionAmplitude,
    /// Quarter-phase wall gate on both-lobe input against the exact map.
    /// Attains second order, with a faster superconvergent first interval
    /// on coarse grids where subleading terms still cancel.
    WallPhaseGate,
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub scenario: ConvergenceScenario,
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<f64>,
}

fn scenario_error(scenario: ConvergenceScenario, n: usize) -> Result<f64, VerifyError> {
    let omega = 1.0;
    let grid = Grid::new(10.0, n).map_err(VerifyError::Oracle)?;
    let period = 2.0 * std::f64::consts::PI / omega;
    let dt = period / (2.0 * n as f64);
    match scenario {
        ConvergenceScenario::FreeGroundEnergy => {
            let ham = build_hamiltonian(
                &UnitaryMatrix2::sigma1(),
                &PotentialSpec::harmonic(omega),
                &grid,
            )?;
            let e0 = stationary_spectrum(&ham, 1)?[0];
            Ok((e0 - 0.5 * omega).abs())
        }
        ConvergenceScenario::BalancedReflectionAmplitude => {
            let env = Envelope::displaced(omega, 4.5, 33)?;
            let sched = PulseSchedule::new(
                omega,
                vec![Pulse::Sigma {
                    mu: std::f64::consts::FRAC_PI_2,
                    nu: 0.0,
                    half_periods: 1,
                }],
            )?;
            let rep = compare_schedule(
                &sched,
                &env,
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                &grid,
                dt,
            )?;
            Ok(rep.max_deviation)
        }
        ConvergenceScenario::WallPhaseGate => {
            let env = Envelope::displaced(omega, 4.5, 33)?;
            let sched = PulseSchedule::new(
                omega,
                vec![Pulse::Wall {
                    theta_plus: std::f64::consts::PI,
                    theta_minus: std::f64::consts::PI,
                    v_plus: 0.25 * omega,
                    v_minus: 0.0,
                    half_periods: 1,
                }],
            )?;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let rep = compare_schedule(
                &sched,
                &env,
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                &grid,
                dt,
            )?;
            Ok(rep.max_deviation)
        }
    }
}

/// Run the scenario over a doubling sequence of node counts (so `h` halves
/// every row, and the time step halves with it).
pub fn convergence_study(
    scenario: ConvergenceScenario,
    ns: &[usize],
) -> Result<ConvergenceReport, VerifyError> {
    if ns.len() < 3 {
        return Err(VerifyError::Oracle(OracleError::Resolution(format!(
            "a refinement study needs at least three levels, got {}",
            ns.len()
        ))));
    }
    for w in ns.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(VerifyError::Oracle(OracleError::Resolution(format!(
                "node counts must double between levels, got {} then {}",
                w[0], w[1]
            ))));
        }
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = Grid::new(10.0, n).map_err(VerifyError::Oracle)?;
        let error = scenario_error(scenario, n)?;
        rows.push(ConvergenceRow {
            n,
            h: grid.h(),
            error,
        });
    }
    let orders = rows
        .windows(2)
        .map(|w| (w[0].error / w[1].error).log2())
        .collect();
    Ok(ConvergenceReport {
        scenario,
        rows,
        orders,
    })
}
