//! Pulse synthesis for arbitrary single-qubit targets. Every unitary splits
//! as `e^{i gamma} Rz(alpha) Ry(beta) Rz(delta)`; the Ry factor is a pair of
//! reflections, and each Rz factor is a double Dirichlet wall whose per-side
//! potential offsets accumulate the phase over one half-period. Global phase
//! is discarded throughout: the physical maps realize targets up to phase.

use thiserror::Error;

use crate::barrier::{sigma_matrix, UnitaryMatrix2};
use crate::evolve::{EvolveError, Pulse, PulseSchedule};
use crate::gatelab::{GateError, GateMatrix};
use crate::linalg::{cis, mod_two_pi, Mat2, C64};

#[derive(Debug, Error)]
pub enum CompilerError {
    #[error("wall at theta = {0:.6} acts beyond the qubit subspace and has no ideal 2x2 matrix")]
    NotQubitExact(f64),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// ZYZ angles: `target = e^{i gamma} Rz(alpha) Ry(beta) Rz(delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

/// `Rz(alpha) Ry(beta) Rz(delta)` without the global phase.
fn zyz_matrix(alpha: f64, beta: f64, delta: f64) -> Mat2 {
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    Mat2::new([
        [
            cis(-(alpha + delta) / 2.0) * c,
            -cis(-(alpha - delta) / 2.0) * s,
        ],
        [
            cis((alpha - delta) / 2.0) * s,
            cis((alpha + delta) / 2.0) * c,
        ],
    ])
}

/// Recompose the angles into the full matrix.
pub fn euler_matrix(angles: &EulerAngles) -> Mat2 {
    zyz_matrix(angles.alpha, angles.beta, angles.delta).scale(cis(angles.gamma))
}

/// Canonical ZYZ decomposition: `beta` in `[0, pi]`, `alpha` and `delta` in
/// `[0, 2pi)`; at the gimbal points (`beta` of 0 or pi) the redundancy is
/// fixed by `delta = 0`. Wrapping a half-angle by 2 pi flips the sign of its
/// factor, so the global phase is read back off the finished product rather
/// than tracked through the branches.
pub fn euler_decompose(g: &UnitaryMatrix2) -> EulerAngles {
    let m = *g.mat();
    let gamma0 = 0.5 * m.det().arg();
    let r = m.scale(cis(-gamma0));
    let a = r.at(0, 0);
    let b = r.at(1, 0);
    let beta = 2.0 * b.norm().atan2(a.norm());
    let (alpha_raw, delta_raw) = if b.norm() < 1e-12 {
        (-2.0 * a.arg(), 0.0)
    } else if a.norm() < 1e-12 {
        (2.0 * b.arg(), 0.0)
    } else {
        let half_sum = -a.arg();
        let half_diff = b.arg();
        (half_sum + half_diff, half_sum - half_diff)
    };
    let alpha = mod_two_pi(alpha_raw);
    let delta = mod_two_pi(delta_raw);
    let bare = zyz_matrix(alpha, beta, delta);
    let gamma = (m * bare.adjoint()).trace().arg();
    EulerAngles {
        gamma,
        alpha,
        beta,
        delta,
    }
}

/// Wrap an angle into `(-pi, pi]`.
fn wrap_pi(x: f64) -> f64 {
    let w = mod_two_pi(x);
    if w > std::f64::consts::PI {
        w - std::f64::consts::TAU
    } else {
        w
    }
}

/// One half-period behind double Dirichlet walls with antisymmetric offsets
/// realizes `Rz(x)` up to global phase; a vanishing angle needs no pulse.
fn rz_wall(x: f64, omega: f64) -> Option<Pulse> {
    let x = wrap_pi(x);
    if x.abs() < 1e-12 {
        return None;
    }
    let v = x * omega / std::f64::consts::TAU;
    Some(Pulse::Wall {
        theta_plus: std::f64::consts::PI,
        theta_minus: std::f64::consts::PI,
        v_plus: v,
        v_minus: -v,
        half_periods: 1,
    })
}

/// Synthesize a schedule whose ideal matrix equals the target up to global
/// phase, using at most four pulses. Diagonal targets become a single wall
/// pulse; dephased-Hermitian targets (the reflections themselves) become a
/// single half-period; everything else goes through the ZYZ route
/// `[Rz(delta) wall, sigma(0,0), sigma(beta,0), Rz(alpha) wall]` with
/// identity factors dropped.
pub fn compile_gate(g: &UnitaryMatrix2, omega: f64) -> Result<PulseSchedule, CompilerError> {
    let m = *g.mat();
    let mut pulses: Vec<Pulse> = Vec::new();
    let off_norm = m.at(0, 1).norm().max(m.at(1, 0).norm());
    if off_norm < 1e-12 {
        let x = (m.at(1, 1) / m.at(0, 0)).arg();
        pulses.extend(rz_wall(x, omega));
    } else {
        let phi = 0.5 * (-m.det()).arg();
        let r = m.scale(cis(-phi));
        let herm_defect = (r - r.adjoint()).norm_max();
        if herm_defect < 1e-10 && r.trace().norm() < 1e-10 {
            let r = if r.at(0, 0).re < 0.0 { -r } else { r };
            let w = r.at(0, 1);
            let mu = 2.0 * w.norm().atan2(r.at(0, 0).re);
            let nu = if w.norm() < 1e-12 { 0.0 } else { w.arg() };
            pulses.push(Pulse::Sigma {
                mu,
                nu,
                half_periods: 1,
            });
        } else {
            let ang = euler_decompose(g);
            pulses.extend(rz_wall(ang.delta, omega));
            if ang.beta.abs() > 1e-12 {
                pulses.push(Pulse::Sigma {
                    mu: 0.0,
                    nu: 0.0,
                    half_periods: 1,
                });
                pulses.push(Pulse::Sigma {
                    mu: ang.beta,
                    nu: 0.0,
                    half_periods: 1,
                });
            }
            pulses.extend(rz_wall(ang.alpha, omega));
        }
    }
    if pulses.is_empty() {
        // The target was the identity up to phase; hold the state for one
        // half-period behind plain Dirichlet walls.
        pulses.push(Pulse::Wall {
            theta_plus: std::f64::consts::PI,
            theta_minus: std::f64::consts::PI,
            v_plus: 0.0,
            v_minus: 0.0,
            half_periods: 1,
        });
    }
    Ok(PulseSchedule::new(omega, pulses)?)
}

/// Ideal diagonal factor of one wall side over `d` half-periods, or the
/// angle itself as an error for walls that act outside the qubit space.
fn wall_phase(theta: f64, v: f64, d: u64, omega: f64) -> Result<C64, CompilerError> {
    let tau = std::f64::consts::TAU;
    let hold = d as f64 * std::f64::consts::PI / omega;
    let offset = cis(-v * hold);
    if theta.abs() < 1e-12 || (theta - tau).abs() < 1e-12 {
        Ok(offset)
    } else if (theta - std::f64::consts::PI).abs() < 1e-12 {
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        Ok(offset * sign)
    } else {
        Err(CompilerError::NotQubitExact(theta))
    }
}

/// Product of the ideal per-pulse matrices, in schedule order. Reflections
/// and free evolution alternate with their own inverses, so only the parity
/// of `half_periods` enters; walls contribute exact diagonal phases at the
/// Neumann and Dirichlet endpoints and are rejected elsewhere.
pub fn schedule_matrix(schedule: &PulseSchedule) -> Result<GateMatrix, CompilerError> {
    schedule.validate()?;
    let mut m = Mat2::identity();
    for pulse in &schedule.pulses {
        let step = match pulse {
            Pulse::Sigma {
                mu,
                nu,
                half_periods,
            } => {
                if half_periods % 2 == 1 {
                    sigma_matrix(*mu, *nu)
                } else {
                    Mat2::identity()
                }
            }
            Pulse::Free { half_periods } => {
                if half_periods % 2 == 1 {
                    sigma_matrix(std::f64::consts::PI, 0.0)
                } else {
                    Mat2::identity()
                }
            }
            Pulse::Wall {
                theta_plus,
                theta_minus,
                v_plus,
                v_minus,
                half_periods,
            } => {
                let fp = wall_phase(*theta_plus, *v_plus, *half_periods, schedule.omega)?;
                let fm = wall_phase(*theta_minus, *v_minus, *half_periods, schedule.omega)?;
                Mat2::diag(fp, fm)
            }
        };
        m = step * m;
    }
    Ok(GateMatrix::ideal(m)?)
}
