//! Command-line surface of the locational-qubit laboratory.
//!
//! Five verbs: `spectrum` (Robin level ladder as CSV), `gate` (effective
//! qubit action of one reflection pulse as JSON), `compile` (pulse schedule
//! for a target gate), `verify` (analytic vs grid replay of a schedule),
//! and `scatter` (free-line transmission curve as CSV).
//!
//! Output is deterministic: floats are printed with 17 significant digits,
//! and identical inputs yield byte-identical bytes. Exit codes: 0 success,
//! 1 computational failure, 2 usage error.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

use qabacus::barrier::{scattering_coefficients, sigma_matrix};
use qabacus::compiler::compile_gate;
use qabacus::evolve::effective_gate;
use qabacus::gatelab::matrix_fidelity;
use qabacus::oracle::compare_schedule;
use qabacus::spectral::robin_spectrum;
use qabacus::{Envelope, Grid, Mat2, Pulse, PulseSchedule, UnitaryMatrix2, C64};

#[derive(Parser)]
#[command(
    name = "qabacus",
    version,
    about = "Numerical laboratory for a harmonic trap cut by a programmable point interaction"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Level ladder of a two-sided wall at angle theta, as CSV (n, energy, eta).
    ///
    /// eta is the per-level phase fraction (E_n - (2n+1/2)*omega) / omega:
    /// 0 at the Neumann wall, 1 at the Dirichlet wall.
    Spectrum {
        /// Wall angle in radians; 0 is Neumann, pi is Dirichlet.
        #[arg(long)]
        theta: f64,
        /// Number of levels, counted from the ground state.
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Trap frequency.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Effective qubit gate of a single reflection pulse, as JSON.
    ///
    /// Reports {matrix, leakage, fidelity_vs_ideal}; the matrix is row-major
    /// with entries as [re, im] pairs, and the ideal is the half-period
    /// reflection map at the same angles.
    Gate {
        /// Reflection mixing angle in radians.
        #[arg(long)]
        mu: f64,
        /// Reflection phase angle in radians.
        #[arg(long)]
        nu: f64,
        /// Trap frequency.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pulse schedule realizing a target gate, as schedule JSON.
    Compile {
        /// Named gate (I, X, H, Z, S, T) or an inline row-major 2x2 matrix
        /// as JSON [[re,im] pairs], e.g. '[[[0,0],[1,0]],[[1,0],[0,0]]]'.
        #[arg(long, value_parser = parse_target)]
        target: TargetGate,
        /// Trap frequency.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a schedule on the grid and compare with the exact pulse maps.
    ///
    /// Runs both lobe basis states through the schedule and reports the
    /// amplitudes from both layers together with the worst deviation after
    /// global-phase alignment, as JSON.
    Verify {
        /// Path to a schedule JSON file, as emitted by `compile`.
        #[arg(long)]
        schedule: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Free-line transmission and reflection probabilities, as CSV (k, T, R).
    Scatter {
        /// Reflection mixing angle in radians.
        #[arg(long)]
        mu: f64,
        /// Reflection phase angle in radians.
        #[arg(long)]
        nu: f64,
        /// Smallest wavenumber.
        #[arg(long, default_value_t = 0.5)]
        k_min: f64,
        /// Largest wavenumber.
        #[arg(long, default_value_t = 20.0)]
        k_max: f64,
        /// Number of samples, spaced evenly over [k_min, k_max].
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        points: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone)]
struct TargetGate(UnitaryMatrix2);

fn parse_target(s: &str) -> Result<TargetGate, String> {
    let named = match s {
        "I" => Some(UnitaryMatrix2::identity()),
        "X" => Some(UnitaryMatrix2::sigma1()),
        "H" => Some(UnitaryMatrix2::hadamard()),
        "Z" => Some(UnitaryMatrix2::sigma3()),
        "S" => Some(phase_gate(std::f64::consts::FRAC_PI_2)),
        "T" => Some(phase_gate(std::f64::consts::FRAC_PI_4)),
        _ => None,
    };
    if let Some(u) = named {
        return Ok(TargetGate(u));
    }
    let rows: [[[f64; 2]; 2]; 2] = serde_json::from_str(s).map_err(|_| {
        format!(
            "expected a named gate (I, X, H, Z, S, T) or a 2x2 matrix as \
             JSON [re,im] pairs, got '{s}'"
        )
    })?;
    let entry = |p: [f64; 2]| Complex64::new(p[0], p[1]);
    let m = Mat2::new([
        [entry(rows[0][0]), entry(rows[0][1])],
        [entry(rows[1][0]), entry(rows[1][1])],
    ]);
    UnitaryMatrix2::new(m)
        .map(TargetGate)
        .map_err(|e| e.to_string())
}

fn phase_gate(angle: f64) -> UnitaryMatrix2 {
    let m = Mat2::diag(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, angle));
    UnitaryMatrix2::new(m).expect("diagonal phases are unitary")
}

/// Fixed float form: 17 significant digits, so output is byte-stable.
fn num(x: f64) -> String {
    format!("{:.16e}", x)
}

fn pair(z: C64) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

fn matrix_json(m: &Mat2, indent: &str) -> String {
    format!(
        "[\n{indent}  [{}, {}],\n{indent}  [{}, {}]\n{indent}]",
        pair(m.at(0, 0)),
        pair(m.at(0, 1)),
        pair(m.at(1, 0)),
        pair(m.at(1, 1))
    )
}

/// Default carrier: a lobe displaced well away from the cut, at the same
/// dimensionless offset for every trap frequency.
fn default_carrier(omega: f64) -> Result<Envelope, String> {
    Envelope::displaced(omega, 4.5 / omega.sqrt(), 33).map_err(|e| e.to_string())
}

fn run_spectrum(theta: f64, levels: usize, omega: f64) -> Result<String, String> {
    let spec = robin_spectrum(theta, omega, levels).map_err(|e| e.to_string())?;
    let mut out = String::from("n,energy,eta\n");
    for (n, e) in spec.energies.iter().enumerate() {
        let eta = (e - (2.0 * n as f64 + 0.5) * omega) / omega;
        out.push_str(&format!("{n},{},{}\n", num(*e), num(eta)));
    }
    Ok(out)
}

fn run_gate(mu: f64, nu: f64, omega: f64) -> Result<String, String> {
    let schedule = PulseSchedule::new(
        omega,
        vec![Pulse::Sigma {
            mu,
            nu,
            half_periods: 1,
        }],
    )
    .map_err(|e| e.to_string())?;
    let env = default_carrier(omega)?;
    let gate = effective_gate(&schedule, &env).map_err(|e| e.to_string())?;
    let fid = matrix_fidelity(gate.matrix(), &sigma_matrix(mu, nu));
    Ok(format!(
        "{{\n  \"matrix\": {},\n  \"leakage\": {},\n  \"fidelity_vs_ideal\": {}\n}}\n",
        matrix_json(gate.matrix(), "  "),
        num(gate.leakage()),
        num(fid)
    ))
}

fn run_compile(target: &TargetGate, omega: f64) -> Result<String, String> {
    let schedule = compile_gate(&target.0, omega).map_err(|e| e.to_string())?;
    Ok(schedule.to_json())
}

fn run_verify(path: &PathBuf) -> Result<String, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let schedule = PulseSchedule::from_json(&text).map_err(|e| e.to_string())?;
    let omega = schedule.omega;
    let env = default_carrier(omega)?;
    let grid = Grid::default_for(omega).map_err(|e| e.to_string())?;
    let dt = 2.0 * std::f64::consts::PI / omega / 4096.0;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut runs = Vec::new();
    let mut max_dev = 0.0f64;
    for (label, a0, a1) in [("plus_lobe", one, zero), ("minus_lobe", zero, one)] {
        let rep =
            compare_schedule(&schedule, &env, a0, a1, &grid, dt).map_err(|e| e.to_string())?;
        max_dev = max_dev.max(rep.max_deviation);
        runs.push(format!(
            "    {{\n      \"input\": \"{label}\",\n      \"analytic\": [{}, {}],\n      \
             \"oracle\": [{}, {}],\n      \"deviation\": {},\n      \
             \"analytic_leakage\": {},\n      \"oracle_leakage\": {},\n      \
             \"aligned_phase\": {},\n      \"norm_drift\": {},\n      \
             \"max_boundary_residual\": {}\n    }}",
            pair(rep.analytic_alpha0),
            pair(rep.analytic_alpha1),
            pair(rep.oracle.alpha0),
            pair(rep.oracle.alpha1),
            num(rep.max_deviation),
            num(rep.analytic_leakage),
            num(rep.oracle.leakage),
            num(rep.aligned_phase),
            num(rep.oracle.norm_drift),
            num(rep.oracle.max_boundary_residual)
        ));
    }
    Ok(format!(
        "{{\n  \"omega\": {},\n  \"pulses\": {},\n  \"runs\": [\n{}\n  ],\n  \
         \"max_deviation\": {}\n}}\n",
        num(omega),
        schedule.pulses.len(),
        runs.join(",\n"),
        num(max_dev)
    ))
}

fn run_scatter(mu: f64, nu: f64, k_min: f64, k_max: f64, points: u32) -> Result<String, String> {
    if !(k_min.is_finite() && k_min > 0.0 && k_max.is_finite() && k_max >= k_min) {
        return Err(format!(
            "wavenumber range [{k_min}, {k_max}] must be positive and ordered"
        ));
    }
    let u = UnitaryMatrix2::new(sigma_matrix(mu, nu)).map_err(|e| e.to_string())?;
    let mut out = String::from("k,transmission,reflection\n");
    for i in 0..points {
        let k = if points == 1 {
            k_min
        } else {
            k_min + (k_max - k_min) * i as f64 / (points - 1) as f64
        };
        let sc = scattering_coefficients(&u, k).map_err(|e| e.to_string())?;
        out.push_str(&format!(
            "{},{},{}\n",
            num(k),
            num(sc.t_left.norm_sqr()),
            num(sc.r_left.norm_sqr())
        ));
    }
    Ok(out)
}

fn execute(verb: &Verb) -> Result<(String, Option<PathBuf>), String> {
    Ok(match verb {
        Verb::Spectrum {
            theta,
            levels,
            omega,
            out,
        } => (run_spectrum(*theta, *levels, *omega)?, out.clone()),
        Verb::Gate { mu, nu, omega, out } => (run_gate(*mu, *nu, *omega)?, out.clone()),
        Verb::Compile { target, omega, out } => (run_compile(target, *omega)?, out.clone()),
        Verb::Verify { schedule, out } => (run_verify(schedule)?, out.clone()),
        Verb::Scatter {
            mu,
            nu,
            k_min,
            k_max,
            points,
            out,
        } => (run_scatter(*mu, *nu, *k_min, *k_max, *points)?, out.clone()),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match execute(&cli.verb) {
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
