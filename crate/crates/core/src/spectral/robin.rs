//! Half-line Robin spectra of the harmonic oscillator, and the eigenfunction
//! overlaps the impenetrable-wall pulses need.
//!
//! On (0, inf) with potential omega^2 x^2/2 the solution decaying at infinity
//! is the parabolic cylinder function U(a, sqrt(2 omega) x) with a = -E/omega
//! and boundary values
//!
//! ```text
//! U(a, 0)  =  sqrt(pi) 2^{-a/2 - 1/4} / Gamma(3/4 + a/2)
//! U'(a, 0) = -sqrt(pi) 2^{-a/2 + 1/4} / Gamma(1/4 + a/2)
//! ```
//!
//! The boundary family is parameterized so energies grow with theta:
//! `psi'(0) = tan(theta/2) psi(0)` (outward normal), Neumann at theta = 0 and
//! Dirichlet at theta = pi. Substituting U gives an entire characteristic in
//! reciprocal-Gamma form,
//!
//! ```text
//! f(E) = sqrt(2 omega) 2^{1/4} cos(theta/2) rGamma(1/4 + a/2)
//!        + 2^{-1/4} sin(theta/2) rGamma(3/4 + a/2)
//! ```
//!
//! whose values at the bracket endpoints E = (2n + 1/2) omega and
//! E = (2n + 3/2) omega are exactly one term each and alternate in sign, so
//! every bracket carries a guaranteed root. For theta in (pi, 2pi) the
//! boundary term is attractive and the lowest level leaves the bracket
//! ladder; it is chased below omega/2 with a pole-free Gamma-ratio form.

use statrs::function::gamma::{gamma, ln_gamma};

use crate::linalg::mod_two_pi;
use crate::spectral::hermite::ho_eigenfunction;
use crate::spectral::quad::gauss_legendre;
use crate::spectral::SpectralError;

pub(crate) const LEVEL_CAP: usize = 64;

/// Reciprocal Gamma function, entire across the poles.
fn r_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        1.0 / gamma(x)
    } else {
        // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi with exact pole zeros.
        let m = x.round();
        let f = x - m;
        let sign = if (m as i64).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let s = sign * (std::f64::consts::PI * f).sin();
        s * gamma(1.0 - x) / std::f64::consts::PI
    }
}

fn characteristic(theta: f64, omega: f64, e: f64) -> f64 {
    let a = -e / omega;
    let c = (0.5 * theta).cos();
    let s = (0.5 * theta).sin();
    (2.0 * omega).sqrt() * 2f64.powf(0.25) * c * r_gamma(0.25 + 0.5 * a)
        + 2f64.powf(-0.25) * s * r_gamma(0.75 + 0.5 * a)
}

/// Characteristic divided by its Dirichlet factor; valid for E < omega/2
/// where both Gamma arguments are positive, so the deep attractive ground
/// state can be located without overflowing Gamma.
fn ground_characteristic(theta: f64, omega: f64, e: f64) -> f64 {
    let a = -e / omega;
    let ratio = (ln_gamma(0.75 + 0.5 * a) - ln_gamma(0.25 + 0.5 * a)).exp();
    (0.5 * theta).sin()
        + (2.0 * omega).sqrt() * std::f64::consts::SQRT_2 * (0.5 * theta).cos() * ratio
}

fn brent_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> Result<f64, SpectralError> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(SpectralError::Convergence(format!(
            "no sign change for the boundary characteristic on [{a:.6}, {b:.6}]"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 5e-14;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(SpectralError::Convergence(
        "root refinement for the boundary characteristic stalled".into(),
    ))
}

fn attractive_ground(theta: f64, omega: f64) -> Result<f64, SpectralError> {
    let g = |e: f64| ground_characteristic(theta, omega, e);
    let mut hi = 0.5 * omega;
    // g(omega/2) = sin(theta/2) > 0 on (pi, 2pi); march down geometrically
    // until the sign flips. The root sits near -tan^2(theta/2)/2 for steep
    // walls, so seed the first step with that scale.
    let t = (0.5 * theta).tan();
    let mut step = omega.max(0.5 * t * t);
    let mut lo = hi - step;
    for _ in 0..200 {
        if g(lo) < 0.0 {
            return brent_root(g, lo, hi);
        }
        hi = lo;
        step *= 2.0;
        lo = hi - step;
    }
    Err(SpectralError::Convergence(
        "attractive ground level not bracketed".into(),
    ))
}

/// Lowest `count` Robin levels at boundary angle `theta` (wrapped into
/// [0, 2pi)). Exact closed forms at the Neumann/Dirichlet endpoints.
pub(crate) fn robin_levels(
    theta: f64,
    omega: f64,
    count: usize,
) -> Result<Vec<f64>, SpectralError> {
    if !(omega > 0.0) {
        return Err(SpectralError::InvalidDomain(
            "oscillator frequency must be positive".into(),
        ));
    }
    if count == 0 || count > LEVEL_CAP {
        return Err(SpectralError::InvalidDomain(format!(
            "level count must lie in 1..={LEVEL_CAP}, got {count}"
        )));
    }
    let theta = mod_two_pi(theta);
    let pi = std::f64::consts::PI;
    if theta.abs() < 1e-13 || theta > std::f64::consts::TAU - 1e-13 {
        return Ok((0..count).map(|n| (2.0 * n as f64 + 0.5) * omega).collect());
    }
    if (theta - pi).abs() < 1e-13 {
        return Ok((0..count).map(|n| (2.0 * n as f64 + 1.5) * omega).collect());
    }
    let f = |e: f64| characteristic(theta, omega, e);
    let mut levels = Vec::with_capacity(count);
    if theta < pi {
        for n in 0..count {
            let lo = (2.0 * n as f64 + 0.5) * omega;
            let hi = (2.0 * n as f64 + 1.5) * omega;
            levels.push(brent_root(f, lo, hi)?);
        }
    } else {
        levels.push(attractive_ground(theta, omega)?);
        for n in 1..count {
            let lo = (2.0 * n as f64 - 0.5) * omega;
            let hi = (2.0 * n as f64 + 0.5) * omega;
            levels.push(brent_root(f, lo, hi)?);
        }
    }
    Ok(levels)
}

/// Robin eigenmodes resolved far enough to expand half-line profiles:
/// energies, boundary data, and overlaps against the even-restricted
/// oscillator basis sqrt(2) chi_{2m}.
pub(crate) struct RobinBasis {
    pub energies: Vec<f64>,
    /// overlap[n][m] = <phi_n, sqrt(2) chi_{2m}> on (0, inf)
    pub overlap: Vec<Vec<f64>>,
    /// (phi_n(0), phi_n'(0)) after normalization
    #[allow(dead_code)]
    pub boundary: Vec<(f64, f64)>,
}

pub(crate) fn robin_basis(
    theta: f64,
    omega: f64,
    n_modes: usize,
    m_len: usize,
) -> Result<RobinBasis, SpectralError> {
    let energies = robin_levels(theta, omega, n_modes)?;
    let e_max = *energies.last().expect("count >= 1");
    let sqw = omega.sqrt();
    let x_turn = (2.0 * e_max.max(0.0)).sqrt() / omega;
    let x_start = (x_turn + 5.0 / sqw).max(7.0 / sqw);

    let qn = 768;
    let (xq, wq) = gauss_legendre(qn, 0.0, x_start);
    let chi: Vec<Vec<f64>> = (0..m_len)
        .map(|m| {
            xq.iter()
                .map(|&x| std::f64::consts::SQRT_2 * ho_eigenfunction(2 * m, omega, x))
                .collect()
        })
        .collect();

    let mut overlap = Vec::with_capacity(n_modes);
    let mut boundary = Vec::with_capacity(n_modes);
    for &e in &energies {
        let (vals, ders, h) = shoot(omega, e, x_start);
        // The shooting seed is positive at large x, matching the asymptotic
        // sign of the oscillator modes, so normalization keeps signs aligned
        // with the chi basis across the whole theta family.
        let scale = 1.0 / simpson_sq(&vals, h).sqrt();
        let row: Vec<f64> = (0..m_len)
            .map(|m| {
                xq.iter()
                    .zip(&wq)
                    .zip(&chi[m])
                    .map(|((&x, &w), &c)| w * c * scale * hermite_interp(&vals, &ders, h, x))
                    .sum()
            })
            .collect();
        overlap.push(row);
        boundary.push((scale * vals[0], scale * ders[0]));
    }
    Ok(RobinBasis {
        energies,
        overlap,
        boundary,
    })
}

/// Inward RK4 integration of psi'' = (omega^2 x^2 - 2E) psi from beyond the
/// turning point, seeded in the locally decaying direction; the unwanted
/// solution decays inward, so the seed detail only sets the overall scale.
fn shoot(omega: f64, e: f64, x_start: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let sqw = omega.sqrt();
    let mut steps = (x_start / (0.003 / sqw)).ceil() as usize;
    steps += steps % 2; // even count so composite Simpson applies
    let h = x_start / steps as f64;
    let q = |x: f64| omega * omega * x * x - 2.0 * e;

    let mut vals = vec![0.0; steps + 1];
    let mut ders = vec![0.0; steps + 1];
    let mut y = 1.0;
    let mut dy = -q(x_start).max(0.0).sqrt();
    vals[steps] = y;
    ders[steps] = dy;
    let hh = -h;
    for j in (0..steps).rev() {
        let x = (j + 1) as f64 * h;
        // RK4 on (y, dy)
        let k1y = dy;
        let k1d = q(x) * y;
        let k2y = dy + 0.5 * hh * k1d;
        let k2d = q(x + 0.5 * hh) * (y + 0.5 * hh * k1y);
        let k3y = dy + 0.5 * hh * k2d;
        let k3d = q(x + 0.5 * hh) * (y + 0.5 * hh * k2y);
        let k4y = dy + hh * k3d;
        let k4d = q(x + hh) * (y + hh * k3y);
        y += hh / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += hh / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        vals[j] = y;
        ders[j] = dy;
    }
    (vals, ders, h)
}

fn simpson_sq(vals: &[f64], h: f64) -> f64 {
    let n = vals.len() - 1;
    debug_assert!(n % 2 == 0);
    let mut s = vals[0] * vals[0] + vals[n] * vals[n];
    for (j, v) in vals.iter().enumerate().take(n).skip(1) {
        s += v * v * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Cubic Hermite interpolation on the uniform shooting grid.
fn hermite_interp(vals: &[f64], ders: &[f64], h: f64, x: f64) -> f64 {
    let j = ((x / h).floor() as usize).min(vals.len() - 2);
    let t = (x - j as f64 * h) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let d0 = ders[j] * h;
    let d1 = ders[j + 1] * h;
    vals[j] * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d0 * (t3 - 2.0 * t2 + t)
        + vals[j + 1] * (-2.0 * t3 + 3.0 * t2)
        + d1 * (t3 - t2)
}
