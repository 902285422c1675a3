//! Harmonic-oscillator eigenfunctions through the normalized three-term
//! recurrence on u_n(xi) = pi^{-1/4} e^{-xi^2/2} H_n(xi) / sqrt(2^n n!).

/// Value of the n-th oscillator eigenfunction at `x` for frequency `omega`.
///
/// chi_n(x) = omega^{1/4} u_n(sqrt(omega) x). Returns 0 beyond |xi| = 40
/// where the functions of every index used here are far below underflow of
/// interest.
pub fn ho_eigenfunction(n: usize, omega: f64, x: f64) -> f64 {
    ho_eigen_pair(n, omega, x).0
}

/// x-derivative of the n-th oscillator eigenfunction.
pub fn ho_eigenfunction_deriv(n: usize, omega: f64, x: f64) -> f64 {
    ho_eigen_pair(n, omega, x).1
}

/// Value and x-derivative in one recurrence pass.
pub fn ho_eigen_pair(n: usize, omega: f64, x: f64) -> (f64, f64) {
    assert!(omega > 0.0, "oscillator frequency must be positive");
    let xi = omega.sqrt() * x;
    if xi.abs() > 40.0 {
        return (0.0, 0.0);
    }
    let u0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    let scale_v = omega.powf(0.25);
    let scale_d = omega.powf(0.75);
    if n == 0 {
        return (scale_v * u0, scale_d * (-xi * u0));
    }
    let mut prev = u0;
    let mut cur = std::f64::consts::SQRT_2 * xi * u0;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * xi * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    // u_n' = sqrt(2n) u_{n-1} - xi u_n
    let du = (2.0 * n as f64).sqrt() * prev - xi * cur;
    (scale_v * cur, scale_d * du)
}
