//! Shared helpers for the integration suites.

use qabacus::linalg::{cis, Mat2};
use qabacus::{UnitaryMatrix2, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator; QABACUS_DETERMINISTIC=0 switches to entropy seeding.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    let deterministic = std::env::var("QABACUS_DETERMINISTIC")
        .map(|v| v != "0")
        .unwrap_or(true);
    if deterministic {
        ChaCha8Rng::seed_from_u64(seed)
    } else {
        ChaCha8Rng::from_entropy()
    }
}

pub fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-ish random U(2): Gaussian column, completed and rephased.
pub fn random_unitary(rng: &mut impl Rng) -> UnitaryMatrix2 {
    let a = C64::new(gauss(rng), gauss(rng));
    let b = C64::new(gauss(rng), gauss(rng));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let su = Mat2([[a, -b.conj()], [b, a.conj()]]);
    let phase = cis(rng.gen::<f64>() * std::f64::consts::TAU);
    UnitaryMatrix2::new(su.scale(phase)).expect("constructed unitary")
}
