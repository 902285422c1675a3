//! Shared fixtures for the pipeline benchmarks: the default working point
//! used across the test suites, so the timings track the code paths the
//! laboratory actually runs.

use qabacus::{Envelope, Grid};

pub const OMEGA: f64 = 1.0;

pub fn carrier() -> Envelope {
    Envelope::displaced(OMEGA, 4.5, 33).expect("default carrier")
}

pub fn grid() -> Grid {
    Grid::default_for(OMEGA).expect("default grid")
}

pub fn dt() -> f64 {
    2.0 * std::f64::consts::PI / OMEGA / 4096.0
}
