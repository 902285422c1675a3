//! Real symmetric tridiagonal eigenvalues by Sturm bisection, and a complex
//! tridiagonal linear solve. Sizes here are a few thousand at most and only
//! a handful of low eigenvalues are ever requested, so bisection is both
//! simple and fast enough.

use crate::linalg::C64;

/// Real symmetric tridiagonal matrix; `off` holds the `n - 1` couplings.
#[derive(Clone, Debug)]
pub(crate) struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    /// Number of eigenvalues strictly below `x`, by counting negative
    /// pivots of the LDL^T factorization of `A - x`. A zero pivot is nudged
    /// to the negative side; overflowing pivots propagate harmlessly
    /// through the recurrence in IEEE arithmetic.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0usize;
        let mut prev = 1.0f64;
        for i in 0..self.diag.len() {
            let mut d = self.diag[i] - x;
            if i > 0 {
                d -= self.off[i - 1] * self.off[i - 1] / prev;
            }
            if d == 0.0 {
                d = -f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
            prev = d;
        }
        count
    }

    /// The `count` smallest eigenvalues, ascending, each bisected inside
    /// the Gershgorin interval until the bracket collapses.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let n = self.diag.len();
        assert!(count <= n, "requested {count} eigenvalues of a {n} matrix");
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let scale = 1.0f64.max(lo.abs()).max(hi.abs());
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..120 {
                if b - a <= 1e-13 * scale {
                    break;
                }
                let mid = 0.5 * (a + b);
                if self.count_below(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }
}

/// Solve a complex tridiagonal system by the Thomas recurrence. Returns
/// `None` when a pivot collapses relative to the diagonal scale; callers on
/// the propagation path are diagonally dominant so this only trips on
/// genuinely broken inputs.
pub(crate) fn thomas_solve(
    lower: &[C64],
    diag: &[C64],
    upper: &[C64],
    rhs: &[C64],
) -> Option<Vec<C64>> {
    let n = diag.len();
    debug_assert!(lower.len() == n - 1 && upper.len() == n - 1 && rhs.len() == n);
    let scale = diag.iter().map(|d| d.norm()).fold(0.0f64, f64::max);
    let floor = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let mut cp = vec![C64::new(0.0, 0.0); n - 1];
    let mut dp = vec![C64::new(0.0, 0.0); n];
    let mut piv = diag[0];
    if piv.norm() <= floor {
        return None;
    }
    cp[0] = upper[0] / piv;
    dp[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - lower[i - 1] * cp[i - 1];
        if piv.norm() <= floor {
            return None;
        }
        if i < n - 1 {
            cp[i] = upper[i] / piv;
        }
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / piv;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let tail = cp[i] * x[i + 1];
        x[i] -= tail;
    }
    Some(x)
}
