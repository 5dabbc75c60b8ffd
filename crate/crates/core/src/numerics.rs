//! Small numerically stable helpers for the exponential kernels.

/// `1 - e^{-y}` without cancellation for small `y`.
#[inline]
pub fn one_minus_exp(y: f64) -> f64 {
    -(-y).exp_m1()
}

/// `h(y) = y - 1 + e^{-y}`, accurate for small `y`.
pub fn h(y: f64) -> f64 {
    if y < 1e-2 {
        let y2 = y * y;
        y2 * (0.5 - y / 6.0 + y2 / 24.0 - y2 * y / 120.0 + y2 * y2 / 720.0)
    } else {
        y + (-y).exp_m1()
    }
}

/// `log log t` for `t > e`.
pub fn loglog(t: f64) -> f64 {
    t.ln().ln()
}

/// Log-spaced grid `t_k = t0 · ρ^k` with `t_k ≤ t_max`.
pub fn log_grid(t0: f64, rho: f64, t_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0i32;
    loop {
        let t = t0 * rho.powi(k);
        if t > t_max * (1.0 + 1e-12) {
            break;
        }
        out.push(t.min(t_max));
        k += 1;
    }
    out
}

/// `n` log-spaced points from `t0` to `t1` inclusive.
pub fn log_space(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t1];
    }
    let (l0, l1) = (t0.ln(), t1.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                t1
            } else {
                (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
