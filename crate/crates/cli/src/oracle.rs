//! Independent reference evaluations used by the `verify` runs.

use std::f64::consts::PI;

/// J_n(x) from the integral representation (1/2π)∫₀^{2π} cos(nt − x sin t) dt.
///
/// The integrand is periodic and entire, so the trapezoid rule converges
/// geometrically once the node count exceeds |x| + n by a margin.
pub fn bessel_integral(n: u32, x: f64) -> f64 {
    let nodes = 128 + 2 * (x.abs().ceil() as usize + n as usize);
    let h = 2.0 * PI / nodes as f64;
    let nf = f64::from(n);
    let sum: f64 = (0..nodes)
        .map(|k| {
            let t = k as f64 * h;
            (nf * t - x * t.sin()).cos()
        })
        .sum();
    sum / nodes as f64
}
