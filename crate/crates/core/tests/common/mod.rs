#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_n(x) = (1/2π) ∫₀^{2π} cos(nt − x sin t) dt` by the trapezoid rule.
///
/// The integrand is smooth and periodic, so the rule converges
/// geometrically; 512 nodes give full double precision for `|x| < 60`.
pub fn bessel_quadrature(n: i64, x: f64) -> f64 {
    let nodes = 512;
    let h = 2.0 * PI / nodes as f64;
    (0..nodes)
        .map(|k| {
            let t = k as f64 * h;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / nodes as f64
}
