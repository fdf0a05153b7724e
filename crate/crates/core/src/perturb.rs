//! First-order Rayleigh–Schrödinger corrections for the spiked square well.
//!
//! With `V(x) = −2g ln|x|` inside `[−1, 1]` and the unperturbed states
//! `cos((n+1)πx/2)` (even `n`) or `sin((n+1)πx/2)` (odd `n`), the energies
//! expand as `E_n(g) = E_n⁰ + g·E_n¹ + O(g²)`. The coefficients `E_n¹` have a
//! closed form through the sine integral and are cross-checked here against
//! direct quadrature of the defining matrix element.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::si;
use std::f64::consts::PI;

/// Energy of the empty well, `((n+1)π/2)²`.
pub fn unperturbed_energy(n: usize) -> f64 {
    let k = (n + 1) as f64 * PI / 2.0;
    k * k
}

/// `E¹` for the even level `n = 2p`: `2 + 2 Si((2p+1)π) / ((2p+1)π)`.
pub fn first_order_even(p: usize) -> f64 {
    let arg = (2 * p + 1) as f64 * PI;
    2.0 + 2.0 / arg * si(arg).expect("finite argument")
}

/// `E¹` for the odd level `n = 2q+1`: `2 − 2 Si((2q+2)π) / ((2q+2)π)`.
pub fn first_order_odd(q: usize) -> f64 {
    let arg = (2 * q + 2) as f64 * PI;
    2.0 - 2.0 / arg * si(arg).expect("finite argument")
}

/// First-order coefficient `E_n¹`, dispatching on the parity of `n`.
pub fn first_order(n: usize) -> f64 {
    if n % 2 == 0 {
        first_order_even(n / 2)
    } else {
        first_order_odd((n - 1) / 2)
    }
}

/// Where the first-order quadrature switches to the logarithmic substitution.
const LOG_SPLIT: f64 = 1e-3;

/// First-order coefficient by direct quadrature of
/// `−4 ∫₀¹ u_n(x)² ln x dx`, with `u_n = cos((n+1)πx/2)` or `sin((n+1)πx/2)`.
///
/// `[0, 1]` is split at `1e-3`; on the inner piece `x = e^{−s}` turns the
/// logarithmic endpoint into the smooth, exponentially decaying integrand
/// `4 s e^{−s} u_n(e^{−s})²` on `[ln 1000, ∞)`.
pub fn first_order_quadrature(n: usize, tol: f64) -> Result<f64> {
    if !(1e-14..=1e-4).contains(&tol) {
        return Err(Error::Config(format!(
            "quadrature tolerance {tol:e} outside [1e-14, 1e-4]"
        )));
    }
    let k = (n + 1) as f64 * PI / 2.0;
    let even = n % 2 == 0;
    let mode = move |x: f64| {
        let u = if even { (k * x).cos() } else { (k * x).sin() };
        u * u
    };

    let outer = quad::integrate(|x| -4.0 * mode(x) * x.ln(), LOG_SPLIT, 1.0, 0.5 * tol)?;

    // e^{−s}·s < 1e-18 well before s = 50, far below any admissible tolerance.
    let s_lo = -LOG_SPLIT.ln();
    let s_hi = 50.0;
    let inner = quad::integrate(
        |s: f64| {
            let x = (-s).exp();
            4.0 * s * x * mode(x)
        },
        s_lo,
        s_hi,
        0.5 * tol,
    )?;
    Ok(outer + inner)
}

/// Even-state tail estimate `∫_{−∞}^{−R} y e^y dy = −(R+1) e^{−R}`,
/// i.e. `∫₀^ε ln x dx` with `ε = e^{−R}`.
pub fn tail_bound_even(r: f64) -> f64 {
    -(r + 1.0) * (-r).exp()
}

/// Odd-state tail estimate `∫_{−∞}^{−R} y e^{3y} dy = −(3R+1) e^{−3R} / 9`,
/// i.e. `∫₀^ε x² ln x dx` with `ε = e^{−R}`.
pub fn tail_bound_odd(r: f64) -> f64 {
    -(3.0 * r + 1.0) * (-3.0 * r).exp() / 9.0
}

/// Energy truncated at first order, `E_n⁰ + g·E_n¹`.
pub fn linear_energy(n: usize, g: f64) -> f64 {
    unperturbed_energy(n) + g * first_order(n)
}

/// Coupling at which two first-order lines `linear_energy(m, g)` and
/// `linear_energy(n, g)` intersect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEstimate {
    pub m: usize,
    pub n: usize,
    pub g_cross: f64,
    /// Same-parity pairs cannot become degenerate in the exact spectrum, so
    /// their first-order crossing is an artefact of truncation.
    pub spurious: bool,
}

/// First-order crossing of levels `m < n`, or `None` when the lines do not
/// meet at positive coupling.
pub fn crossing(m: usize, n: usize) -> Result<Option<CrossingEstimate>> {
    if m >= n {
        return Err(Error::Argument(format!(
            "crossing requires m < n, got ({m}, {n})"
        )));
    }
    let slope_gap = first_order(m) - first_order(n);
    if slope_gap <= 0.0 {
        return Ok(None);
    }
    let g_cross = (unperturbed_energy(n) - unperturbed_energy(m)) / slope_gap;
    Ok(Some(CrossingEstimate {
        m,
        n,
        g_cross,
        spurious: m % 2 == n % 2,
    }))
}
