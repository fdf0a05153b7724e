//! Closed-form approximations around the spike.
//!
//! At energy `E` the spike exceeds `E` only inside `(−d, d)` with the turning
//! point `d = e^{−E/(2g)}`. Replacing it there by a flat barrier, and
//! dropping it outside, gives free sine waves `sin((x+1)k)`, `k = √E`, glued
//! to `cosh(κx)` or `sinh(κx)` inside. The barrier height is taken as the mean
//! of the spike over `(−d, d)`, which is exactly `E + 2g`, so `κ = √(2g)`.

use super::{symmetric_grid, Normalization, Parity, WaveGrid};
use crate::error::{Error, Result};
use crate::perturb::unperturbed_energy;
use std::f64::consts::{FRAC_PI_2, PI};

/// Classical turning point `d(E) = e^{−E/(2g)}`, where `−2g ln d = E`.
pub fn barrier_halfwidth(energy: f64, g: f64) -> f64 {
    debug_assert!(g > 0.0);
    (-energy / (2.0 * g)).exp()
}

/// Rectangular-barrier model at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierApprox {
    pub energy: f64,
    /// Barrier half-width.
    pub d: f64,
    /// Outer wavenumber `√E`.
    pub k: f64,
    /// Inner decay constant `√(2g)`.
    pub kappa: f64,
}

impl BarrierApprox {
    pub fn new(energy: f64, g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::ApproximationDomain(format!("needs g > 0, got {g}")));
        }
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::ApproximationDomain(format!(
                "needs E > 0 so that d(E) < 1, got E = {energy}"
            )));
        }
        Ok(Self {
            energy,
            d: barrier_halfwidth(energy, g),
            k: energy.sqrt(),
            kappa: (2.0 * g).sqrt(),
        })
    }

    /// Amplitude of the inner piece that makes the wavefunction continuous at `±d`.
    fn inner_amplitude(&self, parity: Parity) -> f64 {
        let outer = (self.k * (1.0 - self.d)).sin();
        match parity {
            Parity::Even => outer / (self.kappa * self.d).cosh(),
            Parity::Odd => -outer / (self.kappa * self.d).sinh(),
        }
    }

    /// Piecewise wavefunction; the outer pieces carry unit amplitude.
    pub fn eval(&self, x: f64, parity: Parity) -> f64 {
        if x <= -self.d {
            ((x + 1.0) * self.k).sin()
        } else if x >= self.d {
            -parity.sign() * ((x - 1.0) * self.k).sin()
        } else {
            let a = self.inner_amplitude(parity);
            match parity {
                Parity::Even => a * (self.kappa * x).cosh(),
                Parity::Odd => a * (self.kappa * x).sinh(),
            }
        }
    }
}

/// Rectangular-barrier wavefunction on a uniform grid, max-abs normalised.
pub fn rect_approx_wavefunction(energy: f64, g: f64, parity: Parity, points: usize) -> Result<WaveGrid> {
    let model = BarrierApprox::new(energy, g)?;
    check_points(points)?;
    let samples = symmetric_grid(points)
        .into_iter()
        .map(|x| (x, model.eval(x, parity)))
        .collect();
    Ok(WaveGrid::normalized(samples, Normalization::MaxAbsOne))
}

/// Locally adapted variant of [`rect_approx_wavefunction`].
#[derive(Debug, Clone, PartialEq)]
pub struct WkbApprox {
    pub grid: WaveGrid,
    /// Samples whose radicand came out negative (rounding next to `±d`) and
    /// was clamped to zero.
    pub clamped: usize,
}

/// The rectangular model with `k` replaced by `μ(x) = √(E − V(x))` outside
/// the turning points and `κ` by `ν(x) = √(V(x) − E)` inside.
///
/// Both `μ` and `ν` vanish at `±d`, so the outer pieces go to zero there and
/// cannot fix the inner amplitude; the inner pieces reuse the amplitude of
/// the rectangular model instead.
pub fn wkb_approx_wavefunction(energy: f64, g: f64, parity: Parity, points: usize) -> Result<WkbApprox> {
    let model = BarrierApprox::new(energy, g)?;
    check_points(points)?;
    let amplitude = model.inner_amplitude(parity);
    let mut clamped = 0usize;
    let mut root = |v: f64| {
        if v < 0.0 {
            clamped += 1;
            0.0
        } else {
            v.sqrt()
        }
    };
    let samples = symmetric_grid(points)
        .into_iter()
        .map(|x| {
            let psi = if x.abs() >= model.d {
                let v = -2.0 * g * x.abs().ln();
                let mu = root(energy - v);
                if x < 0.0 {
                    (mu * (x + 1.0)).sin()
                } else {
                    -parity.sign() * (mu * (x - 1.0)).sin()
                }
            } else if x == 0.0 {
                // ν(x)·x → 0 at the spike
                match parity {
                    Parity::Even => amplitude,
                    Parity::Odd => 0.0,
                }
            } else {
                let v = -2.0 * g * x.abs().ln();
                let nu = root(v - energy);
                match parity {
                    Parity::Even => amplitude * (nu * x).cosh(),
                    Parity::Odd => amplitude * (nu * x).sinh(),
                }
            };
            (x, psi)
        })
        .collect();
    Ok(WkbApprox {
        grid: WaveGrid::normalized(samples, Normalization::MaxAbsOne),
        clamped,
    })
}

fn check_points(points: usize) -> Result<()> {
    if points < 16 {
        return Err(Error::Config(format!("need at least 16 points, got {points}")));
    }
    Ok(())
}

/// Energy at which the rectangular-barrier pieces join smoothly at `x = −d(E)`.
///
/// Continuity of `ψ'/ψ` at `−d` reads `k cot(k(1−d)) = −κ tanh(κd)` (even) or
/// `−κ coth(κd)` (odd). It is solved in the pole-free form
/// `k cos θ · C + κ S · sin θ = 0`, `θ = k(1−d)`, with `(C, S)` the
/// `(cosh, sinh)` or `(sinh, cosh)` of `κd`. The level-`n` root has
/// `θ ∈ [mπ + π/2, mπ + π]` with `m = ⌊n/2⌋`, and `θ(E)` is increasing, so
/// that phase window maps to an energy bracket.
pub fn rect_approx_energy(n: usize, g: f64, e_tol: f64) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::ApproximationDomain(format!("needs g > 0, got {g}")));
    }
    if !(e_tol > 0.0) {
        return Err(Error::Config(format!("energy tolerance {e_tol:e} must be positive")));
    }
    let parity = Parity::of(n);
    let m = (n / 2) as f64;
    let phase = |e: f64| e.sqrt() * (1.0 - barrier_halfwidth(e, g));
    let kappa = (2.0 * g).sqrt();
    let joint = |e: f64| {
        let k = e.sqrt();
        let d = barrier_halfwidth(e, g);
        let theta = k * (1.0 - d);
        let (c, s) = match parity {
            Parity::Even => ((kappa * d).cosh(), (kappa * d).sinh()),
            Parity::Odd => ((kappa * d).sinh(), (kappa * d).cosh()),
        };
        k * theta.cos() * c + kappa * s * theta.sin()
    };

    let lo = invert_increasing(phase, m * PI + FRAC_PI_2, unperturbed_energy(n))?;
    let hi = invert_increasing(phase, m * PI + PI, unperturbed_energy(n))?;
    let (mut a, mut b) = (lo, hi);
    // At a vanishing barrier one endpoint is an exact root, up to rounding of cos θ.
    let noise = 1e-12 * b.sqrt().max(kappa);
    let snap = |v: f64| if v.abs() <= noise { 0.0 } else { v };
    let fa = snap(joint(a));
    let fb = snap(joint(b));
    if !(fa.is_finite() && fb.is_finite()) || fa * fb > 0.0 {
        return Err(Error::ApproximationFailure(format!(
            "no sign change of the matching condition for n = {n} on [{a}, {b}]"
        )));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let sign_a = fa.signum();
    while b - a > e_tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = joint(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest `E > 0` with `f(E) = target` for increasing `f`, by bisection.
fn invert_increasing(f: impl Fn(f64) -> f64, target: f64, guess: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = guess.max(1.0);
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::ApproximationFailure("phase inversion diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
