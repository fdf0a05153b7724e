//! Sine integral `Si(x) = ∫₀ˣ sin(t)/t dt`.
//!
//! Below [`SERIES_LIMIT`] the Maclaurin series is summed directly. Above it,
//! `Si(x) = π/2 − f(x)·cos x − g(x)·sin x`, with the auxiliary functions
//! `f` and `g` read off the continued fraction of `E₁(ix)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Crossover between the power series and the continued fraction.
///
/// The alternating series loses roughly `x^(2k+1)/(2k+1)!` times an ulp to
/// cancellation at its largest term, which is still below 1e-15 here.
pub const SERIES_LIMIT: f64 = 4.0;

/// Relative size of the last series term kept.
const SERIES_TRUNCATION: f64 = 1e-17;

const CF_EPS: f64 = 4.0 * f64::EPSILON;
const CF_MAX_ITER: usize = 500;

/// Sine integral. Odd in `x`; error below 1e-13 absolute over the real line.
pub fn si(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("si: non-finite argument {x}")));
    }
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        si_series(ax)
    } else {
        si_continued_fraction(ax)
    };
    Ok(value.copysign(x))
}

fn si_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    // term_k = (-1)^k x^(2k+1) / (2k+1)!
    let mut term = x;
    let mut sum = x;
    let mut k = 0usize;
    loop {
        k += 1;
        let m = (2 * k) as f64;
        term *= -x2 / (m * (m + 1.0));
        let contribution = term / (m + 1.0);
        sum += contribution;
        if contribution.abs() < SERIES_TRUNCATION * sum.abs() {
            break;
        }
    }
    sum
}

/// Auxiliary functions `(f, g)` for `x > 0`, so that
/// `Si(x) = π/2 − f cos x − g sin x`.
pub fn auxiliary_fg(x: f64) -> (f64, f64) {
    // Modified Lentz evaluation of E₁(ix)·e^{ix} = 1/(1+ix −) 1²/(3+ix −) 2²/(5+ix −) ...
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..=CF_MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (a * d + b).inv();
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < CF_EPS {
            break;
        }
    }
    // E₁(ix) = e^{-ix}·h = −Ci(x) + i(Si(x) − π/2)
    (-h.im, h.re)
}

fn si_continued_fraction(x: f64) -> f64 {
    let (f, g) = auxiliary_fg(x);
    FRAC_PI_2 - f * x.cos() - g * x.sin()
}
