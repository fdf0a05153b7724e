//! Bound states of `−ψ'' − 2g ln|x| ψ = E ψ` on `(−1, 1)` with `ψ(±1) = 0`.
//!
//! The potential is even, so every state has definite parity and only the
//! left half-interval is integrated: from the wall at `x = −1` with
//! `ψ = 0, ψ' = 1` up to a small cutoff `x = −δ` next to the spike, then
//! carried to the origin by one Taylor step, where even states need
//! `ψ'(0) = 0` and odd states `ψ(0) = 0`. The logarithm is integrable, so the
//! step is accurate to `O(δ² |ln δ|)`.
//!
//! Eigenvalues are bracketed by scanning the energy upward from the empty-well
//! value `((n+1)π/2)²`, which is a strict lower bound because the spike is
//! non-negative inside the well, and then bisected. Candidate brackets are
//! accepted only when the half-interval solution has the node count expected
//! for level `n`, so a lower level pushed far up by a strong spike is never
//! mistaken for level `n`.

mod approx;

pub use approx::{
    barrier_halfwidth, rect_approx_energy, rect_approx_wavefunction, wkb_approx_wavefunction,
    BarrierApprox, WkbApprox,
};

use crate::error::{Error, Result};
use crate::integrate::{integrate_ivp, integrate_through, IvpSolution, IvpState, Tolerances};
use crate::perturb::unperturbed_energy;

/// Default distance from the spike at which the origin condition is imposed.
pub const DEFAULT_DELTA: f64 = 1e-10;

/// Scan steps per energy window when bracketing a level.
const SCAN_STEPS: usize = 64;
/// How many times an empty window is pushed upward before giving up.
const MAX_WIDENINGS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Spike strength.
    pub g: f64,
    /// Origin cutoff.
    pub delta: f64,
    pub tol: Tolerances,
}

impl ModelParams {
    pub fn new(g: f64) -> Result<Self> {
        Self::with_delta(g, DEFAULT_DELTA)
    }

    pub fn with_delta(g: f64, delta: f64) -> Result<Self> {
        let p = Self {
            g,
            delta,
            tol: Tolerances::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::Config(format!("coupling g = {} must be finite and >= 0", self.g)));
        }
        if !(self.delta > 0.0 && self.delta < 0.01) {
            return Err(Error::Config(format!("cutoff delta = {} must lie in (0, 0.01)", self.delta)));
        }
        self.tol.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `+1` for even, `−1` for odd: the factor relating `ψ(x)` and `ψ(−x)`.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: usize,
    pub parity: Parity,
    pub energy: f64,
    /// Set only by [`eigenvalue`]; hand-built levels are trial energies.
    pub converged: bool,
}

impl EnergyLevel {
    /// An unconverged trial level, e.g. to evaluate the mismatch at a guess.
    pub fn trial(n: usize, energy: f64) -> Self {
        Self {
            n,
            parity: Parity::of(n),
            energy,
            converged: false,
        }
    }
}

/// The spike `−2g ln|x|` inside the well.
pub fn potential(x: f64, g: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Singularity);
    }
    if !(x.abs() < 1.0) {
        return Err(Error::OutsideWell(x));
    }
    Ok(-2.0 * g * x.abs().ln())
}

/// `c(x) = V(x) − E` in `ψ'' = c(x) ψ`, for `x < 0`.
fn left_coefficient(energy: f64, g: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| -2.0 * g * (-x).ln() - energy
}

fn wall_state() -> IvpState {
    IvpState::new(-1.0, 0.0, 1.0)
}

fn left_half(energy: f64, params: &ModelParams, record: bool) -> Result<IvpSolution> {
    integrate_ivp(
        left_coefficient(energy, params.g),
        wall_state(),
        -params.delta,
        params.tol,
        record,
    )
}

/// `ψ` at increasing sample points in `(−1, 0)`, started from the left wall
/// with `ψ(−1) = 0, ψ'(−1) = 1` at trial energy `energy` (no eigenvalue needed).
pub fn left_solution(energy: f64, params: &ModelParams, xs: &[f64]) -> Result<Vec<f64>> {
    params.validate()?;
    if let Some(&x) = xs.iter().find(|&&x| !(x > -1.0 && x < 0.0)) {
        return Err(Error::OutsideWell(x));
    }
    let states = integrate_through(left_coefficient(energy, params.g), wall_state(), xs, params.tol)?;
    Ok(states.into_iter().map(|s| s.y).collect())
}

/// Matching functional whose zeros in `E` are the eigenvalues of the given
/// parity: `ψ'(0)` for even states, `ψ(0)` for odd ones, divided by the
/// largest `|ψ|` or `|ψ'|` met on the way so that it stays of order one.
///
/// The origin values come from the state at `−δ` by one Taylor step across
/// the cutoff, using the exact integral of the logarithm. Reading `ψ(−δ)`
/// directly would shift every level by about `2δE`.
pub fn mismatch(energy: f64, params: &ModelParams, parity: Parity) -> Result<f64> {
    if !energy.is_finite() {
        return Err(Error::Domain(format!("energy {energy} is not finite")));
    }
    params.validate()?;
    let sol = left_half(energy, params, false)?;
    Ok(scaled_mismatch(&sol, energy, params, parity))
}

fn scaled_mismatch(sol: &IvpSolution, energy: f64, params: &ModelParams, parity: Parity) -> f64 {
    let scale = sol.max_abs_y.max(sol.max_abs_dy);
    let end = sol.final_state;
    let d = params.delta;
    match parity {
        Parity::Even => {
            // ∫_{−δ}^0 (−2g ln|x| − E) dx
            let c_integral = -2.0 * params.g * (d * d.ln() - d) - energy * d;
            (end.dy + c_integral * end.y) / scale
        }
        Parity::Odd => (end.y + d * end.dy) / scale,
    }
}

/// Sign changes of `ψ` strictly inside `(−1, −δ)`.
fn interior_nodes(trajectory: &[IvpState]) -> usize {
    let inner = &trajectory[1..trajectory.len().saturating_sub(1)];
    inner
        .iter()
        .filter(|s| s.y != 0.0)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0].y.signum() != w[1].y.signum())
        .count()
}

fn half_interval_nodes(energy: f64, params: &ModelParams) -> Result<usize> {
    let sol = left_half(energy, params, true)?;
    Ok(interior_nodes(sol.trajectory.as_deref().unwrap_or(&[])))
}

/// The `n`-th bound state, bisected to a bracket narrower than `e_tol`.
pub fn eigenvalue(n: usize, params: &ModelParams, e_tol: f64) -> Result<EnergyLevel> {
    params.validate()?;
    if !(e_tol >= 1e-12 && e_tol.is_finite()) {
        return Err(Error::Config(format!("energy tolerance {e_tol:e} must be >= 1e-12")));
    }
    let parity = Parity::of(n);
    let wanted_nodes = n / 2;
    let window = 4.0 * params.g + 4.0;
    let step = window / SCAN_STEPS as f64;
    let base = unperturbed_energy(n);
    // One step below the analytic lower bound, so that at g = 0 the root sits
    // strictly inside the first bracket rather than on its edge.
    let mut e_prev = base - step;
    let mut f_prev = mismatch(e_prev, params, parity)?;
    let mut hi_edge = base + window;
    for _ in 0..=MAX_WIDENINGS {
        while e_prev < hi_edge - 0.5 * step {
            let e = e_prev + step;
            let f = mismatch(e, params, parity)?;
            let sign_change = f_prev == 0.0 || f_prev.signum() != f.signum();
            if sign_change && half_interval_nodes(e_prev, params)? == wanted_nodes {
                let energy = bisect(params, parity, (e_prev, f_prev), e, e_tol)?;
                return Ok(EnergyLevel {
                    n,
                    parity,
                    energy,
                    converged: true,
                });
            }
            e_prev = e;
            f_prev = f;
        }
        hi_edge += window;
    }
    Err(Error::BracketFailure {
        n,
        lo: base,
        hi: e_prev,
    })
}

fn bisect(params: &ModelParams, parity: Parity, lo: (f64, f64), hi: f64, e_tol: f64) -> Result<f64> {
    let (mut a, fa) = lo;
    if fa == 0.0 {
        return Ok(a);
    }
    let mut b = hi;
    let sign_a = fa.signum();
    while b - a > e_tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = mismatch(mid, params, parity)?;
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

/// Levels `0..=n_max`, computed concurrently.
pub fn spectrum(params: &ModelParams, n_max: usize, e_tol: f64) -> Result<Vec<EnergyLevel>> {
    if n_max > 50 {
        return Err(Error::Config(format!("n_max = {n_max} exceeds 50")));
    }
    params.validate()?;
    let results: Vec<Result<EnergyLevel>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..=n_max)
            .map(|n| scope.spawn(move || eigenvalue(n, params, e_tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("eigenvalue worker panicked"))
            .collect()
    });
    let levels = results.into_iter().collect::<Result<Vec<_>>>()?;
    if let Some(w) = levels.windows(2).find(|w| w[1].energy <= w[0].energy) {
        return Err(Error::State(format!(
            "levels {} and {} are not ordered ({} >= {})",
            w[0].n, w[1].n, w[0].energy, w[1].energy
        )));
    }
    Ok(levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Largest sample magnitude is one.
    #[default]
    MaxAbsOne,
    /// Unit L² norm on `[−1, 1]` (trapezoidal rule on the sample grid).
    L2One,
}

/// Samples of a wavefunction on an ordered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    pub samples: Vec<(f64, f64)>,
    pub normalization: Normalization,
}

impl WaveGrid {
    pub(crate) fn normalized(mut samples: Vec<(f64, f64)>, normalization: Normalization) -> Self {
        let scale = match normalization {
            Normalization::MaxAbsOne => samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max),
            Normalization::L2One => samples
                .windows(2)
                .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 * w[0].1 + w[1].1 * w[1].1))
                .sum::<f64>()
                .sqrt(),
        };
        if scale > 0.0 {
            for s in &mut samples {
                s.1 /= scale;
            }
        }
        Self {
            samples,
            normalization,
        }
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    /// Sign changes between consecutive non-zero samples.
    pub fn node_count(&self) -> usize {
        let nonzero: Vec<f64> = self.values().filter(|v| *v != 0.0).collect();
        nonzero.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    }

    /// Largest `|ψ(x) ∓ ψ(−x)|` over mirrored sample pairs.
    pub fn parity_defect(&self, parity: Parity) -> f64 {
        let n = self.samples.len();
        (0..n / 2)
            .map(|i| (self.samples[n - 1 - i].1 - parity.sign() * self.samples[i].1).abs())
            .fold(0.0, f64::max)
    }

    /// Largest pointwise difference against a grid on the same abscissae.
    pub fn max_abs_deviation(&self, other: &WaveGrid) -> f64 {
        self.values()
            .zip(other.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Symmetric uniform grid on `[−1, 1]`; the right half mirrors the left
/// bit-for-bit.
pub(crate) fn symmetric_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    let mut xs: Vec<f64> = (0..points).map(|i| -1.0 + 2.0 * i as f64 / last).collect();
    for i in 0..points / 2 {
        xs[points - 1 - i] = -xs[i];
    }
    if points % 2 == 1 {
        xs[points / 2] = 0.0;
    }
    xs
}

/// Samples the eigenfunction of `level` on `points` uniform nodes of
/// `[−1, 1]`, with `ψ'(−1) > 0`.
///
/// The left half comes from integration up to `−δ`; nodes within `δ` of the
/// origin are filled by the parity-consistent continuation (`ψ(−δ)` for even
/// states, `ψ'(−δ)·x` for odd ones) and the right half by reflection.
pub fn wavefunction(
    level: &EnergyLevel,
    params: &ModelParams,
    points: usize,
    normalization: Normalization,
) -> Result<WaveGrid> {
    params.validate()?;
    if !level.converged {
        return Err(Error::State(format!(
            "level n = {} at E = {} was not produced by eigenvalue()",
            level.n, level.energy
        )));
    }
    if level.parity != Parity::of(level.n) {
        return Err(Error::State(format!("level n = {} has the wrong parity", level.n)));
    }
    if points < 16 {
        return Err(Error::Config(format!("need at least 16 points, got {points}")));
    }
    let xs = symmetric_grid(points);
    let left: Vec<f64> = xs.iter().copied().filter(|&x| x < -params.delta).collect();
    let mut stops = left.clone();
    stops.push(-params.delta);
    let states = integrate_through(
        left_coefficient(level.energy, params.g),
        wall_state(),
        &stops,
        params.tol,
    )?;
    let edge = *states.last().expect("cutoff state");

    let sign = level.parity.sign();
    let mut samples = Vec::with_capacity(points);
    for (i, &x) in xs.iter().enumerate() {
        let psi = if i < left.len() {
            states[i].y
        } else if x.abs() <= params.delta {
            match level.parity {
                Parity::Even => edge.y,
                Parity::Odd => edge.dy * x,
            }
        } else {
            sign * states[points - 1 - i].y
        };
        samples.push((x, psi));
    }
    Ok(WaveGrid::normalized(samples, normalization))
}
