//! The left half-well in exponential coordinates.
//!
//! With `x = −e^{−λ}` and `ψ(x) = e^{−λ/2} φ(λ)`, the half-interval problem on
//! `(−1, 0)` becomes
//!
//! ```text
//! φ''(λ) = [1/4 − e^{−2λ}(E − 2gλ)] φ(λ),   φ(0) = 0,  φ'(0) = 1,
//! ```
//!
//! on `λ ∈ (0, ∞)`: the spike has moved to infinity, where every solution is
//! a combination of `e^{λ/2}` and `e^{−λ/2}` and the energy only enters the
//! exponentially small part. Integrating backward from a finite `λ_max` is
//! therefore a badly conditioned way to find eigenvalues; this module
//! reproduces that negative result and is not used for the spectrum.

use crate::error::{Error, Result};
use crate::integrate::{integrate_ivp, integrate_through, rescale, IvpSolution, IvpState, Tolerances};

/// Largest admissible truncation of the half-line.
pub const LAMBDA_MAX_CAP: f64 = 50.0;

/// Forward amplitudes above this are rescaled to one.
const RENORMALIZE_ABOVE: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedParams {
    pub g: f64,
    pub energy: f64,
    pub lambda_max: f64,
    pub tol: Tolerances,
}

impl TransformedParams {
    pub fn new(g: f64, energy: f64, lambda_max: f64) -> Result<Self> {
        let p = Self {
            g,
            energy,
            lambda_max,
            tol: Tolerances::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::Config(format!("g = {} must be positive", self.g)));
        }
        if !self.energy.is_finite() {
            return Err(Error::Config(format!("energy {} is not finite", self.energy)));
        }
        if !(1.0..=LAMBDA_MAX_CAP).contains(&self.lambda_max) {
            return Err(Error::Config(format!(
                "lambda_max = {} outside [1, {LAMBDA_MAX_CAP}]",
                self.lambda_max
            )));
        }
        self.tol.validate()
    }
}

/// `c(λ) = 1/4 − e^{−2λ}(E − 2gλ)`.
pub fn transformed_coefficient(lambda: f64, energy: f64, g: f64) -> f64 {
    0.25 - (-2.0 * lambda).exp() * (energy - 2.0 * g * lambda)
}

/// Position of `λ` on the left half-interval.
pub fn x_of_lambda(lambda: f64) -> f64 {
    -(-lambda).exp()
}

/// Inverse of [`x_of_lambda`], for `−1 ≤ x < 0`.
pub fn lambda_of_x(x: f64) -> f64 {
    -(-x).ln()
}

/// `ψ(x) = e^{−λ/2} φ(λ)`.
pub fn psi_from_phi(lambda: f64, phi: f64) -> f64 {
    (-0.5 * lambda).exp() * phi
}

fn wall() -> IvpState {
    IvpState::new(0.0, 0.0, 1.0)
}

/// Forward solution, stored with its amplitude divided by `e^{log_scale}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSolution {
    pub solution: IvpSolution,
    /// `ln` of the factor removed by renormalisation up to the final state.
    pub log_scale: f64,
    /// Matching `ln` factor for every recorded trajectory point.
    pub trajectory_log_scale: Option<Vec<f64>>,
}

impl ForwardSolution {
    /// `ln|φ(λ_max)|` in the original normalisation.
    pub fn final_log_abs_phi(&self) -> f64 {
        self.solution.final_state.y.abs().ln() + self.log_scale
    }

    /// `(λ, ln|φ(λ)|)` along the recorded trajectory.
    pub fn log_abs_trajectory(&self) -> Option<Vec<(f64, f64)>> {
        let states = self.solution.trajectory.as_ref()?;
        let scales = self.trajectory_log_scale.as_ref()?;
        Some(
            states
                .iter()
                .zip(scales)
                .map(|(s, l)| (s.x, s.y.abs().ln() + l))
                .collect(),
        )
    }
}

/// Integrates from the wall `λ = 0` (`x = −1`) out to `λ_max` with
/// `φ(0) = 0, φ'(0) = 1`, one unit of `λ` at a time, renormalising whenever
/// `|φ|` passes `1e12`.
pub fn forward_solve(params: &TransformedParams, record: bool) -> Result<ForwardSolution> {
    params.validate()?;
    let (energy, g) = (params.energy, params.g);
    let c = move |l: f64| transformed_coefficient(l, energy, g);

    let mut state = wall();
    let mut log_scale = 0.0;
    let mut steps = 0;
    let mut max_y: f64 = 0.0;
    let mut max_dy: f64 = 1.0;
    let mut trajectory = record.then(|| vec![state]);
    let mut scales = record.then(|| vec![0.0]);

    while state.x < params.lambda_max {
        let to = (state.x + 1.0).min(params.lambda_max);
        let seg = integrate_ivp(c, state, to, params.tol, record)?;
        steps += seg.steps_taken;
        max_y = max_y.max(seg.max_abs_y);
        max_dy = max_dy.max(seg.max_abs_dy);
        if let (Some(t), Some(s), Some(points)) = (trajectory.as_mut(), scales.as_mut(), seg.trajectory) {
            for p in points.into_iter().skip(1) {
                t.push(p);
                s.push(log_scale);
            }
        }
        state = seg.final_state;
        let amplitude = state.y.abs();
        if amplitude > RENORMALIZE_ABOVE {
            state = rescale(state, amplitude.recip());
            log_scale += amplitude.ln();
        }
    }

    Ok(ForwardSolution {
        solution: IvpSolution {
            final_state: state,
            trajectory,
            steps_taken: steps,
            max_abs_y: max_y,
            max_abs_dy: max_dy,
        },
        log_scale,
        trajectory_log_scale: scales,
    })
}

/// Forward solution sampled at the given increasing `λ` values (no
/// renormalisation; intended for `λ` up to a few tens).
pub fn forward_through(energy: f64, g: f64, lambdas: &[f64], tol: Tolerances) -> Result<Vec<f64>> {
    let states = integrate_through(
        move |l: f64| transformed_coefficient(l, energy, g),
        wall(),
        lambdas,
        tol,
    )?;
    Ok(states.into_iter().map(|s| s.y).collect())
}

/// Starting data at `λ_max` for the backward sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackwardInit {
    /// `ψ = 1, ψ' = 0` at `x = −e^{−λ_max}`, i.e. `φ = e^{λ_max/2}`, `φ' = φ/2`.
    #[default]
    PsiFlat,
    /// `φ = 1, φ' = 0` taken literally in the transformed variable.
    PhiFlat,
}

impl BackwardInit {
    fn state(self, lambda_max: f64) -> IvpState {
        match self {
            BackwardInit::PsiFlat => {
                let phi = (0.5 * lambda_max).exp();
                IvpState::new(lambda_max, phi, 0.5 * phi)
            }
            BackwardInit::PhiFlat => IvpState::new(lambda_max, 1.0, 0.0),
        }
    }
}

/// `φ(0)` after integrating from `λ_max` back to the wall with the default
/// [`BackwardInit::PsiFlat`] start. It would vanish at an eigenvalue if
/// `λ_max` were infinite.
pub fn backward_solve(params: &TransformedParams) -> Result<f64> {
    backward_solve_with(params, BackwardInit::default())
}

pub fn backward_solve_with(params: &TransformedParams, init: BackwardInit) -> Result<f64> {
    params.validate()?;
    let (energy, g) = (params.energy, params.g);
    let sol = integrate_ivp(
        move |l: f64| transformed_coefficient(l, energy, g),
        init.state(params.lambda_max),
        0.0,
        params.tol,
        false,
    )?;
    Ok(sol.final_state.y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditioningRow {
    pub energy: f64,
    pub lambda_max: f64,
    pub phi_at_zero: f64,
    /// Previous row's `φ(0)` minus this one's, for the same energy.
    pub difference: Option<f64>,
}

/// [`backward_solve`] over an energy × `λ_max` grid, grouped by energy.
pub fn conditioning_study(energies: &[f64], lambda_maxes: &[f64], g: f64) -> Result<Vec<ConditioningRow>> {
    if lambda_maxes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("lambda_max values must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(energies.len() * lambda_maxes.len());
    for &energy in energies {
        let mut previous: Option<f64> = None;
        for &lambda_max in lambda_maxes {
            let phi = backward_solve(&TransformedParams::new(g, energy, lambda_max)?)?;
            rows.push(ConditioningRow {
                energy,
                lambda_max,
                phi_at_zero: phi,
                difference: previous.map(|p| p - phi),
            });
            previous = Some(phi);
        }
    }
    Ok(rows)
}

/// Number of comparison points used by [`right_side_equivalence`].
const MIRROR_SAMPLES: usize = 64;

/// Solves the right half-well in its own variable `ρ = ln x ∈ (−λ_max, 0)`,
///
/// ```text
/// φ''(ρ) = [1/4 − e^{2ρ}(E + 2gρ)] φ(ρ),   φ(0) = 0,  φ'(0) = −1,
/// ```
///
/// and returns the largest `|φ_R(−λ) − φ_L(λ)|` against the left solution on
/// a uniform set of `λ ∈ (0, λ_max]`. The two problems are mirror images
/// under `ρ = −λ`, so this should vanish to rounding.
pub fn right_side_equivalence(energy: f64, g: f64, lambda_max: f64) -> Result<f64> {
    let params = TransformedParams::new(g, energy, lambda_max)?;
    let lambdas: Vec<f64> = (1..=MIRROR_SAMPLES)
        .map(|i| lambda_max * i as f64 / MIRROR_SAMPLES as f64)
        .collect();
    let rhos: Vec<f64> = lambdas.iter().map(|l| -l).collect();
    let left = forward_through(energy, g, &lambdas, params.tol)?;
    let right = integrate_through(
        move |rho: f64| 0.25 - (2.0 * rho).exp() * (energy + 2.0 * g * rho),
        IvpState::new(0.0, 0.0, -1.0),
        &rhos,
        params.tol,
    )?;
    Ok(left
        .iter()
        .zip(&right)
        .map(|(l, r)| (l - r.y).abs())
        .fold(0.0, f64::max))
}
