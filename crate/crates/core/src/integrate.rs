//! Adaptive initial-value integration of `y''(x) = c(x)·y(x)`.
//!
//! Dormand–Prince 5(4) with the first-same-as-last property and a PI
//! step-size controller. Each accepted step keeps the mixed local error
//! estimate below `abs_tol + rel_tol·|y|` component-wise (RMS over `y`, `y'`).

use crate::error::{Error, Result};

/// Position and first-order state of the second-order ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpState {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

impl IvpState {
    pub fn new(x: f64, y: f64, dy: f64) -> Self {
        Self { x, y, dy }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            x: self.x,
            y: self.y * factor,
            dy: self.dy * factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    pub final_state: IvpState,
    /// Accepted states including the initial one, when recording was requested.
    pub trajectory: Option<Vec<IvpState>>,
    pub steps_taken: usize,
    pub max_abs_y: f64,
    pub max_abs_dy: f64,
}

/// Relative and absolute local error tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        let t = Self { rel, abs };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        const RANGE: std::ops::RangeInclusive<f64> = 1e-14..=1e-3;
        if !RANGE.contains(&self.rel) || !RANGE.contains(&self.abs) {
            return Err(Error::Config(format!(
                "tolerances (rel {:e}, abs {:e}) must lie in [1e-14, 1e-3]",
                self.rel, self.abs
            )));
        }
        Ok(())
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - 0.75 * BETA;
const MIN_SHRINK: f64 = 0.2;
const MAX_GROW: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;
const INITIAL_STEP_FRACTION: f64 = 1e-4;
const UNDERFLOW_FRACTION: f64 = 1e-15;

type Pair = [f64; 2];

#[inline]
fn axpy(base: Pair, h: f64, terms: &[(f64, Pair)]) -> Pair {
    let mut out = base;
    for (w, k) in terms {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

struct Stepper<F> {
    coefficient: F,
    tol: Tolerances,
}

impl<F: Fn(f64) -> f64> Stepper<F> {
    fn rhs(&self, x: f64, s: Pair) -> Result<Pair> {
        let c = (self.coefficient)(x);
        if !c.is_finite() {
            return Err(Error::Domain(format!(
                "ODE coefficient is not finite at x = {x}"
            )));
        }
        Ok([s[1], c * s[0]])
    }

    /// One trial step. Returns the 5th-order state, its derivative at the
    /// new point (reused next step) and the normalised error.
    fn attempt(&self, x: f64, s: Pair, k1: Pair, h: f64) -> Result<(Pair, Pair, f64)> {
        let k2 = self.rhs(x + C2 * h, axpy(s, h, &[(A21, k1)]))?;
        let k3 = self.rhs(x + C3 * h, axpy(s, h, &[(A31, k1), (A32, k2)]))?;
        let k4 = self.rhs(
            x + C4 * h,
            axpy(s, h, &[(A41, k1), (A42, k2), (A43, k3)]),
        )?;
        let k5 = self.rhs(
            x + C5 * h,
            axpy(s, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
        )?;
        let k6 = self.rhs(
            x + h,
            axpy(s, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]),
        )?;
        let next = axpy(s, h, &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)]);
        let k7 = self.rhs(x + h, next)?;
        let err_vec = axpy(
            [0.0, 0.0],
            h,
            &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
        );
        let mut sq = 0.0;
        for i in 0..2 {
            let scale = self.tol.abs + self.tol.rel * s[i].abs().max(next[i].abs());
            sq += (err_vec[i] / scale).powi(2);
        }
        Ok((next, k7, (0.5 * sq).sqrt()))
    }

    /// Integrates through each `stop` in order (all on the same side of
    /// `from.x`, monotone in the direction of travel), landing exactly on
    /// every one of them.
    fn run(&self, from: IvpState, stops: &[f64], record: bool) -> Result<(Vec<IvpState>, IvpSolution)> {
        let to_x = *stops.last().expect("at least one stop");
        let span = to_x - from.x;
        let dir = span.signum();
        let min_step = UNDERFLOW_FRACTION * span.abs();

        let mut x = from.x;
        let mut s = [from.y, from.dy];
        let mut k1 = self.rhs(x, s)?;
        let mut h = INITIAL_STEP_FRACTION * span;
        let mut err_old: f64 = 1e-4;
        let mut steps = 0usize;
        let mut max_y = s[0].abs();
        let mut max_dy = s[1].abs();
        let mut trajectory = record.then(|| vec![from]);
        let mut at_stops = Vec::with_capacity(stops.len());

        for &stop in stops {
            while (stop - x) * dir > 0.0 {
                let remaining = stop - x;
                let clipped = h.abs() >= remaining.abs();
                let trial = if clipped { remaining } else { h };
                if (trial.abs() < min_step && !clipped) || steps >= MAX_STEPS {
                    return Err(Error::Stiffness { x, h: trial });
                }
                let (next, k7, err) = self.attempt(x, s, k1, trial)?;
                let fac11 = err.powf(EXPO);
                if err <= 1.0 {
                    let fac = (fac11 / err_old.powf(BETA) / SAFETY)
                        .clamp(1.0 / MAX_GROW, 1.0 / MIN_SHRINK);
                    let proposal = trial / fac;
                    err_old = err.max(1e-4);
                    x = if clipped { stop } else { x + trial };
                    s = next;
                    k1 = k7;
                    steps += 1;
                    max_y = max_y.max(s[0].abs());
                    max_dy = max_dy.max(s[1].abs());
                    if let Some(t) = trajectory.as_mut() {
                        t.push(IvpState::new(x, s[0], s[1]));
                    }
                    // a short step clipped at a stop should not throttle the next one
                    h = if clipped {
                        proposal.abs().max(h.abs()) * dir
                    } else {
                        proposal
                    };
                } else {
                    h = trial / (fac11 / SAFETY).min(1.0 / MIN_SHRINK);
                }
            }
            at_stops.push(IvpState::new(x, s[0], s[1]));
        }

        let final_state = IvpState::new(x, s[0], s[1]);
        Ok((
            at_stops,
            IvpSolution {
                final_state,
                trajectory,
                steps_taken: steps,
                max_abs_y: max_y,
                max_abs_dy: max_dy,
            },
        ))
    }
}

fn check_span(from: &IvpState, to_x: f64) -> Result<()> {
    if !(from.x.is_finite() && from.y.is_finite() && from.dy.is_finite() && to_x.is_finite()) {
        return Err(Error::Domain("non-finite initial state or end point".into()));
    }
    if to_x == from.x {
        return Err(Error::Argument("integration interval has zero length".into()));
    }
    Ok(())
}

/// Advances `from` to `to_x` (either direction) on `y'' = c(x)·y`.
pub fn integrate_ivp<F: Fn(f64) -> f64>(
    coefficient: F,
    from: IvpState,
    to_x: f64,
    tol: Tolerances,
    record: bool,
) -> Result<IvpSolution> {
    tol.validate()?;
    check_span(&from, to_x)?;
    let stepper = Stepper { coefficient, tol };
    let (_, solution) = stepper.run(from, &[to_x], record)?;
    Ok(solution)
}

/// Integrates from `from` through `samples`, returning the state at each
/// sample. Samples must be strictly monotone and lie beyond `from.x` in the
/// direction of travel; the solver lands on each of them exactly.
pub fn integrate_through<F: Fn(f64) -> f64>(
    coefficient: F,
    from: IvpState,
    samples: &[f64],
    tol: Tolerances,
) -> Result<Vec<IvpState>> {
    tol.validate()?;
    let Some(&last) = samples.last() else {
        return Ok(Vec::new());
    };
    check_span(&from, last)?;
    let dir = (last - from.x).signum();
    let mut prev = from.x;
    for &x in samples {
        if !x.is_finite() || (x - prev) * dir < 0.0 {
            return Err(Error::Argument(
                "sample points must be monotone in the direction of integration".into(),
            ));
        }
        prev = x;
    }
    // Samples sitting on the start point are returned as-is.
    let leading = samples.iter().take_while(|&&x| x == from.x).count();
    let mut out = vec![from; leading];
    let rest = &samples[leading..];
    let mut stops: Vec<f64> = Vec::with_capacity(rest.len());
    for &x in rest {
        if stops.last() != Some(&x) {
            stops.push(x);
        }
    }
    let stepper = Stepper { coefficient, tol };
    let (at_stops, _) = stepper.run(from, &stops, false)?;
    let mut it = at_stops.into_iter().peekable();
    let mut current = None;
    for &x in rest {
        if current.map(|s: IvpState| s.x) != Some(x) {
            current = it.next();
        }
        out.push(current.expect("one state per distinct stop"));
    }
    Ok(out)
}

/// Scales a state's amplitude, leaving its position untouched.
pub(crate) fn rescale(state: IvpState, factor: f64) -> IvpState {
    state.scaled(factor)
}
