//! Parameter sweeps over `(N, v0)` and the closed-form predictions that
//! accompany them.
//!
//! Grid points are independent and evaluated in parallel on the current rayon
//! pool. Records always come back sorted by `N`, then `v0`, whatever the
//! pool size.

use rayon::prelude::*;

use crate::classical::classical_steps;
use crate::scalar::{Extended, Real, ScalarBackend};
use crate::transfer::{run_transfer, InitialSpeed, Termination, TransferConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("{0} list is empty")]
    Empty(&'static str),
    #[error("{0} list is not strictly increasing")]
    NotIncreasing(&'static str),
    #[error("N = {0} must be at least 2")]
    TooFewObjects(f64),
    #[error("v0 = {0} must lie in (0, 1)")]
    Speed(f64),
    #[error("mass ratio M = {0} must be at least 1")]
    MassRatio(f64),
    #[error("at least one of v0 and M is required")]
    NothingToPredict,
}

/// `v0ˢˢ = 1 − 2/N²`, the speed at which the maximum is reached in a single
/// collision (derived for `N ≫ 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleStepVelocity<T> {
    pub v0: T,
    /// `2/N²`; the primary form, since `v0` rounds to 1 for large `N`.
    pub one_minus_v0: T,
}

pub fn predict_single_step_velocity<T: Real>(n: T) -> Result<SingleStepVelocity<T>, SweepError> {
    if !(n.is_finite() && n >= T::two()) {
        return Err(SweepError::TooFewObjects(n.to_f64()));
    }
    let one_minus_v0 = T::two() / (n * n);
    Ok(SingleStepVelocity {
        v0: T::one() - one_minus_v0,
        one_minus_v0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoints<T> {
    /// `2 / √(3M)` for the supplied mass ratio.
    pub v0_b: Option<T>,
    /// `4 / (3 v0²)` for the supplied speed.
    pub m_b: Option<T>,
}

/// Speed and mass scales at which the first relativistic correction to the
/// heavy ball's kinetic energy, `3/8 M v0⁴`, equals the light ball's
/// classical energy `v0²/2`.
pub fn predict_breakpoints<T: Real>(
    v0: Option<T>,
    mass_ratio: Option<T>,
) -> Result<Breakpoints<T>, SweepError> {
    if v0.is_none() && mass_ratio.is_none() {
        return Err(SweepError::NothingToPredict);
    }
    let m_b = v0
        .map(|v| {
            if v > T::zero() && v < T::one() {
                Ok(T::from_f64(4.0) / (T::from_f64(3.0) * v * v))
            } else {
                Err(SweepError::Speed(v.to_f64()))
            }
        })
        .transpose()?;
    let v0_b = mass_ratio
        .map(|m| {
            if m.is_finite() && m >= T::one() {
                Ok(T::two() / (T::from_f64(3.0) * m).sqrt())
            } else {
                Err(SweepError::MassRatio(m.to_f64()))
            }
        })
        .transpose()?;
    Ok(Breakpoints { v0_b, m_b })
}

/// `π/4 · √N`, the classical step count for large `N`.
pub fn classical_asymptote<T: Real>(n: T) -> Result<T, SweepError> {
    if !(n.is_finite() && n >= T::two()) {
        return Err(SweepError::TooFewObjects(n.to_f64()));
    }
    Ok(T::pi() * n.sqrt() / T::from_f64(4.0))
}

/// A sweep grid. Values are held at extended precision and narrowed to the
/// backend when each point runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n_values: Vec<Extended>,
    pub v0_values: Vec<InitialSpeed<Extended>>,
    pub backend: ScalarBackend,
    pub include_classical_baseline: bool,
    pub max_iter: Option<usize>,
}

impl SweepSpec {
    pub fn new(n_values: Vec<Extended>, v0_values: Vec<InitialSpeed<Extended>>) -> Self {
        SweepSpec {
            n_values,
            v0_values,
            backend: ScalarBackend::Standard,
            include_classical_baseline: false,
            max_iter: None,
        }
    }

    /// Convenience constructor from plain `f64` lists of `N` and `v0`.
    pub fn from_f64(n_values: &[f64], v0_values: &[f64]) -> Self {
        Self::new(
            n_values.iter().copied().map(Extended::from).collect(),
            v0_values
                .iter()
                .map(|&v| InitialSpeed::Velocity(Extended::from(v)))
                .collect(),
        )
    }

    pub fn backend(mut self, backend: ScalarBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn classical(mut self, include: bool) -> Self {
        self.include_classical_baseline = include;
        self
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n_values.is_empty() {
            return Err(SweepError::Empty("N"));
        }
        if self.v0_values.is_empty() {
            return Err(SweepError::Empty("v0"));
        }
        if let Some(n) = self.n_values.iter().find(|n| !(n.is_finite() && **n >= Extended::from(2.0))) {
            return Err(SweepError::TooFewObjects(n.to_f64()));
        }
        if self.n_values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SweepError::NotIncreasing("N"));
        }
        for speed in &self.v0_values {
            let x = speed.one_minus_velocity();
            if !(x > Extended::ZERO && x < Extended::ONE) {
                return Err(SweepError::Speed(speed.velocity().to_f64()));
            }
            // the point must survive narrowing to the run's backend
            if self.backend == ScalarBackend::Standard {
                let narrowed = speed.map(|v| v.to_f64());
                if narrowed.alpha().is_err() {
                    return Err(SweepError::Speed(speed.velocity().to_f64()));
                }
            }
        }
        // increasing v0 is decreasing 1 − v0, which stays exact near light
        if self
            .v0_values
            .windows(2)
            .any(|w| !(w[0].one_minus_velocity() > w[1].one_minus_velocity()))
        {
            return Err(SweepError::NotIncreasing("v0"));
        }
        Ok(())
    }
}

/// One grid point: simulation results next to the closed-form predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: Extended,
    pub speed: InitialSpeed<Extended>,
    pub steps_to_max: usize,
    pub max_fraction: Extended,
    pub classical_steps: Option<usize>,
    pub asymptote: Extended,
    pub v0_ss: SingleStepVelocity<Extended>,
    pub m_b: Extended,
    pub termination: Termination,
    pub big_ball_reversed: bool,
    pub backend: ScalarBackend,
}

impl SweepRecord {
    pub fn v0(&self) -> Extended {
        self.speed.velocity()
    }
}

/// Evaluates every `(N, v0)` pair of the spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, SweepError> {
    spec.validate()?;
    let grid: Vec<(Extended, InitialSpeed<Extended>)> = spec
        .n_values
        .iter()
        .flat_map(|&n| spec.v0_values.iter().map(move |&s| (n, s)))
        .collect();

    let records = grid
        .par_iter()
        .map(|&(n, speed)| match spec.backend {
            ScalarBackend::Standard => run_point::<f64>(spec, n, speed),
            ScalarBackend::Extended => run_point::<Extended>(spec, n, speed),
        })
        .collect();
    Ok(records)
}

// Inputs are validated up front, so every point runs; how a run ended is
// reported through its termination, never as an error.
fn run_point<T: Real>(spec: &SweepSpec, n: Extended, speed: InitialSpeed<Extended>) -> SweepRecord {
    let cfg = TransferConfig {
        n: T::from_extended(n),
        initial: speed.map(T::from_extended),
        max_iter: spec.max_iter,
        record_trajectory: false,
    };
    let outcome = run_transfer(&cfg).expect("validated grid point");

    let n_t = cfg.n;
    let v0_ss = predict_single_step_velocity(n_t).expect("validated N");
    // M_b from the extended v0 so that speeds near light keep their digits
    let m_b = T::from_extended(Extended::from(4.0) / (Extended::from(3.0) * speed.velocity() * speed.velocity()));
    let classical_steps = spec
        .include_classical_baseline
        .then(|| classical_steps(n.to_f64()))
        .flatten();

    SweepRecord {
        n,
        speed,
        steps_to_max: outcome.steps_to_max,
        max_fraction: outcome.max_fraction.to_extended(),
        classical_steps,
        asymptote: classical_asymptote(n_t).expect("validated N").to_extended(),
        v0_ss: SingleStepVelocity {
            v0: v0_ss.v0.to_extended(),
            one_minus_v0: v0_ss.one_minus_v0.to_extended(),
        },
        m_b: m_b.to_extended(),
        termination: outcome.termination,
        big_ball_reversed: outcome.big_ball_reversed,
        backend: spec.backend,
    }
}
