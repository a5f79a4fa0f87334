//! The Grover energy-transfer driver.
//!
//! One iteration reflects the light ball off the wall and then lets the balls
//! collide. The driver repeats iterations until the light ball's kinetic energy
//! stops growing and reports the step at which it peaked. Step `k` is the
//! state after the `k`-th collision; step 0 is the initial state with both
//! balls moving right at `v0`.

use std::fmt;
use std::str::FromStr;

use crate::collision::{collide, conserved_quantities, wall_bounce, AlphaState};
use crate::kinematics::{
    alpha_from_one_minus_velocity, alpha_from_velocity, kinetic_from_alpha, AlphaVar, DomainError,
    NormalizedVelocity,
};
use crate::scalar::{Real, ScalarBackend};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("N = {0} must be at least 2")]
    TooFewObjects(f64),
    #[error("initial speed: {0}")]
    Speed(#[from] DomainError),
    #[error("initial speed must be positive")]
    AtRest,
    #[error("max_iter must be at least 1")]
    ZeroIterations,
}

/// Initial speed of both balls, either as `v0` or as `1 − v0`.
///
/// The second form keeps speeds within `1e-16` of light representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialSpeed<T> {
    Velocity(T),
    OneMinusVelocity(T),
}

impl<T: Real> InitialSpeed<T> {
    pub fn alpha(&self) -> Result<AlphaVar<T>, ConfigError> {
        let alpha = match *self {
            InitialSpeed::Velocity(v) => {
                if !(v > T::zero()) {
                    return Err(if v == T::zero() {
                        ConfigError::AtRest
                    } else {
                        ConfigError::Speed(DomainError::Velocity(v.to_f64()))
                    });
                }
                alpha_from_velocity(NormalizedVelocity::new(v)?)
            }
            InitialSpeed::OneMinusVelocity(x) => {
                if x == T::one() {
                    return Err(ConfigError::AtRest);
                }
                alpha_from_one_minus_velocity(x)?
            }
        };
        Ok(alpha)
    }

    /// `v0`; rounds onto 1 when `1 − v0` is below the backend resolution.
    pub fn velocity(&self) -> T {
        match *self {
            InitialSpeed::Velocity(v) => v,
            InitialSpeed::OneMinusVelocity(x) => T::one() - x,
        }
    }

    pub fn one_minus_velocity(&self) -> T {
        match *self {
            InitialSpeed::Velocity(v) => T::one() - v,
            InitialSpeed::OneMinusVelocity(x) => x,
        }
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> InitialSpeed<U> {
        match self {
            InitialSpeed::Velocity(v) => InitialSpeed::Velocity(f(v)),
            InitialSpeed::OneMinusVelocity(x) => InitialSpeed::OneMinusVelocity(f(x)),
        }
    }
}

/// Parameters of a single transfer run. The backend is the scalar type `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferConfig<T> {
    /// Number of unit-mass objects; the heavy ball has mass `N − 1`.
    pub n: T,
    pub initial: InitialSpeed<T>,
    /// Maximum number of collisions; `None` selects [`default_max_iter`].
    pub max_iter: Option<usize>,
    pub record_trajectory: bool,
}

impl<T: Real> TransferConfig<T> {
    pub fn new(n: T, initial: InitialSpeed<T>) -> Self {
        TransferConfig {
            n,
            initial,
            max_iter: None,
            record_trajectory: false,
        }
    }

    pub fn with_velocity(n: T, v0: T) -> Self {
        Self::new(n, InitialSpeed::Velocity(v0))
    }

    pub fn with_one_minus_velocity(n: T, x: T) -> Self {
        Self::new(n, InitialSpeed::OneMinusVelocity(x))
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub fn record_trajectory(mut self, record: bool) -> Self {
        self.record_trajectory = record;
        self
    }

    pub fn backend(&self) -> ScalarBackend {
        T::BACKEND
    }

    pub fn mass_ratio(&self) -> T {
        self.n - T::one()
    }

    pub fn validate(&self) -> Result<AlphaVar<T>, ConfigError> {
        if !(self.n.is_finite() && self.n >= T::two()) {
            return Err(ConfigError::TooFewObjects(self.n.to_f64()));
        }
        if self.max_iter == Some(0) {
            return Err(ConfigError::ZeroIterations);
        }
        self.initial.alpha()
    }

    pub fn effective_max_iter(&self) -> usize {
        self.max_iter
            .unwrap_or_else(|| default_max_iter(self.n.to_f64()))
    }
}

/// `10 · ⌈π/4 · √N⌉ + 100` collisions.
pub fn default_max_iter(n: f64) -> usize {
    let classical = (std::f64::consts::FRAC_PI_4 * n.sqrt()).ceil();
    10 * classical as usize + 100
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    /// The light ball's energy stopped growing; the maximum is certified by
    /// one look-ahead collision.
    FirstMaxFound,
    /// After the wall bounce the balls were not closing, so no further
    /// collision can happen.
    NoApproach,
    /// The light ball was not moving toward the wall.
    SmallBallTrapped,
    /// `max_iter` collisions were spent without finding the maximum.
    IterationLimit,
}

impl Termination {
    pub const fn name(self) -> &'static str {
        match self {
            Termination::FirstMaxFound => "first_max_found",
            Termination::NoApproach => "no_approach",
            Termination::SmallBallTrapped => "small_ball_trapped",
            Termination::IterationLimit => "iteration_limit",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown termination `{0}`")]
pub struct UnknownTermination(pub String);

impl FromStr for Termination {
    type Err = UnknownTermination;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Termination::FirstMaxFound,
            Termination::NoApproach,
            Termination::SmallBallTrapped,
            Termination::IterationLimit,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| UnknownTermination(s.to_owned()))
    }
}

/// State of the system after `step` collisions.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub step: usize,
    pub state: AlphaState<T>,
    pub k1_fraction: T,
    pub k2_fraction: T,
    /// `(E_k − E_0) / E_0`
    pub energy_drift_cumulative: T,
    /// Sum of the per-collision momentum drifts. The wall exchanges momentum
    /// with the light ball, so total momentum is not itself conserved.
    pub momentum_drift_cumulative: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferOutcome<T> {
    pub steps_to_max: usize,
    /// `K₂ / K_T` at `steps_to_max`.
    pub max_fraction: T,
    pub termination: Termination,
    /// The heavy ball moved left at some step up to `steps_to_max`.
    pub big_ball_reversed: bool,
    /// Collisions actually computed, including the look-ahead one.
    pub collisions: usize,
    pub trajectory: Option<Vec<TrajectoryPoint<T>>>,
}

/// `(K₁ / K_T, K₂ / K_T)` for a state.
pub fn kinetic_fractions<T: Real>(
    state: &AlphaState<T>,
    total_kinetic: T,
) -> Result<(T, T), DomainError> {
    if !(total_kinetic > T::zero()) {
        return Err(DomainError::TotalKinetic(total_kinetic.to_f64()));
    }
    let k1 = kinetic_from_alpha(state.big(), state.mass_ratio())?;
    let k2 = kinetic_from_alpha(state.small(), T::one())?;
    Ok((k1 / total_kinetic, k2 / total_kinetic))
}

/// Two-ball dynamics the driver can iterate. Implemented by the relativistic
/// engine here and the classical one in [`crate::classical`].
pub(crate) trait TwoBallSystem {
    type Scalar: Real;

    /// The light ball moves right, toward the wall.
    fn small_reaches_wall(&self) -> bool;
    fn bounce_small(&mut self);
    /// The heavy ball is faster than the light one (`v₁ > v₂`).
    fn approaching(&self) -> bool;
    fn collide(&mut self);
    /// Light-ball kinetic energy in a unit shared by every step of the run.
    fn small_kinetic(&self) -> Self::Scalar;
    fn big_moving_left(&self) -> bool;
}

pub(crate) struct Drive<T> {
    pub steps_to_max: usize,
    pub max_kinetic: T,
    pub termination: Termination,
    pub big_ball_reversed: bool,
    pub collisions: usize,
}

/// Runs the bounce/collide protocol until the first maximum of the light
/// ball's kinetic energy. `observe` sees the system after every collision.
///
/// A step whose energy equals the previous one ends the run: among equal
/// values the earliest step is the maximum.
pub(crate) fn drive<S: TwoBallSystem>(
    system: &mut S,
    max_iter: usize,
    mut observe: impl FnMut(&S, usize),
) -> Drive<S::Scalar> {
    let mut current = system.small_kinetic();
    let mut step = 0;
    let mut reversed = system.big_moving_left();

    let termination = loop {
        if step >= max_iter {
            break Termination::IterationLimit;
        }
        if !system.small_reaches_wall() {
            break Termination::SmallBallTrapped;
        }
        system.bounce_small();
        if !system.approaching() {
            break Termination::NoApproach;
        }
        system.collide();
        observe(system, step + 1);

        let next = system.small_kinetic();
        if next <= current {
            // the look-ahead collision is past the maximum and not counted
            return Drive {
                steps_to_max: step,
                max_kinetic: current,
                termination: Termination::FirstMaxFound,
                big_ball_reversed: reversed,
                collisions: step + 1,
            };
        }
        reversed |= system.big_moving_left();
        current = next;
        step += 1;
    };

    Drive {
        steps_to_max: step,
        max_kinetic: current,
        termination,
        big_ball_reversed: reversed,
        collisions: step,
    }
}

struct Relativistic<T> {
    state: AlphaState<T>,
    momentum_drift: T,
}

impl<T: Real> TwoBallSystem for Relativistic<T> {
    type Scalar = T;

    fn small_reaches_wall(&self) -> bool {
        self.state.small().is_moving_right()
    }

    fn bounce_small(&mut self) {
        // guarded by small_reaches_wall
        let bounced = wall_bounce(self.state.small()).expect("light ball moves toward the wall");
        self.state = self.state.with_small(bounced);
    }

    fn approaching(&self) -> bool {
        self.state.is_approaching()
    }

    fn collide(&mut self) {
        let outcome = collide(&self.state).expect("balls are approaching");
        self.state = outcome.state_after;
        self.momentum_drift = self.momentum_drift + outcome.momentum_drift;
    }

    fn small_kinetic(&self) -> T {
        kinetic_from_alpha(self.state.small(), T::one()).expect("unit mass")
    }

    fn big_moving_left(&self) -> bool {
        self.state.big().rapidity() < T::zero()
    }
}

/// Runs one relativistic transfer.
pub fn run_transfer<T: Real>(cfg: &TransferConfig<T>) -> Result<TransferOutcome<T>, ConfigError> {
    let alpha0 = cfg.validate()?;
    let mass_ratio = cfg.mass_ratio();
    let state = AlphaState::new(alpha0, alpha0, mass_ratio).expect("N >= 2 gives M >= 1");
    let total_kinetic = kinetic_from_alpha(alpha0, cfg.n)?;
    if !(total_kinetic > T::zero()) {
        return Err(ConfigError::AtRest);
    }
    let initial_energy = conserved_quantities(&state).energy;

    let point = |system: &Relativistic<T>, step: usize| {
        let (k1, k2) = kinetic_fractions(&system.state, total_kinetic).expect("K_T > 0");
        // E_k − E_0 = (K₁ + K₂) − K_T since rest masses never change
        let kinetic_now = (k1 + k2) * total_kinetic;
        TrajectoryPoint {
            step,
            state: system.state,
            k1_fraction: k1,
            k2_fraction: k2,
            energy_drift_cumulative: (kinetic_now - total_kinetic) / initial_energy,
            momentum_drift_cumulative: system.momentum_drift,
        }
    };

    let mut system = Relativistic {
        state,
        momentum_drift: T::zero(),
    };
    let mut trajectory = cfg.record_trajectory.then(|| vec![point(&system, 0)]);
    let result = drive(&mut system, cfg.effective_max_iter(), |s, step| {
        if let Some(points) = trajectory.as_mut() {
            points.push(point(s, step));
        }
    });

    Ok(TransferOutcome {
        steps_to_max: result.steps_to_max,
        max_fraction: result.max_kinetic / total_kinetic,
        termination: result.termination,
        big_ball_reversed: result.big_ball_reversed,
        collisions: result.collisions,
        trajectory,
    })
}
