//! Non-relativistic engine, used as the oracle for the low-speed limit and
//! as the classical baseline of the step-count comparison.
//!
//! The collision map is the closed form of Newtonian energy and momentum
//! conservation. Runs go through the same driver as the relativistic engine,
//! so termination rules and step counting are identical.

use crate::transfer::{default_max_iter, drive, ConfigError, Termination, TransferOutcome, TwoBallSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassicalError {
    #[error("balls are not approaching (heavy {v_big} <= light {v_small})")]
    NoApproach { v_big: f64, v_small: f64 },
    #[error("state is not finite or mass ratio {0} < 1")]
    InvalidState(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub v_big: f64,
    pub v_small: f64,
    pub mass_ratio: f64,
}

impl ClassicalState {
    pub fn kinetic_big(&self) -> f64 {
        0.5 * self.mass_ratio * self.v_big * self.v_big
    }

    pub fn kinetic_small(&self) -> f64 {
        0.5 * self.v_small * self.v_small
    }

    pub fn momentum(&self) -> f64 {
        self.mass_ratio * self.v_big + self.v_small
    }
}

/// Newtonian elastic collision:
///
/// ```text
/// v₁′ = ((M − 1) v₁ + 2 v₂) / (M + 1)
/// v₂′ = (2M v₁ − (M − 1) v₂) / (M + 1)
/// ```
pub fn classical_collide(s: &ClassicalState) -> Result<ClassicalState, ClassicalError> {
    let m = s.mass_ratio;
    if !(m.is_finite() && m >= 1.0 && s.v_big.is_finite() && s.v_small.is_finite()) {
        return Err(ClassicalError::InvalidState(m));
    }
    if !(s.v_big > s.v_small) {
        return Err(ClassicalError::NoApproach {
            v_big: s.v_big,
            v_small: s.v_small,
        });
    }
    if m == 1.0 {
        return Ok(ClassicalState {
            v_big: s.v_small,
            v_small: s.v_big,
            mass_ratio: m,
        });
    }
    let total = m + 1.0;
    Ok(ClassicalState {
        v_big: ((m - 1.0) * s.v_big + 2.0 * s.v_small) / total,
        v_small: (2.0 * m * s.v_big - (m - 1.0) * s.v_small) / total,
        mass_ratio: m,
    })
}

struct Classical {
    state: ClassicalState,
}

impl TwoBallSystem for Classical {
    type Scalar = f64;

    fn small_reaches_wall(&self) -> bool {
        self.state.v_small > 0.0
    }

    fn bounce_small(&mut self) {
        self.state.v_small = -self.state.v_small;
    }

    fn approaching(&self) -> bool {
        self.state.v_big > self.state.v_small
    }

    fn collide(&mut self) {
        self.state = classical_collide(&self.state).expect("balls are approaching");
    }

    fn small_kinetic(&self) -> f64 {
        self.state.kinetic_small()
    }

    fn big_moving_left(&self) -> bool {
        self.state.v_big < 0.0
    }
}

fn validate(n: f64, v0: f64, max_iter: Option<usize>) -> Result<(), ConfigError> {
    if !(n.is_finite() && n >= 2.0) {
        return Err(ConfigError::TooFewObjects(n));
    }
    if v0 == 0.0 {
        return Err(ConfigError::AtRest);
    }
    if !(v0.is_finite() && v0 > 0.0) {
        return Err(ConfigError::Speed(crate::kinematics::DomainError::Velocity(v0)));
    }
    if max_iter == Some(0) {
        return Err(ConfigError::ZeroIterations);
    }
    Ok(())
}

/// Classical transfer with `N` objects and initial speed `v0 > 0` (any scale;
/// the step count does not depend on it).
pub fn classical_transfer(
    n: f64,
    v0: f64,
    max_iter: Option<usize>,
) -> Result<TransferOutcome<f64>, ConfigError> {
    validate(n, v0, max_iter)?;
    let mut system = Classical {
        state: ClassicalState {
            v_big: v0,
            v_small: v0,
            mass_ratio: n - 1.0,
        },
    };
    let total_kinetic = 0.5 * n * v0 * v0;
    let result = drive(
        &mut system,
        max_iter.unwrap_or_else(|| default_max_iter(n)),
        |_, _| {},
    );
    Ok(TransferOutcome {
        steps_to_max: result.steps_to_max,
        max_fraction: result.max_kinetic / total_kinetic,
        termination: result.termination,
        big_ball_reversed: result.big_ball_reversed,
        collisions: result.collisions,
        trajectory: None,
    })
}

/// Classical states after each of the first `collisions` iterations, starting
/// with the initial state. Stops early if the protocol cannot continue.
pub fn classical_trajectory(n: f64, v0: f64, collisions: usize) -> Result<Vec<ClassicalState>, ConfigError> {
    validate(n, v0, None)?;
    let mut system = Classical {
        state: ClassicalState {
            v_big: v0,
            v_small: v0,
            mass_ratio: n - 1.0,
        },
    };
    let mut states = vec![system.state];
    for _ in 0..collisions {
        if !system.small_reaches_wall() {
            break;
        }
        system.bounce_small();
        if !system.approaching() {
            break;
        }
        system.collide();
        states.push(system.state);
    }
    Ok(states)
}

/// Steps to the classical maximum, or `None` if the run did not find one.
pub fn classical_steps(n: f64) -> Option<usize> {
    let out = classical_transfer(n, 1.0, None).ok()?;
    (out.termination == Termination::FirstMaxFound).then_some(out.steps_to_max)
}
