//! Relativistic Grover energy transfer.
//!
//! A heavy ball of mass `M = N − 1` and a light ball of mass 1 move right at
//! the same speed `v0` toward a rigid wall. Each iteration reflects the light
//! ball off the wall (the oracle) and lets the two balls collide elastically
//! (the diffusion step). Classically the light ball collects most of the
//! kinetic energy after about `π/4 · √N` iterations; relativistically the
//! count drops, down to a single collision as `v0 → 1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: standard (`f64`) and extended (double-double) backends
//! - [`kinematics`]: α-variables, Lorentz factor, kinetic energy
//! - [`collision`]: wall bounce and the two-ball elastic collision
//! - [`classical`]: non-relativistic oracle engine
//! - [`transfer`]: the iteration driver and first-maximum detection
//! - [`sweep`]: parameter grids and closed-form predictions

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod collision;
pub mod kinematics;
pub mod scalar;
pub mod sweep;
pub mod transfer;

pub use classical::{classical_collide, classical_steps, classical_transfer, ClassicalState};
pub use collision::{collide, conserved_quantities, wall_bounce, AlphaState, CollisionOutcome};
pub use kinematics::{AlphaVar, NormalizedVelocity};
pub use scalar::{Extended, Real, ScalarBackend};

pub use sweep::{
    classical_asymptote, predict_breakpoints, predict_single_step_velocity, run_sweep, SweepRecord, SweepSpec,
};
pub use transfer::{
    run_transfer, InitialSpeed, Termination, TrajectoryPoint, TransferConfig, TransferOutcome,
};
