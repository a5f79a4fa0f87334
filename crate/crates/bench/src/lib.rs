//! Shared fixtures for the benchmarks.

use grover_rel::kinematics::alpha_from_velocity;
use grover_rel::{AlphaState, NormalizedVelocity, Real};

/// Initial speeds of the standard step-count figure.
pub const FIGURE_SPEEDS: [f64; 6] = [0.001, 0.01, 0.05, 0.1, 0.3, 0.8];

/// Approaching two-ball states spread over mass ratios `1..1e9` and speeds
/// up to 0.99, on a fixed lattice.
pub fn collision_states<T: Real>(count: usize) -> Vec<AlphaState<T>> {
    (0..count)
        .map(|i| {
            let t = (i as f64 + 0.5) / count as f64;
            let m = 10f64.powf(9.0 * t);
            let v1 = 0.99 * (2.0 * ((t * 7.0).fract()) - 1.0);
            let v2 = v1 - 0.01 - 0.98 * (t * 13.0).fract() * (v1 + 0.99) / 1.98;
            let a = |v: f64| alpha_from_velocity(NormalizedVelocity::new(T::from_f64(v)).unwrap());
            AlphaState::new(a(v1), a(v2.max(-0.995)), T::from_f64(m)).unwrap()
        })
        .collect()
}
