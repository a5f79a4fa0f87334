//! Wall bounce and the relativistic elastic collision of the two balls.
//!
//! Energy and momentum conservation for masses `M` and 1 are equivalent to
//! conservation of
//!
//! ```text
//! S = M α₁ + α₂        T = M / α₁ + 1 / α₂
//! ```
//!
//! and the light ball's post-collision α solves `A x² + B x + C = 0` with
//! `A = T`, `B = −[M (α₁/α₂ + α₂/α₁) + 2]` and `C = S`. One root is the
//! incoming `α₂` itself (no interaction), so the physical root follows from the
//! product of roots: `α₂′ = C / (A α₂)`. The same relation applied to the heavy
//! ball gives `α₁′ = C / (A α₁)`, which is the S-preserving update
//! `α₁′ = α₁ + (α₂ − α₂′) / M`. In rapidities both are a reflection through
//! `ln(S/T)`, the doubled centre-of-momentum rapidity, and that is how they
//! are evaluated here.

use crate::kinematics::{AlphaVar, DomainError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CollisionError {
    #[error("ball is not moving toward the wall (alpha {0} <= 1)")]
    NotTowardWall(f64),
    #[error("balls are not approaching (heavy alpha {big} <= light alpha {small})")]
    NoApproach { big: f64, small: f64 },
    #[error("mass ratio {0} must be finite and at least 1")]
    MassRatio(f64),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Both balls in α-variables. The heavy ball has mass `mass_ratio`, the light
/// ball has mass 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaState<T> {
    big: AlphaVar<T>,
    small: AlphaVar<T>,
    mass_ratio: T,
}

impl<T: Real> AlphaState<T> {
    pub fn new(big: AlphaVar<T>, small: AlphaVar<T>, mass_ratio: T) -> Result<Self, CollisionError> {
        if !(mass_ratio.is_finite() && mass_ratio >= T::one()) {
            return Err(CollisionError::MassRatio(mass_ratio.to_f64()));
        }
        Ok(AlphaState {
            big,
            small,
            mass_ratio,
        })
    }

    /// Convenience constructor from raw α values.
    pub fn from_alphas(big: T, small: T, mass_ratio: T) -> Result<Self, CollisionError> {
        Self::new(AlphaVar::new(big)?, AlphaVar::new(small)?, mass_ratio)
    }

    #[inline]
    pub fn big(&self) -> AlphaVar<T> {
        self.big
    }

    #[inline]
    pub fn small(&self) -> AlphaVar<T> {
        self.small
    }

    #[inline]
    pub fn mass_ratio(&self) -> T {
        self.mass_ratio
    }

    pub fn with_small(self, small: AlphaVar<T>) -> Self {
        AlphaState { small, ..self }
    }

    /// Time reversal: both velocities change sign.
    pub fn reversed(self) -> Self {
        AlphaState {
            big: self.big.reciprocal(),
            small: self.small.reciprocal(),
            ..self
        }
    }

    /// The closing condition `v₁ > v₂`.
    pub fn is_approaching(&self) -> bool {
        self.big.rapidity() > self.small.rapidity()
    }
}

/// The four collision invariants of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedQuantities<T> {
    /// `M α₁ + α₂`
    pub s: T,
    /// `M / α₁ + 1 / α₂`
    pub t: T,
    /// Total energy `M γ₁ + γ₂`.
    pub energy: T,
    /// Total momentum `M γ₁ v₁ + γ₂ v₂`.
    pub momentum: T,
}

/// Post-collision state plus the conservation error of the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionOutcome<T> {
    pub state_after: AlphaState<T>,
    /// `(E′ − E) / E`
    pub energy_drift: T,
    /// `(P′ − P) / (|P| + 1)`
    pub momentum_drift: T,
}

/// Reflection of the light ball off the rigid wall: `α → 1/α`.
pub fn wall_bounce<T: Real>(a: AlphaVar<T>) -> Result<AlphaVar<T>, CollisionError> {
    if !a.is_moving_right() {
        return Err(CollisionError::NotTowardWall(a.value().to_f64()));
    }
    Ok(a.reciprocal())
}

pub fn conserved_quantities<T: Real>(state: &AlphaState<T>) -> ConservedQuantities<T> {
    let m = state.mass_ratio;
    let big = state.big.hyperbolic();
    let small = state.small.hyperbolic();
    ConservedQuantities {
        s: m * big.alpha + small.alpha,
        t: m * big.inv_alpha + small.inv_alpha,
        energy: m * (T::one() + big.gamma_minus_one) + (T::one() + small.gamma_minus_one),
        momentum: m * big.momentum + small.momentum,
    }
}

/// Coefficients `(A, B, C)` of the quadratic satisfied by the light ball's
/// post-collision α.
pub fn quadratic_coefficients<T: Real>(state: &AlphaState<T>) -> (T, T, T) {
    let m = state.mass_ratio;
    let a1 = state.big.value();
    let a2 = state.small.value();
    let a = m / a1 + a2.recip();
    let b = -(m * (a1 / a2 + a2 / a1) + T::two());
    let c = m * a1 + a2;
    (a, b, c)
}

/// `ln(S/T)`, evaluated as `ln1p(2P/T)` or `−ln1p(−2P/S)` depending on the
/// sign of the momentum so the argument never approaches −1.
fn doubled_center_rapidity<T: Real>(q: &ConservedQuantities<T>) -> T {
    if q.momentum >= T::zero() {
        (T::two() * q.momentum / q.t).ln_1p()
    } else {
        -(-T::two() * q.momentum / q.s).ln_1p()
    }
}

/// Elastic collision of the two balls.
///
/// Requires the balls to be closing (`α₁ > α₂`); after the collision they
/// separate (`v₂′ > v₁′`).
pub fn collide<T: Real>(state: &AlphaState<T>) -> Result<CollisionOutcome<T>, CollisionError> {
    if !state.is_approaching() {
        return Err(CollisionError::NoApproach {
            big: state.big.value().to_f64(),
            small: state.small.value().to_f64(),
        });
    }
    let m = state.mass_ratio;
    let before = conserved_quantities(state);

    let state_after = if m == T::one() {
        // equal masses exchange velocities exactly
        AlphaState {
            big: state.small,
            small: state.big,
            mass_ratio: m,
        }
    } else {
        let reflect = doubled_center_rapidity(&before);
        AlphaState {
            big: AlphaVar::from_rapidity(reflect - state.big.rapidity()),
            small: AlphaVar::from_rapidity(reflect - state.small.rapidity()),
            mass_ratio: m,
        }
    };

    let (energy_drift, momentum_drift) = drift(state, &state_after, &before);
    Ok(CollisionOutcome {
        state_after,
        energy_drift,
        momentum_drift,
    })
}

fn drift<T: Real>(
    before: &AlphaState<T>,
    after: &AlphaState<T>,
    q: &ConservedQuantities<T>,
) -> (T, T) {
    let m = before.mass_ratio;
    let (b0, s0) = (before.big.hyperbolic(), before.small.hyperbolic());
    let (b1, s1) = (after.big.hyperbolic(), after.small.hyperbolic());
    // differences of the kinetic parts; the rest masses cancel exactly
    let d_energy = m * (b1.gamma_minus_one - b0.gamma_minus_one)
        + (s1.gamma_minus_one - s0.gamma_minus_one);
    let d_momentum = m * (b1.momentum - b0.momentum) + (s1.momentum - s0.momentum);
    (d_energy / q.energy, d_momentum / (q.momentum.abs() + T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{alpha_from_velocity, velocity_from_alpha, NormalizedVelocity};
    use crate::scalar::Extended;
    use proptest::prelude::*;

    fn state(big: f64, small: f64, m: f64) -> AlphaState<f64> {
        AlphaState::from_alphas(big, small, m).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn hand_worked_collision() {
        let out = collide(&state(2.0, 0.5, 2.0)).unwrap();
        assert!(rel(out.state_after.small().value(), 3.0) <= 1e-14);
        assert!(rel(out.state_after.big().value(), 0.75) <= 1e-14);
        let q = conserved_quantities(&out.state_after);
        assert!(rel(q.energy, 3.75) <= 1e-14);
        assert!(rel(q.momentum, 0.75) <= 1e-14);
    }

    #[test]
    fn conserved_quantity_examples() {
        let q = conserved_quantities(&state(1.0, 1.0, 1.0));
        assert_eq!((q.s, q.t, q.energy, q.momentum), (2.0, 2.0, 2.0, 0.0));

        let q = conserved_quantities(&state(2.0, 0.5, 2.0));
        assert!(rel(q.s, 4.5) < 1e-15);
        assert!(rel(q.t, 3.0) < 1e-15);
        assert!(rel(q.energy, 3.75) < 1e-15);
        assert!(rel(q.momentum, 0.75) < 1e-15);
        assert!(rel(q.energy, (q.s + q.t) / 2.0) < 1e-15);
        assert!(rel(q.momentum, (q.s - q.t) / 2.0) < 1e-15);
    }

    #[test]
    fn equal_masses_exchange_exactly() {
        let s = state(3.0, 0.25, 1.0);
        let out = collide(&s).unwrap();
        assert_eq!(out.state_after.small(), s.big());
        assert_eq!(out.state_after.big(), s.small());
        assert_eq!(out.energy_drift, 0.0);
    }

    #[test]
    fn heavy_limit_reflects_off_a_moving_wall() {
        let (a1, a2) = (1.7, 0.4);
        let out = collide(&state(a1, a2, 1e9)).unwrap();
        assert!(rel(out.state_after.small().value(), a1 * a1 / a2) <= 1e-6);
    }

    #[test]
    fn no_approach_is_an_error() {
        assert!(matches!(
            collide(&state(0.5, 2.0, 3.0)),
            Err(CollisionError::NoApproach { .. })
        ));
        assert!(matches!(
            collide(&state(1.5, 1.5, 3.0)),
            Err(CollisionError::NoApproach { .. })
        ));
    }

    #[test]
    fn mass_ratio_below_one_is_rejected() {
        assert!(AlphaState::from_alphas(2.0, 0.5, 0.5).is_err());
        assert!(AlphaState::from_alphas(2.0, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn wall_bounce_examples() {
        let a = AlphaVar::new(2.0).unwrap();
        assert!(rel(wall_bounce(a).unwrap().value(), 0.5) < 1e-15);
        assert!(wall_bounce(AlphaVar::new(1.0).unwrap()).is_err());
        assert!(wall_bounce(AlphaVar::new(0.5).unwrap()).is_err());
        // involution, second precondition waived
        assert_eq!(wall_bounce(a).unwrap().reciprocal(), a);

        let root = Extended::from(999_999.0).sqrt();
        let b = wall_bounce(AlphaVar::new(root).unwrap()).unwrap().value();
        let err = ((b * root) - Extended::ONE).abs().to_f64();
        assert!(err < 1e-30);
    }

    #[test]
    fn physical_root_solves_the_quadratic() {
        let s = state(2.0, 0.5, 2.0);
        let (a, b, c) = quadratic_coefficients(&s);
        let x = collide(&s).unwrap().state_after.small().value();
        let residual = a * x * x + b * x + c;
        assert!(residual.abs() < 1e-13 * c);
        // and the identity root does too
        let y = s.small().value();
        assert!((a * y * y + b * y + c).abs() < 1e-13 * c);
    }

    #[test]
    fn extended_backend_hand_worked_collision() {
        let s = AlphaState::<Extended>::from_alphas(2.0.into(), 0.5.into(), 2.0.into()).unwrap();
        let out = collide(&s).unwrap();
        let small = out.state_after.small().value();
        let big = out.state_after.big().value();
        assert!(((small - Extended::from(3.0)) / Extended::from(3.0)).abs().to_f64() < 1e-30);
        assert!(((big - Extended::from(0.75)) / Extended::from(0.75)).abs().to_f64() < 1e-30);
    }

    fn velocity_state() -> impl Strategy<Value = AlphaState<f64>> {
        (0.0f64..9.0, -0.999_999f64..0.999_999, -0.999_999f64..0.999_999)
            .prop_filter("must approach", |(_, u, w)| (u - w).abs() > 1e-9)
            .prop_map(|(log_m, u, w)| {
                let (v1, v2) = if u > w { (u, w) } else { (w, u) };
                let a = |v: f64| alpha_from_velocity(NormalizedVelocity::new(v).unwrap());
                AlphaState::new(a(v1), a(v2), 10f64.powf(log_m)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn conserves_energy_and_momentum(s in velocity_state()) {
            let out = collide(&s).unwrap();
            prop_assert!(out.energy_drift.abs() <= 1e-12, "{:e}", out.energy_drift);
            prop_assert!(out.momentum_drift.abs() <= 1e-12, "{:e}", out.momentum_drift);
            let q0 = conserved_quantities(&s);
            let q1 = conserved_quantities(&out.state_after);
            prop_assert!(((q1.s - q0.s) / q0.s).abs() <= 1e-12);
            prop_assert!(((q1.t - q0.t) / q0.t).abs() <= 1e-12);
        }

        #[test]
        fn balls_separate(s in velocity_state()) {
            let after = collide(&s).unwrap().state_after;
            let v1 = velocity_from_alpha(after.big()).get();
            let v2 = velocity_from_alpha(after.small()).get();
            prop_assert!(after.small().rapidity() > after.big().rapidity());
            prop_assert!(v2 >= v1);
        }

        #[test]
        fn time_reversal_recovers_the_incoming_state(s in velocity_state()) {
            let after = collide(&s).unwrap().state_after;
            let back = collide(&after.reversed()).unwrap().state_after.reversed();
            prop_assert!(rel(back.small().value(), s.small().value()) <= 1e-10);
            prop_assert!(rel(back.big().value(), s.big().value()) <= 1e-10);
        }

        #[test]
        fn physical_root_differs_from_identity(s in velocity_state()) {
            let v1 = velocity_from_alpha(s.big()).get();
            let v2 = velocity_from_alpha(s.small()).get();
            prop_assume!(v1 - v2 > 1e-6);
            let after = collide(&s).unwrap().state_after;
            prop_assert!(rel(after.small().value(), s.small().value()) > 1e-10);
        }

        #[test]
        fn post_state_quadratic_has_the_original_root(s in velocity_state()) {
            // S and T are invariant, so C/(A·α₂′) of the post state is the incoming α₂
            let after = collide(&s).unwrap().state_after;
            let q = conserved_quantities(&after);
            let recovered = q.s / (q.t * after.small().value());
            prop_assert!(rel(recovered, s.small().value()) <= 1e-10);
        }
    }
}
