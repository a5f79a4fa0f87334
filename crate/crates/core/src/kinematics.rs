//! One-dimensional relativistic kinematics in α-variables.
//!
//! `α = sqrt((1 + v) / (1 - v))` is the exponential of the rapidity. It turns
//! velocity composition into multiplication and the elastic collision into a
//! reflection, which is why the simulation state is kept in α rather than in
//! velocity. [`AlphaVar`] stores `ln α` internally: the logarithm keeps full
//! relative precision both for `v → 0` (where α itself collapses onto 1) and
//! for `v → ±1` (where velocity collapses onto ±1).

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("velocity {0} outside the open interval (-1, 1)")]
    Velocity(f64),
    #[error("one-minus-velocity {0} outside (0, 1]")]
    OneMinusVelocity(f64),
    #[error("alpha {0} must be positive and finite")]
    Alpha(f64),
    #[error("mass {0} must be positive and finite")]
    Mass(f64),
    #[error("total kinetic energy {0} must be positive")]
    TotalKinetic(f64),
}

/// Velocity as a fraction of the speed of light, strictly inside (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NormalizedVelocity<T>(T);

impl<T: Real> NormalizedVelocity<T> {
    pub fn new(v: T) -> Result<Self, DomainError> {
        if v.is_finite() && v.abs() < T::one() {
            Ok(NormalizedVelocity(v))
        } else {
            Err(DomainError::Velocity(v.to_f64()))
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

/// The α-variable of a single ball.
///
/// Always positive: `α > 1` moving right, `α = 1` at rest, `α < 1` moving left.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaVar<T> {
    rapidity: T,
}

/// Derived hyperbolic quantities of an α-variable, all computed without
/// cancellation from a single `expm1` evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hyperbolic<T> {
    /// α
    pub alpha: T,
    /// 1/α
    pub inv_alpha: T,
    /// γ − 1
    pub gamma_minus_one: T,
    /// γv
    pub momentum: T,
}

impl<T: Real> AlphaVar<T> {
    /// Builds the variable from its value `α > 0`.
    pub fn new(alpha: T) -> Result<Self, DomainError> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(DomainError::Alpha(alpha.to_f64()));
        }
        let rapidity = if alpha >= T::one() {
            (alpha - T::one()).ln_1p()
        } else {
            -(alpha.recip() - T::one()).ln_1p()
        };
        Ok(AlphaVar { rapidity })
    }

    /// Builds the variable from a rapidity `φ = ln α`.
    pub fn from_rapidity(rapidity: T) -> Self {
        AlphaVar { rapidity }
    }

    /// The rest state, α = 1.
    pub fn rest() -> Self {
        AlphaVar {
            rapidity: T::zero(),
        }
    }

    #[inline]
    pub fn rapidity(self) -> T {
        self.rapidity
    }

    /// α itself.
    pub fn value(self) -> T {
        self.hyperbolic().alpha
    }

    /// 1/α, the same speed in the opposite direction.
    #[inline]
    pub fn reciprocal(self) -> Self {
        AlphaVar {
            rapidity: -self.rapidity,
        }
    }

    /// True when the ball moves to the right (α > 1).
    #[inline]
    pub fn is_moving_right(self) -> bool {
        self.rapidity > T::zero()
    }

    pub(crate) fn hyperbolic(self) -> Hyperbolic<T> {
        let magnitude = self.rapidity.abs();
        let m = magnitude.exp_m1();
        let big = T::one() + m;
        let small = big.recip();
        let gamma_minus_one = m * m / (T::two() * big);
        let speed_part = (m + m * small).half();
        if self.rapidity < T::zero() {
            Hyperbolic {
                alpha: small,
                inv_alpha: big,
                gamma_minus_one,
                momentum: -speed_part,
            }
        } else {
            Hyperbolic {
                alpha: big,
                inv_alpha: small,
                gamma_minus_one,
                momentum: speed_part,
            }
        }
    }
}

/// `α = sqrt((1 + v) / (1 − v))`.
pub fn alpha_from_velocity<T: Real>(v: NormalizedVelocity<T>) -> AlphaVar<T> {
    let v = v.get();
    // atanh(v) = ½ ln1p(2v / (1 − v)), evaluated on |v| and mirrored
    let magnitude = v.abs();
    let half_log = (T::two() * magnitude / (T::one() - magnitude)).ln_1p().half();
    AlphaVar::from_rapidity(if v < T::zero() { -half_log } else { half_log })
}

/// α for `v = 1 − x`, computed from `x` directly so that speeds within
/// `x ≪ ε` of light keep their precision.
pub fn alpha_from_one_minus_velocity<T: Real>(x: T) -> Result<AlphaVar<T>, DomainError> {
    if !(x.is_finite() && x > T::zero() && x <= T::one()) {
        return Err(DomainError::OneMinusVelocity(x.to_f64()));
    }
    // (2 − x)/x = 1 + 2(1 − x)/x
    let rapidity = (T::two() * (T::one() - x) / x).ln_1p().half();
    Ok(AlphaVar::from_rapidity(rapidity))
}

/// `v = (α² − 1) / (α² + 1)`.
///
/// Speeds closer to light than the backend resolves are returned rounded
/// onto ±1; use [`one_minus_velocity_from_alpha`] in that regime.
pub fn velocity_from_alpha<T: Real>(a: AlphaVar<T>) -> NormalizedVelocity<T> {
    let h = a.hyperbolic();
    NormalizedVelocity(h.momentum / (T::one() + h.gamma_minus_one))
}

/// `1 − v = 2 / (α² + 1)`, accurate as `v → 1`.
pub fn one_minus_velocity_from_alpha<T: Real>(a: AlphaVar<T>) -> T {
    let h = a.hyperbolic();
    T::two() * h.inv_alpha / (h.alpha + h.inv_alpha)
}

/// Lorentz factor `γ = (α + 1/α) / 2`.
pub fn gamma_from_alpha<T: Real>(a: AlphaVar<T>) -> T {
    T::one() + a.hyperbolic().gamma_minus_one
}

/// `γv = (α − 1/α) / 2`.
pub fn momentum_factor_from_alpha<T: Real>(a: AlphaVar<T>) -> T {
    a.hyperbolic().momentum
}

/// Kinetic energy `mass · (γ − 1) = mass · (α − 1)² / (2α)`.
pub fn kinetic_from_alpha<T: Real>(a: AlphaVar<T>, mass: T) -> Result<T, DomainError> {
    if !(mass.is_finite() && mass > T::zero()) {
        return Err(DomainError::Mass(mass.to_f64()));
    }
    Ok(mass * a.hyperbolic().gamma_minus_one)
}
