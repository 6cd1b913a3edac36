//! Dimensionless regime parameters and the closed-form coefficient tables
//! that drive every model in the crate. Everything here is a pure function
//! of `(epsilon, mu, gamma, delta, theta, lambda)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Admissible parameter box. The depth ratio must stay away from 0 and
/// infinity for the coefficient formulas to be regular.
pub const DELTA_MIN: f64 = 0.1;
pub const DELTA_MAX: f64 = 10.0;
pub const GAMMA_MAX: f64 = 0.99;
pub const EPSILON_MAX: f64 = 1.0;
pub const MU_MAX: f64 = 1.0;

/// Dimensionless parameters of the two-fluid configuration plus the two
/// free model weights.
///
/// * `epsilon` - nonlinearity (amplitude / upper depth), `0 < epsilon <= 1`
/// * `mu` - shallowness (upper depth / wavelength)^2, `0 < mu <= 1`
/// * `delta` - depth ratio d1/d2
/// * `gamma` - density ratio rho1/rho2, `0 <= gamma < 1`
/// * `theta` - BBM-trick weight (time/space trade in the O(mu) terms)
/// * `lambda` - near-identity change-of-variable weight
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub epsilon: f64,
    pub mu: f64,
    pub delta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub lambda: f64,
}

impl RegimeParams {
    pub fn new(epsilon: f64, mu: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = RegimeParams { epsilon, mu, delta, gamma, theta: 0.0, lambda: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_weights(mut self, theta: f64, lambda: f64) -> Self {
        self.theta = theta;
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.epsilon > 0.0 && self.epsilon <= EPSILON_MAX) {
            return fail(format!("epsilon = {} outside (0, {}]", self.epsilon, EPSILON_MAX));
        }
        if !(self.mu >= 0.0 && self.mu <= MU_MAX) {
            return fail(format!("mu = {} outside [0, {}]", self.mu, MU_MAX));
        }
        if !(self.gamma >= 0.0 && self.gamma <= GAMMA_MAX) {
            return fail(format!("gamma = {} outside [0, {}]", self.gamma, GAMMA_MAX));
        }
        if !(self.delta >= DELTA_MIN && self.delta <= DELTA_MAX) {
            return fail(format!("delta = {} outside [{}, {}]", self.delta, DELTA_MIN, DELTA_MAX));
        }
        if !(self.theta.is_finite() && self.lambda.is_finite()) {
            return fail("theta/lambda must be finite".to_string());
        }
        Ok(())
    }

    /// `delta^2 - gamma`, the quantity whose vanishing kills the quadratic
    /// nonlinearity (critical depth ratio).
    pub fn critical_defect(&self) -> f64 {
        critical_defect(self)
    }

    /// Depths of the two layers at rest: `(1, 1/delta)`.
    pub fn rest_depths(&self) -> (f64, f64) {
        (1.0, 1.0 / self.delta)
    }
}

/// The theta/lambda-free constants of the coupled intermediate system that
/// the decoupled family is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseCoeffs {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub nu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

/// Coefficients of the generic scalar evolution equation
///
/// ```text
/// (1 - mu*beta dxx) dt u  +/- [ dx u + eps*a1 u dx u + eps^2 a2 u^2 dx u
///     + eps^3 a3 u^3 dx u + mu*nu dxxx u
///     + mu*eps dx( k1 u dxx u + k2 (dx u)^2 ) ] = 0
/// ```
///
/// `direction` is +1 for the right-going wave and -1 for the left-going one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarCoeffs {
    /// Coefficient of `-mu dxx dt` (the `nu_t` role).
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Coefficient of `mu dxxx` (the `nu_x` role).
    pub nu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// +1 right-going, -1 left-going.
    pub direction: f64,
}

pub fn critical_defect(p: &RegimeParams) -> f64 {
    p.delta * p.delta - p.gamma
}

/// Constants of the coupled first-order-in-(eps,mu) system obtained by
/// diagonalising the linear part of the Green-Naghdi model.
pub fn base_coeffs(p: &RegimeParams) -> BaseCoeffs {
    let g = p.gamma;
    let d = p.delta;
    let gd = g + d;
    debug_assert!(gd > 0.0 && d > 0.0);
    let crit = d * d - g;
    BaseCoeffs {
        alpha1: 1.5 * crit / gd,
        alpha2: -3.0 * g * d * (d + 1.0).powi(2) / gd.powi(2),
        alpha3: -5.0 * d * d * (d + 1.0).powi(2) * g * (1.0 - g) / gd.powi(3),
        nu: (1.0 + g * d) / (6.0 * d * gd),
        kappa1: (1.0 + g * d) * crit / (3.0 * d * gd * gd),
        kappa2: (1.0 - g) / (3.0 * gd),
        kappa3: (g - 1.0) / (2.0 * gd),
    }
}

/// Coefficient table for the decoupled counterpropagating-wave family.
///
/// The BBM trick moves a `theta` fraction of the third space derivative
/// onto a mixed space-time derivative and adds `(1-theta)*alpha1*nu` to both
/// kappa's; the near-identity change of variables shifts `lambda` between
/// the two dispersive coefficients and adds `lambda*alpha1` to `kappa1`.
pub fn decoupled_coeffs(p: &RegimeParams, direction: f64) -> ScalarCoeffs {
    let b = base_coeffs(p);
    let (theta, lambda) = (p.theta, p.lambda);
    let bbm = (1.0 - theta) * b.alpha1 * b.nu;
    ScalarCoeffs {
        beta: theta * b.nu + lambda,
        alpha1: b.alpha1,
        alpha2: b.alpha2,
        alpha3: b.alpha3,
        nu: (1.0 - theta) * b.nu - lambda,
        kappa1: b.kappa1 + b.kappa3 / 3.0 + bbm + lambda * b.alpha1,
        kappa2: b.kappa1 + b.kappa2 / 2.0 + b.kappa3 / 2.0 + bbm,
        direction,
    }
}

/// Coefficient table for the unidirectional (right-going) approximation.
///
/// The nonlinear coefficients differ from the decoupled family: they absorb
/// the slaving of the velocity to the deformation. Here `lambda` enters
/// scaled by `nu` (the change of variables is `(1 - mu*nu*lambda dxx)`),
/// unlike the decoupled family where it enters raw.
pub fn unidirectional_coeffs(p: &RegimeParams) -> ScalarCoeffs {
    let g = p.gamma;
    let d = p.delta;
    let gd = g + d;
    let crit = d * d - g;
    let pgd = (1.0 + g * d) / d; // (1 + gamma*delta)/delta
    let nu0 = pgd / (6.0 * gd);
    let tl = p.theta + p.lambda;
    ScalarCoeffs {
        beta: tl * nu0,
        alpha1: 1.5 * crit / gd,
        alpha2: 21.0 * crit * crit / (8.0 * gd * gd) - 3.0 * (d.powi(3) + g) / gd,
        alpha3: 71.0 * crit.powi(3) / (16.0 * gd.powi(3))
            - 37.0 * crit * (d.powi(3) + g) / (4.0 * gd * gd)
            + 5.0 * (d.powi(4) - g) / gd,
        nu: (1.0 - tl) * nu0,
        kappa1: (14.0 - 6.0 * tl) * crit * pgd / (24.0 * gd * gd) - (1.0 - g) / (6.0 * gd),
        kappa2: (17.0 - 12.0 * p.theta) * crit * pgd / (48.0 * gd * gd) - (1.0 - g) / (12.0 * gd),
        direction: 1.0,
    }
}

/// Coefficients pinned for the deformation-to-velocity reconstruction:
/// the unidirectional table at `theta = lambda = 0` regardless of the
/// weights used by the evolution equation. The asymmetry is deliberate.
pub fn reconstruction_coeffs(p: &RegimeParams) -> ScalarCoeffs {
    let frozen = RegimeParams { theta: 0.0, lambda: 0.0, ..*p };
    unidirectional_coeffs(&frozen)
}
