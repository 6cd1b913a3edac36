//! The generic scalar evolution equation covering inviscid Burgers, KdV/BBM,
//! extended KdV and the full higher-order model through coefficient toggles:
//!
//! ```text
//! (1 - mu*beta dxx) dt u + dir * [ dx u + eps*a1 u dx u + eps^2 a2 u^2 dx u
//!     + eps^3 a3 u^3 dx u + mu*nu dxxx u
//!     + mu*eps dx( k1 u dxx u + k2 (dx u)^2 ) ] = 0
//! ```
//!
//! The `dx u` transport term is the lab-frame advection of the decoupled
//! waves; a co-moving-frame flag drops it for unit tests. The modified-KdV
//! case is eKdV at the critical depth ratio (alpha1 = 0), not a separate
//! code path.

use crate::error::Result;
use crate::params::{RegimeParams, ScalarCoeffs};
use crate::spectral::Field;
use serde::{Deserialize, Serialize};

/// Which coefficient subset of the full equation a model keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarModelKind {
    /// Quadratic advection only.
    IB,
    /// Adds the dispersive pair (nu_x, nu_t); no higher nonlinearities.
    KdV,
    /// Adds the cubic nonlinearity.
    EKdV,
    /// The full set including quartic and kappa terms.
    CL,
}

impl ScalarModelKind {
    pub const ALL: [ScalarModelKind; 4] =
        [ScalarModelKind::IB, ScalarModelKind::KdV, ScalarModelKind::EKdV, ScalarModelKind::CL];

    /// Zero out the coefficients the model kind does not keep.
    pub fn mask(&self, full: ScalarCoeffs) -> ScalarCoeffs {
        let mut c = full;
        match self {
            ScalarModelKind::IB => {
                c.beta = 0.0;
                c.nu = 0.0;
                c.alpha2 = 0.0;
                c.alpha3 = 0.0;
                c.kappa1 = 0.0;
                c.kappa2 = 0.0;
            }
            ScalarModelKind::KdV => {
                c.alpha2 = 0.0;
                c.alpha3 = 0.0;
                c.kappa1 = 0.0;
                c.kappa2 = 0.0;
            }
            ScalarModelKind::EKdV => {
                c.alpha3 = 0.0;
                c.kappa1 = 0.0;
                c.kappa2 = 0.0;
            }
            ScalarModelKind::CL => {}
        }
        c
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScalarModelKind::IB => "ib",
            ScalarModelKind::KdV => "kdv",
            ScalarModelKind::EKdV => "ekdv",
            ScalarModelKind::CL => "cl",
        }
    }
}

/// A scalar model bound to parameters and frame choice.
#[derive(Debug, Clone)]
pub struct ScalarModel {
    pub coeffs: ScalarCoeffs,
    pub params: RegimeParams,
    /// Include the `dir * dx u` advection term (shared-grid evolution).
    pub lab_frame: bool,
    pub dealias: bool,
}

impl ScalarModel {
    pub fn new(coeffs: ScalarCoeffs, params: RegimeParams) -> Self {
        ScalarModel { coeffs, params, lab_frame: true, dealias: false }
    }

    pub fn co_moving(mut self) -> Self {
        self.lab_frame = false;
        self
    }

    /// True when the equation has no BBM smoothing while keeping a third
    /// derivative; explicit stepping then resolves stiff `mu k^3` modes.
    pub fn is_stiff(&self) -> bool {
        self.coeffs.beta == 0.0 && self.coeffs.nu != 0.0 && self.params.mu > 0.0
    }

    /// Semidiscrete right-hand side `du/dt`.
    pub fn rhs(&self, u: &Field) -> Result<Field> {
        u.ensure_finite("scalar rhs input")?;
        let c = &self.coeffs;
        let p = &self.params;
        let eps = p.epsilon;
        let ux = u.derivative(1)?;

        // dir * (transport + nonlinear advection + dispersion + kappa block)
        let mut rhs = if self.lab_frame { ux.clone() } else { u.grid().zeros() };
        let poly = u.map(|v| {
            eps * c.alpha1 * v + eps * eps * c.alpha2 * v * v + eps.powi(3) * c.alpha3 * v * v * v
        });
        rhs = rhs.add(&self.filtered(poly.mul(&ux)));
        if c.nu != 0.0 {
            rhs = rhs.axpy(1.0, &u.derivative(3)?, p.mu * c.nu);
        }
        if c.kappa1 != 0.0 || c.kappa2 != 0.0 {
            let inner = u.mul(&u.derivative(2)?).scale(c.kappa1).axpy(1.0, &ux.mul(&ux), c.kappa2);
            rhs = rhs.axpy(1.0, &self.filtered(inner.derivative(1)?), p.mu * eps);
        }
        rhs = rhs.scale(-c.direction);
        if c.beta != 0.0 {
            rhs = rhs.helmholtz_inverse(p.mu * c.beta)?;
        }
        Ok(rhs)
    }

    fn filtered(&self, f: Field) -> Field {
        if self.dealias {
            f.dealias()
        } else {
            f
        }
    }

    /// Energy diagnostic `( |u|_{H^s}^2 + mu*beta |u|_{H^{s+1}}^2 )^{1/2}`.
    pub fn energy(&self, u: &Field, s: f64) -> f64 {
        u.scaled_energy(s, self.params.mu * self.coeffs.beta)
    }

    /// Linear dispersion relation in the lab frame,
    /// `omega(k) = dir * (k - mu*nu k^3) / (1 + mu*beta k^2)`.
    pub fn omega(&self, k: f64) -> f64 {
        let p = &self.params;
        let transport = if self.lab_frame { k } else { 0.0 };
        self.coeffs.direction * (transport - p.mu * self.coeffs.nu * k.powi(3))
            / (1.0 + p.mu * self.coeffs.beta * k * k)
    }
}
