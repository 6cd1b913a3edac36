//! The coupled Green-Naghdi reference system for `(zeta, vbar)`:
//!
//! ```text
//! dt zeta + dx( h1 h2 vbar / (h1 + gamma h2) ) = 0
//! dt( vbar + mu Qbar[h1,h2] vbar ) + (gamma+delta) dx zeta
//!     + (eps/2) dx( (h1^2 - gamma h2^2)/(h1+gamma h2)^2 vbar^2 )
//!     = mu eps dx( Rbar[h1,h2] vbar )
//! ```
//!
//! with `h1 = 1 - eps zeta`, `h2 = 1/delta + eps zeta`. The evolved momentum
//! variable is `q = vbar + mu Qbar vbar`, which makes the time derivative of
//! the nonlinear operator literal; `vbar` is recovered per right-hand-side
//! evaluation by a preconditioned conjugate-gradient solve.

use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::spectral::{Field, Grid};
use ndarray::Array1;
use std::sync::Arc;

/// Pointwise depth floor; falling below it aborts the run.
pub const H_MIN: f64 = 1e-6;

/// Defaults for the elliptic velocity recovery.
pub const ELLIPTIC_TOL: f64 = 1e-12;
pub const ELLIPTIC_MAX_ITER: usize = 500;

/// Interface deformation and evolved momentum `q = vbar + mu Qbar vbar`.
#[derive(Debug, Clone)]
pub struct GnState {
    pub zeta: Field,
    pub q: Field,
}

impl GnState {
    pub fn new(zeta: Field, q: Field) -> Result<Self> {
        zeta.same_grid(&q)?;
        Ok(GnState { zeta, q })
    }
}

/// Layer depths `h1 = 1 - eps zeta`, `h2 = 1/delta + eps zeta`, checked
/// against the positivity floor.
pub fn depths(zeta: &Field, p: &RegimeParams) -> Result<(Field, Field)> {
    let h1 = zeta.map(|z| 1.0 - p.epsilon * z);
    let h2 = zeta.map(|z| 1.0 / p.delta + p.epsilon * z);
    let min = h1.values().iter().chain(h2.values().iter()).fold(f64::INFINITY, |a, &v| a.min(v));
    if !(min >= H_MIN) {
        return Err(Error::DepthViolation { min_depth: min });
    }
    Ok((h1, h2))
}

/// `Qbar[h1,h2] V`, the dispersive operator of the momentum equation.
pub fn qbar_apply(h1: &Field, h2: &Field, v: &Field, p: &RegimeParams) -> Result<Field> {
    let s = h1.axpy(1.0, h2, p.gamma); // h1 + gamma h2
    let t1 = h1.mul(v).div(&s);
    let a = h2.map(|h| h.powi(3)).mul(&t1.derivative(1)?).derivative(1)?;
    let t2 = h2.mul(v).div(&s);
    let b = h1.map(|h| h.powi(3)).mul(&t2.derivative(1)?).derivative(1)?;
    let num = h1.mul(&a).axpy(1.0, &h2.mul(&b), p.gamma);
    Ok(num.div(&h1.mul(h2)).scale(-1.0 / 3.0))
}

/// `Rbar[h1,h2] V`, the quadratic dispersive operator.
pub fn rbar_apply(h1: &Field, h2: &Field, v: &Field, p: &RegimeParams) -> Result<Field> {
    let s = h1.axpy(1.0, h2, p.gamma);
    let t1 = h1.mul(v).div(&s);
    let t2 = h2.mul(v).div(&s);
    let u1 = h2.mul(&t1.derivative(1)?);
    let u2 = h1.mul(&t2.derivative(1)?);
    let quad = u1.mul(&u1).axpy(0.5, &u2.mul(&u2), -0.5 * p.gamma);

    let a = h2.map(|h| h.powi(3)).mul(&t1.derivative(1)?).derivative(1)?;
    let b = h1.map(|h| h.powi(3)).mul(&t2.derivative(1)?).derivative(1)?;
    let bracket = h1.div(h2).mul(&a).axpy(1.0, &h2.div(h1).mul(&b), -p.gamma);
    let part2 = v.div(&s).mul(&bracket).scale(1.0 / 3.0);
    Ok(quad.add(&part2))
}

/// Constant-coefficient symbol of `mu Qbar` at `zeta = 0`:
/// `mu (1+gamma*delta)/(3*delta*(gamma+delta)) k^2`.
pub fn flat_symbol_coeff(p: &RegimeParams) -> f64 {
    (1.0 + p.gamma * p.delta) / (3.0 * p.delta * (p.gamma + p.delta))
}

/// Positive branch of the dispersion relation of the (well-posed)
/// layer-mean-velocity system: `omega = k / sqrt(1 + mu C0 k^2)`.
pub fn dispersion_omega(k: f64, p: &RegimeParams) -> f64 {
    k / (1.0 + p.mu * flat_symbol_coeff(p) * k * k).sqrt()
}

/// Linear mode analysis of the shear-velocity formulation,
/// `omega^2 = k^2 - mu C0 k^4`: real frequency below the instability
/// threshold, unstable above it. That system is never time-stepped here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShearMode {
    Real(f64),
    Unstable { growth_rate: f64 },
}

pub fn shear_system_stability(k: f64, p: &RegimeParams) -> ShearMode {
    let c = p.mu * flat_symbol_coeff(p) * k * k;
    let disc = k * k * (1.0 - c);
    if disc >= 0.0 {
        ShearMode::Real(disc.sqrt())
    } else {
        ShearMode::Unstable { growth_rate: (-disc).sqrt() }
    }
}

/// Wavenumber above which the shear-velocity system is linearly ill-posed.
pub fn shear_instability_threshold(p: &RegimeParams) -> f64 {
    let c = p.mu * flat_symbol_coeff(p);
    if c > 0.0 {
        (1.0 / c).sqrt()
    } else {
        f64::INFINITY
    }
}

/// The Green-Naghdi model on a fixed grid.
#[derive(Debug, Clone)]
pub struct GnModel {
    pub params: RegimeParams,
    pub elliptic_tol: f64,
    pub elliptic_max_iter: usize,
    pub dealias: bool,
}

impl GnModel {
    pub fn new(params: RegimeParams) -> Self {
        GnModel {
            params,
            elliptic_tol: ELLIPTIC_TOL,
            elliptic_max_iter: ELLIPTIC_MAX_ITER,
            dealias: false,
        }
    }

    /// Momentum variable from a velocity: `q = (I + mu Qbar) vbar`.
    pub fn momentum_from_velocity(&self, zeta: &Field, vbar: &Field) -> Result<Field> {
        let (h1, h2) = depths(zeta, &self.params)?;
        Ok(vbar.add(&qbar_apply(&h1, &h2, vbar, &self.params)?.scale(self.params.mu)))
    }

    /// Solve `(I + mu Qbar[h1,h2]) vbar = q` for `vbar`.
    ///
    /// `m (I + mu Qbar)` with `m = h1 h2/(h1+gamma h2)` is symmetric positive
    /// definite (the spectral derivative is exactly antisymmetric), so we run
    /// conjugate gradients on that form, preconditioned by the exact inverse
    /// of the flat-interface symbol. The preconditioner is exact at eps = 0,
    /// which keeps iteration counts small.
    pub fn recover_vbar(&self, zeta: &Field, q: &Field) -> Result<Field> {
        let p = &self.params;
        if p.mu == 0.0 {
            return Ok(q.clone());
        }
        let (h1, h2) = depths(zeta, p)?;
        let s = h1.axpy(1.0, &h2, p.gamma);
        let m = h1.mul(&h2).div(&s);
        let apply_b = |v: &Field| -> Result<Field> {
            let av = v.add(&qbar_apply(&h1, &h2, v, p)?.scale(p.mu));
            Ok(m.mul(&av))
        };
        let c0 = p.mu * flat_symbol_coeff(p);
        let gd = p.gamma + p.delta;
        let precond = |r: &Field| r.multiplier(|k| gd / (1.0 + c0 * k * k));

        let rhs = m.mul(q);
        let q_norm = q.sobolev_norm(0.0);
        if q_norm == 0.0 {
            return Ok(q.grid().zeros());
        }

        let mut v = precond(&rhs);
        let mut r = rhs.sub(&apply_b(&v)?);
        // true residual of the original equation: (I + mu Qbar) v - q = -r/m
        let res_norm = |r: &Field| r.div(&m).sobolev_norm(0.0) / q_norm;
        let mut res = res_norm(&r);
        if res <= self.elliptic_tol {
            return Ok(v);
        }
        let inner = |a: &Field, b: &Field| -> f64 {
            a.values().iter().zip(b.values().iter()).map(|(x, y)| x * y).sum()
        };
        let mut z = precond(&r);
        let mut rho = inner(&r, &z);
        let mut dir = z.clone();
        for it in 0..self.elliptic_max_iter {
            let bd = apply_b(&dir)?;
            let alpha = rho / inner(&dir, &bd);
            v = v.axpy(1.0, &dir, alpha);
            r = r.axpy(1.0, &bd, -alpha);
            res = res_norm(&r);
            if res <= self.elliptic_tol {
                return Ok(v);
            }
            z = precond(&r);
            let rho_new = inner(&r, &z);
            dir = z.axpy(1.0, &dir, rho_new / rho);
            rho = rho_new;
            if it + 1 == self.elliptic_max_iter {
                break;
            }
        }
        Err(Error::EllipticNonConvergence { residual: res, iterations: self.elliptic_max_iter })
    }

    /// Semidiscrete right-hand side `(dt zeta, dt q)`.
    pub fn rhs(&self, state: &GnState) -> Result<(Field, Field)> {
        state.zeta.ensure_finite("gn zeta")?;
        state.q.ensure_finite("gn q")?;
        let p = &self.params;
        let (h1, h2) = depths(&state.zeta, p)?;
        let s = h1.axpy(1.0, &h2, p.gamma);
        let vbar = self.recover_vbar(&state.zeta, &state.q)?;

        let flux = h1.mul(&h2).mul(&vbar).div(&s);
        let dzeta = self.filtered(flux.derivative(1)?).scale(-1.0);

        let w = h1.mul(&h1).axpy(1.0, &h2.mul(&h2), -p.gamma).div(&s.mul(&s)).mul(&vbar).mul(&vbar);
        let rb = rbar_apply(&h1, &h2, &vbar, p)?;
        let dq = state
            .zeta
            .derivative(1)?
            .scale(-(p.gamma + p.delta))
            .axpy(1.0, &self.filtered(w.derivative(1)?), -0.5 * p.epsilon)
            .axpy(1.0, &self.filtered(rb.derivative(1)?), p.mu * p.epsilon);
        Ok((dzeta, dq))
    }

    fn filtered(&self, f: Field) -> Field {
        if self.dealias {
            f.dealias()
        } else {
            f
        }
    }

    /// Flattened state for the shared integrator: `[zeta; q]`.
    pub fn pack(state: &GnState) -> Array1<f64> {
        let n = state.zeta.values().len();
        let mut y = Array1::zeros(2 * n);
        y.slice_mut(ndarray::s![..n]).assign(state.zeta.values());
        y.slice_mut(ndarray::s![n..]).assign(state.q.values());
        y
    }

    pub fn unpack(grid: &Arc<Grid>, y: &Array1<f64>) -> Result<GnState> {
        let n = grid.n_points();
        if y.len() != 2 * n {
            return Err(Error::GridMismatch(2 * n, y.len()));
        }
        let zeta = Field::from_values(grid, y.slice(ndarray::s![..n]).to_owned())?;
        let q = Field::from_values(grid, y.slice(ndarray::s![n..]).to_owned())?;
        Ok(GnState { zeta, q })
    }
}
