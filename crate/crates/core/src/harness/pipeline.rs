//! Model pipelines: each wraps one approximate model as a flat ODE system
//! producing `(zeta, vbar)` observations on the shared grid.

use crate::approx::{
    coupling_forcing, invert_lambda, reconstruct_state, reconstruct_vbar_from_zeta,
    weakly_coupled_state, CorrectorState, DecoupledState,
};
use crate::error::{Error, Result};
use crate::gn::{dispersion_omega, GnModel, GnState};
use crate::harness::config::ModelSelect;
use crate::params::{base_coeffs, decoupled_coeffs, unidirectional_coeffs, BaseCoeffs, RegimeParams};
use crate::scalar::{ScalarModel, ScalarModelKind};
use crate::spectral::{Field, Grid};
use ndarray::{s, Array1};
use std::sync::Arc;

pub trait Pipeline: Sync {
    fn label(&self) -> &'static str;
    fn init(&self) -> Array1<f64>;
    fn rhs(&self, t: f64, y: &Array1<f64>) -> Result<Array1<f64>>;
    /// Map the flat state to `(zeta, vbar)`.
    fn observe(&self, y: &Array1<f64>) -> Result<(Field, Field)>;
    /// Linear dispersion relation used by the time-step rule.
    fn omega(&self, k: f64) -> f64;
    /// Maximal characteristic speed including advective margins.
    fn char_speed(&self) -> f64;
}

fn field(grid: &Arc<Grid>, y: &Array1<f64>, part: usize, nparts: usize) -> Result<Field> {
    let n = grid.n_points();
    if y.len() != n * nparts {
        return Err(Error::GridMismatch(n * nparts, y.len()));
    }
    Field::from_values(grid, y.slice(s![part * n..(part + 1) * n]).to_owned())
}

fn pack(fields: &[&Field]) -> Array1<f64> {
    let n = fields[0].values().len();
    let mut y = Array1::zeros(n * fields.len());
    for (i, f) in fields.iter().enumerate() {
        y.slice_mut(s![i * n..(i + 1) * n]).assign(f.values());
    }
    y
}

/// Advective margin on top of the unit linear speed: `eps*|alpha1|*max|u0|`.
fn advective_margin(p: &RegimeParams, alpha1: f64, max_u0: f64) -> f64 {
    1.0 + p.epsilon * alpha1.abs() * max_u0
}

pub struct GnPipeline {
    pub model: GnModel,
    grid: Arc<Grid>,
    y0: Array1<f64>,
}

impl GnPipeline {
    pub fn new(model: GnModel, zeta0: &Field, vbar0: &Field) -> Result<Self> {
        let q0 = model.momentum_from_velocity(zeta0, vbar0)?;
        Ok(GnPipeline { model, grid: zeta0.grid().clone(), y0: pack(&[zeta0, &q0]) })
    }
}

impl Pipeline for GnPipeline {
    fn label(&self) -> &'static str {
        "gn"
    }

    fn init(&self) -> Array1<f64> {
        self.y0.clone()
    }

    fn rhs(&self, _t: f64, y: &Array1<f64>) -> Result<Array1<f64>> {
        let state = GnState {
            zeta: field(&self.grid, y, 0, 2)?,
            q: field(&self.grid, y, 1, 2)?,
        };
        let (dz, dq) = self.model.rhs(&state)?;
        Ok(pack(&[&dz, &dq]))
    }

    fn observe(&self, y: &Array1<f64>) -> Result<(Field, Field)> {
        let zeta = field(&self.grid, y, 0, 2)?;
        let q = field(&self.grid, y, 1, 2)?;
        let vbar = self.model.recover_vbar(&zeta, &q)?;
        Ok((zeta, vbar))
    }

    fn omega(&self, k: f64) -> f64 {
        dispersion_omega(k, &self.model.params)
    }

    fn char_speed(&self) -> f64 {
        // linear phase speed is strictly below 1 for the well-posed system
        1.0
    }
}

/// Two independently evolving counterpropagating waves of one scalar kind.
pub struct DecoupledPipeline {
    kind: ScalarModelKind,
    plus: ScalarModel,
    minus: ScalarModel,
    grid: Arc<Grid>,
    params: RegimeParams,
    y0: Array1<f64>,
    max_u0: f64,
}

impl DecoupledPipeline {
    pub fn new(
        kind: ScalarModelKind,
        p: &RegimeParams,
        d0: &DecoupledState,
        dealias: bool,
    ) -> Self {
        let mut plus = ScalarModel::new(kind.mask(decoupled_coeffs(p, 1.0)), *p);
        let mut minus = ScalarModel::new(kind.mask(decoupled_coeffs(p, -1.0)), *p);
        plus.dealias = dealias;
        minus.dealias = dealias;
        let max_u0 = d0.v_plus_lambda.max_abs().max(d0.v_minus_lambda.max_abs());
        DecoupledPipeline {
            kind,
            plus,
            minus,
            grid: d0.v_plus_lambda.grid().clone(),
            params: *p,
            y0: pack(&[&d0.v_plus_lambda, &d0.v_minus_lambda]),
            max_u0,
        }
    }

    fn state(&self, y: &Array1<f64>, time: f64) -> Result<DecoupledState> {
        Ok(DecoupledState {
            v_plus_lambda: field(&self.grid, y, 0, 2)?,
            v_minus_lambda: field(&self.grid, y, 1, 2)?,
            time,
        })
    }
}

impl Pipeline for DecoupledPipeline {
    fn label(&self) -> &'static str {
        self.kind.label()
    }

    fn init(&self) -> Array1<f64> {
        self.y0.clone()
    }

    fn rhs(&self, _t: f64, y: &Array1<f64>) -> Result<Array1<f64>> {
        let d = self.state(y, 0.0)?;
        let dp = self.plus.rhs(&d.v_plus_lambda)?;
        let dm = self.minus.rhs(&d.v_minus_lambda)?;
        Ok(pack(&[&dp, &dm]))
    }

    fn observe(&self, y: &Array1<f64>) -> Result<(Field, Field)> {
        reconstruct_state(&self.state(y, 0.0)?, &self.params)
    }

    fn omega(&self, k: f64) -> f64 {
        self.plus.omega(k).abs().max(self.minus.omega(k).abs())
    }

    fn char_speed(&self) -> f64 {
        advective_margin(&self.params, self.plus.coeffs.alpha1, self.max_u0)
    }
}

/// Decoupled full-model waves plus the corrector transport pair; the state
/// is `[v_+^lambda, v_-^lambda, w_+, w_-]`.
pub struct WeaklyCoupledPipeline {
    inner: DecoupledPipeline,
    base: BaseCoeffs,
    y0: Array1<f64>,
}

impl WeaklyCoupledPipeline {
    pub fn new(p: &RegimeParams, d0: &DecoupledState, dealias: bool) -> Self {
        let inner = DecoupledPipeline::new(ScalarModelKind::CL, p, d0, dealias);
        let zeros = d0.v_plus_lambda.grid().zeros();
        let y0 = pack(&[&d0.v_plus_lambda, &d0.v_minus_lambda, &zeros, &zeros]);
        WeaklyCoupledPipeline { inner, base: base_coeffs(p), y0 }
    }

    fn split(&self, y: &Array1<f64>) -> Result<(DecoupledState, CorrectorState)> {
        let g = &self.inner.grid;
        Ok((
            DecoupledState {
                v_plus_lambda: field(g, y, 0, 4)?,
                v_minus_lambda: field(g, y, 1, 4)?,
                time: 0.0,
            },
            CorrectorState { w_plus: field(g, y, 2, 4)?, w_minus: field(g, y, 3, 4)?, time: 0.0 },
        ))
    }
}

impl Pipeline for WeaklyCoupledPipeline {
    fn label(&self) -> &'static str {
        "weakly-coupled"
    }

    fn init(&self) -> Array1<f64> {
        self.y0.clone()
    }

    fn rhs(&self, _t: f64, y: &Array1<f64>) -> Result<Array1<f64>> {
        let (d, c) = self.split(y)?;
        let dp = self.inner.plus.rhs(&d.v_plus_lambda)?;
        let dm = self.inner.minus.rhs(&d.v_minus_lambda)?;
        // forcing acts on the physical (inverted) waves
        let (v_plus, v_minus) = invert_lambda(&d, &self.inner.params)?;
        let (f_plus, f_minus) = coupling_forcing(&v_plus, &v_minus, &self.inner.params, &self.base)?;
        let dw_plus = c.w_plus.derivative(1)?.scale(-1.0).add(&f_plus);
        let dw_minus = c.w_minus.derivative(1)?.add(&f_minus);
        Ok(pack(&[&dp, &dm, &dw_plus, &dw_minus]))
    }

    fn observe(&self, y: &Array1<f64>) -> Result<(Field, Field)> {
        let (d, c) = self.split(y)?;
        weakly_coupled_state(&d, &c, &self.inner.params)
    }

    fn omega(&self, k: f64) -> f64 {
        // corrector transport contributes |k|
        self.inner.omega(k).max(k.abs())
    }

    fn char_speed(&self) -> f64 {
        self.inner.char_speed()
    }
}

/// Single scalar equation for the deformation; velocity slaved by the
/// reconstruction formula.
pub struct UnidirectionalPipeline {
    model: ScalarModel,
    grid: Arc<Grid>,
    params: RegimeParams,
    y0: Array1<f64>,
    max_u0: f64,
}

impl UnidirectionalPipeline {
    pub fn new(p: &RegimeParams, zeta0: &Field, dealias: bool) -> Self {
        let mut model = ScalarModel::new(unidirectional_coeffs(p), *p);
        model.dealias = dealias;
        UnidirectionalPipeline {
            model,
            grid: zeta0.grid().clone(),
            params: *p,
            y0: zeta0.values().clone(),
            max_u0: zeta0.max_abs(),
        }
    }
}

impl Pipeline for UnidirectionalPipeline {
    fn label(&self) -> &'static str {
        "unidirectional"
    }

    fn init(&self) -> Array1<f64> {
        self.y0.clone()
    }

    fn rhs(&self, _t: f64, y: &Array1<f64>) -> Result<Array1<f64>> {
        let zeta = field(&self.grid, y, 0, 1)?;
        Ok(self.model.rhs(&zeta)?.into_values())
    }

    fn observe(&self, y: &Array1<f64>) -> Result<(Field, Field)> {
        let zeta = field(&self.grid, y, 0, 1)?;
        let vbar = reconstruct_vbar_from_zeta(&zeta, &self.params)?;
        Ok((zeta, vbar))
    }

    fn omega(&self, k: f64) -> f64 {
        self.model.omega(k)
    }

    fn char_speed(&self) -> f64 {
        advective_margin(&self.params, self.model.coeffs.alpha1, self.max_u0)
    }
}

/// Build the pipeline for one selected model (not `gn`, which the runner
/// keeps as the reference).
pub fn build_pipeline(
    select: ModelSelect,
    p: &RegimeParams,
    zeta0: &Field,
    vbar0: &Field,
    dealias: bool,
) -> Result<Box<dyn Pipeline>> {
    let d0 = crate::approx::split_initial(zeta0, vbar0, p)?;
    Ok(match select {
        ModelSelect::Gn => {
            let mut model = GnModel::new(*p);
            model.dealias = dealias;
            Box::new(GnPipeline::new(model, zeta0, vbar0)?)
        }
        ModelSelect::Ib => Box::new(DecoupledPipeline::new(ScalarModelKind::IB, p, &d0, dealias)),
        ModelSelect::Kdv => Box::new(DecoupledPipeline::new(ScalarModelKind::KdV, p, &d0, dealias)),
        ModelSelect::Ekdv => {
            Box::new(DecoupledPipeline::new(ScalarModelKind::EKdV, p, &d0, dealias))
        }
        ModelSelect::Cl => Box::new(DecoupledPipeline::new(ScalarModelKind::CL, p, &d0, dealias)),
        ModelSelect::WeaklyCoupled => Box::new(WeaklyCoupledPipeline::new(p, &d0, dealias)),
        ModelSelect::Unidirectional => {
            Box::new(UnidirectionalPipeline::new(p, zeta0, dealias))
        }
    })
}
