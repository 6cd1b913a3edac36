//! One comparison run: every selected model evolved from shared initial
//! data on a shared grid with a shared step, errors recorded against the
//! Green-Naghdi reference at each sample time.

use crate::approx::{ztov_residual, HalfLine};
use crate::error::{Error, Result};
use crate::gn::GnModel;
use crate::harness::config::{checkpoints, ExperimentConfig, ModelSelect};
use crate::harness::initial::make_initial_data;
use crate::harness::output::fnv64;
use crate::harness::pipeline::{build_pipeline, GnPipeline, Pipeline};
use crate::params::RegimeParams;
use crate::spectral::{Field, Grid};
use crate::timeint::{pick_dt, Stepper};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// One sampled error value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub time: f64,
    pub model: String,
    pub error_l2: f64,
    pub error_h1: f64,
    /// Checkpoint tag ("t10", "inv-eps", "eps-3/2") when the sample realizes
    /// one, empty otherwise.
    pub tag: String,
}

/// Environment of one run, stored next to the data for provenance. Contains
/// only stable facts so reruns are byte-identical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub epsilon: f64,
    pub mu: f64,
    pub gamma: f64,
    pub delta: f64,
    pub theta: f64,
    pub lambda: f64,
    pub dt: f64,
    pub n_points: usize,
    pub length: f64,
    pub t_end: f64,
    pub config_hash: String,
    /// Checkpoint tags with their realized (step-lattice) times.
    pub realized_checkpoints: Vec<(String, f64)>,
    /// Models that blew up, with the blow-up time. Blow-up of a scalar
    /// model is recorded, not fatal.
    pub blowups: Vec<(String, f64)>,
}

/// Time-indexed error records for one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub rows: Vec<ErrorRecord>,
    pub meta: RunMeta,
}

impl ErrorSeries {
    /// Rows of one model, in time order.
    pub fn model_rows(&self, label: &str) -> Vec<&ErrorRecord> {
        self.rows.iter().filter(|r| r.model == label).collect()
    }

    /// Error of one model at a tagged checkpoint. Coinciding checkpoints
    /// share one row whose tag column joins their names with ';'.
    pub fn at_checkpoint(&self, label: &str, tag: &str) -> Option<&ErrorRecord> {
        self.rows
            .iter()
            .find(|r| r.model == label && r.tag.split(';').any(|t| t == tag))
    }
}

/// Combined state error
/// `( |dzeta|_{H^s}^2 + |dvbar|_{H^s}^2 / (gamma+delta)^2 )^{1/2}`.
pub fn combined_error(
    reference: (&Field, &Field),
    approx: (&Field, &Field),
    s_err: f64,
    p: &RegimeParams,
) -> Result<f64> {
    reference.0.same_grid(approx.0)?;
    reference.1.same_grid(approx.1)?;
    let dz = approx.0.sub(reference.0).sobolev_norm(s_err);
    let dv = approx.1.sub(reference.1).sobolev_norm(s_err) / (p.gamma + p.delta);
    Ok((dz * dz + dv * dv).sqrt())
}

/// Sample schedule on the integer step lattice.
pub(crate) struct Schedule {
    pub dt: f64,
    pub t_end: f64,
    /// `(step, tags)` in increasing step order.
    pub points: Vec<(u64, Vec<&'static str>)>,
}

pub(crate) fn build_schedule(
    dt: f64,
    t_end_nominal: f64,
    samples: usize,
    cps: &[(&'static str, f64)],
) -> Schedule {
    let n_total = ((t_end_nominal / dt).round() as u64).max(1);
    let stride = (n_total / samples as u64).max(1);
    let mut map: std::collections::BTreeMap<u64, Vec<&'static str>> = Default::default();
    let mut k = 0;
    while k < n_total {
        map.entry(k).or_default();
        k += stride;
    }
    map.entry(n_total).or_default();
    for (tag, t) in cps {
        let step = ((t / dt).round() as u64).min(n_total);
        map.entry(step).or_default().push(tag);
    }
    Schedule {
        dt,
        t_end: n_total as f64 * dt,
        points: map.into_iter().collect(),
    }
}

/// Shared time step for a set of pipelines: the minimum of the per-model
/// rule so every model can run on one sample lattice.
fn shared_dt(
    grid: &Arc<Grid>,
    cfg: &ExperimentConfig,
    pipelines: &[Box<dyn Pipeline>],
) -> f64 {
    pipelines
        .iter()
        .map(|p| pick_dt(grid, cfg.time.method, cfg.time.cfl, p.char_speed(), |k| p.omega(k)))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) struct RunSetup {
    pub params: RegimeParams,
    pub grid: Arc<Grid>,
    pub zeta0: Field,
    pub vbar0: Field,
    pub t_end_nominal: f64,
}

pub(crate) fn prepare(cfg: &ExperimentConfig, epsilon: f64) -> Result<RunSetup> {
    let params = cfg.params_for(epsilon)?;
    let t_end_nominal = cfg.time.horizon.t_end(epsilon);
    // counterpropagating waves must never wrap into each other
    let min_length = 2.0 * t_end_nominal + 2.0 * cfg.data.kind.support_halfwidth() + 40.0;
    let grid = Grid::with_spacing(cfg.grid.dx, min_length)?;
    let (zeta0, vbar0) = make_initial_data(cfg.data.kind, &grid, &params)?;
    Ok(RunSetup { params, grid, zeta0, vbar0, t_end_nominal })
}

/// Evolve every selected model from the shared initial data and record the
/// combined error against the Green-Naghdi reference at each sample time.
/// Blow-up of a scalar pipeline is recorded per model; blow-up of the
/// reference aborts.
pub fn run_comparison(cfg: &ExperimentConfig) -> Result<ErrorSeries> {
    run_comparison_at(cfg, cfg.regime.epsilon)
}

pub fn run_comparison_at(cfg: &ExperimentConfig, epsilon: f64) -> Result<ErrorSeries> {
    cfg.validate()?;
    let setup = prepare(cfg, epsilon)?;
    let p = &setup.params;

    let mut model = GnModel::new(*p);
    model.dealias = cfg.grid.dealias;
    let reference = GnPipeline::new(model, &setup.zeta0, &setup.vbar0)?;

    let mut selected: Vec<ModelSelect> = cfg.models.include.clone();
    selected.sort();
    selected.dedup();
    let mut pipelines: Vec<Box<dyn Pipeline>> = Vec::new();
    let mut emit_reference_rows = false;
    for &m in &selected {
        if m == ModelSelect::Gn {
            emit_reference_rows = true;
        } else {
            pipelines.push(build_pipeline(m, p, &setup.zeta0, &setup.vbar0, cfg.grid.dealias)?);
        }
    }

    let dt = {
        let mut dt = pick_dt(&setup.grid, cfg.time.method, cfg.time.cfl, reference.char_speed(), |k| {
            reference.omega(k)
        });
        if !pipelines.is_empty() {
            dt = dt.min(shared_dt(&setup.grid, cfg, &pipelines));
        }
        dt
    };
    let cps = checkpoints(epsilon, setup.t_end_nominal);
    let schedule = build_schedule(dt, setup.t_end_nominal, cfg.time.samples, &cps);

    let mut ref_stepper = Stepper::new(
        |t, y| reference.rhs(t, y),
        reference.init(),
        cfg.time.method,
        dt,
        cfg.time.blowup_threshold,
    );
    struct Lane<'a> {
        pipeline: &'a dyn Pipeline,
        stepper: Stepper<'a>,
        blown: Option<f64>,
    }
    let mut lanes: Vec<Lane> = pipelines
        .iter()
        .map(|pl| Lane {
            pipeline: pl.as_ref(),
            stepper: Stepper::new(
                |t, y| pl.rhs(t, y),
                pl.init(),
                cfg.time.method,
                dt,
                cfg.time.blowup_threshold,
            ),
            blown: None,
        })
        .collect();

    let mut rows = Vec::new();
    for (step, tags) in &schedule.points {
        ref_stepper.advance(step - ref_stepper.step_index())?;
        let (ref_zeta, ref_vbar) = reference.observe(ref_stepper.state())?;
        let time = ref_stepper.time();
        let tag = tags.join(";");
        if emit_reference_rows {
            rows.push(ErrorRecord {
                time,
                model: "gn".into(),
                error_l2: 0.0,
                error_h1: 0.0,
                tag: tag.clone(),
            });
        }
        for lane in &mut lanes {
            if lane.blown.is_some() {
                continue;
            }
            match lane.stepper.advance(step - lane.stepper.step_index()) {
                Ok(()) => {
                    let (zeta, vbar) = lane.pipeline.observe(lane.stepper.state())?;
                    let e0 = combined_error((&ref_zeta, &ref_vbar), (&zeta, &vbar), 0.0, p)?;
                    let e1 = combined_error((&ref_zeta, &ref_vbar), (&zeta, &vbar), 1.0, p)?;
                    rows.push(ErrorRecord {
                        time,
                        model: lane.pipeline.label().into(),
                        error_l2: e0,
                        error_h1: e1,
                        tag: tag.clone(),
                    });
                }
                Err(Error::BlowUp { time: t_blow, .. }) => {
                    lane.blown = Some(t_blow);
                }
                Err(e) => return Err(e),
            }
        }
    }

    let meta = RunMeta {
        epsilon,
        mu: p.mu,
        gamma: p.gamma,
        delta: p.delta,
        theta: p.theta,
        lambda: p.lambda,
        dt: schedule.dt,
        n_points: setup.grid.n_points(),
        length: setup.grid.length(),
        t_end: schedule.t_end,
        config_hash: format!("{:016x}", fnv64(cfg.to_toml().as_bytes())),
        realized_checkpoints: cps
            .iter()
            .map(|(tag, t)| {
                let step = ((t / dt).round() as u64).min((schedule.t_end / dt).round() as u64);
                (tag.to_string(), step as f64 * dt)
            })
            .collect(),
        blowups: lanes
            .iter()
            .filter_map(|l| l.blown.map(|t| (l.pipeline.label().to_string(), t)))
            .collect(),
    };
    // stable row order: by model label, then time
    rows.sort_by(|a, b| a.model.cmp(&b.model).then(a.time.total_cmp(&b.time)));
    Ok(ErrorSeries { rows, meta })
}

/// Green-Naghdi run probing how well the velocity on the chosen half-line is
/// explained by the deformation-slaved reconstruction; the residual series
/// is reported under the model name "ztov" (L2 and H1 indices).
pub fn run_ztov_probe(cfg: &ExperimentConfig) -> Result<ErrorSeries> {
    cfg.validate()?;
    let epsilon = cfg.regime.epsilon;
    let setup = prepare(cfg, epsilon)?;
    let p = &setup.params;
    let mut model = GnModel::new(*p);
    model.dealias = cfg.grid.dealias;
    let reference = GnPipeline::new(model, &setup.zeta0, &setup.vbar0)?;
    let dt = pick_dt(&setup.grid, cfg.time.method, cfg.time.cfl, reference.char_speed(), |k| {
        reference.omega(k)
    });
    let cps = checkpoints(epsilon, setup.t_end_nominal);
    let schedule = build_schedule(dt, setup.t_end_nominal, cfg.time.samples, &cps);

    let mut stepper = Stepper::new(
        |t, y| reference.rhs(t, y),
        reference.init(),
        cfg.time.method,
        dt,
        cfg.time.blowup_threshold,
    );
    let mut rows = Vec::new();
    for (step, tags) in &schedule.points {
        stepper.advance(step - stepper.step_index())?;
        let (zeta, vbar) = reference.observe(stepper.state())?;
        let r0 = ztov_residual(&zeta, &vbar, HalfLine::Right, p, 0.0)?;
        let r1 = ztov_residual(&zeta, &vbar, HalfLine::Right, p, 1.0)?;
        rows.push(ErrorRecord {
            time: stepper.time(),
            model: "ztov".into(),
            error_l2: r0,
            error_h1: r1,
            tag: tags.join(";"),
        });
    }
    let meta = RunMeta {
        epsilon,
        mu: p.mu,
        gamma: p.gamma,
        delta: p.delta,
        theta: p.theta,
        lambda: p.lambda,
        dt,
        n_points: setup.grid.n_points(),
        length: setup.grid.length(),
        t_end: schedule.t_end,
        config_hash: format!("{:016x}", fnv64(cfg.to_toml().as_bytes())),
        realized_checkpoints: cps
            .iter()
            .map(|(tag, t)| (tag.to_string(), (t / dt).round() * dt))
            .collect(),
        blowups: Vec::new(),
    };
    Ok(ErrorSeries { rows, meta })
}
