//! Epsilon sweeps and convergence-rate fitting.

use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, ModelSelect};
use crate::harness::output::fnv64;
use crate::harness::run::run_comparison_at;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Checkpoint error of one model at one epsilon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub model: String,
    pub tag: String,
    /// Realized checkpoint time (on the step lattice).
    pub time: f64,
    pub error_l2: f64,
    pub error_h1: f64,
}

/// Least-squares slope of `log error` against `log epsilon`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFit {
    pub model: String,
    pub tag: String,
    pub slope: f64,
    pub stderr: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRecord>,
    pub slopes: Vec<RateFit>,
    /// Per-run failures `(epsilon, message)`; not fatal to the sweep.
    pub failures: Vec<(f64, String)>,
    pub config_hash: String,
}

impl SweepTable {
    pub fn errors_at(&self, model: &str, tag: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.model == model && r.tag == tag)
            .map(|r| (r.epsilon, r.error_l2))
            .collect()
    }

    pub fn slope_of(&self, model: &str, tag: &str) -> Option<&RateFit> {
        self.slopes.iter().find(|s| s.model == model && s.tag == tag)
    }
}

/// Ordinary least squares of `log e` on `log eps`; returns `(slope, stderr)`.
/// Two points give the exact two-point slope with zero reported stderr.
pub fn convergence_rate(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs >= 2 points, got {}",
            points.len()
        )));
    }
    for &(eps, err) in points {
        if !(eps > 0.0 && err > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rate fit needs positive values, got ({eps}, {err})"
            )));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("rate fit needs distinct epsilons".into()));
    }
    let slope = sxy / sxx;
    let stderr = if points.len() > 2 {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let fit = ybar + slope * (x - xbar);
                (y - fit).powi(2)
            })
            .sum();
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((slope, stderr))
}

/// Independent run per epsilon (grid and mu resized by the regime rule),
/// checkpoint errors collected and slopes fitted per (model, tag).
pub fn sweep_epsilon(cfg: &ExperimentConfig) -> Result<SweepTable> {
    cfg.validate()?;
    if cfg.sweep.epsilons.len() < 3 {
        return Err(Error::Config(format!(
            "sweep needs >= 3 epsilons, got {}",
            cfg.sweep.epsilons.len()
        )));
    }
    let runs: Vec<(f64, Result<crate::harness::run::ErrorSeries>)> = cfg
        .sweep
        .epsilons
        .par_iter()
        .map(|&eps| (eps, run_comparison_at(cfg, eps)))
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (eps, run) in runs {
        match run {
            Ok(series) => {
                for row in &series.rows {
                    for tag in row.tag.split(';').filter(|t| !t.is_empty()) {
                        rows.push(SweepRecord {
                            epsilon: eps,
                            model: row.model.clone(),
                            tag: tag.to_string(),
                            time: row.time,
                            error_l2: row.error_l2,
                            error_h1: row.error_h1,
                        });
                    }
                }
            }
            Err(e) => failures.push((eps, e.to_string())),
        }
    }

    let mut selected: Vec<ModelSelect> = cfg.models.include.clone();
    selected.sort();
    selected.dedup();
    let mut slopes = Vec::new();
    for model in selected.iter().map(|m| m.label()) {
        for tag in ["t10", "inv-eps", "eps-3/2"] {
            let pick = |s: u8| -> Vec<(f64, f64)> {
                rows.iter()
                    .filter(|r| r.model == model && r.tag == tag)
                    .map(|r| (r.epsilon, if s == 0 { r.error_l2 } else { r.error_h1 }))
                    .filter(|&(_, e)| e > 0.0)
                    .collect()
            };
            let pts = pick(cfg.error.sobolev_index);
            if pts.len() >= 2 {
                if let Ok((slope, stderr)) = convergence_rate(&pts) {
                    slopes.push(RateFit {
                        model: model.to_string(),
                        tag: tag.to_string(),
                        slope,
                        stderr,
                        points: pts.len(),
                    });
                }
            }
        }
    }
    Ok(SweepTable {
        rows,
        slopes,
        failures,
        config_hash: format!("{:016x}", fnv64(cfg.to_toml().as_bytes())),
    })
}
