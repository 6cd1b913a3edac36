//! Pseudospectral solvers and a benchmark harness for one-dimensional
//! internal waves in a two-layer fluid with a rigid lid.
//!
//! The reference model is a coupled Green-Naghdi system for the interface
//! deformation and the shear layer-mean velocity. Around it, the crate
//! builds the classical family of scalar asymptotic models (inviscid
//! Burgers, KdV/BBM, extended KdV, and a higher-order equation with
//! Camassa-Holm-type terms), the decoupled / weakly-coupled / unidirectional
//! approximate solutions assembled from them, and a harness that measures
//! model errors and convergence rates across asymptotic regimes.
//!
//! Layout:
//! - [`params`]: dimensionless regime parameters and the closed-form
//!   coefficient tables of every model.
//! - [`spectral`]: periodic grid, trigonometric differentiation,
//!   Fourier-multiplier inverses, Sobolev-type norms.
//! - [`gn`]: the Green-Naghdi right-hand side, its nonlinear operators,
//!   elliptic velocity recovery, and linear dispersion analysis.
//! - [`scalar`]: the generic scalar evolution equation and its energy.
//! - [`approx`]: decoupled decomposition, coupling corrector, weakly
//!   coupled sum, and the unidirectional approximation.
//! - [`timeint`]: fixed-step ABM4 predictor-corrector and RK4.
//! - [`harness`]: experiment orchestration, error series, epsilon sweeps,
//!   rate fitting, and file output.

pub mod approx;
pub mod error;
pub mod gn;
pub mod harness;
pub mod params;
pub mod scalar;
pub mod spectral;
pub mod timeint;

pub use error::{Error, Result};
pub use gn::{GnModel, GnState};
pub use harness::{
    ErrorSeries, ExperimentConfig, SweepTable, combined_error, convergence_rate,
    make_initial_data, run_comparison, run_ztov_probe, sweep_epsilon,
};
pub use params::{BaseCoeffs, RegimeParams, ScalarCoeffs};
pub use scalar::{ScalarModel, ScalarModelKind};
pub use spectral::{Field, Grid};
pub use timeint::{IntegratorConfig, Method};
