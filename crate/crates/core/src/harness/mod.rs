//! Experiment orchestration: initial data, comparison runs against the
//! Green-Naghdi reference, epsilon sweeps with convergence-rate fits, the
//! reconstruction probe, and file output.

pub mod config;
pub mod initial;
pub mod output;
pub mod pipeline;
pub mod run;
pub mod sweep;

pub use config::{
    checkpoints, DataKind, ExperimentConfig, Horizon, ModelSelect, NamedHorizon, RatioPreset,
    RegimeKind,
};
pub use initial::make_initial_data;
pub use output::{csv_to_dat, parse_sweep_csv, series_to_csv, sweep_to_csv, CSV_HEADER};
pub use run::{combined_error, run_comparison, run_comparison_at, run_ztov_probe, ErrorRecord,
    ErrorSeries, RunMeta};
pub use sweep::{convergence_rate, sweep_epsilon, RateFit, SweepRecord, SweepTable};
