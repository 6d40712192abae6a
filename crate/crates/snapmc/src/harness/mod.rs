//! Scenario configuration, replication orchestration, summary statistics,
//! and figure emission.

mod config;
mod study;
mod svg;

pub use config::{
    synthetic_covariates, IntensitySpec, MeanSpec, PartitionSpec, ScenarioConfig,
};
pub use study::{
    delta_sweep, quantiles, red_bandwidth_search, run_scenario, simulate_poisson_reference,
    DeltaSweepRow, DeltaSweepTable, StudyOutput, StudySummary, SummaryGroup, QUANTILE_PROBS,
};
pub use svg::{plot_delta_bands, plot_k_curves, plot_summary_bars, PlotParam};
