//! The norm-inflation laboratory: the explicit perturbation family, the
//! two parameter regimes, per-lemma quantitative checks, and full sweeps.

pub mod experiment;
pub mod perturbation;
pub mod regime;

pub use experiment::{
    lower_bound_check, lower_bound_from_series, run_inflation, tail_and_cross_from_series,
    tail_and_cross_terms, ExperimentReport, InflationConfig, LowerBound, RunRecord, TailCross,
};
pub use perturbation::{build_perturbation, PerturbationSpec};
pub use regime::{
    check_regime, select_parameters, RegimeCase, RegimeFlags, RegimeParams,
    DEFAULT_RATIO_THRESHOLD,
};
