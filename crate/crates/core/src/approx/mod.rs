//! Boolean functions of a near-magic state and their low-degree structure.
//!
//! A function `ψ` close to a magic target defines `f_ψ(x) = 1` when
//! `|ψ(x)|` falls below a layer threshold. For the target itself this is a
//! threshold function; the modules here measure how far a perturbed `f_ψ`
//! is from that, restrict it to a majority on `m` coordinates, and build a
//! low-degree polynomial agreeing with the restriction.

mod binomial;
mod boolean;
mod params;
mod pipeline;
mod poly;
mod psi;
mod report;
mod restriction;
mod rs;
pub mod ser;

pub use binomial::{
    binomial_layer_mass, binomial_ratio_check, central_mass_check, layer_mass_parts, mass_sum, CentralMassReport,
    RatioReport, P_DIGITS,
};
pub use boolean::{binomial, majority, restrict, threshold_at, threshold_fn, BooleanFunction, CubeFunction, TABLE_GUARD};
pub use params::ThresholdParams;
pub use pipeline::{
    run_decomposition_pipeline, run_target_pipeline, GTildeSource, LowDegreeReport, MajorityReport, PipelineConfig,
    PipelineReport, Stage,
};
pub use poly::{truth_table_to_polynomial, F2Polynomial};
pub use psi::{
    build_f_psi, build_f_psi_dense, build_f_psi_from, require_threshold_target, Amplitudes, PerturbedTarget,
    SparseFunction, TargetAmplitudes, ThresholdData, ThresholdFunction,
};
pub use report::{
    default_eps, expected_incorrect_survivors, layer_error_report, survivor_bound, wrong_point_mass_bound_check,
    LayerReport, LayerRow, MassReport,
};
pub use restriction::{find_good_restriction, project_decomposition, ProjectedTerm, RestrictionReport};
pub use rs::{build_g_tilde, ceil_log2, rs_subspace_approx, GTilde, RsApprox, RsTermSummary, DEFAULT_RS_RETRIES};
