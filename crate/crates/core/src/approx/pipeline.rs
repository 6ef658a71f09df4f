//! The threshold pipeline end to end: `f_ψ`, its layer report, a good
//! restriction `D0`, a low-degree `g̃` and its agreement with majority.

use num_rational::BigRational;
use serde::Serialize;

use super::boolean::{majority, restrict, BooleanFunction, CubeFunction};
use super::poly::truth_table_to_polynomial;
use super::psi::{build_f_psi_dense, build_f_psi_from, PerturbedTarget, TargetAmplitudes, ThresholdFunction};
use super::report::{default_eps, expected_incorrect_survivors, layer_error_report, survivor_bound, LayerReport};
use super::restriction::{find_good_restriction, RestrictionReport};
use super::rs::{build_g_tilde, RsTermSummary, DEFAULT_RS_RETRIES};
use super::ser;
use crate::error::Result;
use crate::scalar::{Coefficient, Mode};
use crate::stabfun::{MagicTarget, StabilizerDecomposition};

#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    #[serde(serialize_with = "ser::frac")]
    pub eps: BigRational,
    #[serde(serialize_with = "ser::frac")]
    pub gamma: BigRational,
    /// L2 radius of the random perturbation; zero means the exact target.
    #[serde(serialize_with = "ser::frac")]
    pub delta: BigRational,
    pub perturbation_points: usize,
    pub trials: usize,
    pub seed: u64,
    pub rs_retries: usize,
    /// Replace `f_ψ` by its complement before the layer report.
    pub negate: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            eps: default_eps(),
            gamma: default_eps(),
            delta: BigRational::new(1.into(), 20.into()),
            perturbation_points: 1024,
            trials: 100,
            seed: 0,
            rs_retries: DEFAULT_RS_RETRIES,
            negate: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    LayerReport,
    Restriction,
    LowDegree,
    Majority,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::LayerReport => "layer_report",
            Stage::Restriction => "restriction",
            Stage::LowDegree => "low_degree",
            Stage::Majority => "majority",
        })
    }
}

/// How `g̃` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GTildeSource {
    /// The exact polynomial of `g_D`.
    ExactAnf,
    /// Composition of the comparator with subspace approximations.
    Decomposition,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowDegreeReport {
    pub source: GTildeSource,
    pub degree: usize,
    pub degree_bound: Option<usize>,
    pub monomials: usize,
    /// Agreement of `g̃` with `g_{D0}`, as `a/b`.
    pub agreement: String,
    pub passed: bool,
    pub rs: Vec<RsTermSummary>,
    pub union_bound: Option<u64>,
    pub h_degree: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MajorityReport {
    /// Agreement of `g̃` with `Maj_m`, as `a/b`.
    pub agreement: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub target: MagicTarget,
    pub mode: Mode,
    pub input: String,
    /// `‖ψ - F‖²` when known exactly.
    #[serde(serialize_with = "ser::opt_frac")]
    pub distance_sqr: Option<BigRational>,
    pub f_psi_is_threshold: bool,
    pub layer_report: LayerReport,
    #[serde(serialize_with = "ser::frac")]
    pub expected_incorrect_survivors: BigRational,
    #[serde(serialize_with = "ser::frac")]
    pub survivor_bound: BigRational,
    pub restriction: Option<RestrictionReport>,
    pub low_degree: Option<LowDegreeReport>,
    pub majority: Option<MajorityReport>,
    pub failed_stage: Option<Stage>,
    pub passed: bool,
}

fn fraction(a: u64, b: u64) -> String {
    format!("{a}/{b}")
}

struct Partial {
    layer_report: LayerReport,
    f_psi_is_threshold: bool,
    restriction: Option<RestrictionReport>,
    g: Option<BooleanFunction>,
    failed_stage: Option<Stage>,
}

fn first_stages<F: CubeFunction + ?Sized>(f: &F, t: &MagicTarget, cfg: &PipelineConfig) -> Result<Partial> {
    let layer_report = layer_error_report(f, &t.probability()?, &cfg.eps, &cfg.gamma)?;
    let f_psi_is_threshold = layer_report.layers.iter().all(|r| r.errors == 0u32.into());
    let mut out = Partial {
        layer_report,
        f_psi_is_threshold,
        restriction: None,
        g: None,
        failed_stage: None,
    };
    if !out.layer_report.passes {
        out.failed_stage = Some(Stage::LayerReport);
        return Ok(out);
    }
    let m = out.layer_report.params.m;
    let rest = find_good_restriction(f, m, cfg.trials, cfg.seed)?;
    if !rest.passed {
        out.failed_stage = Some(Stage::Restriction);
    } else {
        out.g = Some(restrict(f, &rest.d0)?);
    }
    out.restriction = Some(rest);
    Ok(out)
}

fn finish(
    t: &MagicTarget,
    mode: Mode,
    input: String,
    distance_sqr: Option<BigRational>,
    partial: Partial,
    low: Option<(LowDegreeReport, BooleanFunction)>,
) -> Result<PipelineReport> {
    let Partial {
        layer_report,
        f_psi_is_threshold,
        restriction,
        mut failed_stage,
        ..
    } = partial;
    let m = layer_report.params.m;
    let mut majority_report = None;
    let mut low_degree = None;
    if let Some((low, g_tilde)) = low {
        if failed_stage.is_none() && !low.passed {
            failed_stage = Some(Stage::LowDegree);
        }
        if failed_stage.is_none() {
            let agr = g_tilde.agreement(&majority(m)?)?;
            let total = 1u64 << m;
            let passed = 3 * agr >= 2 * total;
            if !passed {
                failed_stage = Some(Stage::Majority);
            }
            majority_report = Some(MajorityReport {
                agreement: fraction(agr, total),
                passed,
            });
        }
        low_degree = Some(low);
    }
    Ok(PipelineReport {
        target: *t,
        mode,
        input,
        distance_sqr,
        f_psi_is_threshold,
        expected_incorrect_survivors: expected_incorrect_survivors(&layer_report),
        survivor_bound: survivor_bound(m),
        layer_report,
        restriction,
        low_degree,
        majority: majority_report,
        passed: failed_stage.is_none(),
        failed_stage,
    })
}

fn exact_anf_stage(g: &BooleanFunction) -> (LowDegreeReport, BooleanFunction) {
    let poly = truth_table_to_polynomial(g);
    let total = 1u64 << g.arity();
    let report = LowDegreeReport {
        source: GTildeSource::ExactAnf,
        degree: poly.degree(),
        degree_bound: None,
        monomials: poly.len(),
        agreement: fraction(total, total),
        passed: true,
        rs: Vec::new(),
        union_bound: None,
        h_degree: None,
    };
    (report, g.clone())
}

/// Runs the pipeline on the magic target itself (`delta = 0`) or on a
/// random sparse perturbation of it at L2 distance at most `delta`.
///
/// No low-rank decomposition is available here, so `g̃` is the exact
/// polynomial of `g_{D0}`.
pub fn run_target_pipeline<C: Coefficient>(t: &MagicTarget, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let (f, input, dist) = if cfg.delta == BigRational::from_integer(0.into()) {
        let psi = TargetAmplitudes::<C>::new(t)?;
        (build_f_psi_from(&psi, t)?, "exact target".to_string(), Some(BigRational::from_integer(0.into())))
    } else {
        let psi = PerturbedTarget::<C>::sparse_random(t, &cfg.delta, cfg.perturbation_points, cfg.seed)?;
        let dist = psi.distance_sqr().cloned();
        let input = format!("sparse perturbation on {} points", psi.perturbation().len());
        (build_f_psi_from(&psi, t)?, input, dist)
    };
    let f: ThresholdFunction = if cfg.negate { f.negate() } else { f };
    let partial = first_stages(&f, t, cfg)?;
    let low = partial.g.as_ref().map(exact_anf_stage);
    finish(t, C::MODE, input, dist, partial, low)
}

/// Runs the pipeline on the function represented by a decomposition.
///
/// `g̃` is composed from subspace approximations of each term, so its degree
/// is bounded in terms of the rank alone.
pub fn run_decomposition_pipeline<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    t: &MagicTarget,
    cfg: &PipelineConfig,
) -> Result<PipelineReport> {
    let f = build_f_psi_dense(d, t)?;
    let f = if cfg.negate { f.negate() } else { f };
    let partial = first_stages(&f, t, cfg)?;
    let low = match (&partial.restriction, &partial.g) {
        (Some(rest), Some(_)) if !cfg.negate => {
            let gt = build_g_tilde(d, t, &rest.d0, cfg.seed, cfg.rs_retries)?;
            let report = LowDegreeReport {
                source: GTildeSource::Decomposition,
                degree: gt.degree,
                degree_bound: Some(gt.degree_bound),
                monomials: gt.poly.len(),
                agreement: fraction(gt.agreement, gt.total),
                passed: 20 * gt.agreement >= 19 * gt.total,
                rs: gt.rs,
                union_bound: Some(gt.union_bound),
                h_degree: gt.h_degree,
            };
            Some((report, gt.g_tilde))
        }
        (_, Some(g)) => Some(exact_anf_stage(g)),
        _ => None,
    };
    finish(t, C::MODE, format!("decomposition of rank {}", d.rank()), None, partial, low)
}
