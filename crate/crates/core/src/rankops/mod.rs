//! Stabilizer-rank search for small `n` and the collision-witness engine.

mod search;
mod witness;

pub use search::{
    exact_rank_search, exact_rank_search_with_tolerance, magic_rank_search, residual, residual_f64, solve_in_span,
    RankCertificate, RankOutcome, FLOAT_TOLERANCE,
};
pub use witness::{
    find_collision_witness, find_constant_subspace, find_heavy_direction, verify_witness, Applicability,
    ConstantSubspace, EngineMode, HeavyDirection, HeavySearch, Regime, TermCheck, Witness, WitnessConfig,
    WitnessReport, DEFAULT_BUDGET, DEFAULT_SAMPLES, EXHAUSTIVE_U_LIMIT, EXHAUSTIVE_V1_LIMIT,
};
