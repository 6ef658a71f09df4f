use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::boolean::{check_arity, majority, restrict, CubeFunction};
use crate::error::{Error, Result};
use crate::f2::{AffineForm, AffineSubspace, QuadraticForm};
use crate::scalar::Coefficient;
use crate::stabfun::StabilizerDecomposition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    /// Kept coordinates (0-based, increasing).
    pub d0: Vec<usize>,
    pub m: usize,
    /// Inputs of `F2^m` where `g_{D0}` agrees with `Maj_m`.
    pub agreement: u64,
    pub total: u64,
    /// `agreement / total >= 3/4`.
    pub passed: bool,
    pub trials: usize,
    /// Index of the trial that produced `d0`.
    pub best_trial: usize,
}

impl RestrictionReport {
    pub fn fraction(&self) -> String {
        format!("{}/{}", self.agreement, self.total)
    }
}

/// Draws `trials` uniform `m`-subsets and keeps the one whose restriction
/// agrees best with `Maj_m` (first one on ties).
pub fn find_good_restriction<F: CubeFunction + ?Sized>(
    f: &F,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<RestrictionReport> {
    let n = f.n();
    check_arity(m)?;
    if m > n {
        return Err(Error::Precondition(format!("restriction size {m} exceeds n = {n}")));
    }
    let maj = majority(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<RestrictionReport> = None;
    for trial in 0..trials.max(1) {
        let mut d = rand::seq::index::sample(&mut rng, n, m).into_vec();
        d.sort_unstable();
        let g = restrict(f, &d)?;
        let agreement = g.agreement(&maj)?;
        if best.as_ref().map_or(true, |b| agreement > b.agreement) {
            best = Some(RestrictionReport {
                d0: d,
                m,
                agreement,
                total: 1 << m,
                passed: 4 * agreement >= 3 << m,
                trials,
                best_trial: trial,
            });
        }
    }
    Ok(best.expect("at least one trial"))
}

/// A term with every coordinate outside `D` set to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedTerm {
    pub ell: AffineForm,
    pub q: QuadraticForm,
    /// `None` when the substituted support is empty, so the term vanishes.
    pub support: Option<AffineSubspace>,
}

pub fn project_decomposition<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    keep: &[usize],
) -> Result<Vec<ProjectedTerm>> {
    if let Some(&bad) = keep.iter().find(|&&i| i >= d.n()) {
        return Err(Error::Precondition(format!("coordinate {bad} outside 0..{}", d.n())));
    }
    Ok(d.functions()
        .map(|f| ProjectedTerm {
            ell: f.ell().restrict(keep),
            q: f.q().restrict(keep),
            support: f.support().restrict_zero(keep),
        })
        .collect())
}
