use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::boolean::{check_arity, BooleanFunction};
use super::poly::{truth_table_to_polynomial, F2Polynomial};
use super::psi::ThresholdData;
use super::restriction::project_decomposition;
use crate::error::{check_dim, Error, Result};
use crate::f2::{AffineForm, AffineSubspace, BitVector};
use crate::scalar::Coefficient;
use crate::stabfun::{MagicTarget, Signature, StabilizerDecomposition, OUTSIDE};

pub const DEFAULT_RS_RETRIES: usize = 64;

/// A one-sided low-degree approximation of `1_A`.
#[derive(Clone, Debug)]
pub struct RsApprox {
    pub poly: F2Polynomial,
    /// The affine factors `a_{D_k} + 1`.
    pub factors: Vec<AffineForm>,
    pub t: usize,
    /// Points where `P != 1_A`.
    pub errors: u64,
    pub total: u64,
    pub retries_used: usize,
}

impl RsApprox {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn within_bound(&self) -> bool {
        within(self.errors, self.total, self.t)
    }
}

fn within(errors: u64, total: u64, t: usize) -> bool {
    (errors as u128) << t.min(100) <= total as u128
}

#[inline]
fn mask(v: &BitVector) -> u32 {
    v.low_word() as u32
}

/// `P(x) = Π_{k=1}^t (a_{D_k}(x) + 1)` where `a_i = 0` are the equations of
/// `A` and each `D_k` is a uniform random subset of them.
///
/// Every factor is 1 on `A`, so `P` never misses a point of `A`. Draws are
/// repeated until the exact error `|{x : P(x) != 1_A(x)}| / 2^m` is at most
/// `2^-t`.
pub fn rs_subspace_approx(a: &AffineSubspace, t: usize, seed: u64, retries: usize) -> Result<RsApprox> {
    let m = a.n();
    check_arity(m)?;
    let total = 1u64 << m;
    let eqs: Vec<(u32, bool)> = a.equations().map(|(c, b)| (mask(&c), b)).collect();
    if eqs.is_empty() {
        return Ok(RsApprox {
            poly: F2Polynomial::one(m),
            factors: Vec::new(),
            t,
            errors: 0,
            total,
            retries_used: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(u64, Vec<(u32, bool)>)> = None;
    for attempt in 1..=retries.max(1) {
        // a_D(x) + 1 = <c, x> + b + 1
        let factors: Vec<(u32, bool)> = (0..t)
            .map(|_| {
                eqs.iter()
                    .filter(|_| rng.gen::<bool>())
                    .fold((0u32, true), |(c, b), &(ci, bi)| (c ^ ci, b ^ bi))
            })
            .collect();
        let mut errors = 0u64;
        for x in 0..total as u32 {
            let p = factors.iter().all(|&(c, b)| ((c & x).count_ones() % 2 == 1) ^ b);
            let inside = eqs.iter().all(|&(c, b)| ((c & x).count_ones() % 2 == 1) == b);
            if p != inside {
                errors += 1;
            }
        }
        if best.as_ref().map_or(true, |(e, _)| errors < *e) {
            best = Some((errors, factors));
        }
        let (e, f) = best.as_ref().expect("set above");
        if within(*e, total, t) {
            let table = BooleanFunction::from_fn(m, |x| f.iter().all(|&(c, b)| ((c & x).count_ones() % 2 == 1) ^ b))?;
            let poly = truth_table_to_polynomial(&table);
            if poly.degree() > t {
                return Err(Error::Internal(format!("degree {} exceeds t = {t}", poly.degree())));
            }
            return Ok(RsApprox {
                poly,
                factors: f
                    .iter()
                    .map(|&(c, b)| AffineForm::new(BitVector::from_u64(m, c as u64), b))
                    .collect(),
                t,
                errors: *e,
                total,
                retries_used: attempt,
            });
        }
    }
    let (e, _) = best.expect("at least one attempt");
    Err(Error::RetryBudgetExhausted {
        retries,
        best_errors: e,
        total,
        bound: total >> t.min(63),
    })
}

/// `⌈log₂ x⌉` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct RsTermSummary {
    /// Codimension of `A'_j`, `None` when it is empty.
    pub codim: Option<usize>,
    pub t: usize,
    pub errors: u64,
    pub retries_used: usize,
    pub degree: usize,
}

/// Result of [`build_g_tilde`].
#[derive(Clone, Debug)]
pub struct GTilde {
    pub poly: F2Polynomial,
    /// `g_D`, evaluated exactly.
    pub g: BooleanFunction,
    pub g_tilde: BooleanFunction,
    pub degree: usize,
    /// `3r max(2, ⌈log₂(20r)⌉)`.
    pub degree_bound: usize,
    pub agreement: u64,
    pub total: u64,
    pub t_j: usize,
    pub rs: Vec<RsTermSummary>,
    /// `Σ_j` errors of the `P_j`.
    pub union_bound: u64,
    /// Degree of the exact ANF of the comparator `h` on `3r` inputs, when
    /// `3r <= 12`.
    pub h_degree: Option<usize>,
}

const H_ANF_LIMIT: usize = 12;

/// A low-degree polynomial close to `g_D = f_ψ` restricted to `D`.
///
/// On the subcube, `ψ = Σ_j c_j i^{ℓ'_j} (-1)^{q'_j} 1_{A'_j}`, so
/// `g_D = h(ℓ'_1, q'_1, 1_{A'_1}, …)` for a comparator `h` on `3r` bits.
/// Replacing each `1_{A'_j}` by an approximation `P_j` of degree
/// `t_j = ⌈log₂(20r)⌉` gives `g̃`; its polynomial is read off the truth
/// table of the composition.
pub fn build_g_tilde<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    t: &MagicTarget,
    keep: &[usize],
    seed: u64,
    retries: usize,
) -> Result<GTilde> {
    check_dim(t.n, d.n())?;
    let m = keep.len();
    check_arity(m)?;
    let data = ThresholdData::<C>::new(t)?;
    let r = d.rank();
    let proj = project_decomposition(d, keep)?;
    let t_j = ceil_log2((20 * r).max(1));

    let mut approx_tables = Vec::with_capacity(r);
    let mut rs = Vec::with_capacity(r);
    for (j, term) in proj.iter().enumerate() {
        match &term.support {
            None => {
                approx_tables.push(BooleanFunction::zeros(m)?);
                rs.push(RsTermSummary {
                    codim: None,
                    t: t_j,
                    errors: 0,
                    retries_used: 0,
                    degree: 0,
                });
            }
            Some(a) => {
                let p = rs_subspace_approx(a, t_j, seed.wrapping_add(j as u64), retries)?;
                approx_tables.push(p.poly.truth_table()?);
                rs.push(RsTermSummary {
                    codim: Some(a.codim()),
                    t: t_j,
                    errors: p.errors,
                    retries_used: p.retries_used,
                    degree: p.degree(),
                });
            }
        }
    }

    let mut memo: HashMap<Signature, bool> = HashMap::new();
    let mut h = |sig: &Signature| -> bool {
        if let Some(&v) = memo.get(sig) {
            return v;
        }
        let v = data.below(&d.value_of_signature(sig));
        memo.insert(sig.clone(), v);
        v
    };
    let mut exact_sig = vec![0u8; r];
    let mut approx_sig = vec![0u8; r];
    let mut g = BooleanFunction::zeros(m)?;
    let mut g_tilde = BooleanFunction::zeros(m)?;
    for i in 0..1u32 << m {
        let x = BitVector::from_u64(m, i as u64);
        for (j, term) in proj.iter().enumerate() {
            let phase = term.ell.eval(&x) as u8 + 2 * term.q.eval(&x) as u8;
            let inside = term.support.as_ref().is_some_and(|a| a.contains(&x));
            exact_sig[j] = if inside { phase } else { OUTSIDE };
            approx_sig[j] = if approx_tables[j].get(i) { phase } else { OUTSIDE };
        }
        g.set(i, h(&exact_sig));
        g_tilde.set(i, h(&approx_sig));
    }

    let poly = truth_table_to_polynomial(&g_tilde);
    let degree = poly.degree();
    let degree_bound = 3 * r * t_j.max(2);
    if degree > degree_bound {
        return Err(Error::Internal(format!("deg g̃ = {degree} exceeds {degree_bound}")));
    }
    let agreement = g.agreement(&g_tilde)?;
    let total = 1u64 << m;
    let union_bound: u64 = rs.iter().map(|s| s.errors).sum();
    if total - agreement > union_bound {
        return Err(Error::Internal(format!(
            "g̃ disagrees with g on {} points, above the union bound {union_bound}",
            total - agreement
        )));
    }

    let h_degree = (3 * r <= H_ANF_LIMIT).then(|| {
        let table = BooleanFunction::from_fn(3 * r, |bits| {
            let sig: Signature = (0..r)
                .map(|j| {
                    let b = bits >> (3 * j);
                    if b & 4 != 0 {
                        (b & 1) as u8 + 2 * (b >> 1 & 1) as u8
                    } else {
                        OUTSIDE
                    }
                })
                .collect();
            h(&sig)
        })
        .expect("3r within the table guard");
        truth_table_to_polynomial(&table).degree()
    });

    Ok(GTilde {
        poly,
        g,
        g_tilde,
        degree,
        degree_bound,
        agreement,
        total,
        t_j,
        rs,
        union_bound,
        h_degree,
    })
}
