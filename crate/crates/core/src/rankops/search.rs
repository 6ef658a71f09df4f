use crate::error::{Error, Result};
use crate::hp::{float_from_f64, HpComplex};
use crate::scalar::{Coefficient, Mode};
use crate::stabfun::{
    enumerate_stabilizer_states, MagicTarget, StabilizerDecomposition, StabilizerState, Term,
};

/// Default residual tolerance for float-mode searches.
pub const FLOAT_TOLERANCE: f64 = 1e-25;

#[derive(Clone, Debug)]
pub struct RankCertificate<C> {
    pub rank: usize,
    pub decomposition: StabilizerDecomposition<C>,
    /// Squared residual norm `‖Σ c_j φ_j - t‖²`; exactly zero in exact mode.
    pub residual_sqr: HpComplex,
    /// `true` when the span test and residual are exact, so `rank` is the
    /// stabilizer rank. Float searches only establish "rank ≤ r within τ".
    pub exact: bool,
    pub subsets_tested: u64,
    pub states: usize,
}

#[derive(Clone, Debug)]
pub enum RankOutcome<C> {
    Found(RankCertificate<C>),
    NotFound {
        r_max: usize,
        subsets_tested: u64,
        states: usize,
    },
}

impl<C> RankOutcome<C> {
    pub fn certificate(&self) -> Option<&RankCertificate<C>> {
        match self {
            RankOutcome::Found(c) => Some(c),
            RankOutcome::NotFound { .. } => None,
        }
    }
}

/// Least `r ≤ r_max` such that `target` (amplitudes in index order) lies in
/// the span of `r` stabilizer states.
///
/// Subsets are visited in lexicographic order of the sorted state list, so
/// the certificate is the first one in canonical order. A cheap `f64`
/// least-squares screen discards subsets whose residual is far from zero;
/// every accepted subset is then solved in the coefficient field and its
/// residual recomputed there.
pub fn exact_rank_search<C: Coefficient>(
    n: usize,
    target: &[C],
    r_max: usize,
    allow_n4: bool,
) -> Result<RankOutcome<C>> {
    exact_rank_search_with_tolerance(n, target, r_max, allow_n4, FLOAT_TOLERANCE)
}

pub fn exact_rank_search_with_tolerance<C: Coefficient>(
    n: usize,
    target: &[C],
    r_max: usize,
    allow_n4: bool,
    tolerance: f64,
) -> Result<RankOutcome<C>> {
    if target.len() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: target.len(),
        });
    }
    let states = enumerate_stabilizer_states(n, allow_n4)?;
    let vecs: Vec<Vec<C>> = states.iter().map(StabilizerState::amplitudes).collect();
    let fvecs: Vec<Vec<(f64, f64)>> = vecs
        .iter()
        .map(|v| v.iter().map(Coefficient::to_c64).collect())
        .collect();
    let ftarget: Vec<(f64, f64)> = target.iter().map(Coefficient::to_c64).collect();
    let mut tested = 0u64;

    if target.iter().all(Coefficient::is_zero) {
        return Ok(RankOutcome::Found(RankCertificate {
            rank: 0,
            decomposition: StabilizerDecomposition::empty(n),
            residual_sqr: HpComplex::zero(),
            exact: C::MODE == Mode::Exact,
            subsets_tested: 0,
            states: states.len(),
        }));
    }

    for r in 1..=r_max.min(states.len()) {
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            tested += 1;
            let cols: Vec<&[(f64, f64)]> = idx.iter().map(|&i| fvecs[i].as_slice()).collect();
            if float_screen(&cols, &ftarget) {
                let cols: Vec<&[C]> = idx.iter().map(|&i| vecs[i].as_slice()).collect();
                if let Some(coeffs) = solve_in_span(&cols, target) {
                    let terms = idx
                        .iter()
                        .zip(coeffs)
                        .map(|(&i, coeff)| Term {
                            coeff,
                            function: states[i].function.clone(),
                        })
                        .collect();
                    let decomposition = StabilizerDecomposition::new(n, terms)?;
                    let residual_sqr = residual(&decomposition, target)?;
                    let ok = match C::MODE {
                        Mode::Exact => residual_sqr.0,
                        Mode::Float => {
                            let t = float_from_f64(tolerance);
                            residual_sqr.1.re <= &t * &t
                        }
                    };
                    if ok {
                        return Ok(RankOutcome::Found(RankCertificate {
                            rank: r,
                            decomposition,
                            residual_sqr: residual_sqr.1,
                            exact: C::MODE == Mode::Exact,
                            subsets_tested: tested,
                            states: states.len(),
                        }));
                    }
                }
            }
            if !next_combination(&mut idx, states.len()) {
                break;
            }
        }
    }
    Ok(RankOutcome::NotFound {
        r_max,
        subsets_tested: tested,
        states: states.len(),
    })
}

pub fn magic_rank_search<C: Coefficient>(
    t: &MagicTarget,
    r_max: usize,
    allow_n4: bool,
) -> Result<RankOutcome<C>> {
    let layers = t.layer_amplitudes::<C>()?;
    let target: Vec<C> = (0u64..1 << t.n)
        .map(|b| layers[b.count_ones() as usize].clone())
        .collect();
    exact_rank_search(t.n, &target, r_max, allow_n4)
}

/// Recomputes `Σ_x |d(x) - t(x)|²`. Returns (exactly zero?, value).
pub fn residual<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    target: &[C],
) -> Result<(bool, HpComplex)> {
    let n = d.n();
    let mut acc = C::zero();
    for (b, t) in target.iter().enumerate() {
        let x = crate::f2::BitVector::from_u64(n, b as u64);
        let diff = d.eval(&x)?.sub(t);
        acc = acc.add(&diff.norm_sqr());
    }
    let exact_zero = C::MODE == Mode::Exact && acc.is_zero();
    Ok((exact_zero, acc.to_hp()))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 && idx[i - 1] == n - k + i - 1 {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    idx[i - 1] += 1;
    for j in i..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

/// `false` only when the target is clearly outside the span of `cols`.
/// Rank-deficient or ill-conditioned subsets are passed through to the
/// exact test.
fn float_screen(cols: &[&[C64]], target: &[C64]) -> bool {
    let m = target.len();
    let r = cols.len();
    let mut a: Vec<Vec<C64>> = (0..m)
        .map(|i| {
            let mut row: Vec<C64> = cols.iter().map(|c| c[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let scale: f64 = target.iter().map(|z| z.0.abs() + z.1.abs()).fold(0.0, f64::max).max(1.0);
    let mut row = 0;
    for col in 0..r {
        let (p, best) = (row..m)
            .map(|i| (i, a[i][col].0.hypot(a[i][col].1)))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < 1e-9 {
            return true;
        }
        a.swap(row, p);
        let piv = a[row][col];
        for i in row + 1..m {
            let f = cdiv(a[i][col], piv);
            if f == (0.0, 0.0) {
                continue;
            }
            for j in col..=r {
                let t = cmul(f, a[row][j]);
                a[i][j].0 -= t.0;
                a[i][j].1 -= t.1;
            }
        }
        row += 1;
    }
    (row..m).all(|i| a[i][r].0.hypot(a[i][r].1) <= 1e-6 * scale)
}

/// Solves `Σ_j c_j cols[j] = target` by Gaussian elimination in the
/// coefficient field; `None` if the columns are dependent or the target is
/// outside their span.
pub fn solve_in_span<C: Coefficient>(cols: &[&[C]], target: &[C]) -> Option<Vec<C>> {
    let m = target.len();
    let r = cols.len();
    let mut a: Vec<Vec<C>> = (0..m)
        .map(|i| {
            let mut row: Vec<C> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(r);
    let mut row = 0;
    for col in 0..r {
        let p = (row..m).find(|&i| !a[i][col].is_zero())?;
        a.swap(row, p);
        let inv = a[row][col].inv()?;
        for j in col..=r {
            a[row][j] = a[row][j].mul(&inv);
        }
        for i in 0..m {
            if i == row || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in col..=r {
                let t = f.mul(&a[row][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
        pivots.push(row);
        row += 1;
    }
    if (row..m).any(|i| !a[i][r].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| a[i][r].clone()).collect())
}

/// Squared residual of a candidate as an `f64`, for reports.
pub fn residual_f64(res: &HpComplex) -> f64 {
    crate::hp::float_to_f64(&res.re)
}
