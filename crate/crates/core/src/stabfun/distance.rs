use std::collections::HashMap;

use super::{MagicTarget, StabilizerDecomposition};
use crate::error::{check_dim, Error, Result};
use crate::f2::BitVector;
use crate::hp::{float_from_i64, float_zero, Float, HpComplex};
use crate::scalar::Coefficient;

/// Largest `n` for which distances are computed by full enumeration.
pub const DISTANCE_GUARD: usize = 24;

#[derive(Clone, Debug)]
pub struct L2Distance<C> {
    /// `Σ_x |d(x) - t(x)|^2`, in the decomposition's field. Only present for
    /// the unnormalized distance.
    pub squared: Option<C>,
    pub distance: Float,
}

impl<C> L2Distance<C> {
    pub fn to_f64(&self) -> f64 {
        crate::hp::float_to_f64(&self.distance)
    }
}

/// Groups the cube by (phase pattern, weight): both `d` and the target are
/// constant on each group.
fn grouped<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    guard: usize,
) -> Result<HashMap<(Vec<u8>, usize), u64>> {
    let n = d.n();
    if n > guard {
        return Err(Error::Guard {
            what: "n",
            value: n,
            guard,
        });
    }
    let mut groups: HashMap<(Vec<u8>, usize), u64> = HashMap::new();
    let mut sig = Vec::new();
    for b in 0u64..1 << n {
        let x = BitVector::from_u64(n, b);
        d.signature_into(&x, &mut sig);
        let key = (sig.clone(), x.weight());
        *groups.entry(key).or_insert(0) += 1;
    }
    Ok(groups)
}

fn scaled<C: Coefficient>(v: &C, count: u64) -> C {
    let c = C::from_cyclo(&crate::cyclo::CycloNumber::from_rational(
        num_rational::BigRational::from_integer(count.into()),
    ));
    v.mul(&c)
}

/// `‖d - t‖₂` over all of F2^n. With `normalized`, both sides are scaled
/// to unit norm first (a zero side stays zero).
pub fn l2_distance<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    t: &MagicTarget,
    normalized: bool,
) -> Result<L2Distance<C>> {
    l2_distance_with_guard(d, t, normalized, DISTANCE_GUARD)
}

pub fn l2_distance_with_guard<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    t: &MagicTarget,
    normalized: bool,
    guard: usize,
) -> Result<L2Distance<C>> {
    check_dim(d.n(), t.n)?;
    let groups = grouped(d, guard)?;
    let layers = t.layer_amplitudes::<C>()?;
    if !normalized {
        let mut acc = C::zero();
        for ((sig, k), count) in &groups {
            let diff = d.value_of_signature(sig).sub(&layers[*k]);
            acc = acc.add(&scaled(&diff.norm_sqr(), *count));
        }
        let distance = acc.to_hp().re.sqrt();
        return Ok(L2Distance {
            squared: Some(acc),
            distance,
        });
    }
    let mut dd = C::zero();
    let mut dt = C::zero();
    for ((sig, k), count) in &groups {
        let v = d.value_of_signature(sig);
        dd = dd.add(&scaled(&v.norm_sqr(), *count));
        dt = dt.add(&scaled(&v.conj().mul(&layers[*k]), *count));
    }
    let tt = t.norm_sqr::<C>()?.to_hp().re;
    let dd = dd.to_hp().re;
    let one = float_from_i64(1, crate::hp::PRECISION);
    if dd == float_zero() {
        return Ok(L2Distance {
            squared: None,
            distance: one,
        });
    }
    // ‖d/|d| - t/|t|‖² = 2 - 2 Re⟨d,t⟩ / (|d| |t|)
    let re: HpComplex = dt.to_hp();
    let two = float_from_i64(2, crate::hp::PRECISION);
    let mut sq = &two - &(&two * &re.re / (dd.sqrt() * tt.sqrt()));
    if sq < float_zero() {
        sq = float_zero();
    }
    Ok(L2Distance {
        squared: None,
        distance: sq.sqrt(),
    })
}
