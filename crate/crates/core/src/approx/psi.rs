use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::boolean::{binomial, check_arity, BooleanFunction, CubeFunction};
use super::params::ThresholdParams;
use crate::cyclo::CycloNumber;
use crate::error::{check_dim, Error, Result};
use crate::f2::BitVector;
use crate::scalar::Coefficient;
use crate::stabfun::{MagicTarget, Signature, StabilizerDecomposition};

/// A complex function on `F2^n`.
pub trait Amplitudes<C: Coefficient> {
    fn n(&self) -> usize;
    fn amplitude(&self, x: &BitVector) -> C;
    /// Points where the amplitude may differ from the magic target's, or
    /// `None` when it may differ anywhere.
    fn deviation_support(&self) -> Option<Vec<BitVector>> {
        None
    }
}

impl<C: Coefficient> Amplitudes<C> for StabilizerDecomposition<C> {
    fn n(&self) -> usize {
        StabilizerDecomposition::n(self)
    }
    fn amplitude(&self, x: &BitVector) -> C {
        self.eval(x).expect("point length matches the decomposition")
    }
}

/// Threshold data of a magic target in coefficient field `C`.
#[derive(Clone, Debug)]
pub struct ThresholdData<C> {
    pub params: ThresholdParams,
    /// `F(x)` on layer `k`.
    pub layers: Vec<C>,
    /// `w_k = |F(x)|²` on layer `k`.
    pub weights: Vec<C>,
    pub eta: C,
    /// `((1+η)/2)² w_{k*-1}`.
    pub thr_sqr: C,
    /// `((1-η)/2)²`.
    pub gap_factor: C,
}

impl<C: Coefficient> ThresholdData<C> {
    pub fn new(t: &MagicTarget) -> Result<Self> {
        let params = ThresholdParams::new(t.n, &t.probability()?)?;
        let layers = t.layer_amplitudes::<C>()?;
        let weights: Vec<C> = layers.iter().map(Coefficient::norm_sqr).collect();
        let eta = t.eta::<C>()?;
        let half = C::from_cyclo(&CycloNumber::from_rational(BigRational::new(1.into(), 2.into())));
        let plus = C::one().add(&eta).mul(&half);
        let minus = C::one().sub(&eta).mul(&half);
        let thr_sqr = plus.mul(&plus).mul(&weights[params.k_star - 1]);
        Ok(Self {
            params,
            layers,
            weights,
            eta,
            thr_sqr,
            gap_factor: minus.mul(&minus),
        })
    }

    /// `[|z|² <= thr²]`.
    pub fn below(&self, z: &C) -> bool {
        z.norm_sqr().real_cmp(&self.thr_sqr) != Ordering::Greater
    }

    /// `f` on a point where the amplitude equals the target's.
    pub fn layer_values(&self) -> Vec<bool> {
        self.layers.iter().map(|z| self.below(z)).collect()
    }
}

/// The magic target itself as an [`Amplitudes`] source.
#[derive(Clone, Debug)]
pub struct TargetAmplitudes<C> {
    pub target: MagicTarget,
    layers: Vec<C>,
}

impl<C: Coefficient> TargetAmplitudes<C> {
    pub fn new(target: &MagicTarget) -> Result<Self> {
        Ok(Self {
            target: *target,
            layers: target.layer_amplitudes()?,
        })
    }
}

impl<C: Coefficient> Amplitudes<C> for TargetAmplitudes<C> {
    fn n(&self) -> usize {
        self.target.n
    }
    fn amplitude(&self, x: &BitVector) -> C {
        self.layers[x.weight()].clone()
    }
    fn deviation_support(&self) -> Option<Vec<BitVector>> {
        Some(Vec::new())
    }
}

/// `ψ = F + E` with `E` supported on finitely many points.
#[derive(Clone, Debug)]
pub struct PerturbedTarget<C> {
    base: TargetAmplitudes<C>,
    perturbation: BTreeMap<BitVector, C>,
    /// `‖E‖²` when `E` has Gaussian-rational values.
    distance_sqr: Option<BigRational>,
}

const QUANT_BITS: u32 = 40;

impl<C: Coefficient> PerturbedTarget<C> {
    pub fn new(target: &MagicTarget, perturbation: BTreeMap<BitVector, C>) -> Result<Self> {
        for x in perturbation.keys() {
            check_dim(target.n, x.len())?;
        }
        Ok(Self {
            base: TargetAmplitudes::new(target)?,
            perturbation,
            distance_sqr: None,
        })
    }

    /// Perturbation on `points` distinct random points, each coordinate set
    /// with probability `p`, with independent complex Gaussian values
    /// quantized to multiples of `2^-40` and scaled so that `‖E‖₂ <= delta`.
    /// The exact `‖E‖²` is kept.
    pub fn sparse_random(target: &MagicTarget, delta: &BigRational, points: usize, seed: u64) -> Result<Self> {
        let n = target.n;
        let p = target.probability()?.approx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = if n < 63 { points.min(1usize << n) } else { points };
        let mut support = BTreeSet::new();
        let mut attempts = 0usize;
        while support.len() < cap && attempts < 64 * cap.max(1) {
            attempts += 1;
            let mut x = BitVector::zeros(n);
            for i in 0..n {
                if rng.gen::<f64>() < p {
                    x.set(i, true);
                }
            }
            support.insert(x);
        }
        let unit = BigInt::from(1u64 << QUANT_BITS);
        let quant = |g: f64| BigRational::new(BigInt::from((g * (1u64 << QUANT_BITS) as f64).round() as i64), unit.clone());
        let raw: Vec<(BitVector, BigRational, BigRational)> = support
            .into_iter()
            .map(|x| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                (x, quant(a), quant(b))
            })
            .collect();
        let s: BigRational = raw.iter().map(|(_, a, b)| a * a + b * b).sum();
        let delta_sqr = delta * delta;
        let lambda = if s.is_zero() {
            BigRational::zero()
        } else {
            let ratio = (delta_sqr.clone() / &s).to_f64().unwrap_or(0.0);
            let mut l = quant(ratio.sqrt() * (1.0 - 1e-9));
            while &l * &l * &s > delta_sqr {
                l -= BigRational::new(1.into(), unit.clone());
            }
            l
        };
        let perturbation = raw
            .into_iter()
            .map(|(x, a, b)| (x, C::from_cyclo(&CycloNumber::from_gaussian(&lambda * a, &lambda * b))))
            .collect();
        let mut out = Self::new(target, perturbation)?;
        out.distance_sqr = Some(&lambda * &lambda * s);
        Ok(out)
    }

    pub fn target(&self) -> &MagicTarget {
        &self.base.target
    }

    pub fn perturbation(&self) -> &BTreeMap<BitVector, C> {
        &self.perturbation
    }

    pub fn distance_sqr(&self) -> Option<&BigRational> {
        self.distance_sqr.as_ref()
    }
}

impl<C: Coefficient> Amplitudes<C> for PerturbedTarget<C> {
    fn n(&self) -> usize {
        self.base.target.n
    }
    fn amplitude(&self, x: &BitVector) -> C {
        let base = self.base.amplitude(x);
        match self.perturbation.get(x) {
            Some(e) => base.add(e),
            None => base,
        }
    }
    fn deviation_support(&self) -> Option<Vec<BitVector>> {
        Some(self.perturbation.keys().copied().collect())
    }
}

/// A function that depends only on `|x|` except on finitely many points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseFunction {
    n: usize,
    /// Value on layer `k` away from the exceptions.
    pub base: Vec<bool>,
    /// Points where the value is `!base[|x|]`.
    pub exceptions: BTreeSet<BitVector>,
}

impl SparseFunction {
    pub fn new(n: usize, base: Vec<bool>, exceptions: BTreeSet<BitVector>) -> Result<Self> {
        check_dim(n + 1, base.len())?;
        for x in &exceptions {
            check_dim(n, x.len())?;
        }
        Ok(Self { n, base, exceptions })
    }

    pub fn threshold(n: usize, k_star: usize) -> Self {
        Self {
            n,
            base: (0..=n).map(|k| k >= k_star).collect(),
            exceptions: BTreeSet::new(),
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            base: self.base.iter().map(|b| !b).collect(),
            exceptions: self.exceptions.clone(),
        }
    }
}

impl CubeFunction for SparseFunction {
    fn n(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &BitVector) -> bool {
        self.base[x.weight()] ^ self.exceptions.contains(x)
    }
    fn layer_disagreements(&self, k_star: usize) -> Vec<BigUint> {
        let mut exc = vec![0u64; self.n + 1];
        for x in &self.exceptions {
            exc[x.weight()] += 1;
        }
        (0..=self.n)
            .map(|k| {
                if self.base[k] == (k >= k_star) {
                    BigUint::from(exc[k])
                } else {
                    binomial(self.n, k) - BigUint::from(exc[k])
                }
            })
            .collect()
    }
}

/// `f_ψ`, dense or sparse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThresholdFunction {
    Dense(BooleanFunction),
    Sparse(SparseFunction),
}

impl ThresholdFunction {
    pub fn negate(&self) -> Self {
        match self {
            ThresholdFunction::Dense(f) => ThresholdFunction::Dense(f.negate()),
            ThresholdFunction::Sparse(f) => ThresholdFunction::Sparse(f.negate()),
        }
    }

    pub fn as_dense(&self) -> Option<&BooleanFunction> {
        match self {
            ThresholdFunction::Dense(f) => Some(f),
            ThresholdFunction::Sparse(_) => None,
        }
    }
}

impl CubeFunction for ThresholdFunction {
    fn n(&self) -> usize {
        match self {
            ThresholdFunction::Dense(f) => f.n(),
            ThresholdFunction::Sparse(f) => f.n(),
        }
    }
    fn eval(&self, x: &BitVector) -> bool {
        match self {
            ThresholdFunction::Dense(f) => f.eval(x),
            ThresholdFunction::Sparse(f) => f.eval(x),
        }
    }
    fn layer_disagreements(&self, k_star: usize) -> Vec<BigUint> {
        match self {
            ThresholdFunction::Dense(f) => f.layer_disagreements(k_star),
            ThresholdFunction::Sparse(f) => f.layer_disagreements(k_star),
        }
    }
}

/// `f_ψ(x) = [|ψ(x)| <= ((1+η)/2) m_{k*-1}]` over the whole cube, with
/// `m_k = |F(x)|` on layer `k`. Magnitudes are compared squared.
///
/// The value of a decomposition at `x` depends only on its phase signature,
/// so the comparison is made once per distinct signature.
pub fn build_f_psi<C: Coefficient>(d: &StabilizerDecomposition<C>, t: &MagicTarget) -> Result<BooleanFunction> {
    check_dim(t.n, d.n())?;
    check_arity(d.n())?;
    let data = ThresholdData::<C>::new(t)?;
    let n = d.n();
    let mut memo: HashMap<Signature, bool> = HashMap::new();
    let mut sig = Signature::new();
    BooleanFunction::from_fn(n, |i| {
        d.signature_into(&BitVector::from_u64(n, i as u64), &mut sig);
        if let Some(&v) = memo.get(&sig) {
            return v;
        }
        let v = data.below(&d.value_of_signature(&sig));
        memo.insert(sig.clone(), v);
        v
    })
}

/// [`build_f_psi`] for any amplitude source. Sources that differ from the
/// target on a known finite set give a [`SparseFunction`] at any `n`;
/// others are tabulated.
pub fn build_f_psi_from<C: Coefficient, A: Amplitudes<C>>(psi: &A, t: &MagicTarget) -> Result<ThresholdFunction> {
    check_dim(t.n, psi.n())?;
    let data = ThresholdData::<C>::new(t)?;
    match psi.deviation_support() {
        Some(points) => {
            let base = data.layer_values();
            let exceptions = points
                .into_iter()
                .filter(|x| data.below(&psi.amplitude(x)) != base[x.weight()])
                .collect();
            Ok(ThresholdFunction::Sparse(SparseFunction::new(t.n, base, exceptions)?))
        }
        None => build_f_psi_dense(psi, t).map(ThresholdFunction::Dense),
    }
}

/// Tabulates `f_ψ` point by point.
pub fn build_f_psi_dense<C: Coefficient, A: Amplitudes<C>>(psi: &A, t: &MagicTarget) -> Result<BooleanFunction> {
    check_dim(t.n, psi.n())?;
    check_arity(t.n)?;
    let data = ThresholdData::<C>::new(t)?;
    let n = t.n;
    BooleanFunction::from_fn(n, |i| data.below(&psi.amplitude(&BitVector::from_u64(n, i as u64))))
}

/// Fails unless `k*` is meaningful for the target, i.e. `0 < p < 1/2`.
pub fn require_threshold_target(t: &MagicTarget) -> Result<()> {
    t.probability().and_then(|p| p.check_below_half()).map_err(|e| match e {
        Error::NotApplicable(_) => e,
        other => Error::NotApplicable(other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::boolean::threshold_at;
    use crate::hp::HpComplex;
    use crate::stabfun::{StabilizerFunction, TargetKind};

    /// `F_H` as a sum of point indicators.
    fn point_decomposition(n: usize) -> StabilizerDecomposition<CycloNumber> {
        let t = MagicTarget::new(TargetKind::H, n);
        let layers: Vec<CycloNumber> = t.layer_amplitudes().unwrap();
        let mut d = StabilizerDecomposition::empty(n);
        for b in 0..1u64 << n {
            let x = BitVector::from_u64(n, b);
            d.push(layers[x.weight()].clone(), StabilizerFunction::point(x)).unwrap();
        }
        d
    }

    #[test]
    fn exact_h_gives_threshold_n16() {
        let t = MagicTarget::new(TargetKind::H, 16);
        let psi = TargetAmplitudes::<CycloNumber>::new(&t).unwrap();
        let dense = build_f_psi_dense(&psi, &t).unwrap();
        let k = ThresholdData::<CycloNumber>::new(&t).unwrap().params.k_star;
        assert_eq!(dense, threshold_at(16, k).unwrap());
        let sparse = build_f_psi_from(&psi, &t).unwrap();
        assert!(sparse.layer_disagreements(k).iter().all(Zero::is_zero));
    }

    #[test]
    fn point_decomposition_matches_threshold() {
        for n in [6, 8] {
            let t = MagicTarget::new(TargetKind::H, n);
            let f = build_f_psi(&point_decomposition(n), &t).unwrap();
            let k = ThresholdParams::new(n, &t.probability().unwrap()).unwrap().k_star;
            assert_eq!(f, threshold_at(n, k).unwrap());
        }
    }

    #[test]
    fn zero_decomposition_is_all_ones() {
        let t = MagicTarget::new(TargetKind::H, 10);
        let f = build_f_psi(&StabilizerDecomposition::<CycloNumber>::empty(10), &t).unwrap();
        assert_eq!(f.count_ones(), 1024);
    }

    #[test]
    fn single_corruption_flips_one_point() {
        let n = 16;
        let t = MagicTarget::new(TargetKind::H, n);
        let data = ThresholdData::<CycloNumber>::new(&t).unwrap();
        let k = data.params.k_star;
        let x = BitVector::from_indices(n, 0..k);
        // push the amplitude at a weight-k* point up to m_{k*-1}
        let e = &data.layers[k - 1] - &data.layers[k];
        let psi = PerturbedTarget::new(&t, BTreeMap::from([(x, e)])).unwrap();
        let f = build_f_psi_dense(&psi, &t).unwrap();
        let thr = threshold_at(n, k).unwrap();
        assert_eq!(f.agreement(&thr).unwrap(), (1 << n) - 1);
        let sparse = build_f_psi_from(&psi, &t).unwrap();
        let total: BigUint = sparse.layer_disagreements(k).iter().sum();
        assert_eq!(total, BigUint::from(1u8));
    }

    #[test]
    fn sparse_perturbation_norm_is_bounded() {
        let t = MagicTarget::new(TargetKind::H, 48);
        let delta = BigRational::new(1.into(), 20.into());
        let psi = PerturbedTarget::<CycloNumber>::sparse_random(&t, &delta, 300, 9).unwrap();
        let d2 = psi.distance_sqr().unwrap();
        assert!(d2 <= &(&delta * &delta));
        assert!(d2.to_f64().unwrap() > 0.0025 * 0.999);
        let direct: CycloNumber = psi.perturbation().values().map(CycloNumber::norm_sqr).fold(CycloNumber::zero(), |a, b| &a + &b);
        assert_eq!(direct.as_rational(), Some(d2));
    }

    #[test]
    fn r_target_float_threshold() {
        let t = MagicTarget::new(TargetKind::R, 12);
        let psi = TargetAmplitudes::<HpComplex>::new(&t).unwrap();
        let f = build_f_psi_dense(&psi, &t).unwrap();
        let k = ThresholdParams::new(12, &t.probability().unwrap()).unwrap().k_star;
        assert_eq!(f, threshold_at(12, k).unwrap());
        assert!(ThresholdData::<CycloNumber>::new(&t).is_err());
    }

    #[test]
    fn t_target_is_not_applicable() {
        let t = MagicTarget::new(TargetKind::T, 4);
        assert!(matches!(require_threshold_target(&t), Err(Error::NotApplicable(_))));
    }
}
