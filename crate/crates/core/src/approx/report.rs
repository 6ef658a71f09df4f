use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::boolean::{binomial, check_arity, CubeFunction};
use super::params::ThresholdParams;
use super::psi::{Amplitudes, ThresholdData};
use crate::error::{check_dim, Result};
use crate::f2::BitVector;
use crate::prob::Probability;
use crate::scalar::Coefficient;
use crate::stabfun::MagicTarget;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerRow {
    pub k: usize,
    #[serde(serialize_with = "super::ser::display")]
    pub size: BigUint,
    #[serde(serialize_with = "super::ser::display")]
    pub errors: BigUint,
    #[serde(serialize_with = "super::ser::frac")]
    pub fraction: BigRational,
    /// `fraction >= ε`.
    pub wrong: bool,
    pub in_window: bool,
}

/// Exact per-layer disagreement of `f` with `THR = [|x| >= k*]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub params: ThresholdParams,
    #[serde(serialize_with = "super::ser::frac")]
    pub eps: BigRational,
    #[serde(serialize_with = "super::ser::frac")]
    pub gamma: BigRational,
    pub layers: Vec<LayerRow>,
    pub wrong_in_window: usize,
    pub window_layers: usize,
    #[serde(serialize_with = "super::ser::frac")]
    pub wrong_fraction: BigRational,
    /// `f` is an `(ε, γ)`-approximation of `THR`.
    pub passes: bool,
}

impl LayerReport {
    pub fn total_errors(&self) -> BigUint {
        self.layers.iter().map(|r| &r.errors).sum()
    }

    /// CSV with one row per layer.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,size,errors,fraction,wrong,in_window\n");
        for r in &self.layers {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.k,
                r.size,
                r.errors,
                super::ser::frac_string(&r.fraction),
                r.wrong,
                r.in_window
            ));
        }
        out
    }
}

pub fn default_eps() -> BigRational {
    BigRational::new(1.into(), 100.into())
}

pub fn layer_error_report<F: CubeFunction + ?Sized>(
    f: &F,
    p: &Probability,
    eps: &BigRational,
    gamma: &BigRational,
) -> Result<LayerReport> {
    let params = ThresholdParams::new(f.n(), p)?;
    let n = f.n();
    let errors = f.layer_disagreements(params.k_star);
    let layers: Vec<LayerRow> = errors
        .into_iter()
        .enumerate()
        .map(|(k, e)| {
            let size = binomial(n, k);
            let fraction = BigRational::new(e.clone().into(), size.clone().into());
            LayerRow {
                k,
                wrong: &fraction >= eps,
                in_window: params.in_window(k),
                size,
                errors: e,
                fraction,
            }
        })
        .collect();
    let wrong_in_window = layers.iter().filter(|r| r.in_window && r.wrong).count();
    let window_layers = params.window_len();
    let wrong_fraction = BigRational::new(wrong_in_window.into(), window_layers.into());
    Ok(LayerReport {
        passes: &wrong_fraction <= gamma,
        params,
        eps: eps.clone(),
        gamma: gamma.clone(),
        layers,
        wrong_in_window,
        window_layers,
        wrong_fraction,
    })
}

/// Average over all `m`-subsets `D` of the number of points in window
/// layers that survive the restriction to `D` and where `f` is wrong:
/// `Σ_k errors_k C(m,k)/C(n,k)`.
pub fn expected_incorrect_survivors(report: &LayerReport) -> BigRational {
    let m = report.params.m;
    let n = report.params.n;
    report
        .layers
        .iter()
        .filter(|r| r.in_window && r.k <= m)
        .map(|r| {
            BigRational::new(
                (&r.errors * binomial(m, r.k)).into(),
                binomial(n, r.k).into(),
            )
        })
        .sum()
}

/// `(12/100) 2^m`.
pub fn survivor_bound(m: usize) -> BigRational {
    BigRational::new((BigUint::from(12u8) << m).into(), 100.into())
}

#[derive(Clone, Debug, Serialize)]
pub struct MassReport {
    pub points_checked: u64,
    pub wrong_points: u64,
    /// Wrong points where `|ψ(x) - F(x)|² < w_k ((1-η)/2)²`.
    pub violations: Vec<String>,
    pub holds: bool,
    /// `Σ |ψ(x) - F(x)|²` over wrong points.
    pub mass: f64,
    /// `Σ w_k ((1-η)/2)²` over wrong points.
    pub lower_bound: f64,
    pub exact: bool,
}

/// Checks `|ψ(x) - F(x)|² >= w_k ((1-η)/2)²` at every `x` of layer `k`
/// where `f_ψ(x) != THR(x)`. Only points where `ψ` may differ from `F` are
/// visited; sources without a finite deviation set are scanned in full.
pub fn wrong_point_mass_bound_check<C: Coefficient, A: Amplitudes<C>>(
    psi: &A,
    t: &MagicTarget,
) -> Result<MassReport> {
    check_dim(t.n, psi.n())?;
    let data = ThresholdData::<C>::new(t)?;
    let n = t.n;
    let points: Box<dyn Iterator<Item = BitVector>> = match psi.deviation_support() {
        Some(pts) => Box::new(pts.into_iter()),
        None => {
            check_arity(n)?;
            Box::new((0u64..1 << n).map(move |b| BitVector::from_u64(n, b)))
        }
    };
    let mut checked = 0u64;
    let mut wrong = 0u64;
    let mut violations = Vec::new();
    let mut mass = C::zero();
    let mut bound = C::zero();
    for x in points {
        checked += 1;
        let k = x.weight();
        let v = psi.amplitude(&x);
        if data.below(&v) == (k >= data.params.k_star) {
            continue;
        }
        wrong += 1;
        let lhs = v.sub(&data.layers[k]).norm_sqr();
        let rhs = data.weights[k].mul(&data.gap_factor);
        if lhs.real_cmp(&rhs) == Ordering::Less {
            violations.push(x.to_hex());
        }
        mass = mass.add(&lhs);
        bound = bound.add(&rhs);
    }
    Ok(MassReport {
        points_checked: checked,
        wrong_points: wrong,
        holds: violations.is_empty(),
        violations,
        mass: mass.to_c64().0,
        lower_bound: bound.to_c64().0,
        exact: C::MODE == crate::scalar::Mode::Exact,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::boolean::{threshold_at, threshold_fn};
    use crate::approx::psi::{build_f_psi_from, PerturbedTarget, TargetAmplitudes};
    use crate::cyclo::CycloNumber;
    use crate::stabfun::TargetKind;
    use std::collections::BTreeMap;

    fn eps() -> BigRational {
        default_eps()
    }

    #[test]
    fn threshold_passes_and_negation_fails() {
        let p: Probability = "0.3".parse().unwrap();
        let thr = threshold_fn(16, &p).unwrap();
        let rep = layer_error_report(&thr, &p, &eps(), &eps()).unwrap();
        assert!(rep.passes);
        assert_eq!(rep.wrong_in_window, 0);
        let bad = layer_error_report(&thr.negate(), &p, &eps(), &eps()).unwrap();
        assert!(!bad.passes);
        assert_eq!(bad.wrong_in_window, bad.window_layers);
        assert!(bad.to_csv().lines().count() == 18);
    }

    #[test]
    fn perturbed_n20_passes_on_50_seeds() {
        let t = MagicTarget::new(TargetKind::H, 20);
        let delta = BigRational::new(1.into(), 20.into());
        for seed in 0..50 {
            let psi = PerturbedTarget::<CycloNumber>::sparse_random(&t, &delta, 256, seed).unwrap();
            let f = build_f_psi_from(&psi, &t).unwrap();
            let rep = layer_error_report(&f, &Probability::h(), &eps(), &eps()).unwrap();
            assert!(rep.passes, "seed {seed}");
            assert!(expected_incorrect_survivors(&rep) <= survivor_bound(rep.params.m));
        }
    }

    #[test]
    fn mass_bound_exact_target_is_vacuous() {
        let t = MagicTarget::new(TargetKind::H, 10);
        let psi = TargetAmplitudes::<CycloNumber>::new(&t).unwrap();
        let rep = wrong_point_mass_bound_check(&psi, &t).unwrap();
        assert_eq!(rep.wrong_points, 0);
        assert!(rep.holds);
    }

    #[test]
    fn mass_bound_single_corruption() {
        let n = 12;
        let t = MagicTarget::new(TargetKind::H, n);
        let data = ThresholdData::<CycloNumber>::new(&t).unwrap();
        let k = data.params.k_star;
        let x = BitVector::from_indices(n, 0..k + 1);
        let e = &data.layers[0] - &data.layers[k + 1];
        let psi = PerturbedTarget::new(&t, BTreeMap::from([(x, e)])).unwrap();
        let rep = wrong_point_mass_bound_check(&psi, &t).unwrap();
        assert_eq!(rep.wrong_points, 1);
        assert!(rep.holds);
        assert!(rep.mass >= rep.lower_bound);
    }

    #[test]
    fn mass_bound_random_perturbations_n16() {
        let t = MagicTarget::new(TargetKind::H, 16);
        let delta = BigRational::new(1.into(), 5.into());
        let mut any_wrong = false;
        for seed in 0..20 {
            let psi = PerturbedTarget::<CycloNumber>::sparse_random(&t, &delta, 64, seed).unwrap();
            let rep = wrong_point_mass_bound_check(&psi, &t).unwrap();
            assert!(rep.holds, "seed {seed}");
            any_wrong |= rep.wrong_points > 0;
        }
        assert!(any_wrong);
    }

    #[test]
    fn survivor_expectation_for_threshold_is_zero() {
        let p = Probability::h();
        let rep = layer_error_report(&threshold_at(20, 3).unwrap(), &p, &eps(), &eps()).unwrap();
        assert!(expected_incorrect_survivors(&rep) == BigRational::from_integer(0.into()));
    }
}
