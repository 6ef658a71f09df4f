use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{check_dim, Error, Result};
use crate::f2::BitVector;
use crate::hp::{float_from_i64, HpComplex, PRECISION};
use crate::prob::Probability;
use crate::scalar::Coefficient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    H,
    T,
    R,
}

impl FromStr for TargetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "h" => Ok(TargetKind::H),
            "T" | "t" => Ok(TargetKind::T),
            "R" | "r" => Ok(TargetKind::R),
            other => Err(Error::Parse(format!("unknown target {other:?}, expected H, T or R"))),
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Scaling convention for target amplitudes.
///
/// `Unnormalized` uses `F_T(x) = e^{iπ|x|/4}`; `H` and `R` are already unit
/// vectors, so the flag only changes `T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Unnormalized,
    Unit,
}

/// The tensor power `|ψ⟩^{⊗n}` of a single-qubit magic state
/// `α|0⟩ + β|1⟩`, viewed as the function `x -> α^{n-|x|} β^{|x|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MagicTarget {
    pub kind: TargetKind,
    pub n: usize,
    pub normalization: Normalization,
}

fn r_amplitudes() -> (HpComplex, HpComplex) {
    let p = PRECISION + 32;
    let one = float_from_i64(1, p);
    let two = float_from_i64(2, p);
    let s3 = float_from_i64(3, p).sqrt();
    let cos2 = (&one + &(&one / &s3)) / &two;
    let sin2 = &one - &cos2;
    let c = cos2.sqrt().with_precision(PRECISION).value();
    let s = sin2.sqrt();
    // e^{iπ/4} sin β
    let t = (&s / &two.sqrt()).with_precision(PRECISION).value();
    (HpComplex::from_real(c), HpComplex::new(t.clone(), t))
}

impl MagicTarget {
    pub fn new(kind: TargetKind, n: usize) -> Self {
        Self {
            kind,
            n,
            normalization: Normalization::Unnormalized,
        }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// `(α, β)` when both are cyclotomic.
    pub fn single_qubit_exact(&self) -> Option<(CycloNumber, CycloNumber)> {
        match (self.kind, self.normalization) {
            (TargetKind::H, _) => Some((CycloNumber::cos_pi_8(), CycloNumber::sin_pi_8())),
            (TargetKind::T, Normalization::Unnormalized) => {
                Some((CycloNumber::one(), CycloNumber::zeta(2)))
            }
            (TargetKind::T, Normalization::Unit) => {
                let h = CycloNumber::sqrt2().scale(&num_rational::BigRational::new(1.into(), 2.into()));
                let b = &h * &CycloNumber::zeta(2);
                Some((h, b))
            }
            (TargetKind::R, _) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind != TargetKind::R
    }

    pub fn single_qubit<C: Coefficient>(&self) -> Result<(C, C)> {
        if let Some((a, b)) = self.single_qubit_exact() {
            return Ok((C::from_cyclo(&a), C::from_cyclo(&b)));
        }
        let (a, b) = r_amplitudes();
        match (C::from_hp(&a), C::from_hp(&b)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::NotApplicable(format!(
                "{} amplitudes are not cyclotomic; use float mode",
                self.kind
            ))),
        }
    }

    /// `α^{n-k} β^k` for `k = 0..=n`.
    pub fn layer_amplitudes<C: Coefficient>(&self) -> Result<Vec<C>> {
        let (a, b) = self.single_qubit::<C>()?;
        let n = self.n;
        let mut apow = vec![C::one(); n + 1];
        let mut bpow = vec![C::one(); n + 1];
        for k in 1..=n {
            apow[k] = apow[k - 1].mul(&a);
            bpow[k] = bpow[k - 1].mul(&b);
        }
        Ok((0..=n).map(|k| apow[n - k].mul(&bpow[k])).collect())
    }

    /// Layer weights `w_k = |α|^{2(n-k)} |β|^{2k}`.
    pub fn layer_weights<C: Coefficient>(&self) -> Result<Vec<C>> {
        Ok(self
            .layer_amplitudes::<C>()?
            .iter()
            .map(Coefficient::norm_sqr)
            .collect())
    }

    pub fn eval<C: Coefficient>(&self, x: &BitVector) -> Result<C> {
        check_dim(self.n, x.len())?;
        let (a, b) = self.single_qubit::<C>()?;
        let k = x.weight();
        let mut acc = C::one();
        for _ in 0..self.n - k {
            acc = acc.mul(&a);
        }
        for _ in 0..k {
            acc = acc.mul(&b);
        }
        Ok(acc)
    }

    /// `p = |β|^2` for the unit-norm state, exact.
    pub fn probability(&self) -> Result<Probability> {
        match self.kind {
            TargetKind::H => Ok(Probability::h()),
            TargetKind::R => Ok(Probability::r()),
            TargetKind::T => Err(self.threshold_unsupported()),
        }
    }

    /// `η = |β| / |α|`.
    pub fn eta<C: Coefficient>(&self) -> Result<C> {
        match self.kind {
            TargetKind::H => Ok(C::from_cyclo(&(CycloNumber::sqrt2() - CycloNumber::one()))),
            TargetKind::R => {
                let (a, b) = r_amplitudes();
                let eta = HpComplex::from_real(b.abs() / a.abs());
                C::from_hp(&eta).ok_or_else(|| {
                    Error::NotApplicable("R amplitudes are not cyclotomic; use float mode".into())
                })
            }
            TargetKind::T => Err(self.threshold_unsupported()),
        }
    }

    fn threshold_unsupported(&self) -> Error {
        Error::NotApplicable(
            "T has |α| = |β| (p = 1/2, η = 1), so the threshold construction does not apply".into(),
        )
    }

    /// `Σ_x |F(x)|^2`.
    pub fn norm_sqr<C: Coefficient>(&self) -> Result<C> {
        let w = self.layer_weights::<C>()?;
        let mut acc = C::zero();
        let mut binom = num_bigint::BigInt::from(1);
        for (k, wk) in w.iter().enumerate() {
            if k > 0 {
                binom = binom * (self.n - k + 1) / k;
            }
            let c = C::from_cyclo(&CycloNumber::from_rational(num_rational::BigRational::from_integer(
                binom.clone(),
            )));
            acc = acc.add(&c.mul(wk));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn h_single_qubit_values() {
        let t = MagicTarget::new(TargetKind::H, 1);
        let a: CycloNumber = t.eval(&BitVector::zeros(1)).unwrap();
        let b: CycloNumber = t.eval(&BitVector::ones(1)).unwrap();
        assert!((a.to_c64().0 - 0.9238795).abs() < 1e-7);
        assert!((b.to_c64().0 - 0.3826834).abs() < 1e-7);
    }

    #[test]
    fn t_two_qubits() {
        let t = MagicTarget::new(TargetKind::T, 2);
        let v: CycloNumber = t.eval(&BitVector::ones(2)).unwrap();
        assert_eq!(v, CycloNumber::i());
        let u: CycloNumber = t
            .with_normalization(Normalization::Unit)
            .eval(&BitVector::ones(2))
            .unwrap();
        assert_eq!(u, CycloNumber::i().scale(&num_rational::BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn r_needs_float_mode() {
        let t = MagicTarget::new(TargetKind::R, 3);
        assert!(t.eval::<CycloNumber>(&BitVector::zeros(3)).is_err());
        let v: HpComplex = t.eval(&BitVector::zeros(3)).unwrap();
        let c = ((1.0 + 1.0 / 3f64.sqrt()) / 2.0).sqrt();
        assert!((v.to_f64().0 - c.powi(3)).abs() < 1e-15);
        let n: HpComplex = t.norm_sqr().unwrap();
        assert!(n.approx_eq(&HpComplex::one(), 1e-30));
    }

    #[test]
    fn unit_norms() {
        let h: CycloNumber = MagicTarget::new(TargetKind::H, 7).norm_sqr().unwrap();
        assert!(h.is_one());
        let t: CycloNumber = MagicTarget::new(TargetKind::T, 5).norm_sqr().unwrap();
        assert_eq!(t, CycloNumber::from_int(32));
        let tu: CycloNumber = MagicTarget::new(TargetKind::T, 5)
            .with_normalization(Normalization::Unit)
            .norm_sqr()
            .unwrap();
        assert!(tu.is_one());
    }

    #[test]
    fn eta_and_layer_weights() {
        let t = MagicTarget::new(TargetKind::H, 10);
        let eta: CycloNumber = t.eta().unwrap();
        let w: Vec<CycloNumber> = t.layer_weights().unwrap();
        for k in 1..=10 {
            assert_eq!(w[k - 1].real_cmp(&w[k]), Ordering::Greater);
            assert_eq!(&w[k - 1] * &(&eta * &eta), w[k]);
        }
        assert!(t.eta::<CycloNumber>().is_ok());
        assert!(MagicTarget::new(TargetKind::T, 3).eta::<CycloNumber>().is_err());
        let r: HpComplex = MagicTarget::new(TargetKind::R, 2).eta().unwrap();
        let p = Probability::r().to_f64();
        assert!((r.to_f64().0 - (p / (1.0 - p)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn values_depend_only_on_weight() {
        for kind in [TargetKind::H, TargetKind::T] {
            let n = 12;
            let t = MagicTarget::new(kind, n);
            let layers: Vec<CycloNumber> = t.layer_amplitudes().unwrap();
            for b in 0..1u64 << n {
                let x = BitVector::from_u64(n, b);
                let v: CycloNumber = t.eval(&x).unwrap();
                assert_eq!(v, layers[x.weight()]);
            }
        }
    }
}
