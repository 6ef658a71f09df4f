//! The two coefficient fields a decomposition may live in.

use std::cmp::Ordering;
use std::fmt::Debug;

use crate::cyclo::CycloNumber;
use crate::hp::{cmp_with_tolerance, float_from_f64, HpComplex, CMP_TOLERANCE, EQ_TOLERANCE};

/// Numeric mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Field operations shared by [`CycloNumber`] and [`HpComplex`].
///
/// Comparisons are exact for cyclotomic values. For high-precision values
/// `is_zero` uses an absolute tolerance of `1e-30` and `real_cmp` a relative
/// tolerance of `1e-20`.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + 'static {
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// Multiplication by `i^k`.
    fn mul_i_pow(&self, k: u8) -> Self;
    fn from_cyclo(z: &CycloNumber) -> Self;
    /// `None` when the value cannot be represented exactly.
    fn from_hp(z: &HpComplex) -> Option<Self>;
    /// Compares real parts.
    fn real_cmp(&self, other: &Self) -> Ordering;
    fn to_hp(&self) -> HpComplex;
    fn to_c64(&self) -> (f64, f64);

    fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }
}

impl Coefficient for CycloNumber {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        CycloNumber::zero()
    }
    fn one() -> Self {
        CycloNumber::one()
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        CycloNumber::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        CycloNumber::inv(self)
    }
    fn mul_i_pow(&self, k: u8) -> Self {
        CycloNumber::mul_i_pow(self, k)
    }
    fn from_cyclo(z: &CycloNumber) -> Self {
        z.clone()
    }
    fn from_hp(_: &HpComplex) -> Option<Self> {
        None
    }
    fn real_cmp(&self, other: &Self) -> Ordering {
        CycloNumber::real_cmp(self, other)
    }
    fn to_hp(&self) -> HpComplex {
        CycloNumber::to_hp(self)
    }
    fn to_c64(&self) -> (f64, f64) {
        CycloNumber::to_c64(self)
    }
    fn norm_sqr(&self) -> Self {
        CycloNumber::norm_sqr(self)
    }
}

impl Coefficient for HpComplex {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        HpComplex::zero()
    }
    fn one() -> Self {
        HpComplex::one()
    }
    fn is_zero(&self) -> bool {
        let t = float_from_f64(EQ_TOLERANCE);
        self.norm_sqr() <= &t * &t
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        HpComplex::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if Coefficient::is_zero(self) {
            None
        } else {
            HpComplex::inv(self)
        }
    }
    fn mul_i_pow(&self, k: u8) -> Self {
        HpComplex::mul_i_pow(self, k)
    }
    fn from_cyclo(z: &CycloNumber) -> Self {
        z.to_hp()
    }
    fn from_hp(z: &HpComplex) -> Option<Self> {
        Some(z.clone())
    }
    fn real_cmp(&self, other: &Self) -> Ordering {
        let scale = if self.re.clone() < crate::hp::float_zero() {
            -self.re.clone()
        } else {
            self.re.clone()
        };
        let oscale = if other.re.clone() < crate::hp::float_zero() {
            -other.re.clone()
        } else {
            other.re.clone()
        };
        let m = if scale > oscale { scale } else { oscale };
        let tol = crate::hp::float_to_f64(&m) * CMP_TOLERANCE;
        if tol == 0.0 {
            return self.re.cmp(&other.re);
        }
        cmp_with_tolerance(&self.re, &other.re, tol)
    }
    fn to_hp(&self) -> HpComplex {
        self.clone()
    }
    fn to_c64(&self) -> (f64, f64) {
        HpComplex::to_f64(self)
    }
}
