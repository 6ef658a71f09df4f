//! Arbitrary-precision reals and complexes backed by `dashu-float`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;

pub type Float = FBig<HalfEven, 2>;

/// Working precision in bits.
pub const PRECISION: usize = 128;

/// Default tolerance for equality tests between high-precision values.
pub const EQ_TOLERANCE: f64 = 1e-30;

/// Default tolerance for threshold comparisons in float mode.
pub const CMP_TOLERANCE: f64 = 1e-20;

pub fn ubig_from(x: &BigUint) -> UBig {
    UBig::from_le_bytes(&x.to_bytes_le())
}

pub fn ibig_from(x: &BigInt) -> IBig {
    let mag = IBig::from(ubig_from(x.magnitude()));
    if x.sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn float_int(x: &BigInt, prec: usize) -> Float {
    Float::from(ibig_from(x)).with_precision(prec).value()
}

pub fn float_from_f64(x: f64) -> Float {
    Float::try_from(x)
        .expect("finite f64")
        .with_precision(PRECISION)
        .value()
}

pub fn float_from_i64(x: i64, prec: usize) -> Float {
    Float::from(IBig::from(x)).with_precision(prec).value()
}

pub fn float_rational(q: &BigRational, prec: usize) -> Float {
    float_int(q.numer(), prec) / float_int(q.denom(), prec)
}

pub fn float_to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

pub fn float_zero() -> Float {
    float_from_i64(0, PRECISION)
}

/// A complex number with [`Float`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: Float,
    pub im: Float,
}

impl HpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(float_zero(), float_zero())
    }

    pub fn one() -> Self {
        Self::new(float_from_i64(1, PRECISION), float_zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(float_from_f64(re), float_from_f64(im))
    }

    pub fn from_real(re: Float) -> Self {
        Self::new(re, float_zero())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr();
        if d == float_zero() {
            return None;
        }
        Some(Self::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }

    /// Multiplies by `i^k`.
    pub fn mul_i_pow(&self, k: u8) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(-self.im.clone(), self.re.clone()),
            2 => Self::new(-self.re.clone(), -self.im.clone()),
            _ => Self::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// `|self - other| <= tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let d = self - other;
        let t = float_from_f64(tol);
        d.norm_sqr() <= &t * &t
    }
}

impl Add for &HpComplex {
    type Output = HpComplex;
    fn add(self, o: &HpComplex) -> HpComplex {
        HpComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &HpComplex {
    type Output = HpComplex;
    fn sub(self, o: &HpComplex) -> HpComplex {
        HpComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &HpComplex {
    type Output = HpComplex;
    fn mul(self, o: &HpComplex) -> HpComplex {
        HpComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(-self.re.clone(), -self.im.clone())
    }
}

/// Compares two floats, treating values within `tol` as equal.
pub fn cmp_with_tolerance(a: &Float, b: &Float, tol: f64) -> Ordering {
    let d = a - b;
    let t = float_from_f64(tol);
    if d.clone() > t {
        Ordering::Greater
    } else if d < -t {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}
