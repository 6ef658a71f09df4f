//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ = e^{iπ/8}`.
//!
//! An element is stored as `a_0 + a_1 ζ + ... + a_7 ζ^7` with rational
//! coefficients and the reduction `ζ^8 = -1`. The field contains `i = ζ^4`,
//! `e^{iπ/4} = ζ^2`, `√2 = ζ^2 - ζ^6` and `cos(π/8) = (ζ - ζ^7)/2`, so every
//! amplitude of the `H` and `T` magic states is exact here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hp::{float_from_i64, float_rational, Float, HpComplex, PRECISION};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    c: [BigRational; 8],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl CycloNumber {
    pub fn zero() -> Self {
        Self {
            c: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_coeffs(c: [BigRational; 8]) -> Self {
        Self { c }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut z = Self::zero();
        z.c[0] = q;
        z
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// `re + im·i` for rational `re`, `im`.
    pub fn from_gaussian(re: BigRational, im: BigRational) -> Self {
        let mut z = Self::zero();
        z.c[0] = re;
        z.c[4] = im;
        z
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta(k: i64) -> Self {
        let e = k.rem_euclid(16) as usize;
        let mut z = Self::zero();
        if e < 8 {
            z.c[e] = BigRational::one();
        } else {
            z.c[e - 8] = -BigRational::one();
        }
        z
    }

    pub fn i() -> Self {
        Self::zeta(4)
    }

    /// `i^k`.
    pub fn i_pow(k: u8) -> Self {
        Self::zeta(4 * (k % 4) as i64)
    }

    pub fn sqrt2() -> Self {
        Self::zeta(2) - Self::zeta(6)
    }

    pub fn cos_pi_8() -> Self {
        (Self::zeta(1) - Self::zeta(7)).scale(&rat(1, 2))
    }

    pub fn sin_pi_8() -> Self {
        (Self::zeta(3) - Self::zeta(5)).scale(&rat(1, 2))
    }

    pub fn coeffs(&self) -> &[BigRational; 8] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            c: std::array::from_fn(|j| &self.c[j] * q),
        }
    }

    /// Multiplication by `ζ^k`, a signed rotation of the coefficients.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let s = k.rem_euclid(16) as usize;
        let mut out = Self::zero();
        for j in 0..8 {
            if self.c[j].is_zero() {
                continue;
            }
            let e = (j + s) % 16;
            if e < 8 {
                out.c[e] = self.c[j].clone();
            } else {
                out.c[e - 8] = -self.c[j].clone();
            }
        }
        out
    }

    pub fn mul_i_pow(&self, k: u8) -> Self {
        self.mul_zeta(4 * (k % 4) as i64)
    }

    /// The field automorphism `ζ -> ζ^k` for odd `k`.
    pub fn galois(&self, k: i64) -> Self {
        assert!(k % 2 != 0, "galois automorphisms need odd k");
        let mut out = Self::zero();
        for j in 0..8 {
            if self.c[j].is_zero() {
                continue;
            }
            let e = (j as i64 * k).rem_euclid(16) as usize;
            if e < 8 {
                out.c[e] += &self.c[j];
            } else {
                out.c[e - 8] -= &self.c[j];
            }
        }
        out
    }

    /// Complex conjugation, `ζ -> ζ^{-1} = -ζ^7`.
    pub fn conj(&self) -> Self {
        self.galois(15)
    }

    /// `|z|^2 = z · conj(z)`, an element of the real subfield.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// The absolute field norm, the product of all eight conjugates.
    pub fn field_norm(&self) -> BigRational {
        let mut acc = self.clone();
        for k in (3..16).step_by(2) {
            acc = &acc * &self.galois(k);
        }
        acc.as_rational()
            .cloned()
            .expect("field norm is rational")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut others = Self::one();
        for k in (3..16).step_by(2) {
            others = &others * &self.galois(k);
        }
        let norm = (self * &others)
            .as_rational()
            .cloned()
            .expect("field norm is rational");
        Some(others.scale(&norm.recip()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign of the real part, decided exactly.
    ///
    /// The real part is `a_0 + sum_j a_j cos(jπ/8)`. After clearing
    /// denominators it is enclosed in an interval with fixed-point bounds on
    /// `√2` and `√(2 ± √2)`; precision doubles until the interval excludes
    /// zero. An exact zero test runs first, so the loop terminates.
    pub fn real_sign(&self) -> Ordering {
        let re = self.real_part();
        if re.is_zero() {
            return Ordering::Equal;
        }
        let den = re.c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let a: Vec<BigInt> = re.c.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let mut prec = 64u64;
        loop {
            let (lo, hi) = cos_enclosures(prec);
            let scale = BigInt::one() << prec;
            let mut sum_lo = &a[0] * &scale;
            let mut sum_hi = sum_lo.clone();
            for j in 1..8 {
                if a[j].is_zero() {
                    continue;
                }
                let (l, h) = (&lo[j], &hi[j]);
                if a[j].is_positive() {
                    sum_lo += &a[j] * l;
                    sum_hi += &a[j] * h;
                } else {
                    sum_lo += &a[j] * h;
                    sum_hi += &a[j] * l;
                }
            }
            if sum_lo.is_positive() {
                return Ordering::Greater;
            }
            if sum_hi.is_negative() {
                return Ordering::Less;
            }
            prec *= 2;
        }
    }

    /// `(z + conj z) / 2`.
    pub fn real_part(&self) -> Self {
        (self + &self.conj()).scale(&rat(1, 2))
    }

    /// Exact comparison of real parts.
    pub fn real_cmp(&self, other: &Self) -> Ordering {
        (self - other).real_sign()
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let v = rational_to_f64(q);
            let angle = j as f64 * std::f64::consts::PI / 8.0;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    pub fn to_hp(&self) -> HpComplex {
        let table = hp_zeta_table();
        let mut acc = HpComplex::zero();
        for (j, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let v = float_rational(q, PRECISION);
            acc = &acc + &HpComplex::new(&v * &table[j].0, &v * &table[j].1);
        }
        acc
    }

    /// Coefficients as `"p/q"` strings (integers are written as `"p/1"`).
    pub fn to_strings(&self) -> [String; 8] {
        std::array::from_fn(|j| format!("{}/{}", self.c[j].numer(), self.c[j].denom()))
    }

    pub fn from_strings<S: AsRef<str>>(parts: &[S]) -> Result<Self> {
        if parts.len() != 8 {
            return Err(Error::Parse(format!(
                "cyclotomic coefficient needs 8 rationals, got {}",
                parts.len()
            )));
        }
        let mut z = Self::zero();
        for (j, s) in parts.iter().enumerate() {
            z.c[j] = parse_rational(s.as_ref())?;
        }
        Ok(z)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; shift both down
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Lower and upper bounds on `2^prec · cos(jπ/8)` for `j = 0..8`.
fn cos_enclosures(prec: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let one = BigInt::one() << prec;
    let four_p = BigInt::one() << (2 * prec);
    // floor(√2 · 2^p)
    let s2_lo = (&four_p * 2u32).sqrt();
    let s2_hi = &s2_lo + 1u32;
    // √(2 ± √2) · 2^p, with √2 enclosed as above
    let sq = |v: BigInt| v.sqrt();
    let plus_lo = sq(&four_p * 2u32 + &s2_lo * &one);
    let plus_hi = sq(&four_p * 2u32 + &s2_hi * &one) + 1u32;
    let minus_lo = sq(&four_p * 2u32 - &s2_hi * &one);
    let minus_hi = sq(&four_p * 2u32 - &s2_lo * &one) + 1u32;
    let half_floor = |v: &BigInt| v >> 1u32;
    let half_ceil = |v: &BigInt| (v + 1u32) >> 1u32;
    // cos(π/8) = √(2+√2)/2, cos(π/4) = √2/2, cos(3π/8) = √(2-√2)/2
    let c1 = (half_floor(&plus_lo), half_ceil(&plus_hi));
    let c2 = (half_floor(&s2_lo), half_ceil(&s2_hi));
    let c3 = (half_floor(&minus_lo), half_ceil(&minus_hi));
    let z = BigInt::zero();
    let lo = vec![
        one.clone(),
        c1.0.clone(),
        c2.0.clone(),
        c3.0.clone(),
        z.clone(),
        -c3.1.clone(),
        -c2.1.clone(),
        -c1.1.clone(),
    ];
    let hi = vec![one, c1.1.clone(), c2.1, c3.1, z, -c3.0, -c2.0.clone(), -c1.0];
    (lo, hi)
}

fn hp_zeta_table() -> &'static [(Float, Float); 8] {
    static TABLE: OnceLock<[(Float, Float); 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let p = PRECISION + 32;
        let two = float_from_i64(2, p);
        let s2 = two.sqrt();
        let c1 = (&two + &s2).sqrt() / &two;
        let c3 = (&two - &s2).sqrt() / &two;
        let c2 = &s2 / &two;
        let z = float_from_i64(0, p);
        let o = float_from_i64(1, p);
        // cos(jπ/8), sin(jπ/8)
        let cos = [
            o.clone(),
            c1.clone(),
            c2.clone(),
            c3.clone(),
            z.clone(),
            -c3.clone(),
            -c2.clone(),
            -c1.clone(),
        ];
        let sin = [z, c3.clone(), c2.clone(), c1.clone(), o, c1, c2, c3];
        std::array::from_fn(|j| {
            (
                cos[j].clone().with_precision(PRECISION).value(),
                sin[j].clone().with_precision(PRECISION).value(),
            )
        })
    })
}

impl Default for CycloNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, o: &CycloNumber) -> CycloNumber {
        CycloNumber {
            c: std::array::from_fn(|j| &self.c[j] + &o.c[j]),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: &CycloNumber) -> CycloNumber {
        CycloNumber {
            c: std::array::from_fn(|j| &self.c[j] - &o.c[j]),
        }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, o: &CycloNumber) -> CycloNumber {
        let mut out = CycloNumber::zero();
        for i in 0..8 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if o.c[j].is_zero() {
                    continue;
                }
                let p = &self.c[i] * &o.c[j];
                if i + j < 8 {
                    out.c[i + j] += p;
                } else {
                    out.c[i + j - 8] -= p;
                }
            }
        }
        out
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            c: std::array::from_fn(|j| -self.c[j].clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: CycloNumber) -> CycloNumber {
                (&self).$m(&o)
            }
        }
        impl $atr<&CycloNumber> for CycloNumber {
            fn $am(&mut self, o: &CycloNumber) {
                *self = (&*self).$m(o);
            }
        }
    };
}

forward_owned!(Add, add, AddAssign, add_assign);
forward_owned!(Sub, sub, SubAssign, sub_assign);
forward_owned!(Mul, mul, MulAssign, mul_assign);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, q) in self.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "ζ^{j}")?,
                (_, false) => write!(f, "{mag}·ζ^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber({self})")
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for CycloNumber {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyclo() -> impl Strategy<Value = CycloNumber> {
        proptest::collection::vec((-50i64..=50, 1i64..=12), 8).prop_map(|v| {
            CycloNumber::from_coeffs(std::array::from_fn(|j| rat(v[j].0, v[j].1)))
        })
    }

    fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
    }

    #[test]
    fn named_constants() {
        let (c, _) = CycloNumber::cos_pi_8().to_c64();
        let (s, _) = CycloNumber::sin_pi_8().to_c64();
        assert!((c - (std::f64::consts::PI / 8.0).cos()).abs() < 1e-15);
        assert!((s - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
        assert_eq!(CycloNumber::zeta(8), CycloNumber::from_int(-1));
        assert_eq!(CycloNumber::i() * CycloNumber::i(), CycloNumber::from_int(-1));
        assert_eq!(CycloNumber::sqrt2() * CycloNumber::sqrt2(), CycloNumber::from_int(2));
        let c = CycloNumber::cos_pi_8();
        let s = CycloNumber::sin_pi_8();
        assert_eq!(&c * &c + &s * &s, CycloNumber::one());
    }

    #[test]
    fn unit_roots_have_unit_norm() {
        for k in 0..16 {
            assert_eq!(CycloNumber::zeta(k).norm_sqr(), CycloNumber::one());
        }
    }

    #[test]
    fn real_sign_of_known_values() {
        let c = CycloNumber::cos_pi_8();
        let s = CycloNumber::sin_pi_8();
        assert_eq!(c.real_cmp(&s), Ordering::Greater);
        assert_eq!(s.real_sign(), Ordering::Greater);
        assert_eq!((-&s).real_sign(), Ordering::Less);
        // √2 - 1.41421356 > 0, √2 - 1.41421357 < 0
        let r2 = CycloNumber::sqrt2();
        assert_eq!((&r2 - &CycloNumber::from(rat(141421356, 100000000))).real_sign(), Ordering::Greater);
        assert_eq!((&r2 - &CycloNumber::from(rat(141421357, 100000000))).real_sign(), Ordering::Less);
        assert_eq!(CycloNumber::zero().real_sign(), Ordering::Equal);
    }

    #[test]
    fn real_sign_near_cancellation() {
        // tan(π/8) = √2 - 1 against a 40-digit rational approximation
        let eta = CycloNumber::sqrt2() - CycloNumber::one();
        let approx: BigRational = parse_rational(
            "4142135623730950488016887242096980785696/10000000000000000000000000000000000000000",
        )
        .unwrap();
        assert_eq!(eta.real_cmp(&CycloNumber::from(approx.clone())), Ordering::Greater);
        let above = approx + rat(1, 1) / BigRational::from_integer(BigInt::from(10).pow(40));
        assert_eq!(eta.real_cmp(&CycloNumber::from(above)), Ordering::Less);
    }

    #[test]
    fn string_roundtrip() {
        let z = CycloNumber::cos_pi_8() + CycloNumber::i().scale(&rat(-3, 7));
        let s = z.to_strings();
        assert_eq!(s[0], "0/1");
        assert_eq!(CycloNumber::from_strings(&s).unwrap(), z);
        assert!(CycloNumber::from_strings(&["1/0"; 8]).is_err());
        assert!(CycloNumber::from_strings(&["1"; 7]).is_err());
    }

    proptest! {
        #[test]
        fn mul_is_associative(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn conj_distributes(a in arb_cyclo(), b in arb_cyclo()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }

        #[test]
        fn norm_is_real_and_nonnegative(a in arb_cyclo()) {
            let n = a.norm_sqr();
            prop_assert!(n.is_real());
            prop_assert_ne!(n.real_sign(), Ordering::Less);
        }

        #[test]
        fn inverse(a in arb_cyclo()) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }

        #[test]
        fn float_embedding_matches(a in arb_cyclo(), b in arb_cyclo()) {
            let p = &a * &b;
            let (ar, ai) = a.to_c64();
            let (br, bi) = b.to_c64();
            prop_assert!(close(p.to_c64(), (ar * br - ai * bi, ar * bi + ai * br), 1e-9));
            let hp = a.to_hp().to_f64();
            prop_assert!(close(hp, a.to_c64(), 1e-12));
        }

        #[test]
        fn real_sign_agrees_with_float(a in arb_cyclo()) {
            let re = a.to_c64().0;
            prop_assume!(re.abs() > 1e-9);
            let expected = if re > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(a.real_sign(), expected);
        }
    }

    #[test]
    fn float_embedding_10k_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10_000 {
            let z = CycloNumber::from_coeffs(std::array::from_fn(|_| {
                rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000))
            }));
            let hp = z.to_hp();
            let (re, im) = z.to_c64();
            let (hr, hi) = hp.to_f64();
            assert!((re - hr).abs() <= 1e-12 * (1.0 + re.abs()));
            assert!((im - hi).abs() <= 1e-12 * (1.0 + im.abs()));
        }
    }
}
