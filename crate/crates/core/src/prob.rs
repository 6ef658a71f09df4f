//! Exact handling of the layer probability `p`.
//!
//! The magic targets have `p = (a - √s)/b` with `s` not a perfect square:
//! `sin²(π/8) = (2 - √2)/4` for H and `(3 - √3)/6` for R. Every integrality
//! question the threshold pipeline asks (`⌈pn⌉`, `⌊pn⌋`, window membership,
//! `⌈5√(2pn)⌉`) reduces to comparing `n·p` with a rational, which for such a
//! surd is decided by squaring integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclo::rational_to_f64;
use crate::error::{Error, Result};

/// A real probability in `(0, 1)`, either rational or of the form `(a - √s)/b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probability {
    Rational(BigRational),
    Surd { a: i64, s: i64, b: i64 },
}

impl Probability {
    pub fn rational(num: i64, den: i64) -> Self {
        Probability::Rational(BigRational::new(num.into(), den.into()))
    }

    /// `sin²(π/8)`.
    pub fn h() -> Self {
        Probability::Surd { a: 2, s: 2, b: 4 }
    }

    /// `sin²(β)` with `cos(2β) = 1/√3`.
    pub fn r() -> Self {
        Probability::Surd { a: 3, s: 3, b: 6 }
    }

    /// Sign of `n·p - x`.
    pub fn cmp_scaled(&self, n: u64, x: &BigRational) -> Ordering {
        match self {
            Probability::Rational(p) => (p * BigRational::from_integer(n.into())).cmp(x),
            Probability::Surd { a, s, b } => {
                if n == 0 {
                    return BigRational::zero().cmp(x);
                }
                // n p - x = (L - n√s)/b with L = n a - b x
                let n_big = BigRational::from_integer(n.into());
                let l = &n_big * BigRational::from_integer((*a).into())
                    - BigRational::from_integer((*b).into()) * x;
                if !l.is_positive() {
                    return Ordering::Less;
                }
                let lhs = &l * &l;
                let rhs = &n_big * &n_big * BigRational::from_integer((*s).into());
                lhs.cmp(&rhs)
            }
        }
    }

    fn cmp_int(&self, n: u64, k: i64) -> Ordering {
        self.cmp_scaled(n, &BigRational::from_integer(k.into()))
    }

    /// `⌈n p⌉`.
    pub fn ceil_times(&self, n: u64) -> i64 {
        let mut k = self.approx_times(n).ceil() as i64;
        while self.cmp_int(n, k) == Ordering::Greater {
            k += 1;
        }
        while k > 0 && self.cmp_int(n, k - 1) != Ordering::Greater {
            k -= 1;
        }
        k
    }

    /// `⌊n p⌋`.
    pub fn floor_times(&self, n: u64) -> i64 {
        let mut k = self.approx_times(n).floor() as i64;
        while self.cmp_int(n, k) == Ordering::Less {
            k -= 1;
        }
        while self.cmp_int(n, k + 1) != Ordering::Less {
            k += 1;
        }
        k
    }

    /// Smallest integer `w >= 0` with `w² >= c · n p`.
    pub fn ceil_sqrt_scaled(&self, n: u64, c: u64) -> i64 {
        let mut w = (c as f64 * self.approx_times(n)).sqrt().ceil() as i64;
        let fits = |w: i64| {
            let w2 = BigRational::from_integer((w * w).into()) / BigRational::from_integer(c.into());
            self.cmp_scaled(n, &w2) != Ordering::Greater
        };
        while !fits(w) {
            w += 1;
        }
        while w > 0 && fits(w - 1) {
            w -= 1;
        }
        w
    }

    /// Is `|k - n p| <= w`?
    pub fn within(&self, n: u64, k: i64, w: i64) -> bool {
        self.cmp_int(n, k - w) != Ordering::Less && self.cmp_int(n, k + w) != Ordering::Greater
    }

    pub fn approx(&self) -> f64 {
        match self {
            Probability::Rational(p) => rational_to_f64(p),
            Probability::Surd { a, s, b } => (*a as f64 - (*s as f64).sqrt()) / *b as f64,
        }
    }

    fn approx_times(&self, n: u64) -> f64 {
        self.approx() * n as f64
    }

    /// A rational within `10^{-digits}` of `p`, together with a bound on the
    /// substitution error.
    pub fn rational_approx(&self, digits: u32) -> (BigRational, BigRational) {
        match self {
            Probability::Rational(p) => (p.clone(), BigRational::zero()),
            Probability::Surd { a, s, b } => {
                let scale = BigInt::from(10).pow(digits);
                let root = (BigInt::from(*s) * &scale * &scale).sqrt();
                let sqrt_s = BigRational::new(root, scale.clone());
                let p = (BigRational::from_integer((*a).into()) - sqrt_s)
                    / BigRational::from_integer((*b).into());
                let err = BigRational::new(BigInt::one(), scale * BigInt::from(*b));
                (p, err)
            }
        }
    }

    /// Checks `0 < p < 1/2`.
    pub fn check_below_half(&self) -> Result<()> {
        let half = BigRational::new(1.into(), 2.into());
        let ok = self.cmp_scaled(1, &BigRational::zero()) == Ordering::Greater
            && self.cmp_scaled(1, &half) == Ordering::Less;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("p = {self} must satisfy 0 < p < 1/2")))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx()
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Rational(p) => write!(f, "{p}"),
            Probability::Surd { a, s, b } => write!(f, "({a} - sqrt({s}))/{b}"),
        }
    }
}

impl std::str::FromStr for Probability {
    type Err = Error;

    /// Accepts `a/b`, a decimal such as `0.3`, or `H` / `R` for the magic values.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "h" => Ok(Probability::h()),
            "R" | "r" => Ok(Probability::r()),
            t if t.contains('/') => Ok(Probability::Rational(crate::cyclo::parse_rational(t)?)),
            t => {
                let bad = || Error::Parse(format!("invalid probability {t:?}"));
                let (int, frac) = t.split_once('.').unwrap_or((t, ""));
                if !frac.chars().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                let digits = format!("{int}{frac}");
                let num: BigInt = digits.parse().map_err(|_| bad())?;
                let den = BigInt::from(10).pow(frac.len() as u32);
                Ok(Probability::Rational(BigRational::new(num, den)))
            }
        }
    }
}
