//! Binomial layer masses `W_k = C(n,k) p^k (1-p)^{n-k}` in exact arithmetic.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::boolean::binomial;
use super::ser;
use crate::cyclo::rational_to_f64;
use crate::error::{Error, Result};
use crate::prob::Probability;

/// Digits of the rational stand-in for an irrational `p`.
pub const P_DIGITS: u32 = 30;

/// `W_k` as an unreduced fraction `(num, den)`.
///
/// With `p = a/d`, `W_k = C(n,k) a^k (d-a)^{n-k} / d^n`. Skipping the gcd
/// keeps large `n` cheap.
pub fn layer_mass_parts(n: usize, p: &BigRational, k: usize) -> Result<(BigInt, BigInt)> {
    if k > n {
        return Err(Error::Precondition(format!("layer {k} out of range 0..={n}")));
    }
    check_p(p)?;
    let a = p.numer();
    let d = p.denom();
    let c = BigInt::from(binomial(n, k));
    let num = c * a.pow(k as u32) * (d - a).pow((n - k) as u32);
    Ok((num, d.pow(n as u32)))
}

/// `W_k` as a reduced rational.
pub fn binomial_layer_mass(n: usize, p: &BigRational, k: usize) -> Result<BigRational> {
    let (num, den) = layer_mass_parts(n, p, k)?;
    Ok(BigRational::new(num, den))
}

fn check_p(p: &BigRational) -> Result<()> {
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::Precondition(format!("p = {p} must lie in (0, 1)")));
    }
    Ok(())
}

/// `W_{⌈pn⌉} √n` against the band `[lo, hi]`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralMassReport {
    pub n: usize,
    #[serde(serialize_with = "ser::display")]
    pub p: Probability,
    #[serde(serialize_with = "ser::frac")]
    pub p_rational: BigRational,
    #[serde(serialize_with = "ser::frac")]
    pub substitution_error: BigRational,
    pub k: usize,
    #[serde(serialize_with = "ser::frac")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser::frac")]
    pub hi: BigRational,
    /// Convenience value of `W_k √n`.
    pub scaled_mass_f64: f64,
    /// `1/√(2π p(1-p))`.
    pub gaussian_f64: f64,
    pub within: bool,
}

/// Checks `lo <= W_{⌈pn⌉} √n <= hi` by comparing `W² n` with `lo²`, `hi²`.
///
/// `k = ⌈pn⌉` is computed from the exact `p`; the mass uses its rational
/// approximation to `P_DIGITS` digits.
pub fn central_mass_check(n: usize, p: &Probability, lo: &BigRational, hi: &BigRational) -> Result<CentralMassReport> {
    let (q, err) = p.rational_approx(P_DIGITS);
    let k = p.ceil_times(n as u64);
    if k < 0 || k as usize > n {
        return Err(Error::Precondition(format!("⌈pn⌉ = {k} out of range")));
    }
    let k = k as usize;
    let (num, den) = layer_mass_parts(n, &q, k)?;
    // W² n = num² n / den²
    let lhs = &num * &num * BigInt::from(n);
    let den2 = &den * &den;
    let ge = |b: &BigRational| (&lhs * b.denom()).cmp(&(b.numer() * &den2)) != Ordering::Less;
    let le = |b: &BigRational| (&lhs * b.denom()).cmp(&(b.numer() * &den2)) != Ordering::Greater;
    let within = ge(&(lo * lo)) && le(&(hi * hi));
    let w = rational_to_f64(&BigRational::new_raw(num, den));
    let pf = p.to_f64();
    Ok(CentralMassReport {
        n,
        p: p.clone(),
        p_rational: q,
        substitution_error: err,
        k,
        lo: lo.clone(),
        hi: hi.clone(),
        scaled_mass_f64: w * (n as f64).sqrt(),
        gaussian_f64: 1.0 / (2.0 * std::f64::consts::PI * pf * (1.0 - pf)).sqrt(),
        within,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub n: usize,
    pub c: i64,
    #[serde(serialize_with = "ser::display")]
    pub p: Probability,
    #[serde(serialize_with = "ser::frac")]
    pub p_rational: BigRational,
    #[serde(serialize_with = "ser::frac")]
    pub substitution_error: BigRational,
    /// `⌈pn⌉`.
    pub k1: usize,
    /// `⌈pn + C√n⌉`.
    pub k2: usize,
    /// Convenience value of `W_{k1} / W_{k2}`.
    pub ratio_f64: f64,
    /// Convenience value of `1.1 e^{C²/p + C²/(1-p)}`.
    pub bound_f64: f64,
    /// `ratio <= 1.1 S` where `S` is a rational lower bound on the exponential.
    pub holds: bool,
}

/// Terms of the Taylor series used for the lower bound on `e^X`.
const TAYLOR_TERMS: usize = 400;

/// `Σ_{j < TAYLOR_TERMS} x^j / j!`, a lower bound on `e^x` for `x >= 0`.
fn exp_lower(x: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for j in 1..=TAYLOR_TERMS {
        sum += &term;
        term = term * x / BigRational::from_integer(j.into());
    }
    sum
}

/// `⌈pn + C√n⌉` for `p` given exactly.
fn shifted_index(n: usize, p: &Probability, c: i64) -> Result<i64> {
    let root = n.sqrt();
    if root * root == n {
        return Ok(p.ceil_times(n as u64) + c * root as i64);
    }
    let x = p.to_f64() * n as f64 + c as f64 * (n as f64).sqrt();
    if (x - x.round()).abs() < 1e-6 {
        return Err(Error::Precondition(format!(
            "pn + C√n = {x} is too close to an integer to round reliably"
        )));
    }
    Ok(x.ceil() as i64)
}

/// Compares `W_{⌈pn⌉} / W_{⌈pn + C√n⌉}` with `1.1 e^{C²/p + C²/(1-p)}`.
///
/// Works for either sign of `C`. Both masses use the rational stand-in for
/// `p`, so their ratio is `C(n,k1)/C(n,k2) · (a/(d-a))^{k1-k2}`; the
/// exponential is bounded below by a truncated Taylor sum at a rounded-down
/// exponent, which keeps the comparison conservative.
pub fn binomial_ratio_check(n: usize, p: &Probability, c: i64) -> Result<RatioReport> {
    let (q, err) = p.rational_approx(P_DIGITS);
    let k1 = p.ceil_times(n as u64);
    let k2 = shifted_index(n, p, c)?;
    for k in [k1, k2] {
        if k < 0 || k as usize > n {
            return Err(Error::Precondition(format!("layer index {k} out of range 0..={n}")));
        }
    }
    let (k1, k2) = (k1 as usize, k2 as usize);
    check_p(&q)?;
    let a = q.numer().clone();
    let b = q.denom() - &a;
    let (c1, c2) = (BigInt::from(binomial(n, k1)), BigInt::from(binomial(n, k2)));
    // ratio = num / den
    let (num, den) = match k1.cmp(&k2) {
        Ordering::Less => {
            let e = (k2 - k1) as u32;
            (c1 * b.pow(e), c2 * a.pow(e))
        }
        Ordering::Greater => {
            let e = (k1 - k2) as u32;
            (c1 * a.pow(e), c2 * b.pow(e))
        }
        Ordering::Equal => (BigInt::one(), BigInt::one()),
    };

    let c2r = BigRational::from_integer((c * c).into());
    let x = &c2r / &q + &c2r / (BigRational::one() - &q);
    let scale = BigInt::from(10).pow(P_DIGITS);
    let x_lo = BigRational::new((x.numer() * &scale).div_floor(x.denom()), scale);
    let s = exp_lower(&x_lo);
    // num/den <= (11/10) s
    let holds = &num * BigInt::from(10) * s.denom() <= &den * BigInt::from(11) * s.numer();

    let ratio_f64 = rational_to_f64(&BigRational::new_raw(num, den));
    let pf = p.to_f64();
    let cf = (c * c) as f64;
    Ok(RatioReport {
        n,
        c,
        p: p.clone(),
        p_rational: q,
        substitution_error: err,
        k1,
        k2,
        ratio_f64,
        bound_f64: 1.1 * (cf / pf + cf / (1.0 - pf)).exp(),
        holds,
    })
}

/// `Σ_k W_k` for `k` in `range`, reduced.
pub fn mass_sum(n: usize, p: &BigRational, range: impl IntoIterator<Item = usize>) -> Result<BigRational> {
    let mut num = BigInt::zero();
    let den = p.denom().pow(n as u32);
    for k in range {
        let (a, d) = layer_mass_parts(n, p, k)?;
        debug_assert_eq!(d, den);
        num += a;
    }
    Ok(BigRational::new(num, den))
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn fair_coin_middle() {
        assert_eq!(binomial_layer_mass(2, &r(1, 2), 1).unwrap(), r(1, 2));
        assert!(binomial_layer_mass(2, &r(1, 2), 3).is_err());
        assert!(binomial_layer_mass(2, &r(3, 2), 1).is_err());
    }

    #[test]
    fn masses_sum_to_one() {
        for n in [1, 7, 50, 200] {
            for p in [r(1, 3), r(3, 10), r(17, 101)] {
                assert_eq!(mass_sum(n, &p, 0..=n).unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn central_mass_n1000() {
        let rep = central_mass_check(1000, &Probability::h(), &r(9, 10), &r(14, 10)).unwrap();
        assert!(rep.within);
        assert_eq!(rep.k, 147);
        // local limit: W_k √n ≈ 1/√(2πp(1-p)) near the mean
        assert!((rep.scaled_mass_f64 - rep.gaussian_f64).abs() < 0.05);
        let tight = central_mass_check(1000, &Probability::h(), &r(12, 10), &r(14, 10)).unwrap();
        assert!(!tight.within);
    }

    #[test]
    fn ratio_is_one_at_zero_shift() {
        let rep = binomial_ratio_check(10_000, &Probability::h(), 0).unwrap();
        assert_eq!(rep.k1, rep.k2);
        assert_eq!(rep.ratio_f64, 1.0);
        assert!(rep.holds);
    }

    /// Float oracle: `ln W_k` via `ln Γ`-free summation of logs.
    fn ln_mass(n: usize, p: f64, k: usize) -> f64 {
        let ln_c: f64 = (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum();
        ln_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()
    }

    #[test]
    fn ratio_n10000() {
        let p = Probability::h();
        let pf = p.to_f64();
        for c in [1, 2, -1, -2] {
            let rep = binomial_ratio_check(10_000, &p, c).unwrap();
            assert!(rep.holds, "C = {c}");
            assert_eq!(rep.k2 as i64, rep.k1 as i64 + 100 * c);
            let oracle = (ln_mass(10_000, pf, rep.k1) - ln_mass(10_000, pf, rep.k2)).exp();
            assert!((rep.ratio_f64 / oracle - 1.0).abs() < 1e-9);
            assert!(rep.ratio_f64 <= rep.bound_f64);
        }
    }

    #[test]
    fn out_of_range_shift() {
        assert!(binomial_ratio_check(100, &Probability::h(), -3).is_err());
    }

    #[test]
    fn exp_lower_is_below() {
        let x = r(8, 1);
        let s = rational_to_f64(&exp_lower(&x));
        assert!(s <= 8f64.exp() && s > 8f64.exp() * (1.0 - 1e-12));
    }

    proptest! {
        #[test]
        fn mass_matches_float(n in 1usize..60, k_frac in 0.0f64..1.0, num in 1i64..99) {
            let k = (k_frac * n as f64) as usize;
            let p = r(num, 100);
            let w = rational_to_f64(&binomial_layer_mass(n, &p, k).unwrap());
            let oracle = ln_mass(n, num as f64 / 100.0, k).exp();
            prop_assert!((w - oracle).abs() <= 1e-10 * oracle.max(1e-300));
        }
    }
}
