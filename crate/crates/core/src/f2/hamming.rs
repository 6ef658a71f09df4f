use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::BitVector;
use crate::error::{Error, Result};
use crate::hp::{float_int, Float};

/// Largest pairwise Hamming distance, by a quadratic scan.
pub fn diameter(points: &[BitVector]) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::Precondition("diameter of an empty set".into()));
    }
    let mut best = 0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.distance(b));
        }
    }
    Ok(best)
}

/// `sum_{j <= k} C(n, j)`, the largest size of a set of diameter at most `2k`.
///
/// Requires `k < n / 2`.
pub fn kleitman_bound(n: usize, k: usize) -> Result<BigUint> {
    if 2 * k >= n {
        return Err(Error::Precondition(format!(
            "kleitman bound needs k < n/2, got n={n}, k={k}"
        )));
    }
    let mut sum = BigUint::zero();
    let mut term = BigUint::one();
    for j in 0..=k {
        if j > 0 {
            term = term * BigUint::from(n - j + 1) / BigUint::from(j);
        }
        sum += &term;
    }
    debug_assert_eq!(term, binomial(BigUint::from(n), BigUint::from(k)));
    Ok(sum)
}

/// `2^{H_2(k/n) n}` to `prec` bits, using the identity
/// `2^{H_2(k/n) n} = n^n / (k^k (n-k)^{n-k})`.
pub fn entropy_bound(n: usize, k: usize, prec: usize) -> Result<Float> {
    if k > n || n == 0 {
        return Err(Error::Precondition(format!("entropy bound needs 0 <= k <= n, n > 0; got n={n}, k={k}")));
    }
    let pow = |b: usize, e: usize| num_bigint::BigInt::from(b).pow(e as u32);
    let num = pow(n, n);
    let den = pow(k, k) * pow(n - k, n - k);
    Ok(float_int(&num, prec) / float_int(&den, prec))
}

/// The binary entropy `H_2(x) = -x log2 x - (1-x) log2(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// All points of weight at most `k` around `center` (requires `n <= 64`).
pub fn hamming_ball(center: &BitVector, k: usize) -> Vec<BitVector> {
    let n = center.len();
    assert!(n <= 64, "hamming_ball enumerates via u64 masks");
    let mut out = Vec::new();
    for w in 0..=k.min(n) {
        let mut comb: Vec<usize> = (0..w).collect();
        loop {
            let mut v = *center;
            for &i in &comb {
                v.flip(i);
            }
            out.push(v);
            // next combination in lexicographic order
            let mut i = w;
            while i > 0 && comb[i - 1] == n - w + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..w {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}
