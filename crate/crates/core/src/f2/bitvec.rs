use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// Largest ambient dimension a [`BitVector`] can hold.
#[cfg(not(feature = "dim-512"))]
pub const MAX_DIM: usize = 256;
/// Largest ambient dimension a [`BitVector`] can hold.
#[cfg(feature = "dim-512")]
pub const MAX_DIM: usize = 512;

const WORDS: usize = MAX_DIM / 64;

/// A vector in F2^n, packed into a fixed number of machine words.
///
/// Coordinate `i` (0-based) is the coordinate `x_{i+1}`; it lives
/// in bit `i % 64` of word `i / 64`. Bits at positions `>= n` are always zero,
/// so equality, hashing and weight never see stale data.
///
/// The type is `Copy`: at the default capacity it is 34 bytes of payload and
/// the hot loops of the witness engine move vectors around freely.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    n: u16,
    words: [u64; WORDS],
}

impl BitVector {
    /// The zero vector of F2^n.
    ///
    /// # Panics
    /// Panics if `n > MAX_DIM`; use [`BitVector::try_zeros`] for a fallible version.
    pub fn zeros(n: usize) -> Self {
        Self::try_zeros(n).expect("dimension exceeds MAX_DIM")
    }

    pub fn try_zeros(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_DIM });
        }
        Ok(Self {
            n: n as u16,
            words: [0; WORDS],
        })
    }

    /// The all-ones vector `1^n`.
    pub fn ones(n: usize) -> Self {
        let mut v = Self::zeros(n);
        for w in 0..n / 64 {
            v.words[w] = u64::MAX;
        }
        if n % 64 != 0 {
            v.words[n / 64] = (1u64 << (n % 64)) - 1;
        }
        v
    }

    /// The standard basis vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.set(i, true);
        v
    }

    /// Builds a vector from the low `n` bits of `bits` (requires `n <= 64`).
    pub fn from_u64(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "from_u64 needs n <= 64");
        let mut v = Self::zeros(n);
        v.words[0] = if n == 64 { bits } else { bits & ((1u64 << n) - 1) };
        v
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, ones: I) -> Self {
        let mut v = Self::zeros(n);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len(), "coordinate {i} out of range for n={}", self.n);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len(), "coordinate {i} out of range for n={}", self.n);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len(), "coordinate {i} out of range for n={}", self.n);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight `|x|`.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance `|x + y|`.
    #[inline]
    pub fn distance(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// The inner product `<x, y>` over F2.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The low 64 coordinates packed as an integer.
    #[inline]
    pub fn low_word(&self) -> u64 {
        self.words[0]
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Restriction `x|_S` to the coordinates in `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Embeds a short vector into F2^n, placing coordinate `j` at `indices[j]`
    /// and zero everywhere else.
    pub fn embed(&self, n: usize, indices: &[usize]) -> Self {
        assert_eq!(self.len(), indices.len());
        let mut out = Self::zeros(n);
        for i in self.iter_ones() {
            out.set(indices[i], true);
        }
        out
    }

    /// Lowercase hex of the integer `sum_i x_{i+1} 2^i`, with a `0x` prefix.
    pub fn to_hex(&self) -> String {
        let top = self.words.iter().rposition(|&w| w != 0);
        match top {
            None => "0x0".to_string(),
            Some(t) => {
                let mut s = format!("0x{:x}", self.words[t]);
                for w in self.words[..t].iter().rev() {
                    s.push_str(&format!("{w:016x}"));
                }
                s
            }
        }
    }

    /// Parses the format written by [`BitVector::to_hex`]; the `0x` prefix is optional.
    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        let digits = s.trim();
        let digits = digits
            .strip_prefix("0x")
            .or_else(|| digits.strip_prefix("0X"))
            .unwrap_or(digits);
        if digits.is_empty() {
            return Err(Error::Parse(format!("empty hex bitmask {s:?}")));
        }
        let mut v = Self::try_zeros(n)?;
        for (pos, ch) in digits.chars().rev().enumerate() {
            let d = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?} in {s:?}")))?
                as u64;
            for b in 0..4 {
                if (d >> b) & 1 == 1 {
                    let i = pos * 4 + b;
                    if i >= n {
                        return Err(Error::Parse(format!(
                            "bitmask {s} has a bit beyond dimension {n}"
                        )));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    fn check_same_len(&self, other: &Self) {
        assert_eq!(self.n, other.n, "BitVector length mismatch");
    }
}

impl BitXor for BitVector {
    type Output = BitVector;
    fn bitxor(mut self, rhs: Self) -> Self {
        self ^= rhs;
        self
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        *self ^ *rhs
    }
}

impl BitXorAssign for BitVector {
    fn bitxor_assign(&mut self, rhs: Self) {
        self.check_same_len(&rhs);
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= b;
        }
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        *self ^= *rhs;
    }
}

impl BitAnd for BitVector {
    type Output = BitVector;
    fn bitand(mut self, rhs: Self) -> Self {
        self &= rhs;
        self
    }
}

impl BitAndAssign for BitVector {
    fn bitand_assign(&mut self, rhs: Self) {
        self.check_same_len(&rhs);
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a &= b;
        }
    }
}

/// Vectors are ordered by length, then by the integer they encode.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints coordinates `x_1 x_2 ... x_n` left to right.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weight_counts_set_coordinates() {
        let v = BitVector::from_indices(130, [0, 5, 64, 129]);
        assert_eq!(v.weight(), 4);
        assert_eq!(BitVector::ones(130).weight(), 130);
        assert_eq!(BitVector::zeros(7).weight(), 0);
    }

    #[test]
    fn hex_matches_coordinate_convention() {
        // x_1 = 1, x_3 = 1  ->  0b101
        let v = BitVector::from_indices(4, [0, 2]);
        assert_eq!(v.to_hex(), "0x5");
        assert_eq!(BitVector::from_hex(4, "5").unwrap(), v);
        assert!(BitVector::from_hex(2, "0x5").is_err());
        assert!(BitVector::from_hex(4, "0xg").is_err());
    }

    #[test]
    fn restrict_and_embed_are_inverse_on_support() {
        let v = BitVector::from_indices(10, [1, 4, 9]);
        let idx = [1, 4, 7, 9];
        let r = v.restrict(&idx);
        assert_eq!(r.to_string(), "1101");
        assert_eq!(r.embed(10, &idx), v);
    }

    #[test]
    fn rejects_oversized_dimension() {
        assert!(BitVector::try_zeros(MAX_DIM + 1).is_err());
    }

    proptest! {
        #[test]
        fn hex_roundtrip(n in 1usize..=MAX_DIM, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = BitVector::from_indices(n, (0..n).filter(|_| rng.gen::<bool>()));
            prop_assert_eq!(BitVector::from_hex(n, &v.to_hex()).unwrap(), v);
        }

        #[test]
        fn distance_is_weight_of_sum(a in any::<u64>(), b in any::<u64>()) {
            let x = BitVector::from_u64(64, a);
            let y = BitVector::from_u64(64, b);
            prop_assert_eq!(x.distance(&y), (x ^ y).weight());
            prop_assert_eq!(x.dot(&y), (a & b).count_ones() % 2 == 1);
        }
    }
}
