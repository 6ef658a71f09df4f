use std::collections::BTreeSet;

use super::boolean::{check_arity, BooleanFunction};
use crate::error::Result;

/// A multilinear polynomial over F2 in `m` variables, stored as the set of
/// its monomials (bit `i` of a mask is `x_{i+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Polynomial {
    m: usize,
    monomials: BTreeSet<u32>,
}

impl F2Polynomial {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            monomials: BTreeSet::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        Self::from_monomials(m, [0])
    }

    /// Repeated monomials cancel in pairs.
    pub fn from_monomials(m: usize, monomials: impl IntoIterator<Item = u32>) -> Self {
        let mut p = Self::zero(m);
        for mono in monomials {
            p.toggle(mono);
        }
        p
    }

    pub fn var(m: usize, i: usize) -> Self {
        Self::from_monomials(m, [1 << i])
    }

    fn toggle(&mut self, mono: u32) {
        if !self.monomials.remove(&mono) {
            self.monomials.insert(mono);
        }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Largest monomial size; `0` for constants including the zero polynomial.
    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// Parity of the monomials contained in `x`.
    pub fn eval(&self, x: u32) -> bool {
        self.monomials.iter().filter(|&&mono| mono & x == mono).count() % 2 == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &mono in &other.monomials {
            out.toggle(mono);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m.max(other.m));
        for &a in &self.monomials {
            for &b in &other.monomials {
                out.toggle(a | b);
            }
        }
        out
    }

    /// Truth table by the zeta transform.
    pub fn truth_table(&self) -> Result<BooleanFunction> {
        check_arity(self.m)?;
        let mut t = vec![0u8; 1 << self.m];
        for &mono in &self.monomials {
            t[mono as usize] ^= 1;
        }
        subset_xor_transform(&mut t, self.m);
        BooleanFunction::from_fn(self.m, |i| t[i as usize] == 1)
    }
}

/// In place `t[S] <- XOR_{T ⊆ S} t[T]`; it is its own inverse over F2.
fn subset_xor_transform(t: &mut [u8], m: usize) {
    for i in 0..m {
        let bit = 1usize << i;
        for s in 0..t.len() {
            if s & bit != 0 {
                t[s] ^= t[s ^ bit];
            }
        }
    }
}

/// Algebraic normal form by the Möbius transform.
pub fn truth_table_to_polynomial(f: &BooleanFunction) -> F2Polynomial {
    let m = f.arity();
    let mut t: Vec<u8> = (0..1u32 << m).map(|i| f.get(i) as u8).collect();
    subset_xor_transform(&mut t, m);
    F2Polynomial {
        m,
        monomials: (0..t.len() as u32).filter(|&s| t[s as usize] == 1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parity_and_and() {
        let parity = BooleanFunction::from_fn(5, |i| i.count_ones() % 2 == 1).unwrap();
        let p = truth_table_to_polynomial(&parity);
        assert_eq!(p.monomials().collect::<Vec<_>>(), vec![1, 2, 4, 8, 16]);
        let and = BooleanFunction::from_fn(5, |i| i == 31).unwrap();
        let a = truth_table_to_polynomial(&and);
        assert_eq!(a.monomials().collect::<Vec<_>>(), vec![31]);
        assert_eq!(a.degree(), 5);
    }

    #[test]
    fn product_of_affine_factors() {
        // (x1 + 1)(x2 + 1) is 1 exactly at 00
        let f1 = F2Polynomial::var(2, 0).add(&F2Polynomial::one(2));
        let f2 = F2Polynomial::var(2, 1).add(&F2Polynomial::one(2));
        let p = f1.mul(&f2);
        assert_eq!(p.truth_table().unwrap().to_bits(), vec![true, false, false, false]);
        assert_eq!(F2Polynomial::zero(3).degree(), 0);
    }

    proptest! {
        #[test]
        fn round_trip(bits in proptest::collection::vec(any::<bool>(), 1024)) {
            let f = BooleanFunction::from_bits(&bits).unwrap();
            let p = truth_table_to_polynomial(&f);
            for i in 0..1024u32 {
                prop_assert_eq!(p.eval(i), bits[i as usize]);
            }
            prop_assert_eq!(p.truth_table().unwrap(), f);
        }
    }
}
