use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::prob::Probability;

/// Largest arity stored as a dense truth table.
pub const TABLE_GUARD: usize = 24;

pub(crate) fn check_arity(m: usize) -> Result<()> {
    if m > TABLE_GUARD {
        Err(Error::Guard {
            what: "truth-table arity",
            value: m,
            guard: TABLE_GUARD,
        })
    } else {
        Ok(())
    }
}

/// A function `F2^n -> {0,1}` that can be evaluated pointwise and whose
/// disagreement with a threshold can be counted layer by layer.
pub trait CubeFunction {
    fn n(&self) -> usize;
    fn eval(&self, x: &BitVector) -> bool;
    /// For each `k = 0..=n`, the number of weight-`k` points where the
    /// function differs from `[|x| >= k_star]`.
    fn layer_disagreements(&self, k_star: usize) -> Vec<BigUint>;
}

/// A dense truth table over `F2^m`; bit `i` of the index is `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    m: usize,
    table: Vec<u64>,
}

impl BooleanFunction {
    pub fn zeros(m: usize) -> Result<Self> {
        check_arity(m)?;
        Ok(Self {
            m,
            table: vec![0; (1usize << m).div_ceil(64)],
        })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut out = Self::zeros(m)?;
        for i in 0..1u32 << m {
            if f(i) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let m = bits.len().trailing_zeros() as usize;
        if bits.len() != 1 << m {
            return Err(Error::Precondition(format!(
                "truth table length {} is not a power of two",
                bits.len()
            )));
        }
        Self::from_fn(m, |i| bits[i as usize])
    }

    pub fn constant(m: usize, value: bool) -> Result<Self> {
        Self::from_fn(m, |_| value)
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: u32) -> bool {
        self.table[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u32, value: bool) {
        let w = &mut self.table[(i >> 6) as usize];
        if value {
            *w |= 1 << (i & 63);
        } else {
            *w &= !(1 << (i & 63));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.table.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of inputs where the two functions agree.
    pub fn agreement(&self, other: &Self) -> Result<u64> {
        crate::error::check_dim(self.m, other.m)?;
        let diff: u64 = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum();
        Ok(self.len() as u64 - diff)
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.table {
            *w = !*w;
        }
        if self.m < 6 {
            out.table[0] &= (1u64 << (1 << self.m)) - 1;
        }
        out
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..1u32 << self.m).map(|i| self.get(i)).collect()
    }
}

impl CubeFunction for BooleanFunction {
    fn n(&self) -> usize {
        self.m
    }

    fn eval(&self, x: &BitVector) -> bool {
        assert_eq!(x.len(), self.m, "point has wrong length");
        self.get(x.low_word() as u32)
    }

    fn layer_disagreements(&self, k_star: usize) -> Vec<BigUint> {
        let mut counts = vec![0u64; self.m + 1];
        for i in 0..1u32 << self.m {
            let k = i.count_ones() as usize;
            if self.get(i) != (k >= k_star) {
                counts[k] += 1;
            }
        }
        counts.into_iter().map(BigUint::from).collect()
    }
}

/// `[|x| >= k]` on `F2^m`.
pub fn threshold_at(m: usize, k: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(m, |i| i.count_ones() as usize >= k)
}

/// `THR(x) = [|x| >= ⌈pn⌉]`.
pub fn threshold_fn(n: usize, p: &Probability) -> Result<BooleanFunction> {
    threshold_at(n, p.ceil_times(n as u64) as usize)
}

/// `Maj_m(x) = [|x| >= m/2]`.
pub fn majority(m: usize) -> Result<BooleanFunction> {
    threshold_at(m, m.div_ceil(2))
}

/// `g(x̄) = f(x)` where `x` places `x̄` on the coordinates `keep` (in the
/// given order) and zeros elsewhere.
pub fn restrict<F: CubeFunction + ?Sized>(f: &F, keep: &[usize]) -> Result<BooleanFunction> {
    let n = f.n();
    if let Some(&bad) = keep.iter().find(|&&i| i >= n) {
        return Err(Error::Precondition(format!("coordinate {bad} outside 0..{n}")));
    }
    BooleanFunction::from_fn(keep.len(), |i| {
        let mut x = BitVector::zeros(n);
        for (a, &c) in keep.iter().enumerate() {
            if i >> a & 1 == 1 {
                x.set(c, true);
            }
        }
        f.eval(&x)
    })
}

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}
