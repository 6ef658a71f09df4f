use std::collections::HashMap;

use num_bigint::BigUint;

use super::StabilizerFunction;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::f2::{AffineForm, AffineSubspace, BitVector, QuadraticForm};
use crate::scalar::Coefficient;

/// Largest `n` enumerated without an explicit opt-in.
pub const ENUMERATION_GUARD: usize = 3;

/// A stabilizer state up to a global scalar.
///
/// `key[x]` encodes the amplitude at `x` (index order, bit `i` of `x` is
/// `x_{i+1}`): `0` for zero, `1 + k` for `i^k`, after dividing by the first
/// nonzero amplitude. `function` is one stabilizer function with that
/// canonical vector up to a power of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerState {
    pub key: Vec<u8>,
    pub function: StabilizerFunction,
}

impl StabilizerState {
    /// The amplitude vector of `function` (not of the canonical key).
    pub fn amplitudes<C: Coefficient>(&self) -> Vec<C> {
        amplitude_codes(&self.function)
            .into_iter()
            .map(|c| match c {
                0 => C::zero(),
                c => C::one().mul_i_pow(c - 1),
            })
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.key.iter().filter(|&&c| c != 0).count()
    }
}

/// `2^n Π_{k=1}^n (2^k + 1)`.
pub fn stabilizer_state_count(n: usize) -> BigUint {
    let mut c = BigUint::from(1u32) << n;
    for k in 1..=n {
        c *= (BigUint::from(1u32) << k) + 1u32;
    }
    c
}

/// Amplitude codes of `φ` over all `2^n` points: `0` outside the support,
/// `1 + k` for `i^k`.
pub fn amplitude_codes(f: &StabilizerFunction) -> Vec<u8> {
    let n = f.n();
    (0..1u64 << n)
        .map(|b| f.phase(&BitVector::from_u64(n, b)).map_or(0, |k| 1 + k % 4))
        .collect()
}

/// Divides a code vector by its first nonzero entry.
pub fn canonical_key(codes: &[u8]) -> Vec<u8> {
    let lead = codes.iter().copied().find(|&c| c != 0).unwrap_or(1) - 1;
    codes
        .iter()
        .map(|&c| if c == 0 { 0 } else { 1 + (c - 1 + 4 - lead) % 4 })
        .collect()
}

pub fn codes_to_cyclo(codes: &[u8]) -> Vec<CycloNumber> {
    codes
        .iter()
        .map(|&c| if c == 0 { CycloNumber::zero() } else { CycloNumber::i_pow(c - 1) })
        .collect()
}

/// Every affine subspace of F2^n, by enumerating reduced row-echelon
/// constraint systems and right-hand sides.
pub fn all_affine_subspaces(n: usize) -> Vec<AffineSubspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &p)| {
                    let pivots = &pivots;
                    (p + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            for mask in 0u64..1 << free.len() {
                let mut rows: Vec<BitVector> =
                    pivots.iter().map(|&p| BitVector::unit(n, p)).collect();
                for (bit, &(r, c)) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        rows[r].set(c, true);
                    }
                }
                for rhs in 0u64..1 << k {
                    let eqs = rows
                        .iter()
                        .enumerate()
                        .map(|(i, r)| (*r, rhs >> i & 1 == 1))
                        .collect();
                    out.push(AffineSubspace::from_equations(n, eqs).expect("RREF system is consistent"));
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All stabilizer states on `n` qubits, deduplicated up to a global scalar
/// and sorted by canonical key.
///
/// Phases are generated in the coordinates of each support's coordinate
/// section, which parametrizes the support bijectively. `n = 4` needs
/// `allow_n4`.
pub fn enumerate_stabilizer_states(n: usize, allow_n4: bool) -> Result<Vec<StabilizerState>> {
    let guard = if allow_n4 { 4 } else { ENUMERATION_GUARD };
    if n > guard || n == 0 {
        return Err(Error::Guard {
            what: "n",
            value: n,
            guard,
        });
    }
    let mut seen: HashMap<Vec<u8>, StabilizerFunction> = HashMap::new();
    for a in all_affine_subspaces(n) {
        let s = a.coordinate_section();
        let d = s.len();
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .collect();
        for ell_mask in 0u64..1 << d {
            let ell = AffineForm::linear(BitVector::from_u64(d, ell_mask).embed(n, &s));
            for pair_mask in 0u64..1 << pairs.len() {
                let quad: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| pair_mask >> b & 1 == 1)
                    .map(|(_, &(i, j))| (s[i], s[j]))
                    .collect();
                for lin_mask in 0u64..1 << d {
                    let lin = BitVector::from_u64(d, lin_mask).embed(n, &s);
                    let q = QuadraticForm::from_parts(n, &quad, lin, false)?;
                    let f = StabilizerFunction::new(ell, q, a.clone())?;
                    let key = canonical_key(&amplitude_codes(&f));
                    seen.entry(key).or_insert(f);
                }
            }
        }
    }
    let mut states: Vec<StabilizerState> = seen
        .into_iter()
        .map(|(key, function)| StabilizerState { key, function })
        .collect();
    states.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(states)
}
