use std::collections::HashMap;

use super::StabilizerFunction;
use crate::cyclo::CycloNumber;
use crate::error::{check_dim, Error, Result};
use crate::f2::BitVector;
use crate::hp::HpComplex;
use crate::scalar::{Coefficient, Mode};

#[derive(Clone, Debug, PartialEq)]
pub struct Term<C> {
    pub coeff: C,
    pub function: StabilizerFunction,
}

/// `F = Σ_j c_j φ_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerDecomposition<C> {
    n: usize,
    terms: Vec<Term<C>>,
}

/// Phase pattern of a point: one code per term, `4` meaning "outside the support".
pub type Signature = Vec<u8>;

pub const OUTSIDE: u8 = 4;

impl<C: Coefficient> StabilizerDecomposition<C> {
    pub fn new(n: usize, terms: Vec<Term<C>>) -> Result<Self> {
        for t in &terms {
            check_dim(n, t.function.n())?;
        }
        Ok(Self { n, terms })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn push(&mut self, coeff: C, function: StabilizerFunction) -> Result<()> {
        check_dim(self.n, function.n())?;
        self.terms.push(Term { coeff, function });
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of terms.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// `F ⊗ G`, with `rank(F) · rank(G)` terms.
    pub fn tensor(&self, other: &Self) -> Self {
        let terms = self
            .terms
            .iter()
            .flat_map(|s| {
                other.terms.iter().map(move |o| Term {
                    coeff: s.coeff.mul(&o.coeff),
                    function: s.function.tensor(&o.function),
                })
            })
            .collect();
        Self {
            n: self.n + other.n,
            terms,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn mode(&self) -> Mode {
        C::MODE
    }

    pub fn functions(&self) -> impl Iterator<Item = &StabilizerFunction> {
        self.terms.iter().map(|t| &t.function)
    }

    pub fn signature_into(&self, x: &BitVector, out: &mut Signature) {
        out.clear();
        out.extend(
            self.terms
                .iter()
                .map(|t| t.function.phase(x).unwrap_or(OUTSIDE)),
        );
    }

    pub fn signature(&self, x: &BitVector) -> Signature {
        let mut s = Vec::with_capacity(self.terms.len());
        self.signature_into(x, &mut s);
        s
    }

    /// The value determined by a phase pattern.
    pub fn value_of_signature(&self, sig: &[u8]) -> C {
        let mut acc = C::zero();
        for (t, &k) in self.terms.iter().zip(sig) {
            if k != OUTSIDE {
                acc = acc.add(&t.coeff.mul_i_pow(k));
            }
        }
        acc
    }

    pub fn eval(&self, x: &BitVector) -> Result<C> {
        check_dim(self.n, x.len())?;
        let mut acc = C::zero();
        for t in &self.terms {
            if let Some(k) = t.function.phase(x) {
                acc = acc.add(&t.coeff.mul_i_pow(k));
            }
        }
        Ok(acc)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> StabilizerDecomposition<D> {
        StabilizerDecomposition {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f(&t.coeff),
                    function: t.function.clone(),
                })
                .collect(),
        }
    }

    pub fn to_float(&self) -> StabilizerDecomposition<HpComplex> {
        self.map_coeffs(Coefficient::to_hp)
    }
}

/// Memoizes values by phase pattern: the number of distinct patterns is
/// tiny compared with `2^n`, and each costs a handful of field operations.
pub struct SignatureCache<'a, C: Coefficient> {
    d: &'a StabilizerDecomposition<C>,
    cache: HashMap<Signature, C>,
    buf: Signature,
}

impl<'a, C: Coefficient> SignatureCache<'a, C> {
    pub fn new(d: &'a StabilizerDecomposition<C>) -> Self {
        Self {
            d,
            cache: HashMap::new(),
            buf: Vec::new(),
        }
    }

    pub fn eval(&mut self, x: &BitVector) -> &C {
        self.d.signature_into(x, &mut self.buf);
        if !self.cache.contains_key(&self.buf) {
            let v = self.d.value_of_signature(&self.buf);
            self.cache.insert(self.buf.clone(), v);
        }
        &self.cache[&self.buf]
    }

    pub fn distinct(&self) -> usize {
        self.cache.len()
    }
}

/// A decomposition in either numeric mode, as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDecomposition {
    Exact(StabilizerDecomposition<CycloNumber>),
    Float(StabilizerDecomposition<HpComplex>),
}

impl AnyDecomposition {
    pub fn n(&self) -> usize {
        match self {
            AnyDecomposition::Exact(d) => d.n(),
            AnyDecomposition::Float(d) => d.n(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AnyDecomposition::Exact(d) => d.rank(),
            AnyDecomposition::Float(d) => d.rank(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyDecomposition::Exact(_) => Mode::Exact,
            AnyDecomposition::Float(_) => Mode::Float,
        }
    }

    pub fn as_exact(&self) -> Result<&StabilizerDecomposition<CycloNumber>> {
        match self {
            AnyDecomposition::Exact(d) => Ok(d),
            AnyDecomposition::Float(_) => Err(Error::NotApplicable(
                "operation requires an exact (cyclotomic) decomposition".into(),
            )),
        }
    }

    pub fn to_float(&self) -> StabilizerDecomposition<HpComplex> {
        match self {
            AnyDecomposition::Exact(d) => d.to_float(),
            AnyDecomposition::Float(d) => d.clone(),
        }
    }

    pub fn functions(&self) -> Vec<&StabilizerFunction> {
        match self {
            AnyDecomposition::Exact(d) => d.functions().collect(),
            AnyDecomposition::Float(d) => d.functions().collect(),
        }
    }
}

impl From<StabilizerDecomposition<CycloNumber>> for AnyDecomposition {
    fn from(d: StabilizerDecomposition<CycloNumber>) -> Self {
        AnyDecomposition::Exact(d)
    }
}

impl From<StabilizerDecomposition<HpComplex>> for AnyDecomposition {
    fn from(d: StabilizerDecomposition<HpComplex>) -> Self {
        AnyDecomposition::Float(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_zero() {
        let d = StabilizerDecomposition::<CycloNumber>::empty(4);
        for b in 0..16 {
            assert!(d.eval(&BitVector::from_u64(4, b)).unwrap().is_zero());
        }
    }

    #[test]
    fn outside_support_is_zero() {
        let mut d = StabilizerDecomposition::empty(3);
        d.push(CycloNumber::from_int(5), StabilizerFunction::point(BitVector::ones(3)))
            .unwrap();
        assert!(d.eval(&BitVector::zeros(3)).unwrap().is_zero());
        assert_eq!(d.eval(&BitVector::ones(3)).unwrap(), CycloNumber::from_int(5));
    }

    #[test]
    fn cache_matches_direct_evaluation() {
        use crate::f2::random::{random_linear_form, random_quadratic, random_subspace};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 8;
        let mut d = StabilizerDecomposition::empty(n);
        for j in 0..3 {
            let f = StabilizerFunction::new(
                random_linear_form(n, &mut rng),
                random_quadratic(n, &mut rng),
                random_subspace(n, 6, &mut rng),
            )
            .unwrap();
            d.push(CycloNumber::zeta(j), f).unwrap();
        }
        let mut cache = SignatureCache::new(&d);
        for b in 0..256 {
            let x = BitVector::from_u64(n, b);
            assert_eq!(*cache.eval(&x), d.eval(&x).unwrap());
        }
        assert!(cache.distinct() <= 125);
        assert!(d.push(CycloNumber::one(), StabilizerFunction::one(3)).is_err());
    }
}
