use crate::cyclo::CycloNumber;
use crate::error::{check_dim, Error, Result};
use crate::f2::{AffineForm, AffineSubspace, BitVector, QuadraticForm};

/// `φ(x) = i^{ℓ(x)} (-1)^{q(x)} 1_A(x)` with `ℓ` linear, `q` quadratic and
/// `A` a nonempty affine subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerFunction {
    ell: AffineForm,
    q: QuadraticForm,
    support: AffineSubspace,
}

impl StabilizerFunction {
    /// Fails when dimensions disagree or `ℓ` has a constant term.
    pub fn new(ell: AffineForm, q: QuadraticForm, support: AffineSubspace) -> Result<Self> {
        let n = support.n();
        check_dim(n, ell.n())?;
        check_dim(n, q.n())?;
        if ell.constant {
            return Err(Error::Precondition(
                "the linear phase ℓ of a stabilizer function must have constant 0".into(),
            ));
        }
        Ok(Self { ell, q, support })
    }

    /// The constant function 1 on F2^n.
    pub fn one(n: usize) -> Self {
        Self::new(AffineForm::zero(n), QuadraticForm::zero(n), AffineSubspace::full(n))
            .expect("consistent dimensions")
    }

    /// The indicator of the single point `p`.
    pub fn point(p: BitVector) -> Self {
        let n = p.len();
        Self::new(AffineForm::zero(n), QuadraticForm::zero(n), AffineSubspace::point(p))
            .expect("consistent dimensions")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn ell(&self) -> &AffineForm {
        &self.ell
    }

    pub fn q(&self) -> &QuadraticForm {
        &self.q
    }

    pub fn support(&self) -> &AffineSubspace {
        &self.support
    }

    /// The exponent `k` with `φ(x) = i^k`, or `None` outside the support.
    #[inline]
    pub fn phase(&self, x: &BitVector) -> Option<u8> {
        if !self.support.contains(x) {
            return None;
        }
        Some(self.ell.eval(x) as u8 + 2 * self.q.eval(x) as u8)
    }

    pub fn eval(&self, x: &BitVector) -> Result<CycloNumber> {
        check_dim(self.n(), x.len())?;
        Ok(self
            .phase(x)
            .map_or_else(CycloNumber::zero, CycloNumber::i_pow))
    }

    /// `(φ ⊗ φ')(x, y) = φ(x) φ'(y)` on `F2^{n + n'}`.
    ///
    /// `i^a i^b = i^{a ⊕ b} (-1)^{ab}`, so the cross term `ℓ(x) ℓ'(y)` moves
    /// into the quadratic part.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n(), other.n());
        let n = n1 + n2;
        let left: Vec<usize> = (0..n1).collect();
        let right: Vec<usize> = (n1..n).collect();
        let ell = AffineForm::linear(self.ell.coeffs.embed(n, &left) ^ other.ell.coeffs.embed(n, &right));
        let mut pairs = Vec::new();
        for i in 0..n1 {
            for j in i + 1..n1 {
                if self.q.has_pair(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        for i in 0..n2 {
            for j in i + 1..n2 {
                if other.q.has_pair(i, j) {
                    pairs.push((n1 + i, n1 + j));
                }
            }
        }
        for i in self.ell.coeffs.iter_ones() {
            for j in other.ell.coeffs.iter_ones() {
                pairs.push((i, n1 + j));
            }
        }
        let linear = self.q.linear.embed(n, &left) ^ other.q.linear.embed(n, &right);
        let q = QuadraticForm::from_parts(n, &pairs, linear, self.q.constant ^ other.q.constant)
            .expect("consistent dimensions");
        let eqs = self
            .support
            .equations()
            .map(|(c, b)| (c.embed(n, &left), b))
            .chain(other.support.equations().map(|(c, b)| (c.embed(n, &right), b)))
            .collect();
        let support = AffineSubspace::from_equations(n, eqs).expect("product of nonempty subspaces");
        Self { ell, q, support }
    }

    /// `Σ_x |φ(x)|^2 = |A|`.
    pub fn norm_sqr(&self) -> u128 {
        1u128 << self.support.dim()
    }
}
