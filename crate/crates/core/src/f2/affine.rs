use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AffineForm, BitMatrix, BitVector};
use crate::error::{check_dim, Error, Result};

/// A nonempty affine subspace `u + U_0` of F2^n.
///
/// Both descriptions are kept and are canonical, so two values compare equal
/// exactly when they describe the same set:
///
/// * constraints: the nonzero rows of the reduced row-echelon form of `M`
///   together with the right-hand side `b`, so the set is `{x : M x = b}`;
/// * parametric: the offset obtained by setting every free (non-pivot)
///   coordinate to zero, plus one kernel vector per free coordinate.
///
/// The empty set has no value of this type: operations that may produce it
/// return `Option<AffineSubspace>` and use `None` as the empty marker.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    n: usize,
    constraints: Vec<BitVector>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
    offset: BitVector,
    basis: Vec<BitVector>,
}

/// Solves `M x = b`, returning `Ok(None)` when the system is inconsistent.
pub fn solve_affine(m: &BitMatrix, b: &BitVector) -> Result<Option<AffineSubspace>> {
    check_dim(m.nrows(), b.len())?;
    let rows = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (*r, b.get(i)))
        .collect();
    Ok(AffineSubspace::from_equations(m.ncols(), rows))
}

impl AffineSubspace {
    /// All of F2^n.
    pub fn full(n: usize) -> Self {
        Self::from_equations(n, Vec::new()).expect("empty system is consistent")
    }

    /// The single point `{p}`.
    pub fn point(p: BitVector) -> Self {
        let n = p.len();
        let eqs = (0..n).map(|i| (BitVector::unit(n, i), p.get(i))).collect();
        Self::from_equations(n, eqs).expect("point system is consistent")
    }

    /// `offset + span(generators)`. Generators may be dependent.
    pub fn from_generators(offset: BitVector, generators: &[BitVector]) -> Result<Self> {
        let n = offset.len();
        let gens = BitMatrix::from_rows(n, generators.to_vec())?;
        let eqs = gens
            .kernel_basis()
            .into_iter()
            .map(|c| {
                let b = c.dot(&offset);
                (c, b)
            })
            .collect();
        Self::from_equations(n, eqs)
            .ok_or_else(|| Error::Internal("generator system inconsistent".into()))
    }

    /// Solves the equations `<c, x> = b` for each `(c, b)`; `None` if inconsistent.
    pub fn from_equations(n: usize, mut eqs: Vec<(BitVector, bool)>) -> Option<Self> {
        for (c, _) in &eqs {
            assert_eq!(c.len(), n, "equation has wrong length");
        }
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..eqs.len()).find(|&i| eqs[i].0.get(col)) else {
                continue;
            };
            eqs.swap(rank, p);
            let (pr, pb) = eqs[rank];
            for (i, (r, b)) in eqs.iter_mut().enumerate() {
                if i != rank && r.get(col) {
                    *r ^= pr;
                    *b ^= pb;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == eqs.len() {
                break;
            }
        }
        if eqs[rank..].iter().any(|&(_, b)| b) {
            return None;
        }
        eqs.truncate(rank);

        let mut offset = BitVector::zeros(n);
        for (i, &p) in pivots.iter().enumerate() {
            if eqs[i].1 {
                offset.set(p, true);
            }
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..n)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(n, free);
                for (i, &p) in pivots.iter().enumerate() {
                    if eqs[i].0.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        let (constraints, rhs) = eqs.into_iter().unzip();
        Some(Self {
            n,
            constraints,
            rhs,
            pivots,
            offset,
            basis,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn codim(&self) -> usize {
        self.constraints.len()
    }

    pub fn offset(&self) -> &BitVector {
        &self.offset
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    /// Constraint rows of the reduced system.
    pub fn constraint_rows(&self) -> &[BitVector] {
        &self.constraints
    }

    pub fn constraint_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n, self.constraints.clone()).expect("rows have length n")
    }

    /// Right-hand side of the reduced system as a vector of length `codim`.
    pub fn rhs(&self) -> BitVector {
        BitVector::from_bools(&self.rhs)
    }

    pub fn equations(&self) -> impl Iterator<Item = (BitVector, bool)> + '_ {
        self.constraints.iter().copied().zip(self.rhs.iter().copied())
    }

    #[inline]
    pub fn contains(&self, x: &BitVector) -> bool {
        debug_assert_eq!(x.len(), self.n);
        self.constraints
            .iter()
            .zip(&self.rhs)
            .all(|(c, &b)| c.dot(x) == b)
    }

    /// Membership through the parametric description: solve for the basis
    /// coefficients on the free coordinates and compare.
    pub fn contains_parametric(&self, x: &BitVector) -> bool {
        let diff = *x ^ self.offset;
        let free = self.coordinate_section();
        let mut y = BitVector::zeros(self.n);
        for (k, &c) in free.iter().enumerate() {
            if diff.get(c) {
                y ^= self.basis[k];
            }
        }
        y == diff
    }

    /// The linear part `U_0`.
    pub fn linear_part(&self) -> Self {
        let eqs = self.constraints.iter().map(|&c| (c, false)).collect();
        Self::from_equations(self.n, eqs).expect("homogeneous system is consistent")
    }

    /// Solution set of the concatenated constraints.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>> {
        check_dim(self.n, other.n)?;
        let eqs = self.equations().chain(other.equations()).collect();
        Ok(Self::from_equations(self.n, eqs))
    }

    /// Adds the equations `a(x) = 0` for each affine form.
    pub fn restrict_to_zeros(&self, forms: &[AffineForm]) -> Option<Self> {
        let eqs = self
            .equations()
            .chain(forms.iter().map(|a| (a.coeffs, a.constant)))
            .collect();
        Self::from_equations(self.n, eqs)
    }

    /// The smallest affine subspace containing both arguments.
    pub fn affine_span(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let mut gens: Vec<BitVector> = self.basis.iter().chain(&other.basis).copied().collect();
        gens.push(self.offset ^ other.offset);
        Self::from_generators(self.offset, &gens)
    }

    /// An affine form vanishing on the subspace and equal to 1 at `v`.
    pub fn separating_functional(&self, v: &BitVector) -> Result<AffineForm> {
        check_dim(self.n, v.len())?;
        self.constraints
            .iter()
            .zip(&self.rhs)
            .find(|(c, &b)| c.dot(v) != b)
            .map(|(c, &b)| AffineForm::new(*c, b))
            .ok_or(Error::PointInSubspace)
    }

    /// Free coordinates of the reduced system: any assignment to them extends
    /// uniquely to a point of the subspace.
    pub fn coordinate_section(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n).filter(|&c| !is_pivot[c]).collect()
    }

    /// The point whose section coordinates are all zero; its weight is at most
    /// `codim`.
    pub fn low_weight_element(&self) -> BitVector {
        self.offset
    }

    /// The unique point restricting to `values` on [`Self::coordinate_section`].
    pub fn extend_section(&self, values: &BitVector) -> BitVector {
        assert_eq!(values.len(), self.dim());
        let mut x = self.offset;
        for k in values.iter_ones() {
            x ^= self.basis[k];
        }
        x
    }

    pub fn sample_uniform(&self, seed: u64) -> BitVector {
        self.sample_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let mut x = self.offset;
        for b in &self.basis {
            if rng.gen::<bool>() {
                x ^= *b;
            }
        }
        x
    }

    /// Visits every point in Gray-code order (consecutive points differ by one
    /// basis vector).
    ///
    /// # Panics
    /// Panics if `dim >= 64`.
    pub fn iter_points(&self) -> impl Iterator<Item = BitVector> + '_ {
        let d = self.dim();
        assert!(d < 64, "cannot enumerate a subspace of dimension {d}");
        let mut cur = self.offset;
        (0u64..1u64 << d).map(move |i| {
            if i > 0 {
                cur ^= self.basis[i.trailing_zeros() as usize];
            }
            cur
        })
    }

    /// Substitutes zero for every coordinate outside `keep` and renumbers the
    /// rest; `None` when the substituted system is inconsistent.
    pub fn restrict_zero(&self, keep: &[usize]) -> Option<Self> {
        let eqs = self
            .equations()
            .map(|(c, b)| (c.restrict(keep), b))
            .collect();
        Self::from_equations(keep.len(), eqs)
    }

    /// Evaluates the indicator `1_A(x)` as an F2 value.
    pub fn indicator(&self, x: &BitVector) -> bool {
        self.contains(x)
    }
}
