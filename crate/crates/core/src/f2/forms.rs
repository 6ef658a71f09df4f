use super::{BitMatrix, BitVector};
use crate::error::{check_dim, Result};

/// An affine function `a(x) = <coeffs, x> + constant` over F2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeffs: BitVector,
    pub constant: bool,
}

impl AffineForm {
    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: BitVector::zeros(n),
            constant: false,
        }
    }

    pub fn linear(coeffs: BitVector) -> Self {
        Self {
            coeffs,
            constant: false,
        }
    }

    pub fn new(coeffs: BitVector, constant: bool) -> Self {
        Self { coeffs, constant }
    }

    /// The coordinate function `x_i` (0-based index).
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::linear(BitVector::unit(n, i))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn eval(&self, x: &BitVector) -> bool {
        self.coeffs.dot(x) ^ self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Fixes every coordinate outside `keep` to zero and renumbers the rest.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self {
            coeffs: self.coeffs.restrict(keep),
            constant: self.constant,
        }
    }
}

/// A quadratic polynomial over F2:
/// `q(x) = sum_{i<j} quad[i][j] x_i x_j + <linear, x> + constant`.
///
/// Only the strict upper triangle of `quad` may be set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    quad: BitMatrix,
    pub linear: BitVector,
    pub constant: bool,
}

impl QuadraticForm {
    pub fn zero(n: usize) -> Self {
        Self {
            quad: BitMatrix::zeros(n, n),
            linear: BitVector::zeros(n),
            constant: false,
        }
    }

    /// Builds a form from its quadratic monomials `x_i x_j` (any order, `i != j`;
    /// repeated pairs cancel), its linear part and its constant.
    pub fn from_parts(
        n: usize,
        pairs: &[(usize, usize)],
        linear: BitVector,
        constant: bool,
    ) -> Result<Self> {
        check_dim(n, linear.len())?;
        let mut q = Self::zero(n);
        for &(i, j) in pairs {
            q.toggle_pair(i, j);
        }
        q.linear = linear;
        q.constant = constant;
        Ok(q)
    }

    /// Builds a form from an upper-triangular coefficient matrix. Entries on or
    /// below the diagonal are rejected.
    pub fn from_matrix(quad: BitMatrix, linear: BitVector, constant: bool) -> Result<Self> {
        let n = linear.len();
        check_dim(n, quad.nrows())?;
        check_dim(n, quad.ncols())?;
        for i in 0..n {
            if quad.row(i).iter_ones().any(|j| j <= i) {
                return Err(crate::Error::Precondition(format!(
                    "quadratic coefficient row {i} is not strictly upper triangular"
                )));
            }
        }
        Ok(Self {
            quad,
            linear,
            constant,
        })
    }

    /// Adds the monomial `x_i x_j`. With `i == j` this is the linear term `x_i`.
    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.quad.set(i, j, !self.quad.get(i, j)),
            std::cmp::Ordering::Greater => self.quad.set(j, i, !self.quad.get(j, i)),
            std::cmp::Ordering::Equal => self.linear.flip(i),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn quad(&self) -> &BitMatrix {
        &self.quad
    }

    pub fn has_pair(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a != b && self.quad.get(a, b)
    }

    pub fn is_affine(&self) -> bool {
        self.quad.rows().iter().all(|r| r.is_zero())
    }

    /// The quadratic part alone, `sum_{i<j} quad[i][j] x_i x_j`.
    #[inline]
    fn eval_quad(&self, x: &BitVector) -> bool {
        let mut acc = false;
        for i in x.iter_ones() {
            acc ^= self.quad.row(i).dot(x);
        }
        acc
    }

    #[inline]
    pub fn eval(&self, x: &BitVector) -> bool {
        self.eval_quad(x) ^ self.linear.dot(x) ^ self.constant
    }

    /// `Δ_y q (x) = q(x) + q(x + y)`, an affine function of `x`.
    pub fn directional_derivative(&self, y: &BitVector) -> AffineForm {
        assert_eq!(y.len(), self.n(), "derivative direction has wrong length");
        let n = self.n();
        let mut coeffs = BitVector::zeros(n);
        // coefficient of x_k: sum_j Q[k][j] y_j  +  sum_i Q[i][k] y_i
        for k in 0..n {
            if self.quad.row(k).dot(y) {
                coeffs.flip(k);
            }
        }
        for i in y.iter_ones() {
            coeffs ^= *self.quad.row(i);
        }
        AffineForm {
            coeffs,
            constant: self.eval_quad(y) ^ self.linear.dot(y),
        }
    }

    /// Fixes every coordinate outside `keep` to zero and renumbers the rest
    /// in the order given.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let m = keep.len();
        let mut out = Self::zero(m);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                if self.has_pair(i, j) {
                    out.quad.set(a, b, true);
                }
            }
        }
        out.linear = self.linear.restrict(keep);
        out.constant = self.constant;
        out
    }

    pub fn quad_rows_hex(&self) -> Vec<String> {
        self.quad.rows().iter().map(|r| r.to_hex()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::random::random_quadratic;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn all_points(n: usize) -> impl Iterator<Item = BitVector> {
        (0u64..1 << n).map(move |b| BitVector::from_u64(n, b))
    }

    #[test]
    fn derivative_of_x1x2_along_e1() {
        let q = QuadraticForm::from_parts(2, &[(0, 1)], BitVector::zeros(2), false).unwrap();
        let d = q.directional_derivative(&BitVector::unit(2, 0));
        assert_eq!(d, AffineForm::coordinate(2, 1));
    }

    #[test]
    fn derivative_along_zero_vanishes() {
        let q = QuadraticForm::from_parts(4, &[(0, 1), (2, 3)], BitVector::ones(4), true).unwrap();
        assert_eq!(q.directional_derivative(&BitVector::zeros(4)), AffineForm::zero(4));
    }

    #[test]
    fn derivative_of_linear_form_is_constant() {
        let lin = BitVector::from_indices(5, [0, 3]);
        let q = QuadraticForm::from_parts(5, &[], lin, true).unwrap();
        let y = BitVector::from_indices(5, [3, 4]);
        let d = q.directional_derivative(&y);
        assert!(d.is_constant());
        assert_eq!(d.constant, lin.dot(&y));
    }

    #[test]
    fn restrict_keeps_surviving_terms() {
        // q = x1 x5 + x2, keep {x2, x5}
        let q = QuadraticForm::from_parts(5, &[(0, 4)], BitVector::unit(5, 1), false).unwrap();
        let r = q.restrict(&[1, 4]);
        assert!(r.is_affine());
        assert_eq!(r.linear, BitVector::unit(2, 0));
    }

    #[test]
    fn from_matrix_rejects_lower_entries() {
        let mut m = BitMatrix::zeros(3, 3);
        m.set(2, 1, true);
        assert!(QuadraticForm::from_matrix(m, BitVector::zeros(3), false).is_err());
    }

    proptest! {
        #[test]
        fn derivative_matches_definition(n in 1usize..=10, seed in any::<u64>(), ybits in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random_quadratic(n, &mut rng);
            let y = BitVector::from_u64(n, ybits);
            let d = q.directional_derivative(&y);
            for x in all_points(n) {
                prop_assert_eq!(d.eval(&x), q.eval(&x) ^ q.eval(&(x ^ y)));
            }
        }

        #[test]
        fn affine_form_identity(n in 1usize..=12, c in any::<u64>(), k in any::<bool>(), a in any::<u64>(), b in any::<u64>()) {
            let f = AffineForm::new(BitVector::from_u64(n, c), k);
            let x = BitVector::from_u64(n, a);
            let y = BitVector::from_u64(n, b);
            prop_assert_eq!(f.eval(&x) ^ f.eval(&y) ^ f.eval(&(x ^ y)), k);
        }

        #[test]
        fn restriction_agrees_with_zero_substitution(n in 2usize..=10, seed in any::<u64>(), mask in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random_quadratic(n, &mut rng);
            let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let r = q.restrict(&keep);
            for x in all_points(keep.len()) {
                prop_assert_eq!(r.eval(&x), q.eval(&x.embed(n, &keep)));
            }
        }
    }
}
