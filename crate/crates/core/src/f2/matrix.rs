use std::fmt;

use super::BitVector;
use crate::error::{check_dim, Result};

/// A dense matrix over F2 stored as a list of packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    /// Reduced row-echelon form; the first `rank` rows are nonzero.
    pub reduced: BitMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    /// A matrix with no rows and `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            check_dim(cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    /// Convenience constructor from 0/1 literals, mainly for tests and docs.
    pub fn from_bits(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                BitVector::from_indices(cols, r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i))
            })
            .collect();
        Self { cols, rows }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        check_dim(self.cols, row.len())?;
        self.rows.push(row);
        Ok(())
    }

    /// `M x` as a vector of length `nrows`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        let mut out = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Reduced row-echelon form with leftmost pivots.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && r.get(col) {
                    *r ^= pivot_row;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        Rref {
            rank,
            reduced: Self {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of the right kernel `{x : M x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let Rref {
            rank,
            reduced,
            pivots,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (r, &p) in pivots.iter().enumerate().take(rank) {
                    if reduced.rows[r].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_identity() {
        let r = BitMatrix::identity(2).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let r = BitMatrix::zeros(2, 2).rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_duplicate_rows() {
        let r = BitMatrix::from_bits(&[&[1, 1], &[1, 1]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert!(r.reduced.row(1).is_zero());
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..10, 1usize..12, any::<u64>()).prop_map(|(rows, cols, seed)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..rows)
                .map(|_| BitVector::from_u64(cols, rng.gen()))
                .collect();
            BitMatrix::from_rows(cols, rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rref_is_reduced_and_rank_bounded(m in arb_matrix()) {
            let r = m.rref();
            prop_assert!(r.rank <= m.nrows().min(m.ncols()));
            prop_assert_eq!(r.pivots.len(), r.rank);
            for (i, &p) in r.pivots.iter().enumerate() {
                // pivot column is a unit column
                for j in 0..m.nrows() {
                    prop_assert_eq!(r.reduced.get(j, p), i == j);
                }
                // nothing to the left of the pivot in its row
                prop_assert!((0..p).all(|c| !r.reduced.get(i, c)));
            }
            for j in r.rank..m.nrows() {
                prop_assert!(r.reduced.row(j).is_zero());
            }
        }

        #[test]
        fn kernel_dimension_and_membership(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), m.ncols() - m.rank());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            let km = BitMatrix::from_rows(m.ncols(), k.clone()).unwrap();
            prop_assert_eq!(km.rank(), k.len());
        }
    }
}
