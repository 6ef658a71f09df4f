//! Random F2 objects for tests, fixtures and the sampled engines.

use rand::Rng;

use super::{AffineForm, AffineSubspace, BitMatrix, BitVector, QuadraticForm};

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitVector {
    BitVector::from_indices(n, (0..n).filter(|_| rng.gen::<bool>()))
}

pub fn random_linear_form<R: Rng + ?Sized>(n: usize, rng: &mut R) -> AffineForm {
    AffineForm::linear(random_vector(n, rng))
}

pub fn random_quadratic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QuadraticForm {
    let mut q = QuadraticForm::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<bool>() {
                q.toggle_pair(i, j);
            }
        }
    }
    q.linear = random_vector(n, rng);
    q.constant = rng.gen();
    q
}

/// A uniformly random offset plus `dim` random independent directions.
pub fn random_subspace<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> AffineSubspace {
    assert!(dim <= n);
    let offset = random_vector(n, rng);
    loop {
        let gens: Vec<BitVector> = (0..dim).map(|_| random_vector(n, rng)).collect();
        let m = BitMatrix::from_rows(n, gens.clone()).expect("generators have length n");
        if m.rank() == dim {
            return AffineSubspace::from_generators(offset, &gens).expect("consistent");
        }
    }
}
