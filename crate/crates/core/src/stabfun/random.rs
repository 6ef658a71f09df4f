use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{StabilizerDecomposition, StabilizerFunction};
use crate::cyclo::CycloNumber;
use crate::f2::random::{random_linear_form, random_quadratic, random_subspace};

/// `r` terms with coefficients `i^k`, uniform linear and quadratic parts and
/// supports of codimension at most `max_codim`, all drawn from `seed`.
pub fn random_decomposition(n: usize, r: usize, max_codim: usize, seed: u64) -> StabilizerDecomposition<CycloNumber> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = StabilizerDecomposition::empty(n);
    for _ in 0..r {
        let dim = rng.gen_range(n.saturating_sub(max_codim)..=n);
        let f = StabilizerFunction::new(
            random_linear_form(n, &mut rng),
            random_quadratic(n, &mut rng),
            random_subspace(n, dim, &mut rng),
        )
        .expect("consistent dimensions");
        d.push(CycloNumber::i_pow(rng.gen_range(0..4)), f)
            .expect("consistent dimensions");
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_shaped() {
        let a = random_decomposition(20, 3, 4, 9);
        assert_eq!(a, random_decomposition(20, 3, 4, 9));
        assert_ne!(a, random_decomposition(20, 3, 4, 10));
        assert_eq!(a.rank(), 3);
        assert!(a.functions().all(|f| f.support().codim() <= 4));
    }
}
