use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabrank::cyclo::CycloNumber;
use stabrank::f2::BitVector;
use stabrank::rankops::{
    find_collision_witness, find_constant_subspace, magic_rank_search, verify_witness, EngineMode, RankOutcome,
    WitnessConfig,
};
use stabrank::stabfun::{
    enumerate_stabilizer_states, random_decomposition, MagicTarget, StabilizerDecomposition, TargetKind,
};
use stabrank::Error;

/// Checks a witness against the decomposition by direct evaluation only.
fn independently_valid(d: &StabilizerDecomposition<CycloNumber>, y: &BitVector, z: &BitVector) -> bool {
    y.weight() != z.weight() && d.eval(y).unwrap() == d.eval(z).unwrap()
}

#[test]
fn exhaustive_witnesses_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut found = 0;
    for seed in 0..40u64 {
        let n = rng.gen_range(12..=18);
        let r = rng.gen_range(1..=3);
        let d = random_decomposition(n, r, 4, seed);
        let c = find_constant_subspace(&d, EngineMode::Exhaustive, seed, 0).unwrap();
        assert!(c.u.dim() + 3 * r >= n, "dim U = {} < n - 3r at n = {n}, r = {r}", c.u.dim());
        match find_collision_witness(&d, &WitnessConfig::new(EngineMode::Exhaustive, seed)) {
            Ok(w) => {
                found += 1;
                assert!(independently_valid(&d, &w.y, &w.z));
                assert!(w.v_dim + r >= w.u_dim);
                assert!(w.y.weight() <= n - w.u_dim + r);
            }
            Err(Error::NotFound(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(found > 0);
}

#[test]
fn ranks_are_minimal_by_subset_oracle() {
    for n in 1..=2 {
        let t = MagicTarget::new(TargetKind::T, n);
        let rank = match magic_rank_search::<CycloNumber>(&t, 3, false).unwrap() {
            RankOutcome::Found(c) => c.rank,
            RankOutcome::NotFound { .. } => panic!("T^{n} should have small rank"),
        };
        assert_eq!(rank, 2);
        // rank 1 would make the target proportional to one state
        let target: Vec<CycloNumber> = (0..1u64 << n)
            .map(|b| t.eval(&BitVector::from_u64(n, b)).unwrap())
            .collect();
        for s in enumerate_stabilizer_states(n, false).unwrap() {
            let amps: Vec<CycloNumber> = s.amplitudes();
            let i = amps.iter().position(|a| !a.is_zero()).unwrap();
            let ratio = &target[i] * &amps[i].inv().unwrap();
            let proportional = target.iter().zip(&amps).all(|(a, b)| *a == &ratio * b);
            assert!(!proportional);
        }
    }
}

/// A witness for a decomposition of `T^{⊗n}` can never separate its layers
/// mod 8, because the decomposition equals the target pointwise.
#[test]
fn t_decomposition_witnesses_respect_period_eight() {
    let t = MagicTarget::new(TargetKind::T, 2);
    let d = match magic_rank_search::<CycloNumber>(&t, 2, false).unwrap() {
        RankOutcome::Found(c) => c.decomposition,
        RankOutcome::NotFound { .. } => panic!("rank 2 expected"),
    };
    for a in 0..4u64 {
        for b in 0..4u64 {
            let (y, z) = (BitVector::from_u64(2, a), BitVector::from_u64(2, b));
            let rep = verify_witness(&d, &y, &z).unwrap();
            let t_entry = rep.applicability.iter().find(|x| x.target == TargetKind::T).unwrap();
            if rep.values_equal {
                assert!(!t_entry.refutes);
            }
        }
    }
    if let Ok(w) = find_collision_witness(&d, &WitnessConfig::new(EngineMode::Exhaustive, 0)) {
        assert_eq!(w.y.weight() % 8, w.z.weight() % 8);
    }
}

#[test]
fn sampled_runs_are_deterministic() {
    let d = random_decomposition(128, 2, 4, 7);
    let cfg = WitnessConfig::new(EngineMode::Sampled, 7);
    let a = find_collision_witness(&d, &cfg).map(|w| (w.y, w.z));
    let b = find_collision_witness(&d, &cfg).map(|w| (w.y, w.z));
    assert_eq!(a.ok(), b.ok());
}
