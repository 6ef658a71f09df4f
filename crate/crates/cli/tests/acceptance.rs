//! Acceptance criteria 1-7. Each test prints one `criterion N: PASS|FAIL`
//! line (visible with `--nocapture`) and asserts the criterion.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use stabrank::approx::{
    binomial_ratio_check, central_mass_check, majority, rs_subspace_approx, run_target_pipeline, PipelineConfig,
    TargetAmplitudes, build_f_psi_from, CubeFunction,
};
use stabrank::cyclo::CycloNumber;
use stabrank::f2::random::random_subspace;
use stabrank::f2::BitVector;
use stabrank::prob::Probability;
use stabrank::rankops::{
    find_collision_witness, find_constant_subspace, magic_rank_search, EngineMode, RankOutcome, WitnessConfig,
};
use stabrank::stabfun::{
    enumerate_stabilizer_states, random_decomposition, stabilizer_state_count, MagicTarget, TargetKind,
};
use stabrank::Error;

fn report(id: u32, ok: bool, detail: &str) {
    println!("criterion {id}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_exact_small_t_ranks() {
    let mut details = Vec::new();
    let mut ok = true;
    for n in 1..=2 {
        let t = MagicTarget::new(TargetKind::T, n);
        let start = Instant::now();
        let outcome = magic_rank_search::<CycloNumber>(&t, 3, false).unwrap();
        let elapsed = start.elapsed();
        let c = match outcome {
            RankOutcome::Found(c) => c,
            RankOutcome::NotFound { .. } => {
                report(1, false, &format!("no decomposition found for n = {n}"));
                unreachable!()
            }
        };
        // re-evaluate the certificate pointwise
        let exact_zero = (0..1u64 << n).all(|b| {
            let x = BitVector::from_u64(n, b);
            c.decomposition.eval(&x).unwrap() == t.eval::<CycloNumber>(&x).unwrap()
        });
        // rank 1 would mean the target is proportional to a stabilizer state
        let target: Vec<CycloNumber> = (0..1u64 << n).map(|b| t.eval(&BitVector::from_u64(n, b)).unwrap()).collect();
        let rank_one = enumerate_stabilizer_states(n, false).unwrap().iter().any(|s| {
            let a: Vec<CycloNumber> = s.amplitudes();
            let i = a.iter().position(|z| !z.is_zero()).unwrap();
            let ratio = &target[i] * &a[i].inv().unwrap();
            target.iter().zip(&a).all(|(u, v)| *u == &ratio * v)
        });
        ok &= c.rank == 2 && c.exact && exact_zero && !rank_one && elapsed < Duration::from_secs(60);
        details.push(format!("n={n}: rank {} in {:.2?}", c.rank, elapsed));
    }
    report(1, ok, &details.join(", "));
}

/// Distinct stabilizer amplitude vectors up to scalars, from every affine
/// subset (closure under `a + b + c`) and every phase `i^ℓ (-1)^q`.
fn dedupe_oracle(n: usize) -> usize {
    let size = 1usize << n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    for set in 1u64..1 << size {
        let pts: Vec<usize> = (0..size).filter(|&i| set >> i & 1 == 1).collect();
        if !pts.len().is_power_of_two()
            || !pts.iter().all(|&a| pts.iter().all(|&b| pts.iter().all(|&c| set >> (a ^ b ^ c) & 1 == 1)))
        {
            continue;
        }
        for ell in 0..size {
            for quad in 0..1usize << pairs.len() {
                for lin in 0..size {
                    let phase = |x: usize| {
                        let mut q = (lin & x).count_ones();
                        for (k, &(i, j)) in pairs.iter().enumerate() {
                            q += (quad >> k & x >> i & x >> j & 1) as u32;
                        }
                        ((ell & x).count_ones() % 2 + 2 * (q % 2)) as u8
                    };
                    let lead = phase(pts[0]);
                    let key: Vec<u8> = (0..size)
                        .map(|x| if set >> x & 1 == 1 { 1 + (phase(x) + 4 - lead) % 4 } else { 0 })
                        .collect();
                    seen.insert(key);
                }
            }
        }
    }
    seen.len()
}

#[test]
fn criterion_2_enumeration_counts() {
    let mut ok = true;
    let mut details = Vec::new();
    for (n, expected) in [(1usize, 6usize), (2, 60), (3, 1080)] {
        let start = Instant::now();
        let count = enumerate_stabilizer_states(n, false).unwrap().len();
        let elapsed = start.elapsed();
        let oracle = dedupe_oracle(n);
        let closed = stabilizer_state_count(n);
        ok &= count == expected && oracle == expected && closed == expected.into();
        ok &= n != 3 || elapsed < Duration::from_secs(120);
        details.push(format!("n={n}: {count} (oracle {oracle}, {elapsed:.2?})"));
    }
    report(2, ok, &details.join(", "));
}

#[test]
fn criterion_3_witness_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut found, mut not_found, mut bad, mut dim_fail, mut exhaustive) = (0, 0, 0, 0, 0);
    for run in 0..200u64 {
        let sampled = run % 2 == 1;
        let n = if sampled { 128 } else { rng.gen_range(16..=24) };
        let r = rng.gen_range(1..=3);
        let d = random_decomposition(n, r, 4, 1000 + run);
        let mode = if sampled { EngineMode::Sampled } else { EngineMode::Exhaustive };
        if !sampled {
            exhaustive += 1;
            let c = find_constant_subspace(&d, mode, run, 0).unwrap();
            if c.u.dim() + 3 * r < n {
                dim_fail += 1;
            }
        }
        match find_collision_witness(&d, &WitnessConfig::new(mode, run)) {
            Ok(w) => {
                found += 1;
                let equal = d.eval(&w.y).unwrap() == d.eval(&w.z).unwrap();
                if !(equal && w.y.weight() != w.z.weight() && w.report.passed) {
                    bad += 1;
                }
            }
            Err(Error::NotFound(_)) => not_found += 1,
            Err(e) => panic!("run {run}: {e}"),
        }
    }
    report(
        3,
        bad == 0 && dim_fail == 0 && found > 0,
        &format!(
            "{found} witnesses, {not_found} not found, {bad} invalid; dim U >= n - 3r on {}/{exhaustive} exhaustive runs",
            exhaustive - dim_fail
        ),
    );
}

#[test]
fn criterion_4_pipeline_n48() {
    let start = Instant::now();
    let t = MagicTarget::new(TargetKind::H, 48);
    let p = t.probability().unwrap();
    // exact target: f_ψ is THR_{k*} on every layer
    let exact = build_f_psi_from(&TargetAmplitudes::<CycloNumber>::new(&t).unwrap(), &t).unwrap();
    let thr_layers = exact.layer_disagreements(p.ceil_times(48) as usize);
    let mut ok = thr_layers.iter().all(|e| *e == 0u32.into());
    // float oracle for the layer rule |F(x)| < ((1+η)/2)|F| on layer k*-1
    let (a, b) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
    let eta = b / a;
    let amp = |k: i32| a.powi(48 - k) * b.powi(k);
    ok &= (0..=48).all(|k| (amp(k) < (1.0 + eta) / 2.0 * amp(7)) == (k >= 8));

    let mut min_maj = u64::MAX;
    let mut min_g = u64::MAX;
    let mut seeds_ok = 0;
    for seed in 1..=20u64 {
        let cfg = PipelineConfig { seed, ..PipelineConfig::default() };
        assert_eq!(cfg.delta, BigRational::new(1.into(), 20.into()));
        let rep = run_target_pipeline::<CycloNumber>(&t, &cfg).unwrap();
        let dist_ok = rep.distance_sqr.as_ref().is_some_and(|d| *d <= &cfg.delta * &cfg.delta);
        let rest = rep.restriction.as_ref();
        let layer_ok = rep.layer_report.passes;
        let rest_ok = rest.is_some_and(|r| r.passed && 4 * r.agreement >= 3 * r.total);
        let (g_ok, maj_ok) = match (rest, rep.low_degree.as_ref(), rep.majority.as_ref()) {
            (Some(r), Some(low), Some(maj)) => {
                // recount against Maj_m from the restricted function
                let (ga, gt) = parse(&low.agreement);
                let (ma, mt) = parse(&maj.agreement);
                min_g = min_g.min(ga * 1_000_000 / gt);
                min_maj = min_maj.min(ma * 1_000_000 / mt);
                let m = r.m;
                let g = stabrank::approx::restrict(&exact_or(&t, seed), &r.d0).unwrap();
                let recount = g.agreement(&majority(m).unwrap()).unwrap();
                (20 * ga >= 19 * gt, 3 * ma >= 2 * mt && recount == ma)
            }
            _ => (false, false),
        };
        if dist_ok && layer_ok && rest_ok && g_ok && maj_ok && rep.passed {
            seeds_ok += 1;
        }
    }
    let elapsed = start.elapsed();
    ok &= seeds_ok == 20 && elapsed < Duration::from_secs(300);
    report(
        4,
        ok,
        &format!(
            "exact f_ψ = THR_8; {seeds_ok}/20 perturbed seeds pass all stages; min g̃/g agreement {:.4}, min Maj agreement {:.4}; {elapsed:.2?}",
            min_g as f64 / 1e6,
            min_maj as f64 / 1e6
        ),
    );
}

fn parse(frac: &str) -> (u64, u64) {
    let (a, b) = frac.split_once('/').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

/// `f_ψ` of the seed's perturbation, rebuilt for an independent recount.
fn exact_or(t: &MagicTarget, seed: u64) -> stabrank::approx::ThresholdFunction {
    let cfg = PipelineConfig::default();
    let psi = stabrank::approx::PerturbedTarget::<CycloNumber>::sparse_random(t, &cfg.delta, cfg.perturbation_points, seed)
        .unwrap();
    build_f_psi_from(&psi, t).unwrap()
}

#[test]
fn criterion_5_rs_approximation() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let (mut ok_count, mut max_err, mut max_retries) = (0, 0u64, 0usize);
    for i in 0..50u64 {
        let codim = rng.gen_range(1..=6);
        let a = random_subspace(12, 12 - codim, &mut rng);
        let Ok(p) = rs_subspace_approx(&a, 8, i, 64) else { continue };
        let mut errors = 0u64;
        let mut one_sided = true;
        for x in 0..1u32 << 12 {
            let inside = a.contains(&BitVector::from_u64(12, x as u64));
            let v = p.poly.eval(x);
            one_sided &= !inside || v;
            errors += (v != inside) as u64;
        }
        max_err = max_err.max(errors);
        max_retries = max_retries.max(p.retries_used);
        if one_sided && errors == p.errors && errors * 256 <= 4096 && p.retries_used <= 64 {
            ok_count += 1;
        }
    }
    report(
        5,
        ok_count == 50,
        &format!("{ok_count}/50 instances; worst error {max_err}/4096; most retries {max_retries}"),
    );
}

/// `ln W_k` by summing logarithms.
fn ln_mass(n: usize, p: f64, k: usize) -> f64 {
    let ln_c: f64 = (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum();
    ln_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()
}

#[test]
fn criterion_6_binomial_masses() {
    let start = Instant::now();
    let p = Probability::h();
    let pf = p.to_f64();
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let central = central_mass_check(10_000, &p, &r(9, 10), &r(14, 10)).unwrap();
    let oracle = ln_mass(10_000, pf, central.k).exp() * 100.0;
    let mut ok = central.within && (central.scaled_mass_f64 - oracle).abs() < 1e-9;
    let (_, err) = p.rational_approx(30);
    let tol = stabrank::cyclo::parse_rational(&format!("1/1{}", "0".repeat(30))).unwrap();
    ok &= err <= tol;
    let mut details = vec![format!("W√n = {:.6}", central.scaled_mass_f64)];
    for c in [1i64, 2] {
        let rep = binomial_ratio_check(10_000, &p, c).unwrap();
        let oracle = (ln_mass(10_000, pf, rep.k1) - ln_mass(10_000, pf, rep.k2)).exp();
        let bound = 1.1 * ((c * c) as f64 / pf + (c * c) as f64 / (1.0 - pf)).exp();
        ok &= rep.holds && (rep.ratio_f64 / oracle - 1.0).abs() < 1e-9 && oracle <= bound;
        details.push(format!("C={c}: ratio {:.3} <= {:.3}", rep.ratio_f64, rep.bound_f64));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    details.push(format!("{elapsed:.2?}"));
    report(6, ok, &details.join(", "));
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_stabrank")).args(args).output().unwrap();
    assert!(out.status.code().is_some_and(|c| c == 0 || c == 2), "{args:?}");
    out.stdout
}

fn strip_volatile(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("volatile");
    v
}

#[test]
fn criterion_7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("d.json");
    let f = fixture.to_str().unwrap();
    run_cli(&["generate", "--n", "128", "--r", "2", "--seed", "7", "--output", f]);
    let runs: Vec<Vec<&str>> = vec![
        vec!["rank", "--target", "t", "--n", "2"],
        vec!["witness", "--input", f, "--seed", "7"],
        vec!["witness", "--input", f, "--seed", "7", "--mode", "sampled", "--budget", "50"],
        vec!["pipeline", "--n", "48", "--seed", "5"],
        vec!["binomial", "--n", "10000", "--C", "2"],
        vec!["enumerate", "--n", "2"],
        vec!["rs", "--codim", "5", "--m", "12", "--t", "8", "--seed", "3"],
        vec!["generate", "--n", "40", "--r", "3", "--seed", "11"],
    ];
    let mut identical = 0;
    for args in &runs {
        let a = run_cli(args);
        let b = run_cli(args);
        let same = if args[0] == "generate" {
            a == b
        } else {
            let mut quiet = args.clone();
            quiet.push("--no-volatile");
            strip_volatile(&a) == strip_volatile(&b) && run_cli(&quiet) == run_cli(&quiet)
        };
        identical += same as usize;
    }
    report(7, identical == runs.len(), &format!("{identical}/{} commands byte-identical across reruns", runs.len()));
}
