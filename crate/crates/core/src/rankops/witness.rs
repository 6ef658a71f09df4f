use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{AffineForm, AffineSubspace, BitVector};
use crate::scalar::Coefficient;
use crate::stabfun::{StabilizerDecomposition, StabilizerFunction, TargetKind};

/// Largest `dim V_1` enumerated by [`EngineMode::Exhaustive`].
pub const EXHAUSTIVE_V1_LIMIT: usize = 24;
/// Largest `dim U` whose bucket map is computed exhaustively.
pub const EXHAUSTIVE_U_LIMIT: usize = 22;
pub const DEFAULT_BUDGET: u64 = 10_000;
pub const DEFAULT_SAMPLES: usize = 2048;

const REJECTION_DRAWS: usize = 64;
const EXACT_PAIR_SCAN: usize = 4096;
const PAIR_REFERENCES: usize = 32;
const PAIRS_PER_BUCKET: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    Exhaustive,
    Sampled,
}

impl std::fmt::Display for EngineMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EngineMode::Exhaustive => "exhaustive",
            EngineMode::Sampled => "sampled",
        })
    }
}

impl std::str::FromStr for EngineMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(EngineMode::Exhaustive),
            "sampled" => Ok(EngineMode::Sampled),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

impl EngineMode {
    /// Exhaustive when `dim V_1` is within [`EXHAUSTIVE_V1_LIMIT`].
    pub fn auto<C: Coefficient>(d: &StabilizerDecomposition<C>) -> Self {
        if common_kernel(d).dim() <= EXHAUSTIVE_V1_LIMIT {
            EngineMode::Exhaustive
        } else {
            EngineMode::Sampled
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessConfig {
    pub mode: EngineMode,
    pub seed: u64,
    /// Candidate directions tried before giving up.
    pub budget: u64,
    /// Points of `V_1` drawn in sampled mode.
    pub samples: usize,
}

impl WitnessConfig {
    pub fn new(mode: EngineMode, seed: u64) -> Self {
        Self {
            mode,
            seed,
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Output of [`find_constant_subspace`].
#[derive(Clone, Debug)]
pub struct ConstantSubspace {
    pub u: AffineSubspace,
    pub x0: BitVector,
    /// `alpha[j]` is `1_{A_j}` on `U`.
    pub alpha: Vec<bool>,
    pub v1_dim: usize,
    pub v2_dim: usize,
    pub mode: EngineMode,
    /// Size of the preimage of `alpha` (exhaustive) or its sample count.
    pub pattern_count: u64,
    /// `n - 3r`, possibly negative.
    pub dim_bound: i64,
}

impl ConstantSubspace {
    pub fn dim_bound_met(&self) -> bool {
        self.u.dim() as i64 >= self.dim_bound
    }
}

/// A direction `v ∈ U_0` of weight at least `⌈2n/3⌉` together with a point
/// `x0 ∈ U` where every `Δ_v q_j` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyDirection {
    pub v: BitVector,
    pub x0: BitVector,
}

#[derive(Clone, Debug)]
pub struct HeavySearch {
    pub mode: EngineMode,
    /// Set when exhaustive mode was requested but `dim U` exceeded
    /// [`EXHAUSTIVE_U_LIMIT`].
    pub fell_back: bool,
    pub candidates_tried: u64,
    pub target_weight: usize,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub y: BitVector,
    pub z: BitVector,
    pub v: BitVector,
    pub x0: BitVector,
    pub u_dim: usize,
    pub v_dim: usize,
    pub constant: ConstantSubspace,
    pub search: HeavySearch,
    pub report: WitnessReport,
}

fn common_kernel<C: Coefficient>(d: &StabilizerDecomposition<C>) -> AffineSubspace {
    let eqs = d.functions().map(|f| (f.ell().coeffs, false)).collect();
    AffineSubspace::from_equations(d.n(), eqs).expect("homogeneous system is consistent")
}

fn check_nonempty<C: Coefficient>(d: &StabilizerDecomposition<C>) -> Result<()> {
    if d.is_empty() {
        Err(Error::Precondition("the decomposition has no terms".into()))
    } else {
        Ok(())
    }
}

/// Per-term support indicators of the points of `space`, visited in
/// Gray-code order and updated one basis vector at a time.
struct SupportWalker {
    toggles: Vec<Vec<BitVector>>,
    mismatch: Vec<BitVector>,
}

impl SupportWalker {
    fn new(space: &AffineSubspace, supports: &[&AffineSubspace]) -> Self {
        let mut toggles = Vec::new();
        let mut mismatch = Vec::new();
        for a in supports {
            let eqs: Vec<(BitVector, bool)> = a.equations().collect();
            let m = eqs.len();
            let mut start = BitVector::zeros(m);
            for (i, (c, b)) in eqs.iter().enumerate() {
                start.set(i, c.dot(space.offset()) != *b);
            }
            let tog = space
                .basis()
                .iter()
                .map(|bv| BitVector::from_bools(&eqs.iter().map(|(c, _)| c.dot(bv)).collect::<Vec<_>>()))
                .collect();
            toggles.push(tog);
            mismatch.push(start);
        }
        Self {
            toggles,
            mismatch,
        }
    }

    fn step(&mut self, k: usize) {
        for (m, t) in self.mismatch.iter_mut().zip(&self.toggles) {
            *m ^= t[k];
        }
    }

    fn pattern(&self) -> u128 {
        let mut key = 0u128;
        for (j, m) in self.mismatch.iter().enumerate() {
            if m.is_zero() {
                key |= 1 << j;
            }
        }
        key
    }
}

fn pattern_of(supports: &[&AffineSubspace], x: &BitVector) -> u128 {
    supports
        .iter()
        .enumerate()
        .filter(|(_, a)| a.contains(x))
        .fold(0u128, |k, (j, _)| k | 1 << j)
}

/// An affine subspace `U` on which every `ℓ_j` and every `1_{A_j}` is
/// constant.
///
/// `U` is cut out of `V_1 = ∩ ker ℓ_j` by the supports containing a base
/// point `x0` and by one separating functional for each support missing it.
/// Exhaustive mode picks the support pattern with the largest preimage in
/// `V_1`, which forces `dim U ≥ n - 3r`. Ties go to the larger pattern read
/// as a bitmask with bit `j` set when `x ∈ A_j`.
pub fn find_constant_subspace<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    mode: EngineMode,
    seed: u64,
    samples: usize,
) -> Result<ConstantSubspace> {
    check_nonempty(d)?;
    let n = d.n();
    let r = d.rank();
    if r > 128 {
        return Err(Error::Guard {
            what: "rank",
            value: r,
            guard: 128,
        });
    }
    let v1 = common_kernel(d);
    let supports: Vec<&AffineSubspace> = d.functions().map(StabilizerFunction::support).collect();

    let (key, x0, count) = match mode {
        EngineMode::Exhaustive => {
            if v1.dim() > EXHAUSTIVE_V1_LIMIT {
                return Err(Error::Guard {
                    what: "dim V_1",
                    value: v1.dim(),
                    guard: EXHAUSTIVE_V1_LIMIT,
                });
            }
            let mut walker = SupportWalker::new(&v1, &supports);
            let mut counts: HashMap<u128, (u64, u64)> = HashMap::new();
            for i in 0u64..1 << v1.dim() {
                if i > 0 {
                    walker.step(i.trailing_zeros() as usize);
                }
                counts.entry(walker.pattern()).or_insert((0, i)).0 += 1;
            }
            let (&key, &(count, first)) = counts
                .iter()
                .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.0.cmp(b.0)))
                .expect("V_1 is nonempty");
            let gray = first ^ (first >> 1);
            let x0 = v1.extend_section(&BitVector::from_u64(v1.dim(), gray));
            (key, x0, count)
        }
        EngineMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts: HashMap<u128, (u64, BitVector)> = HashMap::new();
            for _ in 0..samples.max(1) {
                let x = v1.sample_with(&mut rng);
                counts.entry(pattern_of(&supports, &x)).or_insert((0, x)).0 += 1;
            }
            let (&key, (count, x0)) = counts
                .iter()
                .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.0.cmp(b.0)))
                .expect("at least one sample");
            (key, *x0, *count)
        }
    };

    let alpha: Vec<bool> = (0..r).map(|j| key >> j & 1 == 1).collect();
    let mut v2 = v1.clone();
    for (a, &inside) in supports.iter().zip(&alpha) {
        if inside {
            v2 = v2
                .intersect(a)?
                .ok_or_else(|| Error::Internal("x0 lies in V_1 ∩ A_j but the intersection is empty".into()))?;
        }
    }
    let mut separators: Vec<AffineForm> = Vec::new();
    for (a, &inside) in supports.iter().zip(&alpha) {
        if !inside {
            let mut s = a.separating_functional(&x0)?;
            // the added equation is s(x) = 1
            s.constant = !s.constant;
            separators.push(s);
        }
    }
    let u = v2
        .restrict_to_zeros(&separators)
        .ok_or_else(|| Error::Internal("x0 violates its own separating functionals".into()))?;

    let out = ConstantSubspace {
        x0,
        alpha,
        v1_dim: v1.dim(),
        v2_dim: v2.dim(),
        mode,
        pattern_count: count,
        dim_bound: n as i64 - 3 * r as i64,
        u,
    };
    check_constancy(d, &out)?;
    if mode == EngineMode::Exhaustive && !out.dim_bound_met() {
        return Err(Error::Internal(format!(
            "dim U = {} is below n - 3r = {}",
            out.u.dim(),
            out.dim_bound
        )));
    }
    Ok(out)
}

/// Structural check: `U ⊆ ker ℓ_j`, `U ⊆ A_j` when `alpha_j`, and
/// `U ∩ A_j = ∅` otherwise.
fn check_constancy<C: Coefficient>(d: &StabilizerDecomposition<C>, c: &ConstantSubspace) -> Result<()> {
    let u = &c.u;
    if !u.contains(&c.x0) {
        return Err(Error::Internal("U does not contain its base point".into()));
    }
    for (j, f) in d.functions().enumerate() {
        let ell = f.ell();
        if ell.eval(u.offset()) || u.basis().iter().any(|b| ell.coeffs.dot(b)) {
            return Err(Error::Internal(format!("ℓ_{} is not zero on U", j + 1)));
        }
        let meet = u.intersect(f.support())?;
        let ok = match (c.alpha[j], meet) {
            (true, Some(m)) => m.dim() == u.dim(),
            (false, None) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::Internal(format!("1_A{} is not constant on U", j + 1)));
        }
    }
    Ok(())
}

fn derivative_forms<C: Coefficient>(d: &StabilizerDecomposition<C>, v: &BitVector) -> Vec<AffineForm> {
    d.functions().map(|f| f.q().directional_derivative(v)).collect()
}

fn target_weight(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

fn check_heavy<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    u: &AffineSubspace,
    h: &HeavyDirection,
) -> Result<()> {
    let u0 = u.linear_part();
    let ok = u0.contains(&h.v)
        && h.v.weight() >= target_weight(d.n())
        && u.contains(&h.x0)
        && d.functions().all(|f| f.q().eval(&h.x0) == f.q().eval(&(h.x0 ^ h.v)));
    if ok {
        Ok(())
    } else {
        Err(Error::Internal("heavy direction failed re-verification".into()))
    }
}

/// Lazily produces candidate heavy directions, each already verified.
struct HeavyCandidates<'a, C: Coefficient> {
    d: &'a StabilizerDecomposition<C>,
    u: &'a AffineSubspace,
    u0: AffineSubspace,
    mode: EngineMode,
    fell_back: bool,
    rng: ChaCha8Rng,
    budget: u64,
    tried: u64,
    t: usize,
    // exhaustive state
    patterns: Vec<u128>,
    bucket_order: Vec<u128>,
    next_bucket: usize,
    queue: Vec<HeavyDirection>,
}

impl<'a, C: Coefficient> HeavyCandidates<'a, C> {
    fn new(d: &'a StabilizerDecomposition<C>, u: &'a AffineSubspace, mode: EngineMode, seed: u64, budget: u64) -> Self {
        let exhaustive = mode == EngineMode::Exhaustive && u.dim() <= EXHAUSTIVE_U_LIMIT;
        let mut me = Self {
            d,
            u,
            u0: u.linear_part(),
            mode: if exhaustive { EngineMode::Exhaustive } else { EngineMode::Sampled },
            fell_back: mode == EngineMode::Exhaustive && !exhaustive,
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget,
            tried: 0,
            t: target_weight(d.n()),
            patterns: Vec::new(),
            bucket_order: Vec::new(),
            next_bucket: 0,
            queue: Vec::new(),
        };
        if exhaustive {
            me.build_buckets();
        }
        me
    }

    fn summary(&self) -> HeavySearch {
        HeavySearch {
            mode: self.mode,
            fell_back: self.fell_back,
            candidates_tried: self.tried,
            target_weight: self.t,
        }
    }

    /// `Γ(x) = (q_j(x))_j` for every point of `U` in Gray-code order,
    /// updated through the derivative along the flipped basis vector.
    fn build_buckets(&mut self) {
        let u = self.u;
        let dim = u.dim();
        let qs: Vec<_> = self.d.functions().map(|f| f.q()).collect();
        let steps: Vec<Vec<AffineForm>> = u
            .basis()
            .iter()
            .map(|b| qs.iter().map(|q| q.directional_derivative(b)).collect())
            .collect();
        let mut x = *u.offset();
        let mut vals: Vec<bool> = qs.iter().map(|q| q.eval(&x)).collect();
        let mut patterns = Vec::with_capacity(1 << dim);
        let mut counts: HashMap<u128, u64> = HashMap::new();
        for i in 0u64..1 << dim {
            if i > 0 {
                let k = i.trailing_zeros() as usize;
                for (val, form) in vals.iter_mut().zip(&steps[k]) {
                    *val ^= form.eval(&x);
                }
                x ^= u.basis()[k];
            }
            let key = vals.iter().enumerate().fold(0u128, |a, (j, &b)| a | (b as u128) << j);
            patterns.push(key);
            *counts.entry(key).or_default() += 1;
        }
        let mut order: Vec<(u128, u64)> = counts.into_iter().collect();
        order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        self.bucket_order = order.into_iter().map(|(k, _)| k).collect();
        self.patterns = patterns;
    }

    fn point(&self, i: usize) -> BitVector {
        let g = (i ^ (i >> 1)) as u64;
        self.u.extend_section(&BitVector::from_u64(self.u.dim(), g))
    }

    /// Far pairs inside the next bucket, farthest first.
    fn scan_next_bucket(&mut self) -> bool {
        let Some(&key) = self.bucket_order.get(self.next_bucket) else {
            return false;
        };
        self.next_bucket += 1;
        let members: Vec<usize> = (0..self.patterns.len()).filter(|&i| self.patterns[i] == key).collect();
        let mut pairs: Vec<(usize, BitVector, BitVector)> = Vec::new();
        if members.len() <= EXACT_PAIR_SCAN {
            let pts: Vec<BitVector> = members.iter().map(|&i| self.point(i)).collect();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    let dist = pts[a].distance(&pts[b]);
                    if dist >= self.t {
                        pairs.push((dist, pts[a], pts[b]));
                    }
                }
            }
        } else {
            let refs: Vec<BitVector> = members[..PAIR_REFERENCES].iter().map(|&i| self.point(i)).collect();
            let mut best: Vec<(usize, BitVector)> = vec![(0, BitVector::zeros(self.d.n())); refs.len()];
            for &i in &members[PAIR_REFERENCES..] {
                let x = self.point(i);
                for (r, b) in refs.iter().zip(best.iter_mut()) {
                    let dist = r.distance(&x);
                    if dist > b.0 {
                        *b = (dist, x);
                    }
                }
            }
            for (r, (dist, x)) in refs.iter().zip(best) {
                if dist >= self.t {
                    pairs.push((dist, *r, x));
                }
            }
        }
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        let mut seen = std::collections::HashSet::new();
        self.queue = pairs
            .into_iter()
            .filter(|(_, a, b)| seen.insert(*a ^ *b))
            .take(PAIRS_PER_BUCKET)
            .map(|(_, a, b)| HeavyDirection { v: a ^ b, x0: a })
            .collect();
        self.queue.reverse();
        true
    }

    /// A random element of `U_0` of weight at least `t`: rejection first,
    /// then greedy basis flips from a random start.
    fn draw_heavy(&mut self) -> Option<BitVector> {
        let basis = self.u0.basis();
        if basis.is_empty() {
            return None;
        }
        for _ in 0..REJECTION_DRAWS {
            let v = self.u0.sample_with(&mut self.rng);
            if v.weight() >= self.t {
                return Some(v);
            }
        }
        let mut v = self.u0.sample_with(&mut self.rng);
        let mut order: Vec<usize> = (0..basis.len()).collect();
        loop {
            order.shuffle(&mut self.rng);
            let mut improved = false;
            for &k in &order {
                let w = v ^ basis[k];
                if w.weight() > v.weight() {
                    v = w;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        (v.weight() >= self.t).then_some(v)
    }

    fn next_sampled(&mut self) -> Option<HeavyDirection> {
        while self.tried < self.budget {
            self.tried += 1;
            let Some(v) = self.draw_heavy() else { continue };
            let forms = derivative_forms(self.d, &v);
            if let Some(sol) = self.u.restrict_to_zeros(&forms) {
                let x0 = if self.rng.gen::<bool>() { *sol.offset() } else { sol.sample_with(&mut self.rng) };
                return Some(HeavyDirection { v, x0 });
            }
        }
        None
    }
}

impl<C: Coefficient> Iterator for HeavyCandidates<'_, C> {
    type Item = HeavyDirection;

    fn next(&mut self) -> Option<HeavyDirection> {
        match self.mode {
            EngineMode::Sampled => self.next_sampled(),
            EngineMode::Exhaustive => loop {
                if self.tried >= self.budget {
                    return None;
                }
                if let Some(h) = self.queue.pop() {
                    self.tried += 1;
                    return Some(h);
                }
                if !self.scan_next_bucket() {
                    return None;
                }
            },
        }
    }
}

/// A direction `v ∈ U_0` with `|v| ≥ ⌈2n/3⌉` and a point `x0 ∈ U` with
/// `q_j(x0) = q_j(x0 + v)` for every term.
///
/// Exhaustive mode buckets the points of `U` by `(q_j(x))_j` and looks for a
/// far pair inside a bucket, largest bucket first. Sampled mode draws heavy
/// elements of `U_0` and solves `Δ_v q_j = 0` over `U`.
pub fn find_heavy_direction<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    u: &AffineSubspace,
    mode: EngineMode,
    seed: u64,
    budget: u64,
) -> Result<(HeavyDirection, HeavySearch)> {
    check_nonempty(d)?;
    crate::error::check_dim(d.n(), u.n())?;
    let mut it = HeavyCandidates::new(d, u, mode, seed, budget);
    match it.next() {
        Some(h) => {
            check_heavy(d, u, &h)?;
            Ok((h, it.summary()))
        }
        None => Err(Error::NotFound(format!(
            "no heavy direction after {} candidates ({} mode)",
            it.tried, it.mode
        ))),
    }
}

/// A pair `y, z` with `|y| < |z|` on which `F_d` takes the same value.
///
/// Each heavy direction `v` yields `V = {x ∈ U : Δ_v q_j(x) = 0 ∀j}`,
/// `y` = the low-weight element of `V` and `z = y + v`; directions giving
/// `|y| = |z|` are skipped. The result is re-verified by direct evaluation.
pub fn find_collision_witness<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    cfg: &WitnessConfig,
) -> Result<Witness> {
    let constant = find_constant_subspace(d, cfg.mode, cfg.seed, cfg.samples)?;
    let u = &constant.u;
    let r = d.rank();
    let mut it = HeavyCandidates::new(d, u, cfg.mode, cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15), cfg.budget);
    while let Some(h) = it.next() {
        check_heavy(d, u, &h)?;
        let forms = derivative_forms(d, &h.v);
        let space = u
            .restrict_to_zeros(&forms)
            .ok_or_else(|| Error::Internal("Δ_v system is empty although x0 solves it".into()))?;
        if space.dim() + r < u.dim() {
            return Err(Error::Internal(format!(
                "dim V = {} < dim U - r = {}",
                space.dim(),
                u.dim() - r
            )));
        }
        let mut y = space.low_weight_element();
        let mut z = y ^ h.v;
        if y.weight() > d.n() - space.dim() {
            return Err(Error::Internal("low-weight element exceeds the codimension bound".into()));
        }
        if y.weight() == z.weight() {
            continue;
        }
        if y.weight() > z.weight() {
            std::mem::swap(&mut y, &mut z);
        }
        let report = verify_witness(d, &y, &z)?;
        if !report.passed {
            return Err(Error::Internal(format!("constructed witness failed verification: {report:?}")));
        }
        return Ok(Witness {
            y,
            z,
            v: h.v,
            x0: h.x0,
            u_dim: u.dim(),
            v_dim: space.dim(),
            search: it.summary(),
            constant,
            report,
        });
    }
    Err(Error::NotFound(format!(
        "no collision witness after {} candidate directions ({} mode)",
        it.tried, it.mode
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermCheck {
    pub ell_equal: bool,
    pub support_equal: bool,
    pub q_equal: bool,
}

impl TermCheck {
    pub fn passed(&self) -> bool {
        self.ell_equal && self.support_equal && self.q_equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regime {
    /// `r ≤ n/100`.
    pub r_le_n_over_100: bool,
    /// `4r < 0.08 n`.
    pub four_r_lt_008n: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub target: TargetKind,
    /// Whether `F_target(y) != F_target(z)`, so the pair rules the target out.
    pub refutes: bool,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub n: usize,
    pub rank: usize,
    pub y: String,
    pub z: String,
    pub y_weight: usize,
    pub z_weight: usize,
    pub terms: Vec<TermCheck>,
    pub weights_differ: bool,
    pub values_equal: bool,
    pub regime: Regime,
    pub applicability: Vec<Applicability>,
    /// `weights_differ && values_equal`.
    pub passed: bool,
}

impl WitnessReport {
    /// Human-readable list of failed conditions.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (j, t) in self.terms.iter().enumerate() {
            if !t.ell_equal {
                out.push(format!("term {}: ℓ(y) != ℓ(z)", j + 1));
            }
            if !t.support_equal {
                out.push(format!("term {}: 1_A(y) != 1_A(z)", j + 1));
            }
            if !t.q_equal {
                out.push(format!("term {}: q(y) != q(z)", j + 1));
            }
        }
        if !self.weights_differ {
            out.push(format!("equal weights |y| = |z| = {}", self.y_weight));
        }
        if !self.values_equal {
            out.push("F(y) != F(z)".into());
        }
        out
    }
}

/// Re-evaluates every condition on `(y, z)` from scratch.
pub fn verify_witness<C: Coefficient>(
    d: &StabilizerDecomposition<C>,
    y: &BitVector,
    z: &BitVector,
) -> Result<WitnessReport> {
    let n = d.n();
    crate::error::check_dim(n, y.len())?;
    crate::error::check_dim(n, z.len())?;
    let terms = d
        .functions()
        .map(|f| TermCheck {
            ell_equal: f.ell().eval(y) == f.ell().eval(z),
            support_equal: f.support().contains(y) == f.support().contains(z),
            q_equal: f.q().eval(y) == f.q().eval(z),
        })
        .collect();
    let values_equal = d.eval(y)?.sub(&d.eval(z)?).is_zero();
    let (wy, wz) = (y.weight(), z.weight());
    let r = d.rank();
    let applicability = vec![
        Applicability {
            target: TargetKind::H,
            refutes: wy != wz,
            note: "layer-injective",
        },
        Applicability {
            target: TargetKind::R,
            refutes: wy != wz,
            note: "layer-injective",
        },
        Applicability {
            target: TargetKind::T,
            refutes: wy % 8 != wz % 8,
            note: "layer values repeat with period 8",
        },
    ];
    Ok(WitnessReport {
        n,
        rank: r,
        y: y.to_hex(),
        z: z.to_hex(),
        y_weight: wy,
        z_weight: wz,
        terms,
        weights_differ: wy != wz,
        values_equal,
        regime: Regime {
            r_le_n_over_100: 100 * r <= n,
            four_r_lt_008n: 100 * r < 2 * n,
        },
        applicability,
        passed: wy != wz && values_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNumber;
    use crate::f2::random::{random_linear_form, random_quadratic, random_subspace};
    use crate::f2::QuadraticForm;

    fn single(f: StabilizerFunction) -> StabilizerDecomposition<CycloNumber> {
        let mut d = StabilizerDecomposition::empty(f.n());
        d.push(CycloNumber::one(), f).unwrap();
        d
    }

    fn random_decomposition(n: usize, r: usize, seed: u64) -> StabilizerDecomposition<CycloNumber> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = StabilizerDecomposition::empty(n);
        for _ in 0..r {
            let dim = rng.gen_range(n - 4..=n);
            let f = StabilizerFunction::new(
                random_linear_form(n, &mut rng),
                random_quadratic(n, &mut rng),
                random_subspace(n, dim, &mut rng),
            )
            .unwrap();
            d.push(CycloNumber::i_pow(rng.gen_range(0..4)), f).unwrap();
        }
        d
    }

    #[test]
    fn constant_one_gives_full_space() {
        let d = single(StabilizerFunction::one(10));
        let c = find_constant_subspace(&d, EngineMode::Exhaustive, 0, 0).unwrap();
        assert_eq!(c.u.dim(), 10);
    }

    #[test]
    fn linear_phase_and_halfspace() {
        let n = 8;
        let a = AffineSubspace::from_equations(n, vec![(BitVector::unit(n, 1), false)]).unwrap();
        let f = StabilizerFunction::new(AffineForm::coordinate(n, 0), QuadraticForm::zero(n), a).unwrap();
        let c = find_constant_subspace(&single(f), EngineMode::Exhaustive, 0, 0).unwrap();
        let expected =
            AffineSubspace::from_equations(n, vec![(BitVector::unit(n, 0), false), (BitVector::unit(n, 1), false)])
                .unwrap();
        assert_eq!(c.u, expected);
        assert!(c.dim_bound_met());
    }

    #[test]
    fn random_n16_r3_constancy_by_enumeration() {
        for seed in 0..5 {
            let d = random_decomposition(16, 3, seed);
            let c = find_constant_subspace(&d, EngineMode::Exhaustive, seed, 0).unwrap();
            assert!(c.u.dim() >= 7);
            let first: Vec<_> = d.functions().map(|f| (f.ell().eval(&c.x0), f.support().contains(&c.x0))).collect();
            for x in c.u.iter_points() {
                let here: Vec<_> = d.functions().map(|f| (f.ell().eval(&x), f.support().contains(&x))).collect();
                assert_eq!(here, first);
            }
        }
    }

    #[test]
    fn trivial_quadratics_accept_all_ones() {
        let d = single(StabilizerFunction::one(9));
        let u = AffineSubspace::full(9);
        let (h, _) = find_heavy_direction(&d, &u, EngineMode::Exhaustive, 0, 100).unwrap();
        assert_eq!(h.v, BitVector::ones(9));
        assert_eq!(h.x0, BitVector::zeros(9));
    }

    #[test]
    fn n9_x1x2_heavy_direction() {
        let n = 9;
        let q = QuadraticForm::from_parts(n, &[(0, 1)], BitVector::zeros(n), false).unwrap();
        let f = StabilizerFunction::new(AffineForm::zero(n), q.clone(), AffineSubspace::full(n)).unwrap();
        let d = single(f);
        let (h, _) = find_heavy_direction(&d, &AffineSubspace::full(n), EngineMode::Exhaustive, 0, 100).unwrap();
        assert!(h.v.weight() >= 6);
        assert_eq!(q.eval(&h.x0), q.eval(&(h.x0 ^ h.v)));
    }

    #[test]
    fn constant_one_witness_n12() {
        let d = single(StabilizerFunction::one(12));
        let w = find_collision_witness(&d, &WitnessConfig::new(EngineMode::Exhaustive, 0)).unwrap();
        assert_eq!(w.y, BitVector::zeros(12));
        assert!(w.z.weight() >= 8);
        assert!(w.report.passed);
    }

    #[test]
    fn sign_x1_witness_matches_value_groups() {
        let n = 16;
        let q = QuadraticForm::from_parts(n, &[], BitVector::unit(n, 0), false).unwrap();
        let d = single(StabilizerFunction::new(AffineForm::zero(n), q, AffineSubspace::full(n)).unwrap());
        let w = find_collision_witness(&d, &WitnessConfig::new(EngineMode::Exhaustive, 3)).unwrap();
        assert_eq!(w.y.get(0), w.z.get(0));
        // group all values: the pair must share a group
        let group = |x: &BitVector| d.eval(x).unwrap();
        assert_eq!(group(&w.y), group(&w.z));
        assert!(w.y.weight() < w.z.weight());
    }

    #[test]
    fn sampled_n128_r2() {
        let d = random_decomposition(128, 2, 11);
        let cfg = WitnessConfig::new(EngineMode::Sampled, 7);
        let w = find_collision_witness(&d, &cfg).unwrap();
        assert!(w.report.passed);
        assert!(w.y.weight() <= 128 - w.v_dim);
        assert!(w.z.weight() + w.y.weight() >= 86);
        let again = find_collision_witness(&d, &cfg).unwrap();
        assert_eq!((w.y, w.z), (again.y, again.z));
    }

    #[test]
    fn sampled_heavy_direction_n128() {
        let d = random_decomposition(128, 2, 5);
        let c = find_constant_subspace(&d, EngineMode::Sampled, 1, 512).unwrap();
        let (h, s) = find_heavy_direction(&d, &c.u, EngineMode::Sampled, 2, 10_000).unwrap();
        assert!(s.candidates_tried >= 1);
        for f in d.functions() {
            assert_eq!(f.q().eval(&h.x0), f.q().eval(&(h.x0 ^ h.v)));
        }
    }

    #[test]
    fn report_flags_equal_weights_and_failures() {
        let d = random_decomposition(10, 2, 1);
        let x = BitVector::from_u64(10, 0b101);
        let rep = verify_witness(&d, &x, &x).unwrap();
        assert!(!rep.weights_differ);
        assert!(!rep.passed);
        assert!(rep.failures().iter().any(|s| s.contains("equal weights")));
    }

    #[test]
    fn exhaustive_guard() {
        let d = single(StabilizerFunction::one(30));
        assert!(matches!(
            find_constant_subspace(&d, EngineMode::Exhaustive, 0, 0),
            Err(Error::Guard { .. })
        ));
        assert_eq!(EngineMode::auto(&d), EngineMode::Sampled);
    }
}
