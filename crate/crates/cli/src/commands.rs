use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stabrank::approx::{
    binomial_ratio_check, central_mass_check, rs_subspace_approx, run_decomposition_pipeline, run_target_pipeline,
    PipelineConfig, ThresholdParams,
};
use stabrank::cyclo::CycloNumber;
use stabrank::f2::random::random_subspace;
use stabrank::f2::BitVector;
use stabrank::hp::HpComplex;
use stabrank::prob::Probability;
use stabrank::rankops::{
    find_collision_witness, magic_rank_search, residual, residual_f64, verify_witness, EngineMode, RankOutcome,
    WitnessConfig, FLOAT_TOLERANCE,
};
use stabrank::scalar::{Coefficient, Mode};
use stabrank::stabfun::json::{read_decomposition, to_file, to_json};
use stabrank::stabfun::{
    enumerate_stabilizer_states, random_decomposition, stabilizer_state_count, AnyDecomposition, MagicTarget,
    StabilizerDecomposition, StabilizerFunction, TargetKind,
};
use stabrank::Error;

use crate::args::{
    BinomialArgs, EnumerateArgs, GenerateArgs, NumericMode, PipelineArgs, RankArgs, RsArgs, Target, WitnessArgs,
    WitnessMode,
};
use crate::output::{Report, Status};

pub type CmdResult = Result<Report, Error>;

fn kind(t: Target) -> TargetKind {
    match t {
        Target::H => TargetKind::H,
        Target::T => TargetKind::T,
        Target::R => TargetKind::R,
    }
}

fn config<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

/// `k*`, `m` and the window for targets that have them.
fn conventions(target: Option<TargetKind>, n: Option<usize>, mode: Option<Mode>, seed: Option<u64>) -> Value {
    let threshold = match (target, n) {
        (Some(t), Some(n)) if n > 0 => MagicTarget::new(t, n)
            .probability()
            .and_then(|p| ThresholdParams::new(n, &p))
            .ok()
            .map(|p| serde_json::to_value(p).expect("parameters serialize")),
        _ => None,
    };
    json!({
        "threshold": threshold,
        "mode": mode,
        "seed": seed,
        "bit_order": "bit i of a hex mask is coordinate x_{i+1}",
        "normalization": "unnormalized",
    })
}

fn residual_string(exact_zero: bool, value: &HpComplex, mode: Mode) -> String {
    if mode == Mode::Exact && exact_zero {
        "0".into()
    } else {
        format!("{:e}", residual_f64(value))
    }
}

fn target_vector<C: Coefficient>(t: &MagicTarget) -> Result<Vec<C>, Error> {
    let layers = t.layer_amplitudes::<C>()?;
    Ok((0u64..1 << t.n).map(|b| layers[b.count_ones() as usize].clone()).collect())
}

fn verify_against<C: Coefficient>(d: &StabilizerDecomposition<C>, t: &MagicTarget) -> Result<(bool, String), Error> {
    let (zero, value) = residual(d, &target_vector::<C>(t)?)?;
    let ok = match C::MODE {
        Mode::Exact => zero,
        Mode::Float => residual_f64(&value) <= FLOAT_TOLERANCE * FLOAT_TOLERANCE,
    };
    Ok((ok, residual_string(zero, &value, C::MODE)))
}

pub fn rank(args: &RankArgs) -> CmdResult {
    let tk = kind(args.target);
    if let (Some(path), true) = (&args.input, args.verify_only) {
        let d = read_decomposition(path)?;
        let t = MagicTarget::new(tk, d.n());
        let (ok, res) = match (&d, t.is_exact()) {
            (AnyDecomposition::Exact(e), true) => verify_against(e, &t)?,
            _ => verify_against(&d.to_float(), &t)?,
        };
        return Ok(Report {
            command: "rank",
            status: if ok { Status::Ok } else { Status::Failed },
            config: config(args),
            conventions: conventions(Some(tk), Some(d.n()), Some(d.mode()), None),
            result: json!({ "n": d.n(), "rank": d.rank(), "residual_sqr": res, "residual_zero": ok }),
            csv: None,
        });
    }
    let n = args
        .n
        .ok_or_else(|| Error::Precondition("rank needs --n or --input with --verify-only".into()))?;
    let t = MagicTarget::new(tk, n);
    let mode = args.mode.unwrap_or(if t.is_exact() { NumericMode::Exact } else { NumericMode::Float });
    let (outcome, mode): (Result<Value, Value>, Mode) = match mode {
        NumericMode::Exact => (rank_outcome(magic_rank_search::<CycloNumber>(&t, args.r_max, args.allow_n4)?, args)?, Mode::Exact),
        NumericMode::Float => (rank_outcome(magic_rank_search::<HpComplex>(&t, args.r_max, args.allow_n4)?, args)?, Mode::Float),
    };
    let (status, result) = match outcome {
        Ok(v) => (Status::Ok, v),
        Err(v) => (Status::NotFound, v),
    };
    Ok(Report {
        command: "rank",
        status,
        config: config(args),
        conventions: conventions(Some(tk), Some(n), Some(mode), None),
        result,
        csv: None,
    })
}

fn rank_outcome<C: Coefficient>(o: RankOutcome<C>, args: &RankArgs) -> Result<Result<Value, Value>, Error>
where
    AnyDecomposition: From<StabilizerDecomposition<C>>,
{
    Ok(match o {
        RankOutcome::Found(c) => {
            let d = AnyDecomposition::from(c.decomposition.clone());
            if let Some(path) = &args.certificate {
                stabrank::stabfun::json::write_decomposition(path, &d)?;
            }
            let zero = C::MODE == Mode::Exact && c.exact;
            Ok(json!({
                "rank": c.rank,
                "exact": c.exact,
                "residual_sqr": residual_string(zero, &c.residual_sqr, C::MODE),
                "subsets_tested": c.subsets_tested,
                "states": c.states,
                "certificate": to_file(&d),
            }))
        }
        RankOutcome::NotFound {
            r_max,
            subsets_tested,
            states,
        } => Err(json!({
            "rank": Value::Null,
            "r_max": r_max,
            "subsets_tested": subsets_tested,
            "states": states,
        })),
    })
}

pub fn witness(args: &WitnessArgs) -> CmdResult {
    let d = read_decomposition(&args.input)?;
    match &d {
        AnyDecomposition::Exact(e) => witness_in(e, args),
        AnyDecomposition::Float(f) => witness_in(f, args),
    }
}

fn witness_in<C: Coefficient>(d: &StabilizerDecomposition<C>, args: &WitnessArgs) -> CmdResult {
    let n = d.n();
    let conv = conventions(None, Some(n), Some(C::MODE), Some(args.seed));
    if args.check {
        let parse = |s: &Option<String>| BitVector::from_hex(n, s.as_deref().unwrap_or_default());
        let (y, z) = (parse(&args.y)?, parse(&args.z)?);
        let report = verify_witness(d, &y, &z)?;
        return Ok(Report {
            command: "witness",
            status: if report.passed { Status::Ok } else { Status::Failed },
            config: config(args),
            conventions: conv,
            result: json!({ "failures": report.failures(), "report": report }),
            csv: None,
        });
    }
    let mode = match args.mode {
        WitnessMode::Auto => EngineMode::auto(d),
        WitnessMode::Exhaustive => EngineMode::Exhaustive,
        WitnessMode::Sampled => EngineMode::Sampled,
    };
    let cfg = WitnessConfig {
        samples: args.samples,
        ..WitnessConfig::new(mode, args.seed).with_budget(args.budget)
    };
    let (status, result) = match find_collision_witness(d, &cfg) {
        Ok(w) => (
            Status::Ok,
            json!({
                "y": w.y.to_hex(),
                "z": w.z.to_hex(),
                "v": w.v.to_hex(),
                "x0": w.x0.to_hex(),
                "mode": mode,
                "u_dim": w.u_dim,
                "v_dim": w.v_dim,
                "v1_dim": w.constant.v1_dim,
                "v2_dim": w.constant.v2_dim,
                "dim_bound": w.constant.dim_bound,
                "dim_bound_met": w.constant.dim_bound_met(),
                "heavy_search": {
                    "mode": w.search.mode,
                    "fell_back": w.search.fell_back,
                    "candidates_tried": w.search.candidates_tried,
                    "target_weight": w.search.target_weight,
                },
                "report": w.report,
            }),
        ),
        Err(Error::NotFound(msg)) => (Status::NotFound, json!({ "mode": mode, "reason": msg })),
        Err(e) => return Err(e),
    };
    Ok(Report {
        command: "witness",
        status,
        config: config(args),
        conventions: conv,
        result,
        csv: None,
    })
}

fn parse_fraction(s: &str) -> Result<BigRational, Error> {
    match s.parse::<Probability>()? {
        Probability::Rational(r) => Ok(r),
        _ => Err(Error::Parse(format!("expected a rational number, got {s:?}"))),
    }
}

pub fn pipeline(args: &PipelineArgs) -> CmdResult {
    let tk = kind(args.target);
    let cfg = PipelineConfig {
        eps: parse_fraction(&args.eps)?,
        gamma: parse_fraction(&args.gamma)?,
        delta: parse_fraction(&args.delta)?,
        perturbation_points: args.points,
        trials: args.trials,
        seed: args.seed,
        rs_retries: args.retries,
        negate: args.negate,
    };
    let (report, n) = match &args.input {
        Some(path) => {
            let d = read_decomposition(path)?;
            let t = MagicTarget::new(tk, d.n());
            let rep = match (&d, t.is_exact()) {
                (AnyDecomposition::Exact(e), true) => run_decomposition_pipeline(e, &t, &cfg)?,
                _ => run_decomposition_pipeline(&d.to_float(), &t, &cfg)?,
            };
            (rep, d.n())
        }
        None => {
            let t = MagicTarget::new(tk, args.n);
            let rep = if t.is_exact() {
                run_target_pipeline::<CycloNumber>(&t, &cfg)?
            } else {
                run_target_pipeline::<HpComplex>(&t, &cfg)?
            };
            (rep, args.n)
        }
    };
    Ok(Report {
        command: "pipeline",
        status: if report.passed { Status::Ok } else { Status::Failed },
        config: json!({ "args": config(args), "resolved": cfg }),
        conventions: conventions(Some(tk), Some(n), Some(report.mode), Some(args.seed)),
        csv: Some(report.layer_report.to_csv()),
        result: serde_json::to_value(&report).expect("report serializes"),
    })
}

pub fn binomial(args: &BinomialArgs) -> CmdResult {
    let p: Probability = args.p.parse()?;
    let band = |a: i64| parse_fraction(&format!("{a}/10"));
    let central = central_mass_check(args.n, &p, &band(9)?, &band(14)?)?;
    let ratio = binomial_ratio_check(args.n, &p, args.c)?;
    let ok = central.within && ratio.holds;
    let csv = format!(
        "n,C,k1,k2,central_scaled_mass,central_within,ratio,ratio_bound,ratio_holds\n{},{},{},{},{},{},{},{},{}\n",
        args.n,
        args.c,
        ratio.k1,
        ratio.k2,
        central.scaled_mass_f64,
        central.within,
        ratio.ratio_f64,
        ratio.bound_f64,
        ratio.holds
    );
    Ok(Report {
        command: "binomial",
        status: if ok { Status::Ok } else { Status::Failed },
        config: config(args),
        conventions: json!({ "p": p.to_string(), "p_digits": stabrank::approx::P_DIGITS, "band": ["9/10", "14/10"] }),
        result: json!({ "central": central, "ratio": ratio }),
        csv: Some(csv),
    })
}

pub fn enumerate(args: &EnumerateArgs) -> CmdResult {
    let states = enumerate_stabilizer_states(args.n, args.allow_n4)?;
    let key = |k: &[u8]| k.iter().map(|c| char::from(b'0' + c)).collect::<String>();
    let mut csv = String::from("index,key,support_size\n");
    let rows: Vec<Value> = states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            csv.push_str(&format!("{i},{},{}\n", key(&s.key), s.support_size()));
            json!({ "key": key(&s.key), "support_size": s.support_size() })
        })
        .collect();
    let closed = stabilizer_state_count(args.n);
    let ok = closed == states.len().into();
    Ok(Report {
        command: "enumerate",
        status: if ok { Status::Ok } else { Status::Failed },
        config: config(args),
        conventions: json!({
            "key": "amplitude codes per point after dividing by the first nonzero amplitude: 0 = zero, 1 + k = i^k",
        }),
        result: json!({
            "n": args.n,
            "count": states.len(),
            "closed_form": closed.to_string(),
            "states": rows,
        }),
        csv: Some(csv),
    })
}

pub fn rs(args: &RsArgs) -> CmdResult {
    if args.codim > args.m {
        return Err(Error::Precondition(format!("codim {} exceeds m = {}", args.codim, args.m)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let a = random_subspace(args.m, args.m - args.codim, &mut rng);
    let subspace = json!({
        "M_rows": a.equations().map(|(c, _)| c.to_hex()).collect::<Vec<_>>(),
        "b": a.equations().map(|(_, b)| if b { "1" } else { "0" }).collect::<String>(),
    });
    let (status, result, csv) = match rs_subspace_approx(&a, args.t, args.seed, args.retries) {
        Ok(p) => {
            let table = p.poly.truth_table()?;
            let one_sided = a.iter_points().all(|x| table.get(x.low_word() as u32));
            let status = if p.within_bound() && one_sided { Status::Ok } else { Status::Failed };
            let csv = format!(
                "m,codim,t,errors,total,degree,retries_used,one_sided\n{},{},{},{},{},{},{},{}\n",
                args.m,
                a.codim(),
                args.t,
                p.errors,
                p.total,
                p.degree(),
                p.retries_used,
                one_sided
            );
            let result = json!({
                "subspace": subspace,
                "codim": a.codim(),
                "error": format!("{}/{}", p.errors, p.total),
                "bound": format!("1/{}", 1u64 << args.t.min(63)),
                "within_bound": p.within_bound(),
                "one_sided": one_sided,
                "degree": p.degree(),
                "monomials": p.poly.len(),
                "retries_used": p.retries_used,
            });
            (status, result, csv)
        }
        Err(Error::RetryBudgetExhausted {
            retries,
            best_errors,
            total,
            bound,
        }) => (
            Status::Failed,
            json!({
                "subspace": subspace,
                "codim": a.codim(),
                "retries": retries,
                "best_error": format!("{best_errors}/{total}"),
                "needed": format!("{bound}/{total}"),
            }),
            String::new(),
        ),
        Err(e) => return Err(e),
    };
    Ok(Report {
        command: "rs",
        status,
        config: config(args),
        conventions: conventions(None, Some(args.m), Some(Mode::Exact), Some(args.seed)),
        result,
        csv: Some(csv),
    })
}

/// Emits a decomposition file rather than a report.
pub fn generate(args: &GenerateArgs) -> Result<String, Error> {
    let d = if args.constant_one {
        let mut d = StabilizerDecomposition::empty(args.n);
        d.push(CycloNumber::one(), StabilizerFunction::one(args.n))?;
        d
    } else {
        random_decomposition(args.n, args.r, args.max_codim, args.seed)
    };
    Ok(to_json(&AnyDecomposition::from(d)) + "\n")
}
