//! The decomposition file format.
//!
//! ```json
//! { "n": 2, "mode": "exact",
//!   "terms": [ { "c": ["1/1","0/1","0/1","0/1","0/1","0/1","0/1","0/1"],
//!                "ell": {"coeffs": "0x0", "constant": 0},
//!                "q": {"quad_rows": ["0x0","0x0"], "linear": "0x0", "constant": 0},
//!                "A": {"M_rows": [], "b": "0x0"} } ] }
//! ```
//!
//! Bit `i` of every hex mask is coordinate `x_{i+1}`. Exact coefficients are
//! the eight rationals `a_0..a_7` of `Σ a_j ζ^j`, `ζ = e^{iπ/8}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnyDecomposition, StabilizerDecomposition, StabilizerFunction, Term};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::f2::{AffineForm, BitMatrix, BitVector, QuadraticForm};
use crate::hp::HpComplex;
use crate::scalar::{Coefficient, Mode};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub n: usize,
    pub mode: Mode,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub c: CoeffFile,
    pub ell: EllFile,
    pub q: QuadFile,
    #[serde(rename = "A")]
    pub a: SubspaceFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffFile {
    Exact(Vec<String>),
    Float { re: f64, im: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllFile {
    pub coeffs: String,
    pub constant: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadFile {
    pub quad_rows: Vec<String>,
    pub linear: String,
    pub constant: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceFile {
    #[serde(rename = "M_rows")]
    pub m_rows: Vec<String>,
    pub b: String,
}

fn bit(v: u8, what: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::Parse(format!("{what} must be 0 or 1, got {v}"))),
    }
}

fn function_to_file(f: &StabilizerFunction) -> (EllFile, QuadFile, SubspaceFile) {
    let a = f.support();
    (
        EllFile {
            coeffs: f.ell().coeffs.to_hex(),
            constant: 0,
        },
        QuadFile {
            quad_rows: f.q().quad_rows_hex(),
            linear: f.q().linear.to_hex(),
            constant: f.q().constant as u8,
        },
        SubspaceFile {
            m_rows: a.constraint_rows().iter().map(BitVector::to_hex).collect(),
            b: a.rhs().to_hex(),
        },
    )
}

fn function_from_file(n: usize, t: &TermFile) -> Result<StabilizerFunction> {
    if t.ell.constant != 0 {
        return Err(Error::Parse("ell.constant must be 0".into()));
    }
    let ell = AffineForm::linear(BitVector::from_hex(n, &t.ell.coeffs)?);
    let quad = match t.q.quad_rows.len() {
        0 => BitMatrix::zeros(n, n),
        k if k == n => BitMatrix::from_rows(
            n,
            t.q.quad_rows
                .iter()
                .map(|r| BitVector::from_hex(n, r))
                .collect::<Result<_>>()?,
        )?,
        k => {
            return Err(Error::Parse(format!(
                "q.quad_rows has {k} rows, expected {n} (or none)"
            )))
        }
    };
    let q = QuadraticForm::from_matrix(
        quad,
        BitVector::from_hex(n, &t.q.linear)?,
        bit(t.q.constant, "q.constant")?,
    )?;
    let rows: Vec<BitVector> = t
        .a
        .m_rows
        .iter()
        .map(|r| BitVector::from_hex(n, r))
        .collect::<Result<_>>()?;
    let b = BitVector::from_hex(rows.len(), &t.a.b)?;
    let m = BitMatrix::from_rows(n, rows)?;
    let a = crate::f2::solve_affine(&m, &b)?
        .ok_or_else(|| Error::Parse("support system M x = b is inconsistent".into()))?;
    StabilizerFunction::new(ell, q, a)
}

pub fn exact_to_file(d: &StabilizerDecomposition<CycloNumber>) -> DecompositionFile {
    DecompositionFile {
        n: d.n(),
        mode: Mode::Exact,
        terms: d
            .terms()
            .iter()
            .map(|t| {
                let (ell, q, a) = function_to_file(&t.function);
                TermFile {
                    c: CoeffFile::Exact(t.coeff.to_strings().to_vec()),
                    ell,
                    q,
                    a,
                }
            })
            .collect(),
    }
}

pub fn float_to_file(d: &StabilizerDecomposition<HpComplex>) -> DecompositionFile {
    DecompositionFile {
        n: d.n(),
        mode: Mode::Float,
        terms: d
            .terms()
            .iter()
            .map(|t| {
                let (ell, q, a) = function_to_file(&t.function);
                let (re, im) = t.coeff.to_c64();
                TermFile {
                    c: CoeffFile::Float { re, im },
                    ell,
                    q,
                    a,
                }
            })
            .collect(),
    }
}

pub fn to_file(d: &AnyDecomposition) -> DecompositionFile {
    match d {
        AnyDecomposition::Exact(d) => exact_to_file(d),
        AnyDecomposition::Float(d) => float_to_file(d),
    }
}

pub fn from_file(f: &DecompositionFile) -> Result<AnyDecomposition> {
    if f.n > crate::f2::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n: f.n,
            max: crate::f2::MAX_DIM,
        });
    }
    match f.mode {
        Mode::Exact => {
            let mut d = StabilizerDecomposition::empty(f.n);
            for t in &f.terms {
                let c = match &t.c {
                    CoeffFile::Exact(parts) => CycloNumber::from_strings(parts)?,
                    CoeffFile::Float { .. } => {
                        return Err(Error::Parse(
                            "exact mode requires cyclotomic coefficients".into(),
                        ))
                    }
                };
                d.push(c, function_from_file(f.n, t)?)?;
            }
            Ok(AnyDecomposition::Exact(d))
        }
        Mode::Float => {
            let mut terms = Vec::new();
            for t in &f.terms {
                let c = match &t.c {
                    CoeffFile::Float { re, im } => HpComplex::from_f64(*re, *im),
                    CoeffFile::Exact(parts) => CycloNumber::from_strings(parts)?.to_hp(),
                };
                terms.push(Term {
                    coeff: c,
                    function: function_from_file(f.n, t)?,
                });
            }
            Ok(AnyDecomposition::Float(StabilizerDecomposition::new(f.n, terms)?))
        }
    }
}

pub fn to_json(d: &AnyDecomposition) -> String {
    serde_json::to_string_pretty(&to_file(d)).expect("decomposition serializes")
}

pub fn from_json(s: &str) -> Result<AnyDecomposition> {
    let f: DecompositionFile =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("decomposition file: {e}")))?;
    from_file(&f)
}

pub fn read_decomposition(path: &Path) -> Result<AnyDecomposition> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    from_json(&s)
}

pub fn write_decomposition(path: &Path, d: &AnyDecomposition) -> Result<()> {
    std::fs::write(path, to_json(d) + "\n")
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::random::{random_linear_form, random_quadratic, random_subspace};
    use rand::SeedableRng;

    #[test]
    fn roundtrip_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let n = 70;
        let mut d = StabilizerDecomposition::empty(n);
        for j in 0..4 {
            let f = StabilizerFunction::new(
                random_linear_form(n, &mut rng),
                random_quadratic(n, &mut rng),
                random_subspace(n, 50 + j, &mut rng),
            )
            .unwrap();
            d.push(CycloNumber::zeta(j as i64) + CycloNumber::cos_pi_8(), f).unwrap();
        }
        let any = AnyDecomposition::Exact(d);
        let back = from_json(&to_json(&any)).unwrap();
        assert_eq!(back, any);
    }

    #[test]
    fn roundtrip_float() {
        let mut d = StabilizerDecomposition::empty(2);
        d.push(HpComplex::from_f64(0.5, -0.25), StabilizerFunction::one(2)).unwrap();
        let any = AnyDecomposition::Float(d);
        assert_eq!(from_json(&to_json(&any)).unwrap(), any);
    }

    #[test]
    fn documented_example_parses() {
        let s = r#"{ "n": 2, "mode": "exact",
          "terms": [ { "c": ["1/1","0/1","0/1","0/1","0/1","0/1","0/1","0/1"],
                       "ell": {"coeffs": "0x0", "constant": 0},
                       "q": {"quad_rows": ["0x0","0x0"], "linear": "0x0", "constant": 0},
                       "A": {"M_rows": [], "b": "0x0"} } ] }"#;
        let d = from_json(s).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.n(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let base = r#"{ "n": 2, "mode": "exact",
          "terms": [ { "c": ["1/1","0/1","0/1","0/1","0/1","0/1","0/1","0/1"],
                       "ell": {"coeffs": "0x0", "constant": ELLC},
                       "q": {"quad_rows": ["0x0","0x0"], "linear": "0x0", "constant": 0},
                       "A": {"M_rows": ["0x1", "0x1"], "b": "BVEC"} } ] }"#;
        assert!(from_json(&base.replace("ELLC", "1").replace("BVEC", "0x0")).is_err());
        assert!(from_json(&base.replace("ELLC", "0").replace("BVEC", "0x2")).is_err());
        assert!(from_json(&base.replace("ELLC", "0").replace("BVEC", "0x3")).is_ok());
        assert!(from_json("{").is_err());
    }
}
