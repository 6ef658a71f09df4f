use std::fmt::Display;

use num_rational::BigRational;
use serde::Serializer;

/// `a/b`, also for integers.
pub fn frac_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn frac<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&frac_string(r))
}

pub fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn display_vec<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn opt_frac<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&frac_string(r)),
        None => s.serialize_none(),
    }
}
