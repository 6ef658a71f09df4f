use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::Probability;

/// Integer conventions derived from `n` and `p`: the threshold index
/// `k* = ⌈pn⌉`, the restriction size `m = 2⌊pn⌋`, the half-width
/// `w = ⌈5√(2pn)⌉` and the closed window of layers `k` with `|k - pn| <= w`,
/// clipped to `[0, n]`. All of them are decided exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdParams {
    pub n: usize,
    #[serde(serialize_with = "super::ser::display")]
    pub p: Probability,
    pub k_star: usize,
    pub m: usize,
    pub half_width: usize,
    pub window: (usize, usize),
    pub window_closed: bool,
}

impl ThresholdParams {
    pub fn new(n: usize, p: &Probability) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        p.check_below_half()?;
        let nn = n as u64;
        let k_star = p.ceil_times(nn) as usize;
        let m = 2 * p.floor_times(nn) as usize;
        let w = p.ceil_sqrt_scaled(nn, 50);
        let inside: Vec<usize> = (0..=n).filter(|&k| p.within(nn, k as i64, w)).collect();
        let (lo, hi) = match (inside.first(), inside.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(Error::Internal("empty layer window".into())),
        };
        Ok(Self {
            n,
            p: p.clone(),
            k_star,
            m,
            half_width: w as usize,
            window: (lo, hi),
            window_closed: true,
        })
    }

    pub fn in_window(&self, k: usize) -> bool {
        (self.window.0..=self.window.1).contains(&k)
    }

    pub fn window_len(&self) -> usize {
        self.window.1 - self.window.0 + 1
    }
}
