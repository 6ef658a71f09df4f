use crate::cyclo::CycloNumber;
use crate::error::{check_dim, Error, Result};
use crate::f2::BitVector;

/// `F_T(x) = Σ_{j=0}^{7} b_j M_j(x)` with `b_j = e^{iπj/4}` and
/// `M_j(x) = 1` iff `|x| ≡ j (mod 8)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod8Decomposition {
    n: usize,
    b: [CycloNumber; 8],
}

pub fn mod8_decomposition(n: usize) -> Result<Mod8Decomposition> {
    if n == 0 {
        return Err(Error::Precondition("mod-8 decomposition needs n >= 1".into()));
    }
    Ok(Mod8Decomposition {
        n,
        b: std::array::from_fn(|j| CycloNumber::zeta(2 * j as i64)),
    })
}

impl Mod8Decomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[CycloNumber; 8] {
        &self.b
    }

    /// `M_j(x)`.
    pub fn indicator(&self, j: usize, x: &BitVector) -> bool {
        x.weight() % 8 == j % 8
    }

    pub fn eval(&self, x: &BitVector) -> Result<CycloNumber> {
        check_dim(self.n, x.len())?;
        let mut acc = CycloNumber::zero();
        for j in 0..8 {
            if self.indicator(j, x) {
                acc += &self.b[j];
            }
        }
        Ok(acc)
    }
}
