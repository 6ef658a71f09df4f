//! Linear and quadratic algebra over F2.

mod affine;
mod bitvec;
mod forms;
mod hamming;
mod matrix;
pub mod random;

pub use affine::{solve_affine, AffineSubspace};
pub use bitvec::{BitVector, MAX_DIM};
pub use forms::{AffineForm, QuadraticForm};
pub use hamming::{binary_entropy, diameter, entropy_bound, hamming_ball, kleitman_bound};
pub use matrix::{BitMatrix, Rref};
