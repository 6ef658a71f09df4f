//! Stabilizer functions, magic-state targets and decompositions.

mod decomposition;
mod distance;
mod enumerate;
mod function;
pub mod json;
mod magic;
mod mod8;
mod random;

pub use decomposition::{AnyDecomposition, Signature, SignatureCache, StabilizerDecomposition, Term, OUTSIDE};
pub use distance::{l2_distance, l2_distance_with_guard, L2Distance, DISTANCE_GUARD};
pub use enumerate::{
    all_affine_subspaces, amplitude_codes, canonical_key, codes_to_cyclo, enumerate_stabilizer_states,
    stabilizer_state_count, StabilizerState, ENUMERATION_GUARD,
};
pub use function::StabilizerFunction;
pub use magic::{MagicTarget, Normalization, TargetKind};
pub use mod8::{mod8_decomposition, Mod8Decomposition};
pub use random::random_decomposition;
