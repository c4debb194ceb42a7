//! A desk-scale model of the automorphism group of a regular tree.

pub mod automorphism;
pub mod dynamics;
pub mod fold;
pub mod line;
pub mod vertex;
pub mod witness;

pub use automorphism::{Automorphism, Ball, Portrait};
pub use dynamics::{classify, in_contraction, in_parabolic, scale, FixedBall, Membership, TreeIsometry};
pub use fold::{fold_line, translation_along};
pub use line::{End, Line, Side};
pub use vertex::{Tree, Vertex};
pub use witness::nonclosed_witness;

/// The deterministic generator behind every seeded construction.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
