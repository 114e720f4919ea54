//! Deterministic random substreams.
//!
//! One master seed drives a whole optimizer run. Each unit of work draws from
//! its own ChaCha stream keyed by `(phase, iteration, member)`, so results do
//! not depend on the order in which units are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Phase {
    Init = 1,
    Clone = 2,
    Refill = 3,
}

/// Largest member index that maps to a distinct stream.
pub const MAX_MEMBERS: u64 = 1 << 24;

pub fn substream(seed: u64, phase: Phase, iteration: u64, member: u64) -> ChaCha8Rng {
    debug_assert!(member < MAX_MEMBERS && iteration < (1 << 32));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((phase as u64) << 56) | (iteration << 24) | member);
    rng
}
