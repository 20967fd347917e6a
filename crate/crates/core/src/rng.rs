//! Seeded random streams.
//!
//! Every property draws from its own ChaCha8 stream, keyed by the run seed
//! and an FNV-1a hash of the property id, with one sub-stream per trial.
//! Trials can therefore run in any order and still see the same inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

pub fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

pub fn substream(seed: u64, id: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id));
    rng.set_stream(index);
    rng
}

/// Complex numbers with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}
