//! Seeded randomness.
//!
//! Every trial draws from its own ChaCha8 stream: key from the run seed, stream id
//! from the trial index. Results therefore do not depend on how trials are spread
//! over worker threads.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{dyadic_rational, Rational};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform integer in `[0, 2^bits)`.
pub fn random_biguint<R: Rng>(rng: &mut R, bits: u64) -> BigUint {
    let words = bits.div_ceil(32) as usize;
    let digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
    let v = BigUint::new(digits);
    let mask = (BigUint::one() << bits) - 1u8;
    v & mask
}

/// `X / 2^bits` with `X` uniform in `[0, 2^bits)`.
pub fn random_dyadic<R: Rng>(rng: &mut R, bits: u64) -> Rational {
    dyadic_rational(BigInt::from(random_biguint(rng, bits)), bits)
}
