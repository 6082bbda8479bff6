use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Symbol, Q};

/// Seeded source of random rational sample points.
///
/// Numerators and denominators are bounded by 97 in absolute value.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    pub max_attempts: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_attempts: 10 }
    }

    pub fn with_attempts(seed: u64, max_attempts: usize) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), max_attempts: max_attempts.max(1) }
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.next_u64() % n
    }

    pub fn small_int(&mut self, bound: i64) -> i64 {
        (self.below((2 * bound + 1) as u64) as i64) - bound
    }

    pub fn rational(&mut self) -> Q {
        let mut p = 0;
        while p == 0 {
            p = self.small_int(97);
        }
        let q = 1 + self.below(97) as i64;
        Q::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn point(&mut self, syms: &[Symbol]) -> BTreeMap<Symbol, Q> {
        syms.iter().map(|s| (s.clone(), self.rational())).collect()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

pub type Point = Vec<(Symbol, Q)>;
