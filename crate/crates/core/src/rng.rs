//! MT19937 Mersenne Twister and per-task seeding.
//!
//! Seeding is the reference scalar initialisation (`init_genrand`). Bits are
//! taken from 32-bit outputs most significant bit first.

use crate::bitseq::BitSequence;
use crate::error::Result;
use alloc::vec::Vec;

const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// 32-bit Mersenne Twister state.
#[derive(Clone, PartialEq, Eq)]
pub struct Mt19937 {
    state: [u32; N],
    index: usize,
}

impl core::fmt::Debug for Mt19937 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Mt19937")
            .field("index", &self.index)
            .field("state[0]", &self.state[0])
            .finish_non_exhaustive()
    }
}

impl Mt19937 {
    pub fn new(seed: u32) -> Self {
        let mut state = [0u32; N];
        state[0] = seed;
        for i in 1..N {
            let prev = state[i - 1];
            state[i] = 1_812_433_253u32
                .wrapping_mul(prev ^ (prev >> 30))
                .wrapping_add(i as u32);
        }
        Self { state, index: N }
    }

    fn regenerate(&mut self) {
        let mt = &mut self.state;
        for i in 0..N {
            let y = (mt[i] & UPPER_MASK) | (mt[(i + 1) % N] & LOWER_MASK);
            let mut next = mt[(i + M) % N] ^ (y >> 1);
            if y & 1 != 0 {
                next ^= MATRIX_A;
            }
            mt[i] = next;
        }
        self.index = 0;
    }

    pub fn next_u32(&mut self) -> u32 {
        if self.index >= N {
            self.regenerate();
        }
        let mut y = self.state[self.index];
        self.index += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^= y >> 18;
        y
    }

    /// Uniform on `[0, 1)` with 53-bit resolution (`genrand_res53`).
    pub fn next_f64(&mut self) -> f64 {
        let a = f64::from(self.next_u32() >> 5);
        let b = f64::from(self.next_u32() >> 6);
        (a * 67_108_864.0 + b) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard exponential variate by inversion, `-ln(1 - u)`.
    pub fn next_exp(&mut self) -> f64 {
        -libm::log1p(-self.next_f64())
    }

    /// `n` bits drawn 32 per output word, most significant bit first. The
    /// high bits of the last word are used when `n` is not a multiple of 32.
    pub fn random_bitsequence(&mut self, n: usize) -> Result<BitSequence> {
        let mut bits = Vec::with_capacity(n);
        while bits.len() < n {
            let word = self.next_u32();
            let take = (n - bits.len()).min(32);
            bits.extend((0..take).map(|k| ((word >> (31 - k)) & 1) as u8));
        }
        BitSequence::from_bits(bits)
    }
}

/// Seed for task `task_index` of a run: `(master_seed + task_index) mod 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPlan {
    pub master_seed: u32,
    pub task_index: u64,
}

impl SeedPlan {
    pub fn new(master_seed: u32, task_index: u64) -> Self {
        Self {
            master_seed,
            task_index,
        }
    }

    pub fn seed(&self) -> u32 {
        self.master_seed.wrapping_add(self.task_index as u32)
    }

    pub fn generator(&self) -> Mt19937 {
        Mt19937::new(self.seed())
    }
}
