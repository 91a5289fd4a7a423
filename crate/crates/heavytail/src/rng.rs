//! Deterministic random number state.
//!
//! All samplers in this crate draw from an explicit [`RngState`] so that a
//! fixed seed reproduces every simulation bit for bit. The state is a
//! counter-based ChaCha stream: `substream(k)` derives an independent stream
//! from the same seed, which is how parallel Monte Carlo chunks and rolling
//! backtest windows stay reproducible regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded, splittable generator state.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    /// State for `seed`, stream 0, at position 0.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// State for a specific (seed, stream) pair.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Independent stream derived from the same seed. Position starts at 0,
    /// so `substream(k)` is reproducible no matter how much this state has
    /// already been consumed.
    pub fn substream(&self, k: u64) -> Self {
        Self::with_stream(self.seed, self.stream.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k + 1))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Words consumed so far on this stream.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform draw on the open interval (0, 1).
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            // 53-bit mantissa uniform on [0,1); reject the endpoints
            let u = (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
            if u > 0.0 && u < 1.0 {
                return u;
            }
        }
    }

    /// Standard normal draw (Box-Muller on the open-interval uniform).
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Unit-mean exponential draw.
    #[inline]
    pub fn exponential(&mut self) -> f64 {
        -self.uniform_open().ln()
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}
