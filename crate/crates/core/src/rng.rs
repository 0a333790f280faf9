//! Fixed 64-bit linear congruential generator.
//!
//! Used for layout generation and every seeded agent so runs are
//! bit-reproducible across implementations.

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// Advances the generator and returns the new state.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Picks an index in `0..count` as `state' mod count`.
    ///
    /// Panics if `count` is zero.
    pub fn pick(&mut self, count: usize) -> usize {
        assert!(count > 0, "pick from an empty set");
        (self.next_u64() % count as u64) as usize
    }

    /// Picks an index in `0..count` from the high 32 bits of the next state.
    ///
    /// The low bits of an LCG with a power-of-two modulus have short periods
    /// (bit 0 alternates), so agents draw with this instead of [`Lcg::pick`].
    pub fn choose(&mut self, count: usize) -> usize {
        assert!(count > 0, "choose from an empty set");
        (((self.next_u64() >> 32) * count as u64) >> 32) as usize
    }

    /// Uniform float in `[0, 1)` from the top 53 bits of the next state.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
