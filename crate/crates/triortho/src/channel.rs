//! Dephasing-channel error sampling and syndrome extraction.
//!
//! Each qubit independently suffers a phase flip with probability `p`, which
//! on the support vector side is a binary symmetric channel. Sampling is
//! floating-point-free and fully keyed by `(seed, frame_index)`:
//!
//! - the per-frame stream state is `seed XOR (frame_index * 0x9E3779B97F4A7C15)`
//!   fed through SplitMix64 (add 0x9E3779B97F4A7C15 per step, then
//!   xor-shift-multiply with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB),
//! - bit `i` of the error is 1 iff the i-th 64-bit output is strictly below
//!   `floor(p * 2^64)`.
//!
//! Multiplying a `p < 1/2` by 2^64 is exact in an f64 (power-of-two scaling),
//! so the threshold — and therefore every sampled error — is identical across
//! platforms and run orders.

use crate::gf2::{BitMatrix, BitVector, Gf2Error};

/// SplitMix64 stream; the only random-number generator in the crate.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        Self { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// One frame of the dephasing channel: probability, seed, and frame number.
#[derive(Clone, Copy, Debug)]
pub struct ChannelConfig {
    /// Dephasing probability, in [0, 1/2).
    pub p: f64,
    pub seed: u64,
    pub frame_index: u64,
}

impl ChannelConfig {
    pub fn new(p: f64, seed: u64, frame_index: u64) -> Self {
        assert!((0.0..0.5).contains(&p), "dephasing probability must be in [0, 1/2)");
        Self { p, seed, frame_index }
    }

    fn stream(&self) -> SplitMix64 {
        SplitMix64::new(self.seed ^ self.frame_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// Samples an n-qubit phase-flip support vector.
pub fn sample_error(cfg: &ChannelConfig, n: usize) -> BitVector {
    let threshold = (cfg.p * 18_446_744_073_709_551_616.0) as u64; // floor(p * 2^64)
    let mut rng = cfg.stream();
    let mut e = BitVector::zeros(n);
    for i in 0..n {
        if rng.next_u64() < threshold {
            e.set(i, true);
        }
    }
    e
}

/// Measured syndrome s = H_X e of an error support.
pub fn syndrome(h_x: &BitMatrix, e: &BitVector) -> Result<BitVector, Gf2Error> {
    h_x.matvec(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_probability_gives_zero_error() {
        for frame in 0..32 {
            let cfg = ChannelConfig::new(0.0, 99, frame);
            assert!(sample_error(&cfg, 64).is_zero());
        }
    }

    #[test]
    fn same_key_same_error() {
        let cfg = ChannelConfig::new(0.2, 12345, 77);
        assert_eq!(sample_error(&cfg, 100), sample_error(&cfg, 100));
    }

    #[test]
    fn different_frames_differ() {
        let a = sample_error(&ChannelConfig::new(0.3, 1, 0), 128);
        let b = sample_error(&ChannelConfig::new(0.3, 1, 1), 128);
        assert_ne!(a, b);
    }

    #[test]
    fn empirical_rate_within_five_sigma() {
        for &p in &[0.001, 0.01, 0.1] {
            let n = 1_000_000usize;
            let cfg = ChannelConfig::new(p, 0xC0FFEE, 0);
            let w = sample_error(&cfg, n).weight() as f64;
            let mean = n as f64 * p;
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (w - mean).abs() <= 5.0 * sigma,
                "p={p}: weight {w} outside 5 sigma of {mean}"
            );
        }
    }

    #[test]
    fn syndrome_linearity() {
        let m = crate::ilp::all_types_matrix(4);
        let cfg_a = ChannelConfig::new(0.3, 5, 0);
        let cfg_b = ChannelConfig::new(0.3, 5, 1);
        let a = sample_error(&cfg_a, 15);
        let b = sample_error(&cfg_b, 15);
        let lhs = syndrome(&m, &a.xor(&b)).unwrap();
        let rhs = syndrome(&m, &a).unwrap().xor(&syndrome(&m, &b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_one_error_reads_column() {
        let m = crate::ilp::all_types_matrix(4);
        for j in 0..15 {
            let mut e = BitVector::zeros(15);
            e.set(j, true);
            assert_eq!(syndrome(&m, &e).unwrap(), m.column(j));
        }
    }
}
