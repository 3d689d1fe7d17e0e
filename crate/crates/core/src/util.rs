//! Small numeric and hashing helpers shared across the crate.

use sha2::{Digest, Sha256};

/// Neumaier-compensated accumulator. Keeps long tally sums accurate enough
/// that the crate's 1e-12 equality contracts hold on graphs up to ~10^6 edges.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// SplitMix64 finalizer; decorrelates structured integer keys.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives one RNG stream id from a sequence of integer key parts.
pub fn stream_key(parts: &[u64]) -> u64 {
    let mut acc = 0x243F_6A88_85A3_08D3; // arbitrary non-zero start
    for &p in parts {
        acc = mix64(acc ^ mix64(p));
    }
    acc
}

/// Short hex content hash used in file headers for provenance.
pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(16);
    for b in &digest[..8] {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10.0);
    }

    #[test]
    fn stream_keys_distinct() {
        let a = stream_key(&[1, 2, 3]);
        let b = stream_key(&[1, 3, 2]);
        let c = stream_key(&[1, 2, 3]);
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(content_hash(b"x"), content_hash(b"x"));
        assert_ne!(content_hash(b"x"), content_hash(b"y"));
        assert_eq!(content_hash(b"x").len(), 16);
    }
}
