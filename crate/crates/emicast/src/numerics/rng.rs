//! Seedable, splittable, counter-based random number generation.
//!
//! Every stochastic fit in the crate draws from streams defined here so that
//! a `(master_seed, label)` pair fully determines the sequence, independent
//! of platform or call order. The generator is written out below rather than
//! pulled from a library so other implementations can reproduce the streams
//! bit for bit.
//!
//! Algorithm (all arithmetic on `u64`, wrapping):
//!
//! 1. `h = fnv1a64(label)` — FNV-1a over the label's UTF-8 bytes with offset
//!    basis `0xcbf29ce484222325` and prime `0x100000001b3`.
//! 2. `base = mix64(master_seed ^ mix64(h))`
//! 3. the i-th raw output (i = 0, 1, 2, ...) is
//!    `mix64(base + (i + 1) * 0x9e3779b97f4a7c15)`
//!
//! where `mix64` is the SplitMix64 finalizer:
//!
//! ```text
//! z ^= z >> 30;  z *= 0xbf58476d1ce4e5b9;
//! z ^= z >> 27;  z *= 0x94d049bb133111eb;
//! z ^= z >> 31;
//! ```
//!
//! Uniform doubles take the top 53 bits: `(x >> 11) * 2^-53`, giving values
//! in `[0, 1)`. Normal deviates use the Box-Muller transform on consecutive
//! uniform pairs (the second deviate of each pair is cached).

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    z
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Immutable descriptor of a random stream: a master seed plus a label.
///
/// Descriptors are cheap to copy and safe to share; call [`RngStream::rng`]
/// to obtain a generator positioned at the start of the stream. Distinct
/// labels derived from the same master seed behave as independent streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    label: String,
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        RngStream { master_seed, label: String::new() }
    }

    /// Derive a child stream by appending `/label` to this stream's label.
    pub fn child(&self, label: &str) -> Self {
        let mut full = self.label.clone();
        full.push('/');
        full.push_str(label);
        RngStream { master_seed: self.master_seed, label: full }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A generator positioned at the start of this stream.
    pub fn rng(&self) -> Rng {
        let base = mix64(self.master_seed ^ mix64(fnv1a64(self.label.as_bytes())));
        Rng { base, counter: 0, spare_normal: None }
    }
}

/// Counter-based generator over a single stream.
#[derive(Debug, Clone)]
pub struct Rng {
    base: u64,
    counter: u64,
    spare_normal: Option<f64>,
}

impl Rng {
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.base.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be nonzero.
    ///
    /// Uses the modulo reduction; the bias is below 2^-50 for any `n`
    /// this crate draws (datasets of at most a few thousand rows).
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal deviate via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // Avoid ln(0) by nudging u1 away from zero.
        let u1 = self.next_f64().max(1e-300);
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Draw `n` indices uniformly with replacement from `0..n`.
///
/// The classic bootstrap resample: deterministic given the generator state.
pub fn bootstrap_sample(n: usize, rng: &mut Rng) -> Vec<usize> {
    assert!(n >= 1, "bootstrap_sample requires n >= 1");
    (0..n).map(|_| rng.next_index(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_label_reproduce_stream() {
        let s = RngStream::new(42).child("fit");
        let a: Vec<u64> = { let mut r = s.rng(); (0..32).map(|_| r.next_u64()).collect() };
        let b: Vec<u64> = { let mut r = s.rng(); (0..32).map(|_| r.next_u64()).collect() };
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_labels_give_distinct_streams() {
        let root = RngStream::new(7);
        let mut a = root.child("a").rng();
        let mut b = root.child("b").rng();
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = RngStream::new(1).rng();
        for _ in 0..10_000 {
            let u = r.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn normals_have_plausible_moments() {
        let mut r = RngStream::new(3).child("normals").rng();
        let n = 50_000;
        let xs: Vec<f64> = (0..n).map(|_| r.next_normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn bootstrap_of_one_is_zero() {
        let mut r = RngStream::new(9).rng();
        assert_eq!(bootstrap_sample(1, &mut r), vec![0]);
    }

    #[test]
    fn bootstrap_distinct_fraction_near_632() {
        // Expected fraction of distinct indices in a bootstrap sample is
        // 1 - (1 - 1/n)^n -> 1 - 1/e ~ 0.632.
        let n = 1000;
        let mut fractions = Vec::new();
        for seed in 0..20u64 {
            let mut r = RngStream::new(seed).child("boot").rng();
            let sample = bootstrap_sample(n, &mut r);
            let mut seen = vec![false; n];
            for &i in &sample {
                seen[i] = true;
            }
            let distinct = seen.iter().filter(|&&s| s).count();
            fractions.push(distinct as f64 / n as f64);
        }
        let avg = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!((avg - 0.632).abs() < 0.03, "avg distinct fraction {avg}");
    }

    #[test]
    fn bootstrap_is_deterministic_per_stream() {
        let s = RngStream::new(11).child("tree-3");
        let a = bootstrap_sample(500, &mut s.rng());
        let b = bootstrap_sample(500, &mut s.rng());
        assert_eq!(a, b);
    }
}
