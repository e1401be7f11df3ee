//! Counter-based pseudorandom generator with explicit (seed, stream)
//! addressing.
//!
//! The generator is a keyed hash of a counter: draw `i` of stream
//! `(seed, stream)` is
//!
//! ```text
//! key  = mix(mix(seed + 0x9E3779B97F4A7C15) ^ stream * 0xD2B74407B1CE6E93)
//! outra(i) = mix(key ^ i * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. There is no sequential state
//! beyond the counter, so any draw is addressable directly, sequences for
//! distinct `(seed, stream)` pairs are unrelated by construction, and
//! parallel consumers on disjoint streams cannot interleave. The integer
//! layer is bit-exact on every platform; derived floating-point variates
//! are exact arithmetic on top of it except for `ln`/`cos`/`sin`, which
//! follow the platform libm to within an ulp.
//!
//! Reference vectors are pinned in the tests below and documented in the
//! repository README.

use serde::{Deserialize, Serialize};

/// Address of a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Same seed, different substream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self {
            seed: self.seed,
            stream,
        }
    }
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;
const STREAM_SALT: u64 = 0xD2B74407B1CE6E93;

/// SplitMix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-based generator; see the module docs for the exact stream function.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(spec: SeedSpec) -> Self {
        let key = mix(mix(spec.seed.wrapping_add(GOLDEN)) ^ spec.stream.wrapping_mul(STREAM_SALT));
        Self { key, counter: 0 }
    }

    pub fn from_parts(seed: u64, stream: u64) -> Self {
        Self::new(SeedSpec::new(seed, stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter += 1;
        mix(self.key ^ c.wrapping_mul(GOLDEN))
    }

    /// Uniform on (0, 1]: the top 53 bits plus one, times 2^-53. Never zero,
    /// so it is safe under `ln`.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Unbiased uniform integer in `0..m` by threshold rejection.
    pub fn uniform_below(&mut self, m: u64) -> u64 {
        assert!(m > 0);
        let threshold = (u64::MAX / m) * m;
        loop {
            let x = self.next_u64();
            if x < threshold {
                return x % m;
            }
        }
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// One Box-Muller transform: two independent standard normals from two
    /// uniforms. Callers that need a complex standard-normal entry use the
    /// pair as (re, im).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let phase = 2.0 * std::f64::consts::PI * u2;
        (r * phase.cos(), r * phase.sin())
    }

    /// Standard exponential by inverse CDF.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }

    /// Uniform angle in [0, hi).
    pub fn uniform_in(&mut self, hi: f64) -> f64 {
        // uniform() is on (0,1]; flip it to [0,1) so the interval is half-open.
        (1.0 - self.uniform()) * hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pinned reference vectors for the documented stream function. If these
    // move, every seeded campaign result moves with them.
    #[test]
    fn reference_vectors_seed0_stream0() {
        let mut rng = CounterRng::from_parts(0, 0);
        let draws: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(
            draws,
            vec![
                0x33fe8bd4f9c57863,
                0x94a0292e4c3e2ae7,
                0x82dcc1b0075ae6e7,
                0x32364e4ea9fc895f,
            ]
        );
    }

    #[test]
    fn reference_vectors_seed42_stream7() {
        let mut rng = CounterRng::from_parts(42, 7);
        let draws: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(
            draws,
            vec![
                0x43ca9cf75fbc150c,
                0x11672ca55afd0416,
                0x543ba2547d4a8d31,
                0x4af0c2ac7b7f9d3b,
            ]
        );
    }

    #[test]
    fn streams_are_decorrelated() {
        let mut a = CounterRng::from_parts(1, 0);
        let mut b = CounterRng::from_parts(1, 1);
        let xs: Vec<u64> = (0..64).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..64).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
        let common = xs.iter().filter(|x| ys.contains(x)).count();
        assert_eq!(common, 0);
    }

    #[test]
    fn uniform_is_in_half_open_unit_interval() {
        let mut rng = CounterRng::from_parts(3, 0);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn uniform_below_is_unbiased_smoke() {
        let mut rng = CounterRng::from_parts(11, 2);
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            counts[rng.uniform_below(3) as usize] += 1;
        }
        for &c in &counts {
            assert!((c as f64 - 10_000.0).abs() < 500.0, "counts {counts:?}");
        }
    }

    #[test]
    fn normal_pair_moments() {
        let mut rng = CounterRng::from_parts(5, 0);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let (a, b) = rng.normal_pair();
            sum += a + b;
            sumsq += a * a + b * b;
        }
        let mean = sum / (2.0 * n as f64);
        let var = sumsq / (2.0 * n as f64);
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn exponential_mean_is_one() {
        let mut rng = CounterRng::from_parts(9, 1);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| rng.exponential()).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn identical_specs_replay_identically() {
        let mut a = CounterRng::new(SeedSpec::new(123, 45));
        let mut b = CounterRng::new(SeedSpec::new(123, 45));
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
