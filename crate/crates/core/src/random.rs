//! Seeded, splittable random streams.
//!
//! A [`RandomSource`] is a `(seed, stream_id)` pair backed by ChaCha20, whose
//! 64-bit stream selector gives independent keystreams for the same key. The
//! output therefore depends only on the pair, never on execution order or
//! thread count. Simulations that need several independent roles (e.g.
//! coefficients and innovations) split off lanes with [`RandomSource::lane`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Identifies a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_id: u64,
}

/// Lane used for additive innovations.
pub const NOISE_LANE: u64 = 0;
/// Lane used for random coefficients.
pub const COEFFICIENT_LANE: u64 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Same seed, different stream.
    pub fn stream(&self, stream_id: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id,
        }
    }

    /// Derives an independent source for a named role within this stream.
    pub fn lane(&self, lane: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(lane.wrapping_add(0x6c61_6e65))),
            stream_id: self.stream_id,
        }
    }

    /// Instantiates the generator positioned at the start of the stream.
    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// `n` iid standard normal draws.
    pub fn standard_normals(&self, n: usize) -> Vec<f64> {
        let mut rng = self.rng();
        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }
}

pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform on the open interval (0, 1).
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Rates below this use sequential inversion; above, transformed rejection.
const PTRS_THRESHOLD: f64 = 30.0;

/// Draws a Poisson variate with the given mean.
///
/// Small means use inversion by sequential search; large means use
/// Hörmann's transformed rejection with squeeze (PTRS).
pub fn poisson<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> u64 {
    debug_assert!(rate >= 0.0 && rate.is_finite());
    if rate == 0.0 {
        0
    } else if rate < PTRS_THRESHOLD {
        poisson_inversion(rng, rate)
    } else {
        poisson_ptrs(rng, rate)
    }
}

fn poisson_inversion<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> u64 {
    let p0 = (-rate).exp();
    'draw: loop {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = p0;
        let mut cdf = p0;
        while u > cdf {
            k += 1;
            p *= rate / k as f64;
            cdf += p;
            // u landed in the rounding gap above the accumulated cdf
            if p == 0.0 && u > cdf {
                continue 'draw;
            }
        }
        return k;
    }
}

fn poisson_ptrs<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> u64 {
    let log_rate = rate.ln();
    let b = 0.931 + 2.53 * rate.sqrt();
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v = open_unit(rng);
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + rate + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -rate + k * log_rate - ln_factorial(k as u64);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// ln(k!) exact for small k, Stirling series beyond.
pub(crate) fn ln_factorial(k: u64) -> f64 {
    if k < 16 {
        return (2..=k).map(|i| i as f64).product::<f64>().ln();
    }
    let x = k as f64 + 1.0;
    let x2 = x * x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
}
