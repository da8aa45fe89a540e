//! Seeded, stream-splittable random sources.
//!
//! Every `(seed, stream)` pair names an independent ChaCha8 keystream, so a
//! campaign can hand stream `i` to sample `i` and get the same numbers no
//! matter which thread evaluates it.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Haar-distributed pure state: i.i.d. complex Gaussians, normalized.
pub fn haar_random_pure(n_qubits: usize, rng: &mut SeededRng) -> Result<Vec<Complex64>> {
    if !(1..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCount {
            n: n_qubits,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let mut v: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| {
            let re = rng.standard_normal();
            let im = rng.standard_normal();
            Complex64::new(re, im)
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    Ok(v)
}
