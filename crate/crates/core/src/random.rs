//! Seeded random matrices.
//!
//! Every draw is keyed by `(seed, index)`: the generator is ChaCha8 seeded with
//! `seed` on stream `index`, so sample `i` does not depend on how many other
//! samples were drawn or in which order.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::denselin::{spectral_norm, CMatrix};
use crate::Result;

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Independent standard normal real and imaginary parts.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// A Gaussian matrix rescaled to spectral norm 1.
pub fn unit_norm_matrix<R: Rng>(rng: &mut R, n: usize) -> Result<CMatrix> {
    let g = gaussian_matrix(rng, n, n);
    let s = spectral_norm(&g)?;
    Ok(g.scale_real(1.0 / s))
}

/// `G·G*` for a Gaussian `G`: positive semidefinite.
pub fn psd_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g * &g.adjoint()).hermitian_part()
}

/// Random singular values in `(0, 2]`, sorted descending.
pub fn descending_spectrum<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| 2.0 * (1.0 - rng.gen::<f64>())).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
