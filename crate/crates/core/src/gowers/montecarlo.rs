use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fourier::{plan, u2_power_with};
use super::{difference_set, mult_delta_cyclic, GowersFloat};
use crate::numeric::kahan_sum;

/// One-sided 99% standard normal quantile.
pub const Z99: f64 = 2.326_347_874_040_840_8;

/// Monte Carlo estimate of `‖f‖_{U^k}^{2^k}` with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate<F> {
    pub mean: F,
    pub stderr: F,
}

/// Samples `k − 2` outer difference parameters uniformly from the difference
/// set `D` of the support and evaluates the remaining `U^2` power exactly.
///
/// Parameters are drawn serially from a seeded ChaCha8 stream, so the result
/// does not depend on thread count.
pub fn mc_power<F: GowersFloat>(f: &[Complex<F>], k: u32, samples: usize, seed: u64) -> McEstimate<F> {
    assert!(k >= 3 && samples >= 2);
    let d = difference_set(f);
    let zero = F::zero();
    if d.is_empty() {
        return McEstimate { mean: zero, stderr: zero };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer = (k - 2) as usize;
    let tuples: Vec<Vec<usize>> =
        (0..samples).map(|_| (0..outer).map(|_| d[rng.gen_range(0..d.len())]).collect()).collect();
    let fft = plan::<F>(f.len());
    let values: Vec<F> = tuples
        .par_iter()
        .map(|hs| {
            let mut g = f.to_vec();
            for &h in hs {
                g = mult_delta_cyclic(&g, h);
            }
            u2_power_with(&g, fft.as_ref())
        })
        .collect();
    let s = F::from(samples as f64).unwrap();
    let mean = kahan_sum(values.iter().copied()) / s;
    let var = kahan_sum(values.iter().map(|&v| (v - mean) * (v - mean))) / (s - F::one());
    let scale = (F::from(d.len() as f64).unwrap() / F::from(f.len() as f64).unwrap()).powi(outer as i32);
    McEstimate { mean: scale * mean, stderr: scale * (var / s).sqrt() }
}
