use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{difference_set, mult_delta_cyclic, GowersFloat};
use crate::numeric::kahan_sum;

pub(crate) fn plan<F: GowersFloat>(len: usize) -> Arc<dyn Fft<F>> {
    FftPlanner::new().plan_fft_forward(len)
}

/// `‖f‖_{U^2}^4 = Σ_ξ |f̂(ξ)|⁴` with `f̂(ξ) = Ñ^{-1} Σ_x f(x) e(−xξ/Ñ)`.
pub(crate) fn u2_power_with<F: GowersFloat>(f: &[Complex<F>], fft: &dyn Fft<F>) -> F {
    let mut buf = f.to_vec();
    fft.process(&mut buf);
    let m = F::from(f.len() as f64).unwrap();
    kahan_sum(buf.iter().map(|z| {
        let a = z.norm_sqr() / (m * m);
        a * a
    }))
}

pub fn u2_power<F: GowersFloat>(f: &[Complex<F>]) -> F {
    u2_power_with(f, plan::<F>(f.len()).as_ref())
}

fn level<F: GowersFloat>(f: &[Complex<F>], k: u32, fft: &dyn Fft<F>) -> F {
    if k == 2 {
        return u2_power_with(f, fft);
    }
    let m = F::from(f.len() as f64).unwrap();
    let parts = difference_set(f).into_iter().map(|h| level(&mult_delta_cyclic(f, h), k - 1, fft));
    kahan_sum(parts) / m
}

/// `‖f‖_{U^k}^{2^k}` for `k ≥ 2` by peeling `k − 2` difference parameters.
/// Only `h` in the difference set of the support contribute; the rest are
/// skipped.
pub fn recursive_power<F: GowersFloat>(f: &[Complex<F>], k: u32) -> F {
    assert!(k >= 2, "recursion bottoms out at U^2");
    let fft = plan::<F>(f.len());
    if k == 2 {
        return u2_power_with(f, fft.as_ref());
    }
    let m = F::from(f.len() as f64).unwrap();
    let parts: Vec<F> = difference_set(f)
        .into_par_iter()
        .map(|h| level(&mult_delta_cyclic(f, h), k - 1, fft.as_ref()))
        .collect();
    kahan_sum(parts) / m
}
