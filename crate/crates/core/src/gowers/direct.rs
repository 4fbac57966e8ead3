use num_complex::Complex;
use rayon::prelude::*;

use super::{real_power, GowersError, GowersFloat};
use crate::numeric::kahan_sum_complex;

fn corner_offset(w: usize, hs: &[usize]) -> usize {
    hs.iter().enumerate().filter(|(i, _)| w >> i & 1 == 1).map(|(_, &h)| h).sum()
}

fn decode(mut code: usize, m: usize, k: usize) -> Vec<usize> {
    let mut hs = Vec::with_capacity(k);
    for _ in 0..k {
        hs.push(code % m);
        code /= m;
    }
    hs
}

/// Gowers inner product `E_{x,h} Π_ω C^{|ω|} f_ω(x + ω·h)` of a family of
/// `2^k` functions on `ℤ/Ñℤ`, indexed by the bitmask of `ω`.
pub fn gowers_inner_product<F: GowersFloat>(family: &[Vec<Complex<F>>]) -> Result<Complex<F>, GowersError> {
    let size = family.len();
    if size < 2 || !size.is_power_of_two() {
        return Err(GowersError::FamilySize { got: size, expected: size.next_power_of_two().max(2) });
    }
    let k = size.trailing_zeros() as usize;
    let m = family[0].len();
    if m == 0 {
        return Err(GowersError::Empty);
    }
    if family.iter().any(|f| f.len() != m) {
        return Err(GowersError::MismatchedLength);
    }
    let tuples = m.pow(k as u32);
    let parts: Vec<Complex<F>> = (0..tuples)
        .into_par_iter()
        .map(|code| {
            let hs = decode(code, m, k);
            let terms = (0..m).map(|x| {
                let mut prod = Complex::new(F::one(), F::zero());
                for (w, f) in family.iter().enumerate() {
                    let v = f[(x + corner_offset(w, &hs)) % m];
                    prod = prod * if w.count_ones() % 2 == 1 { v.conj() } else { v };
                }
                prod
            });
            kahan_sum_complex(terms)
        })
        .collect();
    let total = kahan_sum_complex(parts.into_iter());
    Ok(total / F::from(m as f64).unwrap().powi(k as i32 + 1))
}

/// `‖f‖_{U^k}^{2^k}` as the definitional average.
pub fn direct_power<F: GowersFloat>(f: &[Complex<F>], k: u32) -> Result<F, GowersError> {
    let family = vec![f.to_vec(); 1 << k];
    real_power(gowers_inner_product(&family)?)
}

/// Outcome of the Gowers–Cauchy–Schwarz comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GcsReport {
    /// `|⟨f_ω⟩|`.
    pub lhs: f64,
    /// `Π_ω ‖f_ω‖_{U^k}`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `|⟨f_ω⟩| ≤ Π_ω ‖f_ω‖_{U^k}` up to `1e−9`.
pub fn gcs_check<F: GowersFloat>(family: &[Vec<Complex<F>>]) -> Result<GcsReport, GowersError> {
    let lhs = gowers_inner_product(family)?.norm().to_f64().unwrap();
    let k = family.len().trailing_zeros();
    let mut rhs = 1.0;
    for f in family {
        let p = direct_power(f, k)?.to_f64().unwrap();
        rhs *= p.powf(1.0 / family.len() as f64);
    }
    Ok(GcsReport { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}
