use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{GowersError, MethodUsed};
use crate::numeric::{e, kahan_sum, kahan_sum_complex};

/// Value of the masked correlation and how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaskedCorrelation {
    pub value: f64,
    pub method: MethodUsed,
    pub stderr: Option<f64>,
}

fn members(b: &[bool]) -> Vec<i64> {
    (0..b.len()).filter(|&i| b[i]).map(|i| i as i64 + 1).collect()
}

/// Calls `visit(h)` for every `h ∈ [−N, N]^j` with `n + ω·h ∈ B` for all
/// `ω ≠ 0`. Coordinates are drawn from `B − n`, so the singleton corners are
/// in `B` by construction.
fn for_each_corner_set(n: i64, b: &[bool], pool: &[i64], j: usize, visit: &mut impl FnMut(&[i64])) {
    fn rec(
        n: i64,
        b: &[bool],
        pool: &[i64],
        hs: &mut Vec<i64>,
        sums: &mut Vec<i64>,
        j: usize,
        visit: &mut impl FnMut(&[i64]),
    ) {
        if hs.len() == j {
            visit(hs);
            return;
        }
        let inside = |x: i64| x >= 1 && x <= b.len() as i64 && b[(x - 1) as usize];
        for &m in pool {
            let h = m - n;
            let base = sums.len();
            // New corners are the old ones shifted by h; the old corner 0 gives n + h = m.
            let ok = sums[1..base].iter().all(|&s| inside(n + s + h));
            if !ok {
                continue;
            }
            for i in 0..base {
                let s = sums[i] + h;
                sums.push(s);
            }
            hs.push(h);
            rec(n, b, pool, hs, sums, j, visit);
            hs.pop();
            sums.truncate(base);
        }
    }
    let mut sums = vec![0i64];
    rec(n, b, pool, &mut Vec::with_capacity(j), &mut sums, j, visit);
}

fn alternating_difference(phi: &[f64], n: i64, hs: &[i64]) -> f64 {
    let k = hs.len();
    let mut acc = 0.0;
    for w in 0..1usize << k {
        let s: i64 = (0..k).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
        let sign = if (k - w.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * phi[(n + s - 1) as usize];
    }
    acc
}

/// `|E_{n ∈ [N], h ∈ [−N,N]^k} e(Δ_{h_1..h_k} φ(n)) Π_{ω≠0} 1_B(n + ω·h)|`
/// with `φ` given on `1..=N` and `B` as a mask over `1..=N`.
///
/// Exact when `N^{k+1} ≤ budget`; otherwise `mc = Some((samples, seed))`
/// selects a Monte Carlo estimate over `(n, h)`.
pub fn masked_correlation(
    phi: &[f64],
    b: &[bool],
    k: u32,
    budget: u64,
    mc: Option<(usize, u64)>,
) -> Result<MaskedCorrelation, GowersError> {
    let n_max = phi.len();
    if n_max == 0 || b.len() != n_max {
        return Err(GowersError::MismatchedLength);
    }
    let k = k as usize;
    let total = n_max as f64 * (2.0 * n_max as f64 + 1.0).powi(k as i32);
    let cost = (n_max as u128).pow(k as u32 + 1);
    if cost <= budget as u128 {
        let pool = members(b);
        let parts: Vec<Complex<f64>> = (1..=n_max as i64)
            .into_par_iter()
            .map(|n| {
                let mut terms = Vec::new();
                for_each_corner_set(n, b, &pool, k, &mut |hs| terms.push(e(alternating_difference(phi, n, hs))));
                kahan_sum_complex(terms)
            })
            .collect();
        let value = kahan_sum_complex(parts).norm() / total;
        return Ok(MaskedCorrelation { value, method: MethodUsed::Direct, stderr: None });
    }
    let Some((samples, seed)) = mc else {
        return Err(GowersError::BudgetExceeded { cost, budget });
    };
    if samples < super::MIN_MC_SAMPLES {
        return Err(GowersError::TooFewSamples(samples));
    }
    let nn = n_max as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(i64, Vec<i64>)> = (0..samples)
        .map(|_| (rng.gen_range(1..=nn), (0..k).map(|_| rng.gen_range(-nn..=nn)).collect()))
        .collect();
    let inside = |x: i64| x >= 1 && x <= nn && b[(x - 1) as usize];
    let vals: Vec<Complex<f64>> = draws
        .par_iter()
        .map(|(n, hs)| {
            let all = (1..1usize << k).all(|w| {
                let s: i64 = (0..k).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
                inside(n + s)
            });
            if all {
                e(alternating_difference(phi, *n, hs))
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    let s = samples as f64;
    let mean = kahan_sum_complex(vals.iter().copied()) / s;
    let var = kahan_sum(vals.iter().map(|z| (z - mean).norm_sqr())) / (s - 1.0);
    Ok(MaskedCorrelation { value: mean.norm(), method: MethodUsed::MonteCarlo, stderr: Some((var / s).sqrt()) })
}

/// `|{(n, h) ∈ [N] × [−N,N]^j : n + ω·h ∈ B for all ω ∈ {0,1}^j}|` with `B`
/// a mask over `1..=N`. Refuses when `N^{j+1}` exceeds `budget`.
pub fn box_count(b: &[bool], j: u32, budget: u64) -> Result<u128, GowersError> {
    let n_max = b.len();
    let cost = (n_max as u128).pow(j + 1);
    if cost > budget as u128 {
        return Err(GowersError::BudgetExceeded { cost, budget });
    }
    let pool = members(b);
    let counts: Vec<u128> = pool
        .par_iter()
        .map(|&n| {
            let mut c = 0u128;
            for_each_corner_set(n, b, &pool, j as usize, &mut |_| c += 1);
            c
        })
        .collect();
    Ok(counts.into_iter().sum())
}
