use rayon::prelude::*;

use super::malcev::{MalcevBasis, NilError};
use super::matrix::Unitriangular;
use crate::scalar::Scalar;

/// Reduced coordinates `χ(g(n))` for `n ∈ ns`, computed in parallel.
pub fn orbit<S, F>(basis: &MalcevBasis, ns: std::ops::Range<i64>, g: F) -> Result<Vec<Vec<S>>, NilError>
where
    S: Scalar,
    F: Fn(i64) -> Unitriangular<S> + Sync,
{
    ns.into_par_iter().map(|n| basis.reduce(&g(n)).map(|(chi, _)| chi)).collect()
}

/// CSV with header `n,chi1,…,chim`.
pub fn orbit_csv<S: Scalar>(start: i64, chis: &[Vec<S>]) -> String {
    let m = chis.first().map_or(0, Vec::len);
    let mut out = String::from("n");
    for i in 1..=m {
        out.push_str(&format!(",chi{i}"));
    }
    out.push('\n');
    for (k, chi) in chis.iter().enumerate() {
        out.push_str(&(start + k as i64).to_string());
        for c in chi {
            out.push(',');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

fn cell(x: f64, b: usize) -> usize {
    (((x + 0.5) * b as f64).ceil() as i64 - 1).clamp(0, b as i64 - 1) as usize
}

/// Box-counting discrepancy of points in `(−1/2, 1/2]^m`: the largest
/// `|empirical mass − volume|` over sub-boxes that are unions of grid cells,
/// with `boxes_per_axis` cells per axis.
pub fn equidistribution_discrepancy(coords: &[Vec<f64>], boxes_per_axis: usize) -> f64 {
    let b = boxes_per_axis.max(1);
    let Some(m) = coords.first().map(Vec::len) else {
        return 0.0;
    };
    let side = b + 1;
    let size = side.pow(m as u32);
    // Cumulative counts over the grid with a zero border.
    let mut pre = vec![0f64; size];
    let stride: Vec<usize> = (0..m).map(|a| side.pow(a as u32)).collect();
    for x in coords {
        let idx: usize = x.iter().zip(&stride).map(|(&v, s)| (cell(v, b) + 1) * s).sum();
        pre[idx] += 1.0;
    }
    for s in &stride {
        for idx in 0..size {
            if (idx / s) % side > 0 {
                pre[idx] += pre[idx - s];
            }
        }
    }
    let total = coords.len() as f64;
    let vol_unit = 1.0 / b as f64;
    let mut lo = vec![0usize; m];
    let mut hi = vec![1usize; m];
    let mut worst = 0f64;
    loop {
        let mut mass = 0.0;
        for corner in 0..1usize << m {
            let mut idx = 0;
            let mut sign = 1.0;
            for a in 0..m {
                if corner >> a & 1 == 1 {
                    idx += lo[a] * stride[a];
                    sign = -sign;
                } else {
                    idx += hi[a] * stride[a];
                }
            }
            mass += sign * pre[idx];
        }
        let vol: f64 = lo.iter().zip(&hi).map(|(l, h)| (h - l) as f64 * vol_unit).product();
        worst = worst.max((mass / total - vol).abs());
        // Advance the odometer over (lo, hi) pairs with lo < hi ≤ b.
        let mut a = 0;
        loop {
            if a == m {
                return worst;
            }
            if hi[a] < b {
                hi[a] += 1;
                break;
            }
            if lo[a] + 1 < b {
                lo[a] += 1;
                hi[a] = lo[a] + 1;
                break;
            }
            lo[a] = 0;
            hi[a] = 1;
            a += 1;
        }
    }
}
