use std::collections::BTreeMap;

use crate::scalar::{circle_norm, frac, Scalar};

/// Constructive recurrence for linear phases: a set of `n ∈ [N]` with
/// `‖α_j n‖_{ℝ/ℤ} < δ` for every `j`.
///
/// The torus is cut into `M^r` boxes with `M = ⌊1/δ⌋ + 1`; the fullest box
/// `A` (smallest key on ties) gives `(max A − A) \ {0}`. Every returned
/// element is re-verified against the target.
pub fn linear_recurrence_witness<S: Scalar>(alphas: &[S], delta: &S, n_max: usize) -> Vec<i64> {
    assert!(*delta > S::zero(), "δ must be positive");
    if alphas.is_empty() {
        return (1..=n_max as i64).collect();
    }
    let m = (S::one() / delta.clone()).floor() + S::one();
    let mut cells: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for n in 1..=n_max as i64 {
        let x = S::from_i64(n);
        let key = alphas
            .iter()
            .map(|a| {
                let t = frac(&(a.clone() * x.clone())) + S::half();
                ((t * m.clone()).ceil() - S::one()).to_f64() as i64
            })
            .collect();
        cells.entry(key).or_default().push(n);
    }
    let Some(best) = cells.values().fold(None::<&Vec<i64>>, |acc, v| match acc {
        Some(b) if b.len() >= v.len() => Some(b),
        _ => Some(v),
    }) else {
        return Vec::new();
    };
    let top = *best.last().unwrap();
    let mut out: Vec<i64> = best.iter().rev().map(|&a| top - a).filter(|&d| d != 0).collect();
    out.retain(|&d| {
        let x = S::from_i64(d);
        alphas.iter().all(|a| circle_norm(&(a.clone() * x.clone())) < *delta)
    });
    out
}
