use std::collections::BTreeMap;

use super::RecurrenceError;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Intervals chosen by the pigeonhole step and the points they capture.
#[derive(Clone, Debug, PartialEq)]
pub struct PigeonholeResult<S> {
    pub intervals: Vec<Interval<S>>,
    /// The `n ∈ A` with `g_i(n) ∈ J_i` for every `i`, ascending.
    pub subset: Vec<i64>,
    /// `Π δ_i · |A| / (2^l · |I|^l)`, which `subset.len()` always meets.
    pub bound: f64,
}

/// Cover of `I` by `⌈|I|/δ⌉` boxes of width `δ`: `(lo + jδ, lo + (j+1)δ]`,
/// with the last one moved left to end at `hi`.
struct Cover<S> {
    boxes: Vec<Interval<S>>,
    lo: S,
    delta: S,
}

impl<S: Scalar> Cover<S> {
    fn new(i: &Interval<S>, delta: &S) -> Result<Self, RecurrenceError> {
        let w = i.width();
        let count = (w / delta.clone()).ceil().to_f64() as usize;
        let mut boxes = Vec::with_capacity(count);
        for j in 0..count {
            let last = j + 1 == count;
            let (a, b) = if last {
                (i.hi().clone() - delta.clone(), i.hi().clone())
            } else {
                let a = i.lo().clone() + delta.clone() * S::from_i64(j as i64);
                (a.clone(), a + delta.clone())
            };
            let lo_closed = j == 0 && i.lo_closed() && a == *i.lo();
            let hi_closed = !last || i.hi_closed();
            boxes.push(Interval::new(a, b, lo_closed, hi_closed).map_err(|e| RecurrenceError::Interval(e.to_string()))?);
        }
        Ok(Self { boxes, lo: i.lo().clone(), delta: delta.clone() })
    }

    fn locate(&self, v: &S) -> Option<usize> {
        let guess = ((v.clone() - self.lo.clone()) / self.delta.clone()).ceil().to_f64() as i64 - 1;
        let last = self.boxes.len() as i64 - 1;
        [guess, guess - 1, guess + 1, last]
            .into_iter()
            .map(|j| j.clamp(0, last) as usize)
            .find(|&j| self.boxes[j].contains(v))
    }
}

/// Finds intervals `J_i ⊆ I` of width `δ_i` capturing many points of `A`
/// simultaneously. `gs[i][t]` is `g_i` at the point `a[t]`.
pub fn pigeonhole_intervals<S: Scalar>(
    a: &[i64],
    gs: &[Vec<S>],
    deltas: &[S],
    i: &Interval<S>,
) -> Result<PigeonholeResult<S>, RecurrenceError> {
    if gs.len() != deltas.len() {
        return Err(RecurrenceError::Precondition(format!("{} sequences but {} widths", gs.len(), deltas.len())));
    }
    let w = i.width();
    let mut covers = Vec::with_capacity(gs.len());
    for (idx, (g, d)) in gs.iter().zip(deltas).enumerate() {
        if g.len() != a.len() {
            return Err(RecurrenceError::Precondition(format!("sequence {idx} has {} values for {} points", g.len(), a.len())));
        }
        if !(*d > S::zero() && *d < w) {
            return Err(RecurrenceError::Precondition(format!("need 0 < δ_{idx} = {d} < |I| = {w}")));
        }
        covers.push(Cover::new(i, d)?);
    }
    let mut cells: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for t in 0..a.len() {
        let mut key = Vec::with_capacity(gs.len());
        for (g, cover) in gs.iter().zip(&covers) {
            let j = cover.locate(&g[t]).ok_or_else(|| {
                RecurrenceError::Precondition(format!("value {} at n = {} lies outside {i}", g[t], a[t]))
            })?;
            key.push(j);
        }
        *cells.entry(key).or_default() += 1;
    }
    let best = cells.iter().fold(None::<(&Vec<usize>, usize)>, |acc, (k, &c)| match acc {
        Some((_, bc)) if bc >= c => acc,
        _ => Some((k, c)),
    });
    let intervals: Vec<Interval<S>> = match best {
        Some((key, _)) => key.iter().zip(&covers).map(|(&j, c)| c.boxes[j].clone()).collect(),
        None => covers.iter().map(|c| c.boxes[0].clone()).collect(),
    };
    let subset = (0..a.len())
        .filter(|&t| gs.iter().zip(&intervals).all(|(g, j)| j.contains(&g[t])))
        .map(|t| a[t])
        .collect();
    let l = gs.len() as i32;
    let prod: f64 = deltas.iter().map(|d| d.to_f64()).product();
    let bound = prod * a.len() as f64 / (2f64.powi(l) * w.to_f64().powi(l));
    Ok(PigeonholeResult { intervals, subset, bound })
}
