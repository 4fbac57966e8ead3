use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::set::mask_members;
use super::RecurrenceError;
use crate::bracket::BracketPolynomial;
use crate::scalar::{circle_norm, Scalar};

/// Which corners must lie in `B` and what the derivative must satisfy.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckMode<S> {
    /// All `2^k` corners in `B`; derivative vanishes.
    Plain,
    /// Corners `ω ≠ 0` in `B`; derivative vanishes.
    Strong,
    /// Derivative within `δ` of an integer; `strong` drops the `ω = 0` corner.
    Approx { delta: S, strong: bool },
}

impl<S> CheckMode<S> {
    pub fn name(&self) -> &'static str {
        match self {
            CheckMode::Plain => "plain",
            CheckMode::Strong => "strong",
            CheckMode::Approx { .. } => "approx",
        }
    }

    fn needs_base_corner(&self) -> bool {
        matches!(self, CheckMode::Plain | CheckMode::Approx { strong: false, .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckerBudget {
    pub mode: BudgetMode,
    /// Exhaustive: cap on the search space `N·|B|^k`. Randomized: number
    /// of samples.
    pub max_tuples: u64,
    pub seed: u64,
}

impl CheckerBudget {
    pub fn exhaustive(max_tuples: u64) -> Self {
        Self { mode: BudgetMode::Exhaustive, max_tuples, seed: 0 }
    }

    pub fn randomized(samples: u64, seed: u64) -> Self {
        Self { mode: BudgetMode::Randomized, max_tuples: samples, seed }
    }
}

/// A point `(n, h)` at which the local-polynomiality requirement fails.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationWitness<S> {
    pub n: i64,
    pub hs: Vec<i64>,
    pub derivative_value: S,
    pub mode: &'static str,
}

impl<S: Scalar> ViolationWitness<S> {
    /// Recomputes `Δ_{h_1..h_k} φ(n)` from `φ` directly.
    pub fn replay(&self, phi: &BracketPolynomial<S>) -> S {
        alternating_sum(self.n, &self.hs, |x| phi.eval(x)).0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "hs": self.hs,
            "derivative_value": self.derivative_value.to_string(),
            "derivative_value_f64": self.derivative_value.to_f64(),
            "mode": self.mode,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome<S> {
    /// Exhaustive scan found nothing; `tuples_checked` admissible tuples were
    /// evaluated.
    Ok { tuples_checked: u64 },
    /// Randomized scan found nothing. This certifies nothing.
    NoWitnessFound { samples: u64 },
    Violation(ViolationWitness<S>),
}

impl<S: Scalar> CheckOutcome<S> {
    pub fn is_violation(&self) -> bool {
        matches!(self, CheckOutcome::Violation(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            CheckOutcome::Ok { tuples_checked } => json!({"status": "ok", "tuples_checked": tuples_checked}),
            CheckOutcome::NoWitnessFound { samples } => json!({"status": "no-witness-found", "samples": samples}),
            CheckOutcome::Violation(w) => json!({"status": "violation", "witness": w.to_json()}),
        }
    }
}

/// `(Σ_ω (−1)^{k−|ω|} φ(n + ω·h), Σ_ω |φ(n + ω·h)|)`.
fn alternating_sum<S: Scalar>(n: i64, hs: &[i64], phi: impl Fn(i64) -> S) -> (S, S) {
    let k = hs.len();
    let mut acc = S::zero();
    let mut mag = S::zero();
    for w in 0..1usize << k {
        let s: i64 = (0..k).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
        let v = phi(n + s);
        mag = mag + v.abs();
        if (k - w.count_ones() as usize) % 2 == 0 {
            acc = acc + v;
        } else {
            acc = acc - v;
        }
    }
    (acc, mag)
}

// TODO: scale the float tolerance by the size of intermediate products such as
// αn·{βn}; at N around 10^4 their rounding already exceeds 1e-9.
fn violates<S: Scalar>(mode: &CheckMode<S>, value: &S, magnitude: &S) -> bool {
    let tol = if S::EXACT { 0.0 } else { 1e-9 * magnitude.to_f64().max(1.0) };
    match mode {
        CheckMode::Plain | CheckMode::Strong => value.abs().to_f64() > tol || (S::EXACT && !value.is_zero()),
        CheckMode::Approx { delta, .. } => {
            let d = circle_norm(value);
            if S::EXACT {
                d > *delta
            } else {
                d.to_f64() > delta.to_f64() + tol
            }
        }
    }
}

struct Ctx<'a, S> {
    phi: Vec<S>,
    mask: &'a [bool],
    k: usize,
    mode: &'a CheckMode<S>,
}

impl<S: Scalar> Ctx<'_, S> {
    fn inside(&self, x: i64) -> bool {
        x >= 1 && x <= self.mask.len() as i64 && self.mask[(x - 1) as usize]
    }

    fn value(&self, x: i64) -> S {
        self.phi[(x - 1) as usize].clone()
    }

    /// Admissible corners apart from the singletons and, when required, the
    /// base point.
    fn admissible(&self, n: i64, hs: &[i64]) -> bool {
        (1..1usize << hs.len()).all(|w| {
            let s: i64 = (0..hs.len()).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
            self.inside(n + s)
        })
    }

    fn evaluate(&self, n: i64, hs: &[i64]) -> Option<S> {
        let (v, mag) = alternating_sum(n, hs, |x| self.value(x));
        violates(self.mode, &v, &mag).then_some(v)
    }
}

fn l1(hs: &[i64]) -> i64 {
    hs.iter().map(|h| h.abs()).sum()
}

/// Checks whether `φ` is (strongly, approximately) locally polynomial of
/// degree `k − 1` on `B`, given as a mask over `1..=N`.
///
/// Exhaustive scans return the witness with the smallest `n`, then smallest
/// `‖h‖₁`, then lexicographically smallest `h`.
pub fn check_locally_poly<S: Scalar>(
    phi: &BracketPolynomial<S>,
    mask: &[bool],
    k: u32,
    mode: &CheckMode<S>,
    budget: &CheckerBudget,
) -> Result<CheckOutcome<S>, RecurrenceError> {
    let n_max = mask.len();
    let ctx = Ctx { phi: phi.values(n_max), mask, k: k as usize, mode };
    let pool = mask_members(mask);
    match budget.mode {
        BudgetMode::Exhaustive => {
            // Each h_j ranges over B − n.
            let space = (pool.len() as u128).saturating_pow(k).saturating_mul(n_max as u128);
            if space > budget.max_tuples as u128 {
                return Err(RecurrenceError::BudgetExceeded { needed: space, budget: budget.max_tuples });
            }
            let per_n: Vec<(u64, Option<ViolationWitness<S>>)> =
                (1..=n_max as i64).into_par_iter().map(|n| scan_point(&ctx, &pool, n)).collect();
            let tuples_checked = per_n.iter().map(|(c, _)| c).sum();
            match per_n.into_iter().find_map(|(_, w)| w) {
                Some(w) => Ok(CheckOutcome::Violation(w)),
                None => Ok(CheckOutcome::Ok { tuples_checked }),
            }
        }
        BudgetMode::Randomized => {
            if pool.is_empty() || n_max == 0 {
                return Ok(CheckOutcome::NoWitnessFound { samples: budget.max_tuples });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            let draws: Vec<(i64, Vec<i64>)> = (0..budget.max_tuples)
                .map(|_| {
                    let n = rng.gen_range(1..=n_max as i64);
                    let hs = (0..k).map(|_| pool[rng.gen_range(0..pool.len())] - n).collect();
                    (n, hs)
                })
                .collect();
            let found = draws.par_iter().find_first(|(n, hs)| {
                (!ctx.mode.needs_base_corner() || ctx.inside(*n)) && ctx.admissible(*n, hs) && ctx.evaluate(*n, hs).is_some()
            });
            Ok(match found {
                Some((n, hs)) => CheckOutcome::Violation(ViolationWitness {
                    n: *n,
                    hs: hs.clone(),
                    derivative_value: ctx.evaluate(*n, hs).unwrap(),
                    mode: mode.name(),
                }),
                None => CheckOutcome::NoWitnessFound { samples: budget.max_tuples },
            })
        }
    }
}

/// Enumerates every admissible `h` at the base point `n`; returns the count
/// and the canonical witness there, if any.
fn scan_point<S: Scalar>(ctx: &Ctx<'_, S>, pool: &[i64], n: i64) -> (u64, Option<ViolationWitness<S>>) {
    if ctx.mode.needs_base_corner() && !ctx.inside(n) {
        return (0, None);
    }
    let mut count = 0u64;
    let mut best: Option<(Vec<i64>, S)> = None;
    let mut hs = Vec::with_capacity(ctx.k);
    let mut sums = vec![0i64];
    descend(ctx, pool, n, &mut hs, &mut sums, &mut count, &mut best);
    let w = best.map(|(hs, v)| ViolationWitness { n, hs, derivative_value: v, mode: ctx.mode.name() });
    (count, w)
}

fn descend<S: Scalar>(
    ctx: &Ctx<'_, S>,
    pool: &[i64],
    n: i64,
    hs: &mut Vec<i64>,
    sums: &mut Vec<i64>,
    count: &mut u64,
    best: &mut Option<(Vec<i64>, S)>,
) {
    if hs.len() == ctx.k {
        *count += 1;
        if let Some(v) = ctx.evaluate(n, hs) {
            let better = match best {
                None => true,
                Some((b, _)) => (l1(hs), hs.as_slice()) < (l1(b), b.as_slice()),
            };
            if better {
                *best = Some((hs.clone(), v));
            }
        }
        return;
    }
    for &m in pool {
        let h = m - n;
        let base = sums.len();
        if !sums[1..base].iter().all(|&s| ctx.inside(n + s + h)) {
            continue;
        }
        for i in 0..base {
            let s = sums[i] + h;
            sums.push(s);
        }
        hs.push(h);
        descend(ctx, pool, n, hs, sums, count, best);
        hs.pop();
        sums.truncate(base);
    }
}
