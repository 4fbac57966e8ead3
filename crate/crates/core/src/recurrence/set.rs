use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bracket::BracketPolynomial;
use crate::interval::Interval;
use crate::scalar::{frac, Scalar};

/// `B_N(ν_1, …, ν_r; S_1, …, S_r) = {n ∈ [N] : {ν_i(n)} ∈ S_i ∀i}`.
#[derive(Clone, Debug)]
pub struct RecurrenceSet<S> {
    constraints: Vec<(BracketPolynomial<S>, Interval<S>)>,
    n: usize,
}

impl<S: Scalar> RecurrenceSet<S> {
    pub fn new(n: usize) -> Self {
        Self { constraints: Vec::new(), n }
    }

    pub fn with(mut self, nu: BracketPolynomial<S>, target: Interval<S>) -> Self {
        self.constraints.push((nu, target));
        self
    }

    pub fn from_constraints(constraints: Vec<(BracketPolynomial<S>, Interval<S>)>, n: usize) -> Self {
        Self { constraints, n }
    }

    pub fn constraints(&self) -> &[(BracketPolynomial<S>, Interval<S>)] {
        &self.constraints
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same constraints over `[n]`.
    pub fn with_n(&self, n: usize) -> Self {
        Self { constraints: self.constraints.clone(), n }
    }

    /// Whether `n` satisfies every constraint. The range `1..=N` is not
    /// checked, so the same predicate serves points outside `[N]`.
    pub fn membership(&self, n: i64) -> bool {
        self.constraints.iter().all(|(nu, s)| s.contains(&frac(&nu.eval(n))))
    }

    /// Membership mask indexed by `n − 1`.
    pub fn mask(&self) -> Vec<bool> {
        (1..=self.n as i64).into_par_iter().map(|n| self.membership(n)).collect()
    }

    pub fn members(&self) -> Vec<i64> {
        mask_members(&self.mask())
    }

    /// `|B| / N`.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let count = self.mask().into_iter().filter(|&b| b).count();
        count as f64 / self.n as f64
    }
}

pub(crate) fn mask_members(mask: &[bool]) -> Vec<i64> {
    (0..mask.len()).filter(|&i| mask[i]).map(|i| i as i64 + 1).collect()
}

/// Density at each prefix length in `ns`, as CSV with header `N,density`.
pub fn density_csv<S: Scalar>(set: &RecurrenceSet<S>, ns: &[usize]) -> String {
    let mut out = String::from("N,density\n");
    for &n in ns {
        let _ = writeln!(out, "{n},{}", set.with_n(n).density());
    }
    out
}
