//! Additive and multiplicative difference operators on finite sequences.
//!
//! Differences on an interval domain narrow the domain to the points where
//! both `n` and `n + h` are defined; nothing is padded.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::Float;

use crate::interval::Interval;
use crate::scalar::{frac, Scalar};

/// Real values on the integer interval `[lo, lo + len − 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSeq<S> {
    lo: i64,
    values: Vec<S>,
}

impl<S: Scalar> RealSeq<S> {
    /// A sequence on `[1, N]` with `N = values.len()`.
    pub fn new(values: Vec<S>) -> Self {
        Self { lo: 1, values }
    }

    pub fn with_domain(lo: i64, values: Vec<S>) -> Self {
        Self { lo, values }
    }

    pub fn from_fn(n_max: usize, f: impl Fn(i64) -> S) -> Self {
        Self::new((1..=n_max as i64).map(f).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last point of the domain; `lo − 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Option<&S> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize)
    }

    /// `Δ_h φ(n) = φ(n + h) − φ(n)` on the points where both terms exist.
    pub fn delta(&self, h: i64) -> Self {
        let lo = self.lo.max(self.lo - h);
        let hi = self.hi().min(self.hi() - h);
        if hi < lo {
            return Self { lo, values: Vec::new() };
        }
        let values = (lo..=hi)
            .map(|n| self.get(n + h).unwrap().clone() - self.get(n).unwrap().clone())
            .collect();
        Self { lo, values }
    }

    /// `Δ_{h1} ⋯ Δ_{hk} φ`.
    pub fn delta_iter(&self, hs: &[i64]) -> Self {
        hs.iter().rev().fold(self.clone(), |acc, &h| acc.delta(h))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        let values = (lo..=hi).map(|n| f(self.get(n).unwrap(), other.get(n).unwrap())).collect();
        Self { lo, values }
    }

    /// Pointwise sum on the common domain.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    /// Pointwise product on the common domain.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { lo: self.lo, values: self.values.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { lo: self.lo, values: self.values.iter().map(f).collect() }
    }

    /// CSV with header `index,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.lo + i as i64, v);
        }
        out
    }
}

/// Where a complex sequence lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqDomain {
    /// The integers `lo, lo + 1, …`.
    Interval { lo: i64 },
    /// `ℤ/Ñℤ` with `Ñ` the sequence length.
    Cyclic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeq<F> {
    domain: SeqDomain,
    values: Vec<Complex<F>>,
}

impl<F: Float> ComplexSeq<F> {
    pub fn interval(values: Vec<Complex<F>>) -> Self {
        Self { domain: SeqDomain::Interval { lo: 1 }, values }
    }

    pub fn cyclic(values: Vec<Complex<F>>) -> Self {
        Self { domain: SeqDomain::Cyclic, values }
    }

    /// `e(φ)` on the domain of `phi`.
    pub fn phase<S: Scalar>(phi: &RealSeq<S>) -> Self {
        let values = phi
            .values()
            .iter()
            .map(|v| crate::numeric::e(F::from(frac(v).to_f64()).unwrap()))
            .collect();
        Self { domain: SeqDomain::Interval { lo: phi.lo() }, values }
    }

    pub fn domain(&self) -> SeqDomain {
        self.domain
    }

    pub fn values(&self) -> &[Complex<F>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<F>> {
        self.values
    }

    /// Every value lies in the closed unit disc, up to `1e−12`.
    pub fn is_disc_valued(&self) -> bool {
        let tol = F::from(1e-12).unwrap();
        self.values.iter().all(|z| z.norm() <= F::one() + tol)
    }

    /// `Δ*_h f(x) = f(x + h) · conj f(x)`.
    pub fn mult_delta(&self, h: i64) -> Self {
        match self.domain {
            SeqDomain::Cyclic => {
                let m = self.values.len() as i64;
                let values = (0..m)
                    .map(|x| self.values[(x + h).rem_euclid(m) as usize] * self.values[x as usize].conj())
                    .collect();
                Self { domain: SeqDomain::Cyclic, values }
            }
            SeqDomain::Interval { lo } => {
                let hi = lo + self.values.len() as i64 - 1;
                let new_lo = lo.max(lo - h);
                let new_hi = hi.min(hi - h);
                let values = (new_lo..=new_hi)
                    .map(|n| self.values[(n + h - lo) as usize] * self.values[(n - lo) as usize].conj())
                    .collect();
                Self { domain: SeqDomain::Interval { lo: new_lo }, values }
            }
        }
    }

    /// CSV with header `index,re,im`.
    pub fn to_csv(&self) -> String
    where
        F: std::fmt::Display,
    {
        let lo = match self.domain {
            SeqDomain::Interval { lo } => lo,
            SeqDomain::Cyclic => 0,
        };
        let mut out = String::from("index,re,im\n");
        for (i, z) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", lo + i as i64, z.re, z.im);
        }
        out
    }
}

/// Whether `{x} − {y} = {x − y}` holds when both fractional parts lie in
/// `J`. Vacuously true when the premise fails.
pub fn frac_difference_check<S: Scalar>(x: &S, y: &S, j: &Interval<S>) -> bool {
    let (fx, fy) = (frac(x), frac(y));
    if !(j.contains(&fx) && j.contains(&fy)) {
        return true;
    }
    (fx - fy).approx_eq(&frac(&(x.clone() - y.clone())), 1e-12)
}

/// Whether `{x} + {y} = {x + y}` holds when both fractional parts lie in a
/// centred `J`. Vacuously true when the premise fails.
pub fn frac_sum_check<S: Scalar>(x: &S, y: &S, j: &Interval<S>) -> bool {
    let (fx, fy) = (frac(x), frac(y));
    if !(j.is_centered() && j.contains(&fx) && j.contains(&fy)) {
        return true;
    }
    (fx + fy).approx_eq(&frac(&(x.clone() + y.clone())), 1e-12)
}
