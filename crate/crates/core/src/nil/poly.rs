use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// Sparse polynomial in `n = x_0` and difference variables `h_1 = x_1,
/// h_2 = x_2, …`. Exponent vectors carry no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<S> {
    terms: BTreeMap<Vec<u32>, S>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn binomial<S: Scalar>(n: u32, k: u32) -> S {
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * S::from_i64((n - i) as i64) / S::from_i64((i + 1) as i64);
    }
    acc
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// `Σ_i coeffs[i] · n^i`.
    pub fn univariate(coeffs: &[S]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }

    /// `c · Π x_v^{e_v}`.
    pub fn monomial(exps: Vec<u32>, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &S)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> S {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    /// Degree in variable `v`.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|k| k.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    /// Number of variables mentioned, `1 + ` the largest index used.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let len = ka.len().max(kb.len());
                let e = (0..len).map(|i| ka.get(i).copied().unwrap_or(0) + kb.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, va.clone() * vb.clone());
            }
        }
        out
    }

    pub fn eval(&self, xs: &[S]) -> S {
        let mut acc = S::zero();
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for (i, &e) in k.iter().enumerate() {
                if e > 0 {
                    let x = xs.get(i).cloned().unwrap_or_else(S::zero);
                    t = t * num_traits::pow(x, e as usize);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes `n → n + h_v`.
    pub fn shift(&self, v: usize) -> Self {
        assert!(v >= 1, "shift variable must be a difference variable");
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let d = k.first().copied().unwrap_or(0);
            for j in 0..=d {
                // n^d → Σ_j C(d, j) n^{d−j} h_v^j.
                let mut e = k.clone();
                if e.len() <= v {
                    e.resize(v + 1, 0);
                }
                e[0] = d - j;
                e[v] += j;
                out.add_term(e, c.clone() * binomial::<S>(d, j));
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i == 0 { "n".to_string() } else { format!("h{i}") };
                if e == 1 {
                    write!(f, "*{name}")?;
                } else {
                    write!(f, "*{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
