//! The ring of polynomial forms over the alphabet `a1, a2, …`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        self.times(Sign::Minus)
    }
}

/// `± c · a_{i1} ⋯ a_{is} · n^k` with `c` a positive rational.
///
/// The coefficient is an extension of the bare alphabet monomials so that
/// numeric literals such as `3/10*n` stay inside the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialForm {
    sign: Sign,
    coeff: Rational,
    symbols: Vec<u32>,
    power: u32,
}

impl MonomialForm {
    /// Builds a monomial; returns `None` when `coeff` is zero. Negative
    /// coefficients are folded into the sign.
    pub fn new(sign: Sign, coeff: Rational, mut symbols: Vec<u32>, power: u32) -> Option<Self> {
        if coeff.is_zero() {
            return None;
        }
        let sign = if coeff.is_negative() { sign.flip() } else { sign };
        symbols.sort_unstable();
        Some(Self { sign, coeff: coeff.abs(), symbols, power })
    }

    /// `a_i · n^power`.
    pub fn symbol(i: u32, power: u32) -> Self {
        Self { sign: Sign::Plus, coeff: Rational::one(), symbols: vec![i], power }
    }

    /// `n^power`.
    pub fn n_pow(power: u32) -> Self {
        Self { sign: Sign::Plus, coeff: Rational::one(), symbols: Vec::new(), power }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn is_constant_free(&self) -> bool {
        self.power != 0
    }

    pub fn negated(&self) -> Self {
        Self { sign: self.sign.flip(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut symbols = Vec::with_capacity(self.symbols.len() + other.symbols.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        symbols.sort_unstable();
        Self {
            sign: self.sign.times(other.sign),
            coeff: &self.coeff * &other.coeff,
            symbols,
            power: self.power + other.power,
        }
    }

    fn fmt_body(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.coeff.is_one() {
            parts.push(self.coeff.to_string());
        }
        parts.extend(self.symbols.iter().map(|s| format!("a{s}")));
        match self.power {
            0 => {}
            1 => parts.push("n".into()),
            p => parts.push(format!("n^{p}")),
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl Ord for MonomialForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.power
            .cmp(&other.power)
            .then_with(|| self.symbols.cmp(&other.symbols))
            .then_with(|| self.coeff.cmp(&other.coeff))
            .then_with(|| self.sign.cmp(&other.sign))
    }
}

impl PartialOrd for MonomialForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sum of monomial forms kept in canonical order. Like terms are never
/// merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolynomialForm {
    terms: Vec<MonomialForm>,
}

impl PolynomialForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(mut terms: Vec<MonomialForm>) -> Self {
        terms.sort();
        Self { terms }
    }

    pub fn monomial(m: MonomialForm) -> Self {
        Self { terms: vec![m] }
    }

    /// A rational constant; zero gives the empty form.
    pub fn constant(c: Rational) -> Self {
        match MonomialForm::new(Sign::Plus, c, Vec::new(), 0) {
            Some(m) => Self::monomial(m),
            None => Self::zero(),
        }
    }

    pub fn terms(&self) -> &[MonomialForm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    pub fn is_constant_free(&self) -> bool {
        self.terms.iter().all(MonomialForm::is_constant_free)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(MonomialForm::negated).collect())
    }

    /// Distributive product.
    pub fn mul(&self, other: &Self) -> Self {
        let terms = self
            .terms
            .iter()
            .flat_map(|a| other.terms.iter().map(move |b| a.mul(b)))
            .collect();
        Self::from_terms(terms)
    }

    /// Every symbol index occurring in the form, ascending and deduplicated.
    pub fn symbols(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.terms.iter().flat_map(|t| t.symbols.iter().copied()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

impl fmt::Display for PolynomialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => write!(f, "-")?,
                (_, Sign::Plus) => write!(f, " + ")?,
                (_, Sign::Minus) => write!(f, " - ")?,
            }
            t.fmt_body(f)?;
        }
        Ok(())
    }
}
