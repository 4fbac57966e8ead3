//! Realization of bracket forms and evaluation of bracket polynomials.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::form::Sign;
use super::tree::{Leaf, Node, Tree};
use super::{BracketForm, PolynomialForm};
use crate::scalar::{frac, parse_rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("symbol a{0} has no binding")]
    MissingBinding(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindingError {
    #[error("line {line}: expected `a<k> = <value>`")]
    Syntax { line: usize },
    #[error("line {line}: cannot parse value `{value}`")]
    Value { line: usize, value: String },
    #[error("line {line}: `{name}` is irrational and exact mode admits only rationals")]
    Irrational { line: usize, name: String },
}

/// Assignment of scalars to symbol indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding<S> {
    values: BTreeMap<u32, S>,
}

impl<S> Default for Binding<S> {
    fn default() -> Self {
        Self { values: BTreeMap::new() }
    }
}

impl<S: Scalar> Binding<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `a1, a2, …` to the given values in order.
    pub fn from_values(values: impl IntoIterator<Item = S>) -> Self {
        Self { values: (1u32..).zip(values).collect() }
    }

    pub fn insert(&mut self, symbol: u32, value: S) {
        self.values.insert(symbol, value);
    }

    pub fn get(&self, symbol: u32) -> Option<&S> {
        self.values.get(&symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &S)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }
}

fn named_constant(name: &str) -> Option<f64> {
    match name {
        "sqrt2" => Some(std::f64::consts::SQRT_2),
        "sqrt3" => Some(3f64.sqrt()),
        "sqrt5" => Some(5f64.sqrt()),
        "pi" => Some(std::f64::consts::PI),
        "phi" => Some((1.0 + 5f64.sqrt()) / 2.0),
        _ => None,
    }
}

/// Parses a binding file: one `a<k> = <value>` per line, `#` comments and
/// blank lines ignored. Values are decimals, `p/q`, or one of `sqrt2`,
/// `sqrt3`, `sqrt5`, `pi`, `phi`.
pub fn parse_binding<S: Scalar>(text: &str) -> Result<Binding<S>, BindingError> {
    let mut b = Binding::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content.split_once('=').ok_or(BindingError::Syntax { line })?;
        let symbol = lhs
            .trim()
            .strip_prefix('a')
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&k| k >= 1)
            .ok_or(BindingError::Syntax { line })?;
        let rhs = rhs.trim();
        let (neg, name) = match rhs.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, rhs),
        };
        let value = if let Some(x) = named_constant(name) {
            let v = S::from_real(x).ok_or_else(|| BindingError::Irrational { line, name: name.into() })?;
            if neg {
                -v
            } else {
                v
            }
        } else {
            let r = parse_rational(rhs).ok_or_else(|| BindingError::Value { line, value: rhs.into() })?;
            S::from_ratio(&r)
        };
        b.insert(symbol, value);
    }
    Ok(b)
}

/// One realized monomial `c · n^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealTerm<S> {
    pub coeff: S,
    pub power: u32,
}

/// A realized polynomial leaf; term list parallels the symbolic form.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly<S> {
    terms: Vec<RealTerm<S>>,
}

impl<S: Scalar> RealPoly<S> {
    pub fn new(terms: Vec<RealTerm<S>>) -> Self {
        Self { terms }
    }

    /// `c · n^power`.
    pub fn monomial(coeff: S, power: u32) -> Self {
        Self { terms: vec![RealTerm { coeff, power }] }
    }

    pub fn terms(&self) -> &[RealTerm<S>] {
        &self.terms
    }

    pub fn eval(&self, n: i64) -> S {
        let x = S::from_i64(n);
        let mut acc = S::zero();
        for t in &self.terms {
            acc = acc + t.coeff.clone() * num_traits::pow(x.clone(), t.power as usize);
        }
        acc
    }
}

impl<S: Scalar> fmt::Display for RealPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match t.power {
                0 => write!(f, "{}", t.coeff)?,
                1 => write!(f, "{}*n", t.coeff)?,
                p => write!(f, "{}*n^{p}", t.coeff)?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Leaf for RealPoly<S> {
    fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    fn is_constant_free(&self) -> bool {
        self.terms.iter().all(|t| t.power != 0)
    }

    fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// A bracket polynomial `[N] → ℝ`: a bracket form with real coefficients.
pub type BracketPolynomial<S> = Tree<RealPoly<S>>;

impl<S: Scalar> Tree<RealPoly<S>> {
    pub fn from_poly(p: RealPoly<S>) -> Self {
        Self::from_node(Node::Poly(p))
    }

    /// `c · n^power`.
    pub fn monomial(coeff: S, power: u32) -> Self {
        Self::from_poly(RealPoly::monomial(coeff, power))
    }

    /// `α n`.
    pub fn linear(alpha: S) -> Self {
        Self::monomial(alpha, 1)
    }

    pub fn neg(x: Self) -> Self {
        Self::from_node(Node::Neg(Box::new(x)))
    }

    pub fn frac(x: Self) -> Self {
        Self::from_node(Node::Frac(Box::new(x)))
    }

    pub fn sum(l: Self, r: Self) -> Self {
        Self::from_node(Node::Sum(Box::new(l), Box::new(r)))
    }

    pub fn prod(l: Self, r: Self) -> Self {
        Self::from_node(Node::Prod(Box::new(l), Box::new(r)))
    }

    /// `α_k n {α_{k-1} n {… {α_1 n} …}}` for `alphas = [α_1, …, α_k]`.
    pub fn nested_linear(alphas: &[S]) -> Self {
        let mut it = alphas.iter();
        let first = it.next().expect("at least one coefficient");
        let mut f = Self::linear(first.clone());
        for a in it {
            f = Self::prod(Self::linear(a.clone()), Self::frac(f));
        }
        f
    }

    /// Structural evaluation at an integer point.
    pub fn eval(&self, n: i64) -> S {
        match self.node() {
            Node::Poly(p) => p.eval(n),
            Node::Neg(c) => -c.eval(n),
            Node::Frac(c) => frac(&c.eval(n)),
            Node::Sum(l, r) => l.eval(n) + r.eval(n),
            Node::Prod(l, r) => l.eval(n) * r.eval(n),
        }
    }

    /// Values at `n = 1..=N`.
    pub fn values(&self, n_max: usize) -> Vec<S> {
        (1..=n_max as i64).map(|n| self.eval(n)).collect()
    }
}

/// Substitutes the binding into every leaf, keeping the tree shape.
pub fn realize<S: Scalar>(form: &BracketForm, binding: &Binding<S>) -> Result<BracketPolynomial<S>, RealizeError> {
    form.try_map_leaves(&mut |p: &PolynomialForm| {
        let mut terms = Vec::with_capacity(p.terms().len());
        for m in p.terms() {
            let mut c = S::from_ratio(m.coeff());
            for &s in m.symbols() {
                let v = binding.get(s).ok_or(RealizeError::MissingBinding(s))?;
                c = c * v.clone();
            }
            if m.sign() == Sign::Minus {
                c = -c;
            }
            terms.push(RealTerm { coeff: c, power: m.power() });
        }
        Ok(RealPoly::new(terms))
    })
}
