//! Bracket forms, their textual syntax, and realization into bracket
//! polynomials on `[N]`.
//!
//! A [`BracketForm`] is a tree over [`PolynomialForm`] leaves. The smart
//! constructors below keep pure-polynomial subtrees collapsed into a single
//! leaf, which is also the shape the parser produces, so printing and
//! re-parsing is the identity.

mod form;
mod parse;
mod realize;
mod tree;

pub use form::{MonomialForm, PolynomialForm, Sign};
pub use parse::{parse_form, ParseError};
pub use realize::{
    parse_binding, realize, Binding, BindingError, BracketPolynomial, RealPoly, RealTerm,
    RealizeError,
};
pub use tree::{Leaf, Node, Tree};

use crate::scalar::Rational;

/// Symbolic bracket expression over the alphabet `a1, a2, …`.
pub type BracketForm = Tree<PolynomialForm>;

impl Leaf for PolynomialForm {
    fn degree(&self) -> u32 {
        PolynomialForm::degree(self)
    }

    fn is_constant_free(&self) -> bool {
        PolynomialForm::is_constant_free(self)
    }

    fn term_count(&self) -> usize {
        self.terms().len()
    }
}

impl Tree<PolynomialForm> {
    pub fn poly(p: PolynomialForm) -> Self {
        Self::from_node(Node::Poly(p))
    }

    /// `a_i · n^power` as a one-term form.
    pub fn symbol(i: u32, power: u32) -> Self {
        Self::poly(PolynomialForm::monomial(MonomialForm::symbol(i, power)))
    }

    pub fn constant(c: Rational) -> Self {
        Self::poly(PolynomialForm::constant(c))
    }

    pub fn neg(x: Self) -> Self {
        match x.as_poly() {
            Some(p) => Self::poly(p.neg()),
            None => Self::from_node(Node::Neg(Box::new(x))),
        }
    }

    pub fn frac(x: Self) -> Self {
        Self::from_node(Node::Frac(Box::new(x)))
    }

    pub fn sum(l: Self, r: Self) -> Self {
        match (l.as_poly(), r.as_poly()) {
            (Some(a), Some(b)) => Self::poly(a.add(b)),
            _ => Self::from_node(Node::Sum(Box::new(l), Box::new(r))),
        }
    }

    pub fn sub(l: Self, r: Self) -> Self {
        Self::sum(l, Self::neg(r))
    }

    pub fn prod(l: Self, r: Self) -> Self {
        match (l.as_poly(), r.as_poly()) {
            (Some(a), Some(b)) => Self::poly(a.mul(b)),
            _ => Self::from_node(Node::Prod(Box::new(l), Box::new(r))),
        }
    }

    /// Symbol indices used anywhere in the form.
    pub fn symbols(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let _ = self.try_map_leaves::<PolynomialForm, ()>(&mut |p| {
            out.extend(p.symbols());
            Ok(p.clone())
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The model form `a_k n {a_{k-1} n {… {a_1 n} …}}` of depth `k`.
    pub fn nested_linear(k: u32) -> Self {
        let mut f = Self::symbol(1, 1);
        for i in 2..=k {
            f = Self::prod(Self::symbol(i, 1), Self::frac(f));
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_linear_prints_in_dsl() {
        assert_eq!(BracketForm::nested_linear(1).to_string(), "a1*n");
        assert_eq!(BracketForm::nested_linear(3).to_string(), "a3*n*{a2*n*{a1*n}}");
        assert_eq!(BracketForm::nested_linear(3).degree_bound(), 3);
    }

    #[test]
    fn smart_constructors_collapse_polynomials() {
        let f = BracketForm::sum(BracketForm::symbol(1, 1), BracketForm::symbol(2, 2));
        assert!(f.as_poly().is_some());
        let g = BracketForm::neg(BracketForm::frac(f.clone()));
        assert!(matches!(g.node(), Node::Neg(_)));
        assert_eq!(BracketForm::prod(f.clone(), f).degree_bound(), 4);
    }

    #[test]
    fn components_examples() {
        let genuine = parse_form("a1*n^2 + a2*n").unwrap();
        assert!(genuine.components().is_empty());
        let phi = parse_form("n*{a1*n*{a2*n}*{a3*n}}").unwrap();
        let comps: Vec<String> = phi.components().iter().map(|c| c.to_string()).collect();
        assert_eq!(comps, ["a2*n", "a3*n", "a1*n*{a2*n}*{a3*n}"]);
        let psi = parse_form("{-{a1*n}}").unwrap();
        let comps: Vec<String> = psi.components().iter().map(|c| c.to_string()).collect();
        assert_eq!(comps, ["a1*n", "-{a1*n}"]);
    }

    #[test]
    fn repeated_component_is_listed_once() {
        let phi = parse_form("{a1*n}*{a1*n}").unwrap();
        assert_eq!(phi.components().len(), 1);
    }
}
