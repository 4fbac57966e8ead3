//! Expression trees shared by bracket forms and their realizations.

use std::fmt;

/// Leaf payload of a bracket tree: a polynomial, symbolic or realized.
pub trait Leaf: Clone + PartialEq + fmt::Display {
    fn degree(&self) -> u32;
    fn is_constant_free(&self) -> bool;
    fn term_count(&self) -> usize;
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node<L> {
    Poly(L),
    Neg(Box<Tree<L>>),
    Frac(Box<Tree<L>>),
    Sum(Box<Tree<L>>, Box<Tree<L>>),
    Prod(Box<Tree<L>>, Box<Tree<L>>),
}

/// A node together with its cached degree bound and constant-freeness.
#[derive(Clone, Debug, PartialEq)]
pub struct Tree<L> {
    node: Node<L>,
    degree_bound: u32,
    constant_free: bool,
}

impl<L: Leaf> Tree<L> {
    pub fn from_node(node: Node<L>) -> Self {
        let (degree_bound, constant_free) = match &node {
            Node::Poly(p) => (p.degree(), p.is_constant_free()),
            Node::Neg(c) | Node::Frac(c) => (c.degree_bound, c.constant_free),
            Node::Sum(l, r) => (l.degree_bound.max(r.degree_bound), l.constant_free && r.constant_free),
            Node::Prod(l, r) => (l.degree_bound + r.degree_bound, l.constant_free && r.constant_free),
        };
        Self { node, degree_bound, constant_free }
    }

    pub fn node(&self) -> &Node<L> {
        &self.node
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_constant_free(&self) -> bool {
        self.constant_free
    }

    pub fn as_poly(&self) -> Option<&L> {
        match &self.node {
            Node::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// True when the tree contains no fractional-part node.
    pub fn is_genuine_polynomial(&self) -> bool {
        match &self.node {
            Node::Poly(_) => true,
            Node::Frac(_) => false,
            Node::Neg(c) => c.is_genuine_polynomial(),
            Node::Sum(l, r) | Node::Prod(l, r) => l.is_genuine_polynomial() && r.is_genuine_polynomial(),
        }
    }

    /// Rebuilds the tree with every leaf transformed, keeping the shape.
    pub fn try_map_leaves<M: Leaf, E>(&self, f: &mut impl FnMut(&L) -> Result<M, E>) -> Result<Tree<M>, E> {
        let node = match &self.node {
            Node::Poly(p) => Node::Poly(f(p)?),
            Node::Neg(c) => Node::Neg(Box::new(c.try_map_leaves(f)?)),
            Node::Frac(c) => Node::Frac(Box::new(c.try_map_leaves(f)?)),
            Node::Sum(l, r) => Node::Sum(Box::new(l.try_map_leaves(f)?), Box::new(r.try_map_leaves(f)?)),
            Node::Prod(l, r) => Node::Prod(Box::new(l.try_map_leaves(f)?), Box::new(r.try_map_leaves(f)?)),
        };
        Ok(Tree::from_node(node))
    }

    /// Bracket components: the inner expressions `ν` of every `{ν}`, in
    /// post-order of first occurrence, deduplicated structurally.
    pub fn components(&self) -> Vec<Tree<L>> {
        let mut out = Vec::new();
        self.collect_components(&mut out);
        out
    }

    fn collect_components(&self, out: &mut Vec<Tree<L>>) {
        match &self.node {
            Node::Poly(_) => {}
            Node::Neg(c) => c.collect_components(out),
            Node::Frac(c) => {
                c.collect_components(out);
                if !out.contains(c) {
                    out.push((**c).clone());
                }
            }
            Node::Sum(l, r) | Node::Prod(l, r) => {
                l.collect_components(out);
                r.collect_components(out);
            }
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>, right: bool) -> fmt::Result {
        match &self.node {
            Node::Frac(_) | Node::Neg(_) => write!(f, "{self}"),
            Node::Poly(p) if !right && p.term_count() <= 1 => write!(f, "{p}"),
            Node::Prod(_, _) if !right => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl<L: Leaf> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Poly(p) => write!(f, "{p}"),
            Node::Frac(c) => write!(f, "{{{c}}}"),
            Node::Neg(c) => {
                write!(f, "-")?;
                match &c.node {
                    Node::Frac(_) | Node::Neg(_) => write!(f, "{c}"),
                    _ => write!(f, "({c})"),
                }
            }
            Node::Sum(l, r) => {
                write!(f, "{l}")?;
                match &r.node {
                    Node::Neg(x) => {
                        write!(f, " - ")?;
                        match &x.node {
                            Node::Frac(_) | Node::Neg(_) => write!(f, "{x}"),
                            _ => write!(f, "({x})"),
                        }
                    }
                    Node::Poly(p) if p.term_count() <= 1 => write!(f, " + {p}"),
                    Node::Frac(_) | Node::Prod(_, _) => write!(f, " + {r}"),
                    _ => write!(f, " + ({r})"),
                }
            }
            Node::Prod(l, r) => {
                l.fmt_factor(f, false)?;
                write!(f, "*")?;
                r.fmt_factor(f, true)
            }
        }
    }
}
