use std::fmt;

use crate::scalar::Scalar;

/// Row-major `(p+1)×(p+1)` product of upper-triangular blocks.
fn block_mul<S: Scalar>(a: &[S], b: &[S], d: usize) -> Vec<S> {
    let mut out = vec![S::zero(); d * d];
    for i in 0..d {
        for k in i..d {
            let aik = &a[i * d + k];
            if aik.is_zero() {
                continue;
            }
            for j in k..d {
                let bkj = &b[k * d + j];
                if !bkj.is_zero() {
                    out[i * d + j] = out[i * d + j].clone() + aik.clone() * bkj.clone();
                }
            }
        }
    }
    out
}

fn identity_block<S: Scalar>(d: usize) -> Vec<S> {
    let mut m = vec![S::zero(); d * d];
    for i in 0..d {
        m[i * d + i] = S::one();
    }
    m
}

/// An element of `T_p^r`: `r` upper-unitriangular `(p+1)×(p+1)` blocks.
/// Indices are zero-based throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitriangular<S> {
    p: usize,
    blocks: Vec<Vec<S>>,
}

/// An element of the Lie algebra of `T_p^r`: strictly upper-triangular
/// blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement<S> {
    p: usize,
    blocks: Vec<Vec<S>>,
}

impl<S: Scalar> Unitriangular<S> {
    pub fn identity(p: usize, r: usize) -> Self {
        assert!(p >= 1 && r >= 1);
        Self { p, blocks: vec![identity_block(p + 1); r] }
    }

    /// Builds from row-major blocks, rejecting anything that is not
    /// upper-unitriangular.
    pub fn from_blocks(p: usize, blocks: Vec<Vec<S>>) -> Option<Self> {
        let d = p + 1;
        let ok = !blocks.is_empty()
            && blocks.iter().all(|b| {
                b.len() == d * d
                    && (0..d).all(|i| {
                        b[i * d + i] == S::one() && (0..i).all(|j| b[i * d + j].is_zero())
                    })
            });
        ok.then_some(Self { p, blocks })
    }

    /// Single-block element from its above-diagonal entries `(i, j, value)`.
    pub fn from_entries(p: usize, r: usize, entries: &[(usize, usize, usize, S)]) -> Self {
        let mut g = Self::identity(p, r);
        for (l, i, j, v) in entries {
            assert!(i < j && *j <= p, "entry ({i}, {j}) is not above the diagonal");
            g.set(*l, *i, *j, v.clone());
        }
        g
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn get(&self, l: usize, i: usize, j: usize) -> &S {
        &self.blocks[l][i * (self.p + 1) + j]
    }

    pub(crate) fn set(&mut self, l: usize, i: usize, j: usize, v: S) {
        let d = self.p + 1;
        self.blocks[l][i * d + j] = v;
    }

    pub fn blocks(&self) -> &[Vec<S>] {
        &self.blocks
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.r()), (other.p, other.r()), "shape mismatch");
        let d = self.p + 1;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| block_mul(a, b, d)).collect();
        Self { p: self.p, blocks }
    }

    /// Inverse by back-substitution on each block.
    pub fn inverse(&self) -> Self {
        let d = self.p + 1;
        let blocks = self
            .blocks
            .iter()
            .map(|g| {
                let mut inv = identity_block::<S>(d);
                for j in 0..d {
                    for i in (0..j).rev() {
                        let mut acc = g[i * d + j].clone();
                        for t in i + 1..j {
                            acc = acc + g[i * d + t].clone() * inv[t * d + j].clone();
                        }
                        inv[i * d + j] = -acc;
                    }
                }
                inv
            })
            .collect();
        Self { p: self.p, blocks }
    }

    /// Whether every entry is an integer, i.e. the element lies in `Γ`.
    pub fn is_integral(&self) -> bool {
        self.blocks.iter().flatten().all(|v| v.is_integer())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.r())
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// `g − I` as a Lie-algebra-shaped element.
    fn minus_identity(&self) -> LieElement<S> {
        let d = self.p + 1;
        let mut x = LieElement { p: self.p, blocks: self.blocks.clone() };
        for b in &mut x.blocks {
            for i in 0..d {
                b[i * d + i] = S::zero();
            }
        }
        x
    }
}

impl<S: Scalar> LieElement<S> {
    pub fn zero(p: usize, r: usize) -> Self {
        Self { p, blocks: vec![vec![S::zero(); (p + 1) * (p + 1)]; r] }
    }

    /// `E_{ij}` in block `l`, scaled by `c`.
    pub fn generator(p: usize, r: usize, l: usize, i: usize, j: usize, c: S) -> Self {
        assert!(i < j && j <= p && l < r);
        let mut x = Self::zero(p, r);
        x.blocks[l][i * (p + 1) + j] = c;
        x
    }

    pub fn from_blocks(p: usize, blocks: Vec<Vec<S>>) -> Option<Self> {
        let d = p + 1;
        let ok = !blocks.is_empty()
            && blocks
                .iter()
                .all(|b| b.len() == d * d && (0..d).all(|i| (0..=i).all(|j| b[i * d + j].is_zero())));
        ok.then_some(Self { p, blocks })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn get(&self, l: usize, i: usize, j: usize) -> &S {
        &self.blocks[l][i * (self.p + 1) + j]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        Self { p: self.p, blocks }
    }

    pub fn scale(&self, c: &S) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|x| x.clone() * c.clone()).collect()).collect();
        Self { p: self.p, blocks }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let d = self.p + 1;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| block_mul(a, b, d)).collect();
        Self { p: self.p, blocks }
    }

    /// `[X, Y] = XY − YX`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.matmul(other).add(&other.matmul(self).scale(&-S::one()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// `exp(X) = Σ_{j ≤ p} X^j / j!`; the series stops because `X^{p+1} = 0`.
pub fn mat_exp<S: Scalar>(x: &LieElement<S>) -> Unitriangular<S> {
    let (p, r) = (x.p, x.r());
    let mut acc = LieElement::zero(p, r);
    let mut power = x.clone();
    let mut fact = S::one();
    for j in 1..=p {
        fact = fact * S::from_i64(j as i64);
        acc = acc.add(&power.scale(&(S::one() / fact.clone())));
        power = power.matmul(x);
    }
    let mut g = Unitriangular::<S>::identity(p, r);
    for (gb, ab) in g.blocks.iter_mut().zip(acc.blocks) {
        for (v, a) in gb.iter_mut().zip(ab) {
            *v = v.clone() + a;
        }
    }
    g
}

/// `log(g) = Σ_{j ≤ p} (−1)^{j+1} (g − I)^j / j`.
pub fn mat_log<S: Scalar>(g: &Unitriangular<S>) -> LieElement<S> {
    let n = g.minus_identity();
    let mut acc = LieElement::zero(g.p, g.r());
    let mut power = n.clone();
    for j in 1..=g.p {
        let c = S::one() / S::from_i64(j as i64);
        let c = if j % 2 == 1 { c } else { -c };
        acc = acc.add(&power.scale(&c));
        power = power.matmul(&n);
    }
    acc
}

impl<S: Scalar> fmt::Display for Unitriangular<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.p + 1;
        for (l, b) in self.blocks.iter().enumerate() {
            if l > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "[")?;
            for i in 0..d {
                if i > 0 {
                    write!(f, "; ")?;
                }
                let row: Vec<String> = (0..d).map(|j| b[i * d + j].to_string()).collect();
                write!(f, "{}", row.join(", "))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert!(mat_exp(&LieElement::<f64>::zero(3, 2)).is_identity());
    }

    #[test]
    fn exp_of_heisenberg_generator() {
        let x = LieElement::generator(2, 1, 0, 0, 1, 1.0f64);
        let g = mat_exp(&x);
        assert_eq!(g, Unitriangular::from_entries(2, 1, &[(0, 0, 1, 1.0)]));
    }

    #[test]
    fn exp_log_round_trip_exact() {
        let mut blocks = vec![vec![Rational::from_integer(0.into()); 16]];
        let vals = [(0, 1, q(1, 2)), (0, 2, q(-3, 7)), (0, 3, q(5, 3)), (1, 2, q(2, 1)), (1, 3, q(-1, 5)), (2, 3, q(4, 9))];
        for (i, j, v) in vals {
            blocks[0][i * 4 + j] = v;
        }
        let x = LieElement::from_blocks(3, blocks).unwrap();
        let g = mat_exp(&x);
        assert_eq!(mat_log(&g), x);
        assert_eq!(mat_exp(&mat_log(&g)), g);
    }

    #[test]
    fn inverse_and_product() {
        let g = Unitriangular::from_entries(3, 2, &[(0, 0, 1, q(1, 2)), (0, 1, 3, q(3, 1)), (1, 0, 3, q(-2, 3)), (1, 2, 3, q(1, 1))]);
        assert!(g.mul(&g.inverse()).is_identity());
        assert!(g.inverse().mul(&g).is_identity());
        assert!(!g.is_integral());
        assert!(Unitriangular::<f64>::from_blocks(1, vec![vec![1.0, 2.0, 0.5, 1.0]]).is_none());
    }
}
