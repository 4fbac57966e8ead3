use super::malcev::NilError;
use super::mapping::{generic_mapping, PolynomialMapping};
use super::matrix::Unitriangular;
use crate::scalar::Scalar;

/// A filtration `G_0 ⊇ G_1 ⊇ … ⊇ G_{s+1} = {1}` of `T_p^r` by the layer
/// subgroups `T_p(l)`, where `T_p(l)` consists of elements whose entries at
/// distance at most `l` from the diagonal vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    p: usize,
    layers: Vec<usize>,
}

impl Filtration {
    /// Lower central series: `G_0 = G_1 = T_p(0)`, `G_i = T_p(i − 1)`.
    pub fn lower_central(p: usize) -> Self {
        let mut layers = vec![0];
        layers.extend(0..=p);
        Self { p, layers }
    }

    /// The dilated filtration `G_i = G'_{⌈i/d⌉}` where `G'` is the lower
    /// central series and `d` is the triviality depth of a generic degree-`k`
    /// mapping into `T_p^r`.
    pub fn finer(p: usize, r: usize, k: u32) -> Result<Self, NilError> {
        let d = generic_mapping(p, r, k).triviality_depth()?.max(1) as usize;
        let lower = Self::lower_central(p);
        let layers = (0..=p * d + 1).map(|i| lower.layer(i.div_ceil(d))).collect();
        Ok(Self { p, layers })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Index `s` with `G_{s+1}` trivial.
    pub fn degree(&self) -> usize {
        self.layers.len() - 2
    }

    /// `G_i = T_p(layer(i))`; indices past the end are trivial.
    pub fn layer(&self, i: usize) -> usize {
        self.layers.get(i).copied().unwrap_or(self.p)
    }

    pub fn contains<S: Scalar>(&self, i: usize, g: &Unitriangular<S>) -> bool {
        let l = self.layer(i);
        let d = self.p + 1;
        (0..g.r()).all(|b| (0..d).all(|a| (a + 1..d).filter(|&c| c - a <= l).all(|c| g.get(b, a, c).is_zero())))
    }

    pub fn contains_mapping<S: Scalar>(&self, i: usize, rho: &PolynomialMapping<S>) -> bool {
        rho.in_layer(self.layer(i))
    }

    /// `[G_i, G_j] ⊆ G_{i+j}` on a pair of sample elements.
    pub fn commutator_holds<S: Scalar>(&self, i: usize, j: usize, g: &Unitriangular<S>, h: &Unitriangular<S>) -> bool {
        let c = g.mul(h).mul(&g.inverse()).mul(&h.inverse());
        self.contains(i + j, &c)
    }
}

/// Whether `ρ` is a polynomial sequence adapted to `filt`: every `i`-fold
/// derivative takes values in `G_i`.
pub fn is_poly_sequence<S: Scalar>(rho: &PolynomialMapping<S>, filt: &Filtration) -> Result<bool, NilError> {
    let depth = rho.triviality_depth()? as usize;
    let mut cur = rho.clone();
    for i in 1..=depth {
        cur = cur.derivative(i);
        if !filt.contains_mapping(i, &cur) {
            return Ok(false);
        }
    }
    Ok(true)
}
