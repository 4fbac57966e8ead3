use thiserror::Error;

use super::matrix::{LieElement, Unitriangular};
use num_traits::Zero;

use crate::scalar::{circle_norm, frac, int_part, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NilError {
    #[error("basis entries are not a signed permutation of the standard generators")]
    NotPermutation,
    #[error("basis is not nested: [E, Y_{index}] leaves the span of the later elements")]
    NotNested { index: usize },
    #[error("residual is not the identity after peeling; the basis does not parametrize the group")]
    NonBasis,
    #[error("expected {expected} coordinates, got {got}")]
    Length { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("q = {q} is not a positive multiple of p = {p}")]
    NotMultiple { p: usize, q: usize },
    #[error("iteration cap {0} reached; derivatives never became trivial")]
    IterationCap(u32),
    #[error("Heisenberg correspondence fails at n = {n}: coordinate {coord} differs by {error}")]
    Heisenberg { n: i64, coord: usize, error: f64 },
}

/// Standard generator `E_{ab}` (zero-based, `a < b`) in block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId {
    pub block: usize,
    pub a: usize,
    pub b: usize,
}

impl GenId {
    pub fn distance(&self) -> usize {
        self.b - self.a
    }
}

/// An ordered basis of signed standard generators for the Lie algebra of
/// `T_p^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct MalcevBasis {
    p: usize,
    r: usize,
    elements: Vec<(GenId, i8)>,
    nested: bool,
}

fn all_generators(p: usize, r: usize) -> Vec<GenId> {
    let mut out = Vec::new();
    for dist in 1..=p {
        for block in 0..r {
            for a in 0..=p - dist {
                out.push(GenId { block, a, b: a + dist });
            }
        }
    }
    out
}

impl MalcevBasis {
    /// Validates the signed permutation and computes the nesting flag.
    pub fn new(p: usize, r: usize, elements: Vec<(GenId, i8)>) -> Result<Self, NilError> {
        let mut ids: Vec<GenId> = elements.iter().map(|(g, _)| *g).collect();
        ids.sort();
        let mut expected = all_generators(p, r);
        expected.sort();
        if ids != expected || elements.iter().any(|(_, s)| *s != 1 && *s != -1) {
            return Err(NilError::NotPermutation);
        }
        let mut basis = Self { p, r, elements, nested: false };
        basis.nested = basis.first_nesting_failure().is_none();
        Ok(basis)
    }

    /// Distance ascending, then block, then row.
    pub fn standard(p: usize, r: usize) -> Self {
        let elements = all_generators(p, r).into_iter().map(|g| (g, 1)).collect();
        Self::new(p, r, elements).expect("standard basis is valid")
    }

    /// `(E_{23}, E_{12}, E_{13})` in one-based labels: `ψ(x, y, z) = (y, x, z)`.
    pub fn heisenberg_x() -> Self {
        let g = |a, b| (GenId { block: 0, a, b }, 1);
        Self::new(2, 1, vec![g(1, 2), g(0, 1), g(0, 2)]).expect("valid")
    }

    /// `(E_{12}, E_{23}, E_{13})`, the standard basis of `T_2`:
    /// `ψ(x, y, z) = (x, y, z − xy)`.
    pub fn heisenberg_y() -> Self {
        Self::standard(2, 1)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[(GenId, i8)] {
        &self.elements
    }

    pub fn is_nested(&self) -> bool {
        self.nested
    }

    fn element<S: Scalar>(&self, i: usize) -> LieElement<S> {
        let (g, s) = self.elements[i];
        LieElement::generator(self.p, self.r, g.block, g.a, g.b, S::from_i64(s as i64))
    }

    /// Smallest `i` with `[E, Y_i] ⊄ span{Y_{i+1}, …}` for some standard
    /// generator `E`. Computed with exact rational brackets.
    pub fn first_nesting_failure(&self) -> Option<usize> {
        use crate::scalar::Rational;
        let gens = all_generators(self.p, self.r);
        for i in 0..self.dim() {
            let y: LieElement<Rational> = self.element(i);
            let tail: Vec<GenId> = self.elements[i + 1..].iter().map(|(g, _)| *g).collect();
            for e in &gens {
                let x = LieElement::generator(self.p, self.r, e.block, e.a, e.b, Rational::from_integer(1.into()));
                let c = x.bracket(&y);
                for l in 0..self.r {
                    for a in 0..=self.p {
                        for b in a + 1..=self.p {
                            let id = GenId { block: l, a, b };
                            if !c.get(l, a, b).is_zero() && !tail.contains(&id) {
                                return Some(i);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Mal'cev coordinates: the unique `t` with `g = Π exp(t_i Y_i)`.
    ///
    /// For `i = 1, …, m` the coefficient is read off the entry of `Y_i`, and
    /// `g` is left-divided by `exp(t_i Y_i)`.
    pub fn coords<S: Scalar>(&self, g: &Unitriangular<S>) -> Result<Vec<S>, NilError> {
        self.check_shape(g)?;
        if !self.nested {
            return Err(NilError::NotNested { index: self.first_nesting_failure().unwrap_or(0) });
        }
        let mut h = g.clone();
        let mut t = Vec::with_capacity(self.dim());
        for &(id, s) in &self.elements {
            let sign = S::from_i64(s as i64);
            let ti = h.get(id.block, id.a, id.b).clone() * sign.clone();
            let c = ti.clone() * sign;
            // Row a −= c · row b.
            for j in id.b..=self.p {
                let v = h.get(id.block, id.a, j).clone() - c.clone() * h.get(id.block, id.b, j).clone();
                h.set(id.block, id.a, j, v);
            }
            t.push(ti);
        }
        if !h.is_identity() {
            let tol = if S::EXACT { 0.0 } else { 1e-9 };
            if S::EXACT || h.max_abs_diff(&Unitriangular::identity(self.p, self.r)) > tol {
                return Err(NilError::NonBasis);
            }
        }
        Ok(t)
    }

    /// `Π exp(t_i Y_i)`.
    pub fn from_coords<S: Scalar>(&self, t: &[S]) -> Result<Unitriangular<S>, NilError> {
        if t.len() != self.dim() {
            return Err(NilError::Length { expected: self.dim(), got: t.len() });
        }
        let mut g = Unitriangular::identity(self.p, self.r);
        for (i, ti) in t.iter().enumerate() {
            g = g.mul(&self.exp_generator(i, ti));
        }
        Ok(g)
    }

    /// `exp(c Y_i) = I + c·s_i·E_{ab}`.
    fn exp_generator<S: Scalar>(&self, i: usize, c: &S) -> Unitriangular<S> {
        let (id, s) = self.elements[i];
        Unitriangular::from_entries(self.p, self.r, &[(id.block, id.a, id.b, c.clone() * S::from_i64(s as i64))])
    }

    fn check_shape<S: Scalar>(&self, g: &Unitriangular<S>) -> Result<(), NilError> {
        if g.p() != self.p || g.r() != self.r {
            return Err(NilError::Shape(format!("element is T_{}^{}, basis is T_{}^{}", g.p(), g.r(), self.p, self.r)));
        }
        Ok(())
    }

    /// Moves `g` into the fundamental domain: returns `χ = ψ(gz)` in
    /// `(−1/2, 1/2]^m` and the `z ∈ Γ` used.
    pub fn reduce<S: Scalar>(&self, g: &Unitriangular<S>) -> Result<(Vec<S>, Unitriangular<S>), NilError> {
        let mut cur = g.clone();
        let mut z = Unitriangular::identity(self.p, self.r);
        for _sweep in 0..2 {
            for i in 0..self.dim() {
                let t = self.coords(&cur)?;
                let shift = -int_part(&t[i]);
                if shift.is_zero() {
                    continue;
                }
                let step = self.exp_generator(i, &shift);
                cur = cur.mul(&step);
                z = z.mul(&step);
            }
            // Adding zero clears float negative zeros.
            let chi: Vec<S> = self.coords(&cur)?.into_iter().map(|c| c + S::zero()).collect();
            let half = S::half();
            if chi.iter().all(|c| *c > -half.clone() && *c <= half) {
                return Ok((chi, z));
            }
        }
        Ok((self.coords(&cur)?, z))
    }

    /// `d̂(x, y) = |ψ(x y^{-1})|_∞`, the upper bound for the nilmanifold
    /// metric used in smoothness diagnostics.
    pub fn d_hat<S: Scalar>(&self, x: &Unitriangular<S>, y: &Unitriangular<S>) -> Result<f64, NilError> {
        let t = self.coords(&x.mul(&y.inverse()))?;
        Ok(t.iter().map(|v| v.abs().to_f64()).fold(0.0, f64::max))
    }
}

/// Outcome of [`heisenberg_orbit_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergReport {
    pub checked: usize,
    /// Largest circular distance between a computed and a predicted
    /// coordinate.
    pub max_error: f64,
}

/// Reduces `g(n) = [[1, −αn, 0], [0, 1, βn], [0, 0, 1]]` in the basis
/// `(E_{23}, E_{12}, E_{13})` and compares with
/// `({βn}, {−αn}, {αn[βn]})` for `n = 1..=n_max`.
///
/// Coordinates are compared modulo 1 with tolerance `1e−9` in float mode, so
/// a value rounded across the `±1/2` boundary is not a failure. Exact mode
/// demands equality.
pub fn heisenberg_orbit_check<S: Scalar>(alpha: &S, beta: &S, n_max: usize) -> Result<HeisenbergReport, NilError> {
    use rayon::prelude::*;
    let basis = MalcevBasis::heisenberg_x();
    let errors: Vec<Result<f64, NilError>> = (1..=n_max as i64)
        .into_par_iter()
        .map(|n| {
            let x = S::from_i64(n);
            let an = alpha.clone() * x.clone();
            let bn = beta.clone() * x;
            let g = Unitriangular::from_entries(2, 1, &[(0, 0, 1, -an.clone()), (0, 1, 2, bn.clone())]);
            let (chi, _) = basis.reduce(&g)?;
            let expected = [frac(&bn), frac(&-an.clone()), frac(&(an * int_part(&bn)))];
            let mut worst = 0.0f64;
            for (c, (got, want)) in chi.iter().zip(&expected).enumerate() {
                let err = if S::EXACT {
                    if got == want {
                        0.0
                    } else {
                        (got.clone() - want.clone()).abs().to_f64().max(f64::MIN_POSITIVE)
                    }
                } else {
                    circle_norm(&(got.clone() - want.clone())).to_f64()
                };
                if err > if S::EXACT { 0.0 } else { 1e-9 } {
                    return Err(NilError::Heisenberg { n, coord: c, error: err });
                }
                worst = worst.max(err);
            }
            Ok(worst)
        })
        .collect();
    let mut max_error = 0.0f64;
    for e in errors {
        max_error = max_error.max(e?);
    }
    Ok(HeisenbergReport { checked: n_max, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn heis<S: Scalar>(x: S, y: S, z: S) -> Unitriangular<S> {
        Unitriangular::from_entries(2, 1, &[(0, 0, 1, x), (0, 1, 2, y), (0, 0, 2, z)])
    }

    #[test]
    fn heisenberg_coordinates_in_both_bases() {
        let (x, y, z) = (q(2, 3), q(-5, 7), q(1, 11));
        let g = heis(x.clone(), y.clone(), z.clone());
        assert_eq!(MalcevBasis::heisenberg_x().coords(&g).unwrap(), vec![y.clone(), x.clone(), z.clone()]);
        assert_eq!(MalcevBasis::heisenberg_y().coords(&g).unwrap(), vec![x.clone(), y.clone(), z - x * y]);
    }

    #[test]
    fn identity_has_zero_coordinates() {
        let b = MalcevBasis::standard(3, 2);
        assert!(b.is_nested());
        assert!(b.coords(&Unitriangular::<f64>::identity(3, 2)).unwrap().iter().all(|&v| v == 0.0));
        assert!(b.from_coords(&vec![0.0f64; b.dim()]).unwrap().is_identity());
    }

    #[test]
    fn non_nested_order_is_flagged() {
        let g = |a, b| (GenId { block: 0, a, b }, 1);
        let bad = MalcevBasis::new(2, 1, vec![g(0, 2), g(0, 1), g(1, 2)]).unwrap();
        assert!(!bad.is_nested());
        assert_eq!(bad.first_nesting_failure(), Some(1));
        assert!(MalcevBasis::new(2, 1, vec![g(0, 1), g(1, 2)]).is_err());
    }

    #[test]
    fn integer_coordinates_give_integer_matrices() {
        let b = MalcevBasis::standard(3, 1);
        let t: Vec<Rational> = (0..b.dim() as i64).map(|i| Rational::from_integer((i * 3 - 4).into())).collect();
        let g = b.from_coords(&t).unwrap();
        assert!(g.is_integral());
        assert_eq!(b.coords(&g).unwrap(), t);
    }

    #[test]
    fn reduction_example() {
        let b = MalcevBasis::heisenberg_x();
        let g = b.from_coords(&[q(0, 1), q(3, 5), q(0, 1)]).unwrap();
        let (chi, z) = b.reduce(&g).unwrap();
        assert_eq!(chi, vec![q(0, 1), q(-2, 5), q(0, 1)]);
        assert!(z.is_integral());
        let (chi, _) = b.reduce(&heis(q(4, 1), q(-2, 1), q(7, 1))).unwrap();
        assert!(chi.iter().all(|c| *c == q(0, 1)));
    }

    #[test]
    fn heisenberg_orbit_exact_and_float() {
        assert_eq!(heisenberg_orbit_check(&q(1, 2), &q(1, 3), 200).unwrap().max_error, 0.0);
        let r = heisenberg_orbit_check(&2f64.sqrt(), &3f64.sqrt(), 1000).unwrap();
        assert!(r.max_error <= 1e-9);
        assert_eq!(heisenberg_orbit_check(&0.0f64, &0.0, 50).unwrap().max_error, 0.0);
    }

    #[test]
    fn signed_generators_flip_coordinates() {
        let g = |a, b, s| (GenId { block: 0, a, b }, s);
        let b = MalcevBasis::new(2, 1, vec![g(0, 1, -1), g(1, 2, 1), g(0, 2, -1)]).unwrap();
        let m = heis(q(1, 2), q(1, 3), q(1, 5));
        let t = b.coords(&m).unwrap();
        assert_eq!(b.from_coords(&t).unwrap(), m);
        assert_eq!(t[0], q(-1, 2));
    }
}
