use serde_json::{json, Value};

use super::malcev::NilError;
use super::matrix::Unitriangular;
use super::poly::MultiPoly;
use crate::scalar::{parse_rational, Rational, Scalar};

/// Upper bound on the derivative chain before giving up.
pub const DEPTH_CAP: u32 = 64;

/// A map `n ↦ ρ(n) ∈ T_p^r` whose entries are polynomials in `n` and, after
/// differentiation, in the difference variables `h_1, h_2, …`.
///
/// Blocks are stored row-major with all `(p+1)^2` slots; indices are
/// zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMapping<S> {
    p: usize,
    blocks: Vec<Vec<MultiPoly<S>>>,
}

impl<S: Scalar> PolynomialMapping<S> {
    pub fn identity(p: usize, r: usize) -> Self {
        let d = p + 1;
        let block: Vec<MultiPoly<S>> = (0..d * d)
            .map(|k| if k / d == k % d { MultiPoly::constant(S::one()) } else { MultiPoly::zero() })
            .collect();
        Self { p, blocks: vec![block; r] }
    }

    /// Sets entry `(l, i, j)` to `Σ_t coeffs[t] n^t` for each listed entry.
    pub fn from_entries(p: usize, r: usize, entries: &[(usize, usize, usize, Vec<S>)]) -> Result<Self, NilError> {
        let mut m = Self::identity(p, r);
        for (l, i, j, c) in entries {
            if *l >= r || i >= j || *j > p {
                return Err(NilError::Shape(format!("entry ({l}, {i}, {j}) is not above the diagonal of T_{p}^{r}")));
            }
            m.set(*l, *i, *j, MultiPoly::univariate(c));
        }
        Ok(m)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn entry(&self, l: usize, i: usize, j: usize) -> &MultiPoly<S> {
        &self.blocks[l][i * (self.p + 1) + j]
    }

    pub fn set(&mut self, l: usize, i: usize, j: usize, poly: MultiPoly<S>) {
        let d = self.p + 1;
        self.blocks[l][i * d + j] = poly;
    }

    fn above_diagonal(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let d = self.p + 1;
        (0..self.r()).flat_map(move |l| (0..d).flat_map(move |i| (i + 1..d).map(move |j| (l, i, j))))
    }

    /// Every entry has zero constant term, so `ρ(0)` is the identity.
    pub fn is_constant_free(&self) -> bool {
        self.above_diagonal().all(|(l, i, j)| self.entry(l, i, j).constant_term().is_zero())
    }

    /// Largest degree in `n` over all entries.
    pub fn degree(&self) -> u32 {
        self.above_diagonal().map(|(l, i, j)| self.entry(l, i, j).degree_in(0)).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.above_diagonal().all(|(l, i, j)| self.entry(l, i, j).is_zero())
    }

    /// Values of all variables: `xs[0] = n`, `xs[v] = h_v`.
    pub fn eval_at(&self, xs: &[S]) -> Unitriangular<S> {
        let mut g = Unitriangular::identity(self.p, self.r());
        for (l, i, j) in self.above_diagonal() {
            g.set(l, i, j, self.entry(l, i, j).eval(xs));
        }
        g
    }

    pub fn eval(&self, n: i64) -> Unitriangular<S> {
        self.eval_at(&[S::from_i64(n)])
    }

    /// Pointwise product `n ↦ ρ(n)σ(n)`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.r()), (other.p, other.r()), "shape mismatch");
        let d = self.p + 1;
        let mut out = Self::identity(self.p, self.r());
        for (l, i, j) in self.above_diagonal() {
            let mut acc = MultiPoly::zero();
            for t in i..=j {
                acc = acc.add(&self.entry(l, i, t).mul(other.entry(l, t, j)));
            }
            out.blocks[l][i * d + j] = acc;
        }
        out
    }

    /// Symbolic inverse: `(ρ^{-1})_{ij} = −ρ_{ij} − Σ_{i<t<j} ρ_{it} (ρ^{-1})_{tj}`.
    pub fn inverse(&self) -> Self {
        let d = self.p + 1;
        let mut inv = Self::identity(self.p, self.r());
        for l in 0..self.r() {
            for j in 0..d {
                for i in (0..j).rev() {
                    let mut acc = self.entry(l, i, j).clone();
                    for t in i + 1..j {
                        acc = acc.add(&self.entry(l, i, t).mul(inv.entry(l, t, j)));
                    }
                    inv.blocks[l][i * d + j] = acc.neg();
                }
            }
        }
        inv
    }

    fn shift(&self, v: usize) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|e| e.shift(v)).collect()).collect();
        Self { p: self.p, blocks }
    }

    /// `∂_{h_v} ρ(n) = ρ(n + h_v) ρ(n)^{-1}` with `h_v` symbolic.
    pub fn derivative(&self, v: usize) -> Self {
        self.shift(v).mul(&self.inverse())
    }

    /// `∂_{h_{vs[k−1]}} ⋯ ∂_{h_{vs[0]}} ρ`.
    pub fn iterated_derivative(&self, vs: &[usize]) -> Self {
        vs.iter().fold(self.clone(), |acc, &v| acc.derivative(v))
    }

    /// Smallest `d` such that every `(d+1)`-fold derivative is the identity.
    pub fn triviality_depth(&self) -> Result<u32, NilError> {
        let mut cur = self.clone();
        for d in 0..DEPTH_CAP {
            cur = cur.derivative(d as usize + 1);
            if cur.is_identity() {
                return Ok(d);
            }
        }
        Err(NilError::IterationCap(DEPTH_CAP))
    }

    /// Entries at distance at most `l` from the diagonal vanish identically,
    /// i.e. the mapping takes values in `T_p(l)`.
    pub fn in_layer(&self, l: usize) -> bool {
        self.above_diagonal().filter(|&(_, i, j)| j - i <= l).all(|(b, i, j)| self.entry(b, i, j).is_zero())
    }

    /// `{"p", "r", "entries": [{"l", "i", "j", "coeffs"}]}` with coefficients
    /// as strings. Only univariate mappings are meaningful here.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .above_diagonal()
            .filter(|&(l, i, j)| !self.entry(l, i, j).is_zero())
            .map(|(l, i, j)| {
                let e = self.entry(l, i, j);
                let deg = e.degree_in(0) as usize;
                let mut coeffs = vec![S::zero(); deg + 1];
                for (k, c) in e.terms() {
                    coeffs[k.first().copied().unwrap_or(0) as usize] = c.clone();
                }
                json!({"l": l, "i": i, "j": j, "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()})
            })
            .collect();
        json!({"schema_version": 1, "p": self.p, "r": self.r(), "entries": entries})
    }

    /// Inverse of [`to_json`](Self::to_json). Coefficients may be JSON numbers
    /// or strings holding decimals or `p/q`.
    pub fn from_json(v: &Value) -> Result<Self, NilError> {
        let bad = |m: &str| NilError::Shape(m.to_string());
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing integer `p`"))? as usize;
        let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| bad("missing integer `r`"))? as usize;
        if p == 0 || r == 0 {
            return Err(bad("`p` and `r` must be positive"));
        }
        let list = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing array `entries`"))?;
        let mut entries = Vec::with_capacity(list.len());
        for e in list {
            let idx = |k: &str| e.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(&format!("entry needs integer `{k}`")));
            let coeffs = e.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("entry needs array `coeffs`"))?;
            let cs = coeffs
                .iter()
                .map(|c| parse_coeff::<S>(c).ok_or_else(|| bad(&format!("cannot read coefficient {c}"))))
                .collect::<Result<Vec<S>, _>>()?;
            entries.push((idx("l")?, idx("i")?, idx("j")?, cs));
        }
        Self::from_entries(p, r, &entries)
    }
}

fn parse_coeff<S: Scalar>(c: &Value) -> Option<S> {
    match c {
        Value::String(s) => parse_rational(s).map(|q: Rational| S::from_ratio(&q)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(S::from_i64(i))
            } else {
                let text = n.to_string();
                parse_rational(&text).map(|q| S::from_ratio(&q))
            }
        }
        _ => None,
    }
}

/// A constant-free mapping into `T_p^r` with every entry of degree `k` in
/// `n` and fixed, unrelated rational coefficients.
pub fn generic_mapping(p: usize, r: usize, k: u32) -> PolynomialMapping<Rational> {
    let mut m = PolynomialMapping::identity(p, r);
    let mut seed = 1i64;
    for l in 0..r {
        for i in 0..=p {
            for j in i + 1..=p {
                let mut coeffs = vec![Rational::from_integer(0.into())];
                for _ in 1..=k {
                    seed = (seed * 37 + 11) % 101;
                    coeffs.push(Rational::new((seed + 1).into(), (seed % 7 + 2).into()));
                }
                if k == 0 {
                    seed = (seed * 37 + 11) % 101;
                    coeffs[0] = Rational::new((seed + 1).into(), 3.into());
                }
                m.set(l, i, j, MultiPoly::univariate(&coeffs));
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn z() -> Rational {
        q(0, 1)
    }

    #[test]
    fn heisenberg_inverse_closed_form() {
        let (a, b, c) = (q(2, 3), q(-1, 5), q(7, 2));
        let rho = PolynomialMapping::from_entries(
            2,
            1,
            &[(0, 0, 1, vec![z(), a.clone()]), (0, 1, 2, vec![z(), b.clone()]), (0, 0, 2, vec![z(), z(), c.clone()])],
        )
        .unwrap();
        let inv = rho.inverse();
        assert_eq!(inv.entry(0, 0, 1), &MultiPoly::univariate(&[z(), -a.clone()]));
        assert_eq!(inv.entry(0, 1, 2), &MultiPoly::univariate(&[z(), -b.clone()]));
        assert_eq!(inv.entry(0, 0, 2), &MultiPoly::univariate(&[z(), z(), a * b - c]));
        assert!(rho.mul(&inv).is_identity());
    }

    #[test]
    fn evaluation() {
        let rho = PolynomialMapping::from_entries(1, 1, &[(0, 0, 1, vec![q(0, 1), q(2, 1), q(3, 1)])]).unwrap();
        assert!(rho.is_constant_free());
        assert!(rho.eval(0).is_identity());
        assert_eq!(rho.eval(1).get(0, 0, 1), &q(5, 1));
        assert!(PolynomialMapping::<Rational>::identity(2, 2).inverse().is_identity());
    }

    #[test]
    fn depths() {
        let lin = PolynomialMapping::from_entries(1, 1, &[(0, 0, 1, vec![z(), q(3, 1)])]).unwrap();
        assert_eq!(lin.triviality_depth().unwrap(), 1);
        let d1 = lin.derivative(1);
        assert_eq!(d1.entry(0, 0, 1), &MultiPoly::monomial(vec![0, 1], q(3, 1)));
        let constant = PolynomialMapping::from_entries(1, 1, &[(0, 0, 1, vec![q(4, 1)])]).unwrap();
        assert_eq!(constant.triviality_depth().unwrap(), 0);
        let sq = PolynomialMapping::from_entries(1, 1, &[(0, 0, 1, vec![z(), z(), q(1, 2)])]).unwrap();
        let d2 = sq.iterated_derivative(&[1, 2]);
        assert_eq!(d2.entry(0, 0, 1), &MultiPoly::monomial(vec![0, 1, 1], q(1, 1)));
        assert_eq!(sq.triviality_depth().unwrap(), 2);
        assert_eq!(generic_mapping(1, 1, 2).triviality_depth().unwrap(), 2);
        assert_eq!(generic_mapping(2, 1, 0).triviality_depth().unwrap(), 0);
    }

    #[test]
    fn json_round_trip() {
        let rho = generic_mapping(2, 2, 2);
        let back = PolynomialMapping::<Rational>::from_json(&rho.to_json()).unwrap();
        assert_eq!(back, rho);
        let v: Value = serde_json::from_str(r#"{"p":1,"r":1,"entries":[{"l":0,"i":0,"j":1,"coeffs":[0, 0.5, "1/3"]}]}"#).unwrap();
        let m = PolynomialMapping::<Rational>::from_json(&v).unwrap();
        assert_eq!(m.entry(0, 0, 1), &MultiPoly::univariate(&[z(), q(1, 2), q(1, 3)]));
        let bad: Value = serde_json::from_str(r#"{"p":1,"r":1,"entries":[{"l":0,"i":1,"j":0,"coeffs":[1]}]}"#).unwrap();
        assert!(PolynomialMapping::<Rational>::from_json(&bad).is_err());
    }
}
