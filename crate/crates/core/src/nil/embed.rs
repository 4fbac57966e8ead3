use super::malcev::NilError;
use super::matrix::Unitriangular;
use crate::scalar::Scalar;

/// `ι_{p,q}: T_p^r → T_q^r`, placing entry `(i, j)` at `(i·s, j·s)` with
/// stride `s = q / p`. Other off-diagonal entries are zero.
pub fn embed<S: Scalar>(p: usize, q: usize, g: &Unitriangular<S>) -> Result<Unitriangular<S>, NilError> {
    if p == 0 || q < p || q % p != 0 {
        return Err(NilError::NotMultiple { p, q });
    }
    if g.p() != p {
        return Err(NilError::Shape(format!("element lives in T_{}, not T_{p}", g.p())));
    }
    let s = q / p;
    let mut out = Unitriangular::identity(q, g.r());
    for l in 0..g.r() {
        for i in 0..=p {
            for j in i + 1..=p {
                out.set(l, i * s, j * s, g.get(l, i, j).clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn heisenberg_into_t4() {
        let (x, y, z) = (q(1, 2), q(-3, 1), q(5, 7));
        let g = Unitriangular::from_entries(2, 1, &[(0, 0, 1, x.clone()), (0, 1, 2, y.clone()), (0, 0, 2, z.clone())]);
        let e = embed(2, 4, &g).unwrap();
        let want = Unitriangular::from_entries(4, 1, &[(0, 0, 2, x), (0, 2, 4, y), (0, 0, 4, z)]);
        assert_eq!(e, want);
        assert_eq!(e.to_string(), "[1, 0, 1/2, 0, 5/7; 0, 1, 0, 0, 0; 0, 0, 1, 0, -3; 0, 0, 0, 1, 0; 0, 0, 0, 0, 1]");
    }

    #[test]
    fn same_size_is_identity_map() {
        let g = Unitriangular::from_entries(3, 2, &[(1, 0, 3, 2.5f64), (0, 1, 2, -1.0)]);
        assert_eq!(embed(3, 3, &g).unwrap(), g);
        assert_eq!(embed(2, 5, &Unitriangular::<f64>::identity(2, 1)), Err(NilError::NotMultiple { p: 2, q: 5 }));
    }

    #[test]
    fn homomorphism_and_integrality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let random = |rng: &mut ChaCha8Rng| {
            let entries: Vec<_> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| (0, i, j, q(rng.gen_range(-20..=20), rng.gen_range(1..=6))))
                .collect();
            Unitriangular::from_entries(2, 1, &entries)
        };
        for _ in 0..100 {
            let (g, h) = (random(&mut rng), random(&mut rng));
            assert_eq!(embed(2, 6, &g.mul(&h)).unwrap(), embed(2, 6, &g).unwrap().mul(&embed(2, 6, &h).unwrap()));
        }
        let int = Unitriangular::from_entries(2, 1, &[(0, 0, 1, q(3, 1)), (0, 0, 2, q(-4, 1))]);
        assert!(embed(2, 4, &int).unwrap().is_integral());
    }
}
