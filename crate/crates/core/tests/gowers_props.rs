use bracketlab::gowers::{
    box_count, default_ntilde, gowers_norm_group, gowers_norm_interval, indicator_corner_count, GowersOptions, Method,
};
use num_complex::Complex;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn disc_fn(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Complex<f64>>> {
    prop::collection::vec((0.0f64..=1.0, 0.0f64..TAU), len)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex::from_polar(r, t)).collect())
}

fn group_norm(f: &[Complex<f64>], k: u32) -> f64 {
    gowers_norm_group(f, k, &GowersOptions::with_method(Method::Recursive)).unwrap().norm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_increase_with_k(f in disc_fn(4..=24)) {
        let (u2, u3, u4) = (group_norm(&f, 2), group_norm(&f, 3), group_norm(&f, 4));
        prop_assert!(u2 <= u3 + 1e-12);
        prop_assert!(u3 <= u4 + 1e-12);
    }

    #[test]
    fn polynomial_phase_modulation_is_invisible(f in disc_fn(5..=20), k in 2u32..=4, coeffs in prop::collection::vec(-20i64..=20, 4)) {
        // e(P(x)/N) with deg P < k is well defined on Z/N.
        let n = f.len();
        let p = |x: usize| -> f64 {
            let x = x as i64;
            let v: i64 = coeffs.iter().take(k as usize).rev().fold(0, |acc, c| (acc * x + c).rem_euclid(n as i64));
            v as f64 / n as f64
        };
        let g: Vec<Complex<f64>> = f.iter().enumerate().map(|(x, v)| v * Complex::from_polar(1.0, TAU * p(x))).collect();
        prop_assert!((group_norm(&f, k) - group_norm(&g, k)).abs() <= 1e-12);
    }

    #[test]
    fn interval_norm_ignores_the_ambient_group(f in disc_fn(1..=12), k in 2u32..=3, extra in 1usize..=3) {
        prop_assume!(f.iter().any(|v| v.norm() > 1e-3));
        let base = default_ntilde(f.len(), k);
        let opts = GowersOptions::default();
        let a = gowers_norm_interval(&f, k, Some(base), &opts).unwrap().norm;
        let b = gowers_norm_interval(&f, k, Some(base << extra), &opts).unwrap().norm;
        let c = gowers_norm_interval(&f, k, Some(base + 7 * extra), &opts).unwrap().norm;
        prop_assert!((a - b).abs() <= 1e-9 && (a - c).abs() <= 1e-9, "{a} {b} {c}");
    }

    #[test]
    fn box_count_matches_enumeration(b in prop::collection::vec(any::<bool>(), 1..=9), j in 0u32..=2) {
        let nn = b.len() as i64;
        let inside = |x: i64| x >= 1 && x <= nn && b[(x - 1) as usize];
        let side = (2 * nn + 1) as usize;
        let mut brute = 0u128;
        for n in 1..=nn {
            for code in 0..side.pow(j) {
                let hs: Vec<i64> = (0..j).map(|i| (code / side.pow(i)) as i64 % side as i64 - nn).collect();
                let corners_in = (0..1usize << j)
                    .all(|w| inside(n + (0..j as usize).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum::<i64>()));
                brute += corners_in as u128;
            }
        }
        prop_assert_eq!(box_count(&b, j, u64::MAX).unwrap(), brute);
    }

    #[test]
    fn box_counts_satisfy_the_jensen_chain(b in prop::collection::vec(any::<bool>(), 1..=24)) {
        let n = b.len() as u128;
        for j in 1..=3u32 {
            let cur = box_count(&b, j, u64::MAX).unwrap();
            let prev = box_count(&b, j - 1, u64::MAX).unwrap();
            prop_assert!(cur * (2 * n + 1).pow(j - 1) >= prev * prev);
        }
    }
}

#[test]
fn indicator_normalizer_is_positive() {
    for k in 2..=5 {
        for n in 1..=64 {
            assert!(indicator_corner_count(n, k) >= n as u128, "k = {k}, N = {n}");
        }
    }
}
