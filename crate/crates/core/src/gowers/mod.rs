//! Gowers uniformity norms on `ℤ/Ñℤ` and on `[N]`.
//!
//! Three evaluators are provided. The direct one is the definitional
//! average and serves as the oracle. The recursive one peels difference
//! parameters, `‖f‖^{2^k} = E_h ‖Δ*_h f‖_{U^{k−1}}^{2^{k−1}}`, and finishes
//! with the fourth moment of the discrete Fourier transform. The Monte Carlo
//! one samples the peeled parameters and is meant for `k = 5`.

mod boxes;
mod direct;
mod fourier;
mod montecarlo;

use num_complex::Complex;
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use boxes::{box_count, masked_correlation, MaskedCorrelation};
pub use direct::{direct_power, gcs_check, gowers_inner_product, GcsReport};
pub use fourier::{recursive_power, u2_power};
pub use montecarlo::{mc_power, McEstimate, Z99};

/// Float types the engine runs on.
pub trait GowersFloat: rustfft::FftNum + Float {}

impl<T: rustfft::FftNum + Float> GowersFloat for T {}

/// Largest `k` the engine accepts.
pub const MAX_K: u32 = 5;

/// Smallest sample count a Monte Carlo estimate may be reported with.
pub const MIN_MC_SAMPLES: usize = 1_000;

/// Sample count used when `Auto` resolves to Monte Carlo.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GowersError {
    #[error("k = {0} is outside the supported range 2..=5")]
    BadK(u32),
    #[error("Ñ = {ntilde} is below 2^k·N = {min}")]
    NtildeTooSmall { ntilde: usize, min: usize },
    #[error("estimated cost {cost} exceeds the budget {budget}")]
    BudgetExceeded { cost: u128, budget: u64 },
    #[error("Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("Monte Carlo evaluation needs k ≥ 3")]
    McNeedsK3,
    #[error("the 2^k-fold average is not a non-negative real: {re} + {im}i")]
    NotReal { re: f64, im: f64 },
    #[error("family has {got} members, expected 2^k = {expected}")]
    FamilySize { got: usize, expected: usize },
    #[error("family members have different lengths")]
    MismatchedLength,
    #[error("empty input")]
    Empty,
}

/// Requested evaluation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Recursive for `k ≤ 4`, Monte Carlo with the default sample count for
    /// `k = 5`.
    Auto,
    Direct,
    Recursive,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Strategy that actually ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodUsed {
    Direct,
    RecursiveFft,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug)]
pub struct GowersOptions {
    pub method: Method,
    /// Upper bound on the estimated number of elementary operations.
    pub budget: Option<u64>,
}

impl Default for GowersOptions {
    fn default() -> Self {
        Self { method: Method::Auto, budget: None }
    }
}

impl GowersOptions {
    pub fn with_method(method: Method) -> Self {
        Self { method, budget: None }
    }
}

/// `‖f‖_{U^k}` together with its `2^k`-th power.
#[derive(Clone, Copy, Debug)]
pub struct GroupNorm<F> {
    pub power: F,
    pub norm: F,
    pub method: MethodUsed,
    /// Standard error of `norm` for Monte Carlo runs.
    pub stderr: Option<F>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Result of an interval-norm evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GowersReport {
    pub k: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Ntilde")]
    pub ntilde: usize,
    pub norm: f64,
    pub normalizer: f64,
    pub method: MethodUsed,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mc_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mc_lower_99: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl GowersReport {
    /// The value acceptance checks consume: the 99% lower confidence bound
    /// for Monte Carlo runs, the norm otherwise.
    pub fn conservative_norm(&self) -> f64 {
        self.mc_lower_99.unwrap_or(self.norm)
    }
}

fn check_k(k: u32) -> Result<(), GowersError> {
    if (2..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(GowersError::BadK(k))
    }
}

fn imag_tolerance<F: GowersFloat>() -> F {
    F::from(1e-12).unwrap().max(F::epsilon() * F::from(1e3).unwrap())
}

/// Turns a complex `2^k`-fold average into its non-negative real part,
/// rejecting residues above tolerance.
pub(crate) fn real_power<F: GowersFloat>(z: Complex<F>) -> Result<F, GowersError> {
    let tol = imag_tolerance::<F>();
    let scale = F::one().max(z.re.abs());
    if z.im.abs() > tol * scale || z.re < -tol * scale {
        return Err(GowersError::NotReal { re: z.re.to_f64().unwrap(), im: z.im.to_f64().unwrap() });
    }
    Ok(z.re.max(F::zero()))
}

/// The `h` with `f(x) ≠ 0` and `f(x + h) ≠ 0` for some `x`, ascending in
/// `0..Ñ`.
pub fn difference_set<F: GowersFloat>(f: &[Complex<F>]) -> Vec<usize> {
    let m = f.len();
    let supp: Vec<usize> = (0..m).filter(|&x| f[x] != Complex::new(F::zero(), F::zero())).collect();
    let mut hit = vec![false; m];
    for &x in &supp {
        for &y in &supp {
            hit[(y + m - x) % m] = true;
        }
    }
    (0..m).filter(|&h| hit[h]).collect()
}

/// `Δ*_h f` on `ℤ/Ñℤ`.
pub fn mult_delta_cyclic<F: GowersFloat>(f: &[Complex<F>], h: usize) -> Vec<Complex<F>> {
    let m = f.len();
    (0..m).map(|x| f[(x + h) % m] * f[x].conj()).collect()
}

fn root<F: GowersFloat>(power: F, k: u32) -> F {
    power.powf(F::one() / F::from(1u64 << k).unwrap())
}

/// `‖f‖_{U^k(ℤ/Ñℤ)}` with `Ñ = f.len()`.
pub fn gowers_norm_group<F: GowersFloat>(
    f: &[Complex<F>],
    k: u32,
    opts: &GowersOptions,
) -> Result<GroupNorm<F>, GowersError> {
    check_k(k)?;
    if f.is_empty() {
        return Err(GowersError::Empty);
    }
    let m = f.len() as u128;
    let method = match opts.method {
        Method::Auto if k == MAX_K => Method::MonteCarlo { samples: DEFAULT_MC_SAMPLES, seed: 0 },
        Method::Auto => Method::Recursive,
        other => other,
    };
    let check_budget = |cost: u128| match opts.budget {
        Some(b) if cost > b as u128 => Err(GowersError::BudgetExceeded { cost, budget: b }),
        _ => Ok(()),
    };
    match method {
        Method::Direct => {
            check_budget(m.pow(k + 1) << k)?;
            let power = direct_power(f, k)?;
            Ok(GroupNorm { power, norm: root(power, k), method: MethodUsed::Direct, stderr: None, samples: None, seed: None })
        }
        Method::Recursive | Method::Auto => {
            let d = difference_set(f).len() as u128;
            let log = (128 - m.leading_zeros()) as u128;
            check_budget(d.pow(k - 2) * m * log.max(1))?;
            let power = recursive_power(f, k);
            Ok(GroupNorm {
                power,
                norm: root(power, k),
                method: MethodUsed::RecursiveFft,
                stderr: None,
                samples: None,
                seed: None,
            })
        }
        Method::MonteCarlo { samples, seed } => {
            if k < 3 {
                return Err(GowersError::McNeedsK3);
            }
            if samples < MIN_MC_SAMPLES {
                return Err(GowersError::TooFewSamples(samples));
            }
            let log = (128 - m.leading_zeros()) as u128;
            check_budget(samples as u128 * m * log.max(1))?;
            let est = mc_power(f, k, samples, seed);
            let norm = root(est.mean, k);
            let stderr = if est.mean > F::zero() {
                norm / F::from(1u64 << k).unwrap() * est.stderr / est.mean
            } else {
                F::zero()
            };
            Ok(GroupNorm {
                power: est.mean,
                norm,
                method: MethodUsed::MonteCarlo,
                stderr: Some(stderr),
                samples: Some(samples),
                seed: Some(seed),
            })
        }
    }
}

/// Smallest power of two that is at least `2^k · N`.
pub fn default_ntilde(n: usize, k: u32) -> usize {
    (n << k).next_power_of_two()
}

/// Zero-extension of `f : [N] → ℂ` to `ℤ/Ñℤ`, with `x ∈ [N]` stored at
/// index `x mod Ñ`.
pub fn zero_extend<F: GowersFloat>(f: &[Complex<F>], ntilde: usize) -> Vec<Complex<F>> {
    let mut out = vec![Complex::new(F::zero(), F::zero()); ntilde];
    for (i, v) in f.iter().enumerate() {
        out[(i + 1) % ntilde] = *v;
    }
    out
}

/// `‖1_{[N]}‖_{U^k(ℤ/Ñℤ)}^{2^k} · Ñ^{k+1}`, the number of `(x, h)` with
/// every corner `x + ω·h` in `[N]`, which is `Σ_{d ∈ ℤ^k} max(0, N − ‖d‖₁)`
/// once `Ñ ≥ (k+1)N`.
pub fn indicator_corner_count(n: usize, k: u32) -> u128 {
    // ways[s] = #{d ∈ ℤ^j : ‖d‖₁ = s} for s < N, built one coordinate at a time.
    let mut ways = vec![0u128; n];
    if n == 0 {
        return 0;
    }
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; n];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            next[s] += w;
            for t in 1..n - s {
                next[s + t] += 2 * w;
            }
        }
        ways = next;
    }
    ways.iter().enumerate().map(|(s, &w)| w * (n - s) as u128).sum()
}

/// `‖1_{[N]}‖_{U^k(ℤ/Ñℤ)}` from the exact corner count.
pub fn indicator_norm_exact(n: usize, k: u32, ntilde: usize) -> f64 {
    let count = indicator_corner_count(n, k) as f64;
    let power = count / (ntilde as f64).powi(k as i32 + 1);
    power.powf(1.0 / (1u64 << k) as f64)
}

/// `‖f‖_{U^k[N]}` for `f` given on `n = 1..=N`.
///
/// The normalizer is evaluated with the same `Ñ` and the same method, except
/// that Monte Carlo runs use the exact corner count.
pub fn gowers_norm_interval<F: GowersFloat>(
    f: &[Complex<F>],
    k: u32,
    ntilde: Option<usize>,
    opts: &GowersOptions,
) -> Result<GowersReport, GowersError> {
    check_k(k)?;
    let n = f.len();
    if n == 0 {
        return Err(GowersError::Empty);
    }
    let min = n << k;
    let ntilde = ntilde.unwrap_or_else(|| default_ntilde(n, k));
    if ntilde < min {
        return Err(GowersError::NtildeTooSmall { ntilde, min });
    }
    let padded = zero_extend(f, ntilde);
    let num = gowers_norm_group(&padded, k, opts)?;
    let normalizer = match num.method {
        MethodUsed::MonteCarlo => indicator_norm_exact(n, k, ntilde),
        MethodUsed::Direct | MethodUsed::RecursiveFft => {
            let ones = vec![Complex::new(F::one(), F::zero()); n];
            let ind = zero_extend(&ones, ntilde);
            let opts = GowersOptions { method: if num.method == MethodUsed::Direct { Method::Direct } else { Method::Recursive }, ..*opts };
            gowers_norm_group(&ind, k, &opts)?.norm.to_f64().unwrap()
        }
    };
    let norm = num.norm.to_f64().unwrap() / normalizer;
    let mc_stderr = num.stderr.map(|s| s.to_f64().unwrap() / normalizer);
    Ok(GowersReport {
        k,
        n,
        ntilde,
        norm,
        normalizer,
        method: num.method,
        mc_stderr,
        mc_lower_99: mc_stderr.map(|s| norm - Z99 * s),
        samples: num.samples,
        seed: num.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::e;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    /// Brute-force corner count for the indicator of `[N]` on `ℤ/Ñℤ`.
    fn corner_count_oracle(n: usize, k: u32, ntilde: usize) -> u128 {
        let inside = |x: usize| (1..=n).contains(&x);
        let mut count = 0u128;
        let total = ntilde.pow(k);
        for x in 0..ntilde {
            for code in 0..total {
                let mut hs = Vec::new();
                let mut c = code;
                for _ in 0..k {
                    hs.push(c % ntilde);
                    c /= ntilde;
                }
                let ok = (0..1usize << k).all(|w| {
                    let s: usize = (0..k as usize).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
                    inside((x + s) % ntilde)
                });
                if ok {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn corner_count_matches_enumeration() {
        for (n, k) in [(3usize, 2u32), (4, 2), (2, 3), (3, 3)] {
            let ntilde = default_ntilde(n, k);
            assert_eq!(indicator_corner_count(n, k), corner_count_oracle(n, k, ntilde), "n={n} k={k}");
        }
        assert_eq!(indicator_corner_count(5, 1), 25);
    }

    #[test]
    fn constant_one_has_norm_one() {
        let f = vec![c(1.0); 4];
        let r = gowers_norm_group(&f, 2, &GowersOptions::with_method(Method::Direct)).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_at_zero_on_z4() {
        let f = vec![c(1.0), c(0.0), c(0.0), c(0.0)];
        let expected = (1.0f64 / 64.0).powf(0.25);
        for m in [Method::Direct, Method::Recursive] {
            let r = gowers_norm_group(&f, 2, &GowersOptions::with_method(m)).unwrap();
            assert!((r.norm - expected).abs() < 1e-12, "{m:?}");
        }
        assert!((expected - 0.35355).abs() < 1e-5);
    }

    #[test]
    fn quadratic_phase_on_z5_is_u3_uniform_one() {
        let f: Vec<_> = (0..5).map(|x| e((x * x) as f64 / 5.0)).collect();
        let r = gowers_norm_group(&f, 3, &GowersOptions::with_method(Method::Direct)).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indicator_interval_norm_is_one() {
        let f = vec![c(1.0); 12];
        for k in [2, 3] {
            let r = gowers_norm_interval(&f, k, None, &GowersOptions::default()).unwrap();
            assert!((r.norm - 1.0).abs() < 1e-12);
            let exact = indicator_norm_exact(12, k, r.ntilde);
            assert!((r.normalizer - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = vec![c(1.0); 8];
        assert_eq!(gowers_norm_group(&f, 1, &GowersOptions::default()).unwrap_err(), GowersError::BadK(1));
        assert!(matches!(
            gowers_norm_interval(&f, 2, Some(16), &GowersOptions::default()),
            Err(GowersError::NtildeTooSmall { .. })
        ));
        let mc = GowersOptions::with_method(Method::MonteCarlo { samples: 10, seed: 1 });
        assert_eq!(gowers_norm_group(&f, 3, &mc).unwrap_err(), GowersError::TooFewSamples(10));
        let tight = GowersOptions { method: Method::Direct, budget: Some(100) };
        assert!(matches!(gowers_norm_group(&f, 2, &tight), Err(GowersError::BudgetExceeded { .. })));
    }

    #[test]
    fn report_serializes_with_expected_keys() {
        let f = vec![c(1.0); 4];
        let r = gowers_norm_interval(&f, 2, None, &GowersOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["k", "N", "Ntilde", "norm", "normalizer", "method"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["method"], "recursive-fft");
        assert!(v.get("mc_stderr").is_none());
    }

    #[test]
    fn single_precision_engine_runs() {
        let f: Vec<Complex<f32>> = (0..16).map(|x| e((x * x) as f32 / 16.0)).collect();
        let r = gowers_norm_group(&f, 2, &GowersOptions::default()).unwrap();
        let d = gowers_norm_group(&f, 2, &GowersOptions::with_method(Method::Direct)).unwrap();
        assert!((r.norm - d.norm).abs() < 1e-4);
    }
}
