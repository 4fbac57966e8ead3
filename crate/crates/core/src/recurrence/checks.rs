use super::{RecurrenceError, RecurrenceSet};
use crate::bracket::BracketPolynomial;
use crate::diff::frac_sum_check;
use crate::interval::Interval;
use crate::scalar::{c_k, circle_norm, frac, Scalar};

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

fn binomial(n: u32, r: u32) -> i64 {
    (0..r as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

fn breach(msg: String) -> RecurrenceError {
    RecurrenceError::Precondition(msg)
}

/// `B_N(ν_1, …, ν_m; J_1, …, J_m)` over the components of `φ`, after checking
/// `δ ≤ c_k`, `ε ≥ kδ` and `J_i ⊆ I_{1/2−ε}` with `|J_i| ≤ δ`, where `k` is
/// the degree bound of `φ`.
pub fn strong_set_builder<S: Scalar>(
    phi: &BracketPolynomial<S>,
    delta: &S,
    eps: &S,
    js: &[Interval<S>],
    n: usize,
) -> Result<RecurrenceSet<S>, RecurrenceError> {
    let k = phi.degree_bound();
    if k == 0 {
        return Err(breach("φ must have degree at least 1".into()));
    }
    let ck: S = c_k(k);
    if *delta > ck {
        return Err(breach(format!("δ = {delta} exceeds c_{k} = {ck}")));
    }
    let kd = S::from_i64(k as i64) * delta.clone();
    if *eps < kd {
        return Err(breach(format!("ε = {eps} is below kδ = {kd}")));
    }
    let components = phi.components();
    if js.len() != components.len() {
        return Err(breach(format!("{} intervals for {} components", js.len(), components.len())));
    }
    let outer = Interval::centered(S::half() - eps.clone()).map_err(|e| RecurrenceError::Interval(e.to_string()))?;
    for (i, j) in js.iter().enumerate() {
        if j.width() > *delta {
            return Err(breach(format!("|J_{}| = {} exceeds δ = {delta}", i + 1, j.width())));
        }
        if !j.is_subset_of(&outer) {
            return Err(breach(format!("J_{} = {j} is not inside {outer}", i + 1)));
        }
    }
    Ok(RecurrenceSet::from_constraints(components.into_iter().zip(js.iter().cloned()).collect(), n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakRecurrenceReport {
    pub density: f64,
    pub holds: bool,
}

/// Density of `B_N(ν_1, …, ν_m; I_{1/2−ε}, …)` and whether it reaches `λ`.
pub fn weak_recurrence_check<S: Scalar>(
    nus: &[BracketPolynomial<S>],
    eps: &S,
    lambda: f64,
    n: usize,
) -> Result<WeakRecurrenceReport, RecurrenceError> {
    if !(*eps > S::zero() && *eps < S::half()) {
        return Err(breach(format!("need 0 < ε = {eps} < 1/2")));
    }
    let target = Interval::centered(S::half() - eps.clone()).map_err(|e| RecurrenceError::Interval(e.to_string()))?;
    let set = nus.iter().fold(RecurrenceSet::new(n), |s, nu| s.with(nu.clone(), target.clone()));
    let density = set.density();
    Ok(WeakRecurrenceReport { density, holds: density >= lambda })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport<S> {
    pub lhs: S,
    pub rhs: S,
    pub equal: bool,
}

/// Compares `(Δ_h)^k φ(n)` with `k!·φ(h)` for `k` the degree bound of `φ`,
/// after checking that `n, n+h, …, n+kh` all lie in `B(components; I_ε, …)`.
pub fn kth_derivative_identity_check<S: Scalar>(
    phi: &BracketPolynomial<S>,
    n: i64,
    h: i64,
    eps: &S,
) -> Result<IdentityReport<S>, RecurrenceError> {
    let k = phi.degree_bound();
    let target = Interval::centered(eps.clone()).map_err(|e| RecurrenceError::Interval(e.to_string()))?;
    let comps = phi.components();
    for j in 0..=k as i64 {
        let x = n + j * h;
        if let Some(bad) = comps.iter().position(|nu| !target.contains(&frac(&nu.eval(x)))) {
            return Err(breach(format!("n + {j}h = {x} leaves I_ε for component {}", bad + 1)));
        }
    }
    let mut lhs = S::zero();
    for j in 0..=k {
        let c = S::from_i64(binomial(k, j)) * phi.eval(n + j as i64 * h);
        lhs = if (k - j) % 2 == 0 { lhs + c } else { lhs - c };
    }
    let rhs = S::from_i64(factorial(k)) * phi.eval(h);
    let scale = 1f64.max(lhs.to_f64().abs()).max(rhs.to_f64().abs());
    let equal = if S::EXACT { lhs == rhs } else { (lhs.to_f64() - rhs.to_f64()).abs() <= 1e-9 * scale };
    Ok(IdentityReport { lhs, rhs, equal })
}

/// Measured widening at the dilated point `k!·h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApDilationReport {
    pub dilated: i64,
    /// `‖φ(k!h)‖ / δ`.
    pub phi_factor: f64,
    /// `‖ν_i(k!h)‖ / ε`.
    pub nu_factors: Vec<f64>,
    /// Window multiple for `φ` that the argument guarantees: `(k!)^{k−1}·2^{k−1}`.
    pub phi_reference: f64,
    /// Window multiple for each `ν_i`: `2·k!`.
    pub nu_reference: f64,
    /// Some `{ν_i(h)}` falls outside `I_{2ε}`.
    pub hypothesis_breach: bool,
    /// `{k!·ν_i(h)} = k!·{ν_i(h)}` held for every `i`, checked one addition
    /// at a time on a centred interval.
    pub sum_chain_ok: bool,
    pub holds: bool,
}

/// The dilation step for `k`-term progressions: given `n, n+h, …, n+kh` in
/// `B_{⌊N/k!⌋}(φ, ν_1, …; J, I_ε, …)`, measures where `φ(k!h)` and
/// `ν_i(k!h)` land. `c_hat` bounds `ε`; [`c_k`] is the usual choice.
#[allow(clippy::too_many_arguments)]
pub fn ap_dilation_check<S: Scalar>(
    phi: &BracketPolynomial<S>,
    nus: &[BracketPolynomial<S>],
    n: i64,
    h: i64,
    k: u32,
    j: &Interval<S>,
    delta: &S,
    eps: &S,
    n_max: usize,
    c_hat: &S,
) -> Result<ApDilationReport, RecurrenceError> {
    if *eps > *c_hat {
        return Err(breach(format!("ε = {eps} exceeds ĉ_k = {c_hat}")));
    }
    if j.width() > *delta {
        return Err(breach(format!("|J| = {} exceeds δ = {delta}", j.width())));
    }
    let kf = factorial(k);
    let limit = n_max as i64 / kf;
    let i_eps = Interval::centered(eps.clone()).map_err(|e| RecurrenceError::Interval(e.to_string()))?;
    for t in 0..=k as i64 {
        let x = n + t * h;
        if x < 1 || x > limit {
            return Err(breach(format!("n + {t}h = {x} is outside [1, {limit}]")));
        }
        if !j.contains(&frac(&phi.eval(x))) {
            return Err(breach(format!("{{φ({x})}} is outside J")));
        }
        if nus.iter().any(|nu| !i_eps.contains(&frac(&nu.eval(x)))) {
            return Err(breach(format!("some {{ν_i({x})}} is outside I_ε")));
        }
    }
    let dilated = kf * h;
    let two_eps = S::from_i64(2) * eps.clone();
    let mut hypothesis_breach = false;
    let mut sum_chain_ok = true;
    let mut nu_factors = Vec::with_capacity(nus.len());
    for nu in nus {
        let base = frac(&nu.eval(h));
        if circle_norm(&base) >= two_eps {
            hypothesis_breach = true;
        }
        let window = Interval::centered(S::half()).map_err(|e| RecurrenceError::Interval(e.to_string()))?;
        let mut acc = S::zero();
        for _ in 0..kf {
            sum_chain_ok &= frac_sum_check(&acc, &base, &window);
            acc = acc + base.clone();
        }
        nu_factors.push(circle_norm(&nu.eval(dilated)).to_f64() / eps.to_f64());
    }
    let phi_factor = circle_norm(&phi.eval(dilated)).to_f64() / delta.to_f64();
    let phi_reference = (kf as f64).powi(k as i32 - 1) * 2f64.powi(k as i32 - 1);
    let nu_reference = 2.0 * kf as f64;
    let holds = !hypothesis_breach
        && phi_factor < phi_reference + 1e-9
        && nu_factors.iter().all(|&f| f < nu_reference + 1e-9);
    Ok(ApDilationReport { dilated, phi_factor, nu_factors, phi_reference, nu_reference, hypothesis_breach, sum_chain_ok, holds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleDerivReport<S> {
    pub value: S,
    /// `value / (λn)`, absent when `λn = 0`.
    pub q: Option<f64>,
    pub q_is_integer: bool,
}

/// `Δ_{h_1..h_{k+1}}` of `φ(n) = λ·n·{ν(n)}` with `k + 1 = hs.len()`, after
/// checking `|J| ≤ 2^{−k}` and that the corners `ω ≠ 0` lie in
/// `B_N(ν; J) ∩ A`, with `A` a mask over `1..=N`.
pub fn simple_deriv_check<S: Scalar>(
    lambda: &S,
    nu: &BracketPolynomial<S>,
    a: &[bool],
    j: &Interval<S>,
    n: i64,
    hs: &[i64],
) -> Result<SimpleDerivReport<S>, RecurrenceError> {
    if hs.is_empty() {
        return Err(breach("need at least one step".into()));
    }
    let k = hs.len() as i32 - 1;
    let cap = S::one() / S::from_i64(1i64 << k);
    if j.width() > cap {
        return Err(breach(format!("|J| = {} exceeds 2^-{k}", j.width())));
    }
    let phi = |x: i64| lambda.clone() * S::from_i64(x) * frac(&nu.eval(x));
    let mut value = S::zero();
    for w in 0..1usize << hs.len() {
        let s: i64 = (0..hs.len()).filter(|i| w >> i & 1 == 1).map(|i| hs[i]).sum();
        let x = n + s;
        if w != 0 {
            let in_a = x >= 1 && x <= a.len() as i64 && a[(x - 1) as usize];
            if !in_a || !j.contains(&frac(&nu.eval(x))) {
                return Err(breach(format!("corner {x} is outside B_N(ν; J) ∩ A")));
            }
        }
        let v = phi(x);
        value = if (hs.len() - w.count_ones() as usize) % 2 == 0 { value + v } else { value - v };
    }
    let scale = lambda.clone() * S::from_i64(n);
    if scale.is_zero() {
        return Ok(SimpleDerivReport { value, q: None, q_is_integer: false });
    }
    let q = (value.clone() / scale).to_f64();
    Ok(SimpleDerivReport { value, q: Some(q), q_is_integer: (q - q.round()).abs() <= 1e-8 })
}

/// Progressions `n, n+h, …, n+kh` inside a mask over `1..=N`, by `h`
/// ascending and then `n` ascending, at most `limit` of them and at most one
/// per `h`.
pub fn find_k_aps(mask: &[bool], k: u32, limit: usize) -> Vec<(i64, i64)> {
    let n_max = mask.len() as i64;
    let inside = |x: i64| x >= 1 && x <= n_max && mask[(x - 1) as usize];
    let mut out = Vec::new();
    for h in 1..=n_max {
        if out.len() >= limit || k as i64 * h >= n_max {
            break;
        }
        if let Some(n) = (1..=n_max - k as i64 * h).find(|&n| (0..=k as i64).all(|t| inside(n + t * h))) {
            out.push((n, h));
        }
    }
    out
}
