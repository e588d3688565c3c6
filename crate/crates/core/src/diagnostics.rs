//! Closed-form certificates for `l1` Fourier imputation.
//!
//! # Concentration
//!
//! A spectrum `F` is `eps`-concentrated on `S` when
//! `||F||_{L1(S^c)} <= (eps / N) ||F||_{L1(Z_N)}`. Note the `1/N` scaling:
//! `eps` ranges over `[0, N]`, not `[0, 1]`. [`concentration_epsilon`]
//! always returns the smallest admissible `eps`.
//!
//! # Bounds
//!
//! Each bound function returns the multiplier `B` in
//!
//! ```text
//! (1/|M|) sum_{x in M} |h(x)|  <=  B * (1/N) sum_{x in Z_N} |f(x)|
//! ```
//!
//! where `h = f - g` is the imputation error. For the loose program the left
//! side is `(1/|M|) ||h||_{L1(Z_N)}`.
//!
//! # Constants
//!
//! `C_T`, `gamma_0` and `C(q)` are unspecified absolute constants in the
//! underlying theory. They are theoretical constants, user-supplied; the
//! defaults of `1.0` are placeholders, not estimates. All logarithms are
//! natural logarithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::spectral::{self, Domain, Signal};

/// An index set `S` together with the tight concentration level of the
/// spectrum it was chosen for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSet {
    pub n: usize,
    pub indices: Vec<usize>,
    pub epsilon: f64,
}

/// Smallest `eps` with `||F||_{L1(S^c)} <= (eps/N) ||F||_{L1}`, that is
/// `N * ||F||_{L1(S^c)} / ||F||_{L1}`.
pub fn concentration_epsilon(spectrum: &Signal, set: &[usize]) -> Result<f64> {
    if spectrum.domain() != Domain::Frequency {
        return Err(Error::param(
            "concentration is measured on a frequency-domain signal",
        ));
    }
    let n = spectrum.len();
    let mut inside = vec![false; n];
    for &i in set {
        if i >= n {
            return Err(Error::param(format!(
                "index {i} out of range for length {n}"
            )));
        }
        inside[i] = true;
    }
    let total = spectral::l1(spectrum.values());
    if total == 0.0 {
        return Err(Error::data(
            "concentration of the zero spectrum is undefined",
        ));
    }
    let outside: f64 = spectrum
        .values()
        .iter()
        .zip(&inside)
        .filter(|(_, &inn)| !inn)
        .map(|(z, _)| z.norm())
        .sum();
    Ok(n as f64 * outside / total)
}

/// The `size` frequencies of largest modulus (ties to the lower index),
/// which minimize `eps` over all sets of that size.
pub fn best_concentration_set(spectrum: &Signal, size: usize) -> Result<ConcentrationSet> {
    let n = spectrum.len();
    if size > n {
        return Err(Error::param(format!("set size {size} exceeds length {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mags: Vec<f64> = spectrum.values().iter().map(|z| z.norm()).collect();
    order.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
    let mut indices = order[..size].to_vec();
    indices.sort_unstable();
    let epsilon = concentration_epsilon(spectrum, &indices)?;
    Ok(ConcentrationSet {
        n,
        indices,
        epsilon,
    })
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "{name} must be finite and nonnegative, got {v}"
        )))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    check_nonneg("delta", delta)?;
    if delta >= 0.5 {
        return Err(Error::domain(format!(
            "theorem hypothesis violated: delta = {delta} >= 1/2"
        )));
    }
    Ok(())
}

/// `2 eps / (1 - 2 delta)`, valid for the exact program when `delta < 1/2`.
pub fn bound_quantitative(epsilon: f64, delta: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    check_delta(delta)?;
    Ok(2.0 * epsilon / (1.0 - 2.0 * delta))
}

/// Loose-program multiplier and whether `alpha` lies in the range the bound
/// is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LooseBound {
    pub value: f64,
    /// `alpha <= 2 eps / (N delta')`; always true when `delta' = 0`.
    pub alpha_in_range: bool,
}

/// `(2 eps + 2 N alpha delta') / (1 - 2 delta)`.
pub fn bound_loose(
    epsilon: f64,
    delta: f64,
    delta_prime: f64,
    alpha: f64,
    n: usize,
) -> Result<LooseBound> {
    check_nonneg("epsilon", epsilon)?;
    check_nonneg("delta_prime", delta_prime)?;
    check_nonneg("alpha", alpha)?;
    check_delta(delta)?;
    let nf = n as f64;
    let value = (2.0 * epsilon + 2.0 * nf * alpha * delta_prime) / (1.0 - 2.0 * delta);
    let alpha_in_range = delta_prime == 0.0 || alpha <= 2.0 * epsilon / (nf * delta_prime);
    Ok(LooseBound {
        value,
        alpha_in_range,
    })
}

/// `4 eps`: the high-probability multiplier for generic masks. `epsilon`
/// must be nonnegative.
pub fn bound_random(epsilon: f64) -> f64 {
    4.0 * epsilon
}

/// `4 eps + 2 delta`, where `delta` is the noise level: the constraint
/// radius is `delta / N` times `||f||_{L1(M^c)}`.
pub fn bound_random_noisy(epsilon: f64, delta: f64) -> f64 {
    4.0 * epsilon + 2.0 * delta
}

/// `|E| |S| < N / 2`, evaluated in exact integer arithmetic.
pub fn donoho_stark_threshold(e_size: usize, s_size: usize, n: usize) -> bool {
    2 * (e_size as u128) * (s_size as u128) < n as u128
}

/// `|S| < N / (16 C_T^2 ln N ln ln N)`.
pub fn talagrand_condition(s_size: usize, n: usize, c_t: f64) -> Result<bool> {
    if n < 16 {
        return Err(Error::domain(format!(
            "talagrand condition needs N >= 16, got {n}"
        )));
    }
    if c_t.is_nan() || c_t <= 0.0 {
        return Err(Error::param("C_T must be positive"));
    }
    let nf = n as f64;
    let limit = nf / (16.0 * c_t * c_t * nf.ln() * nf.ln().ln());
    Ok((s_size as f64) < limit)
}

fn check_q_constants(q: f64, c_q: f64, eps: f64) -> Result<()> {
    if q.is_nan() || q <= 2.0 {
        return Err(Error::domain(format!("q must exceed 2, got {q}")));
    }
    if c_q.is_nan() || c_q <= 0.0 {
        return Err(Error::param("C(q) must be positive"));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::param("eps must be positive"));
    }
    Ok(())
}

/// `|Sigma| < N / (2 (C(q)/eps)^{1/(1/2 - 1/q)})`.
pub fn bourgain_threshold(sigma_size: usize, n: usize, q: f64, c_q: f64, eps: f64) -> Result<bool> {
    check_q_constants(q, c_q, eps)?;
    let exponent = 1.0 / (0.5 - 1.0 / q);
    let limit = n as f64 / (2.0 * (c_q / eps).powf(exponent));
    Ok((sigma_size as f64) < limit)
}

/// `|E| < N_total / (4 (C(q)/eps)^{2q/(q-2)})`. For `Z_N^d` pass
/// `n_total = N^d`.
pub fn transference_threshold(
    e_size: usize,
    n_total: usize,
    q: f64,
    c_q: f64,
    eps: f64,
) -> Result<bool> {
    check_q_constants(q, c_q, eps)?;
    let exponent = 2.0 * q / (q - 2.0);
    let limit = n_total as f64 / (4.0 * (c_q / eps).powf(exponent));
    Ok((e_size as f64) < limit)
}

/// Upper bound on `P(|mean_M |f| - mean_{Z_N} |f|| >= t)` for a generic
/// mask with inclusion probability `p`:
/// `2 (1 - p + p exp(-2 t^2 / ||f||_inf^2))^N`.
pub fn hoeffding_tail(t: f64, p: f64, n: usize, f_inf: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::param("t must be positive"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param("p must lie in (0, 1)"));
    }
    if f_inf.is_nan() || f_inf <= 0.0 {
        return Err(Error::param("||f||_inf must be positive"));
    }
    // log of the base, 1 + p (exp(-a) - 1), computed without cancellation
    let a = 2.0 * t * t / (f_inf * f_inf);
    let log_base = (p * (-a).exp_m1()).ln_1p();
    Ok(2.0 * (n as f64 * log_base).exp())
}

/// Number of frequencies with `|F(w)| > rel_tol * max |F|`.
pub fn spectral_support_size(spectrum: &Signal, rel_tol: f64) -> usize {
    let peak = spectrum.max_abs();
    spectrum
        .values()
        .iter()
        .filter(|z| z.norm() > rel_tol * peak)
        .count()
}

/// User-supplied constants and experiment parameters for [`full_report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticParams {
    /// Talagrand constant `C_T` (theoretical constant, user-supplied).
    pub c_t: f64,
    /// Generic-size constant `gamma_0` (theoretical constant, user-supplied).
    pub gamma0: f64,
    /// Bourgain constant `C(q)` (theoretical constant, user-supplied).
    pub c_q: f64,
    pub q: f64,
    /// Failure-probability parameter `eps` of the random-support recovery
    /// thresholds. Unrelated to the concentration level.
    pub recovery_eps: f64,
    /// Loose-program `alpha`.
    pub alpha: f64,
    /// Noise level `delta` of the noisy random bound.
    pub noise_delta: f64,
    /// Hoeffding deviation `t`; defaults to `0.1 ||f||_inf`.
    pub hoeffding_t: Option<f64>,
    /// Generic inclusion probability; defaults to `|M| / N`.
    pub p: Option<f64>,
}

impl Default for DiagnosticParams {
    fn default() -> Self {
        DiagnosticParams {
            c_t: 1.0,
            gamma0: 1.0,
            c_q: 1.0,
            q: 4.0,
            recovery_eps: 1.0,
            alpha: 0.0,
            noise_delta: 0.0,
            hoeffding_t: None,
            p: None,
        }
    }
}

/// Every closed-form quantity for one `(f, M, S)` instance, as a flat record.
///
/// Bounds whose hypotheses fail (`delta >= 1/2`) are `None`, as is the
/// Talagrand predicate for `N < 16` and the Hoeffding tail when the mask is
/// empty or full and no `p` was supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub mask_size: usize,
    pub observed_size: usize,
    pub s_size: usize,
    pub s_indices: Vec<usize>,
    pub spectral_support_size: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub mean_abs_f: f64,
    pub f_inf: f64,
    pub bound_quantitative: Option<f64>,
    pub bound_loose: Option<f64>,
    pub alpha_in_loose_range: Option<bool>,
    pub bound_random: f64,
    pub bound_random_noisy: f64,
    pub threshold_donoho_stark: bool,
    pub threshold_talagrand: Option<bool>,
    pub threshold_bourgain: bool,
    pub threshold_transference: bool,
    pub generic_size_limit: f64,
    pub mask_within_generic_size: bool,
    pub hoeffding_t: f64,
    pub hoeffding_tail: Option<f64>,
    pub param_c_t: f64,
    pub param_gamma0: f64,
    pub param_c_q: f64,
    pub param_q: f64,
    pub param_recovery_eps: f64,
    pub param_alpha: f64,
    pub param_noise_delta: f64,
    pub param_p: Option<f64>,
}

/// Computes the full diagnostic record for `f` (the complete series) and
/// mask `M`, with `S` the `s_size` largest spectral coefficients of `f`.
pub fn full_report(
    f: &Signal,
    mask: &Mask,
    s_size: usize,
    params: &DiagnosticParams,
) -> Result<DiagnosticsReport> {
    if mask.n() != f.len() {
        return Err(Error::param("mask and signal lengths differ"));
    }
    if !f.is_finite() {
        return Err(Error::data("signal must be finite"));
    }
    let n = f.len();
    let nf = n as f64;
    let spectrum = spectral::dft(f)?;
    let set = best_concentration_set(&spectrum, s_size)?;
    let m = mask.len();
    let mc = mask.observed_len();
    let delta = (m * s_size) as f64 / nf;
    let delta_prime = s_size as f64 - delta;

    let sigma = spectral_support_size(&spectrum, 1e-12);
    let f_inf = f.max_abs();
    let mean_abs_f = spectral::l1(f.values()) / nf;

    let (bound_quantitative, bound_loose, alpha_in_loose_range) = if delta < 0.5 {
        let loose = bound_loose(set.epsilon, delta, delta_prime, params.alpha, n)?;
        (
            Some(bound_quantitative(set.epsilon, delta)?),
            Some(loose.value),
            Some(loose.alpha_in_range),
        )
    } else {
        (None, None, None)
    };

    let threshold_talagrand = if n >= 16 {
        Some(talagrand_condition(s_size, n, params.c_t)?)
    } else {
        None
    };
    let generic_size_limit = if n >= 2 {
        params.gamma0 * nf / nf.ln()
    } else {
        0.0
    };

    let hoeffding_t = params.hoeffding_t.unwrap_or(0.1 * f_inf);
    let p = params.p.or_else(|| (m > 0 && m < n).then(|| m as f64 / nf));
    let hoeffding = match p {
        Some(p) => Some(hoeffding_tail(hoeffding_t, p, n, f_inf)?),
        None => None,
    };

    Ok(DiagnosticsReport {
        n,
        mask_size: m,
        observed_size: mc,
        s_size,
        s_indices: set.indices,
        spectral_support_size: sigma,
        epsilon: set.epsilon,
        delta,
        delta_prime,
        mean_abs_f,
        f_inf,
        bound_quantitative,
        bound_loose,
        alpha_in_loose_range,
        bound_random: bound_random(set.epsilon),
        bound_random_noisy: bound_random_noisy(set.epsilon, params.noise_delta),
        threshold_donoho_stark: donoho_stark_threshold(sigma, m, n),
        threshold_talagrand,
        threshold_bourgain: bourgain_threshold(
            sigma,
            n,
            params.q,
            params.c_q,
            params.recovery_eps,
        )?,
        threshold_transference: transference_threshold(
            sigma,
            n,
            params.q,
            params.c_q,
            params.recovery_eps,
        )?,
        generic_size_limit,
        mask_within_generic_size: (m as f64) <= generic_size_limit,
        hoeffding_t,
        hoeffding_tail: hoeffding,
        param_c_t: params.c_t,
        param_gamma0: params.gamma0,
        param_c_q: params.c_q,
        param_q: params.q,
        param_recovery_eps: params.recovery_eps,
        param_alpha: params.alpha,
        param_noise_delta: params.noise_delta,
        param_p: p,
    })
}
