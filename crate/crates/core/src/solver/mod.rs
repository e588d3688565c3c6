//! `l1` minimization of the Fourier transform subject to agreement with the
//! observed samples.
//!
//! Two programs are solved:
//!
//! * [`impute_exact`]: minimize `||u^||_1` over all `u` with `u(x) = f(x)` for
//!   every observed `x`;
//! * [`impute_loose`]: minimize `||u^||_1` over all `u` with
//!   `sum_{x observed} |u(x) - f(x)| <= alpha * sum_{x observed} |f(x)|`.
//!
//! Both are solved by Douglas–Rachford splitting on
//! `||F u||_1 + indicator_C(u)`. Since the DFT `F` is unitary, the proximal
//! map of `gamma ||F .||_1` is `F^* shrink_gamma F`, and the projection onto
//! the constraint set `C` acts on observed time samples only. One iteration
//! is therefore two FFTs plus linear work.
//!
//! Iteration, with relaxation `lambda` and step `gamma`:
//!
//! ```text
//! x_k     = P_C(y_k)
//! z_k     = F^* shrink_gamma F (2 x_k - y_k)
//! y_{k+1} = y_k + lambda (z_k - x_k)
//! ```
//!
//! The step `gamma` is held fixed for the whole run. The returned imputation
//! is `P_C(y)` at the last iterate, which is feasible by construction.

mod prox;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use prox::{project_capped_simplex, project_l1_ball, soft_threshold};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::spectral::{self, check_compatible, Domain, FftPlan, Signal};

/// Parameters of the splitting iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `||x_{k+1} - x_k||_2 / (1 + ||x_k||_2) < tol` and the
    /// iterate is feasible.
    pub tol: f64,
    /// Douglas–Rachford relaxation `lambda`, in `(0, 2)`.
    pub relaxation: f64,
    /// Multiplier of the data-dependent base step; the shrinkage threshold is
    /// `threshold_step * median_w |u0^(w)|` where `u0` is the initial point.
    pub threshold_step: f64,
    /// Recorded for reproducibility. The mean-fill initialization is
    /// deterministic and draws nothing from it.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 50_000,
            tol: 1e-9,
            relaxation: 1.0,
            threshold_step: 1.0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be positive"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::param("tol must be positive"));
        }
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::param("relaxation must lie in (0, 2)"));
        }
        if !(self.threshold_step > 0.0 && self.threshold_step.is_finite()) {
            return Err(Error::param("threshold_step must be positive"));
        }
        Ok(())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    /// The imputed series.
    pub g: Signal,
    /// `||g^||_1` (counting measure).
    pub objective: f64,
    /// `f - g`.
    pub h: Signal,
    pub iterations: usize,
    pub converged: bool,
    /// Exact mode: `max_{x observed} |g(x) - f(x)|`. Loose mode: amount by
    /// which `sum_{x observed} |g(x) - f(x)|` exceeds the allowed radius,
    /// clamped at zero.
    pub feasibility_gap: f64,
    /// Shrinkage threshold actually used.
    pub step: f64,
    /// For real input, the largest imaginary part dropped when `g` was
    /// projected back to the reals. `None` for complex input.
    pub discarded_imag: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Constraint {
    Exact,
    L1Ball { radius: f64 },
}

/// Minimizes `||u^||_1` subject to `u = f` on the observed indices.
///
/// Entries of `f` at masked indices are never read.
pub fn impute_exact(f: &Signal, mask: &Mask, cfg: &SolverConfig) -> Result<SolverResult> {
    check_inputs(f, mask, cfg)?;
    if mask.is_empty() {
        return Ok(trivial(f));
    }
    Ok(douglas_rachford(f, mask, Constraint::Exact, cfg))
}

/// Minimizes `||u^||_1` subject to
/// `||u - f||_{L1(M^c)} <= alpha ||f||_{L1(M^c)}`.
///
/// `alpha = 0` gives the same iterates as [`impute_exact`].
pub fn impute_loose(
    f: &Signal,
    mask: &Mask,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<SolverResult> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!(
            "alpha must be a finite nonnegative number, got {alpha}"
        )));
    }
    check_inputs(f, mask, cfg)?;
    if alpha == 0.0 {
        return impute_exact(f, mask, cfg);
    }
    let observed = mask.complement();
    let radius = alpha * observed.iter().map(|&i| f.get(i).norm()).sum::<f64>();
    Ok(douglas_rachford(
        f,
        mask,
        Constraint::L1Ball { radius },
        cfg,
    ))
}

/// `f - g`, entrywise.
pub fn residual(f: &Signal, g: &Signal) -> Result<Signal> {
    check_compatible(f, g)?;
    f.combine(Complex64::new(1.0, 0.0), g, Complex64::new(-1.0, 0.0))
}

fn check_inputs(f: &Signal, mask: &Mask, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if f.domain() != Domain::Time {
        return Err(Error::param("imputation expects a time-domain signal"));
    }
    if mask.n() != f.len() {
        return Err(Error::param(format!(
            "mask is for length {} but the signal has length {}",
            mask.n(),
            f.len()
        )));
    }
    if mask.observed_len() == 0 {
        return Err(Error::param("at least one observed value is required"));
    }
    let observed_finite = mask.complement().iter().all(|&i| {
        let z = f.get(i);
        z.re.is_finite() && z.im.is_finite()
    });
    if !observed_finite {
        return Err(Error::data("observed values must be finite"));
    }
    Ok(())
}

fn trivial(f: &Signal) -> SolverResult {
    let objective = spectral::l1(spectral::dft(f).expect("time signal").values());
    SolverResult {
        g: f.clone(),
        objective,
        h: Signal::zeros(f.len(), Domain::Time).expect("nonempty"),
        iterations: 0,
        converged: true,
        feasibility_gap: 0.0,
        step: 0.0,
        discarded_imag: f.is_real().then_some(0.0),
    }
}

struct Problem<'a> {
    f: &'a [Complex64],
    observed: Vec<usize>,
    constraint: Constraint,
}

impl Problem<'_> {
    fn project(&self, y: &[Complex64], out: &mut [Complex64]) {
        out.copy_from_slice(y);
        match self.constraint {
            Constraint::Exact => {
                for &i in &self.observed {
                    out[i] = self.f[i];
                }
            }
            Constraint::L1Ball { radius } => {
                let diff: Vec<Complex64> =
                    self.observed.iter().map(|&i| y[i] - self.f[i]).collect();
                let proj = project_l1_ball(&diff, radius);
                for (&i, d) in self.observed.iter().zip(proj) {
                    out[i] = self.f[i] + d;
                }
            }
        }
    }

    fn feasibility_gap(&self, g: &[Complex64]) -> f64 {
        match self.constraint {
            Constraint::Exact => self
                .observed
                .iter()
                .map(|&i| (g[i] - self.f[i]).norm())
                .fold(0.0, f64::max),
            Constraint::L1Ball { radius } => {
                let mass: f64 = self
                    .observed
                    .iter()
                    .map(|&i| (g[i] - self.f[i]).norm())
                    .sum();
                (mass - radius).max(0.0)
            }
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Mean-fill starting point: observed samples as given, masked samples set
/// to the mean of the observed ones.
fn initial_point(f: &[Complex64], mask: &Mask) -> Vec<Complex64> {
    let observed = mask.complement();
    let mean = observed.iter().map(|&i| f[i]).sum::<Complex64>() / observed.len() as f64;
    let mut u = f.to_vec();
    for &i in mask.indices() {
        u[i] = mean;
    }
    u
}

fn douglas_rachford(
    f: &Signal,
    mask: &Mask,
    constraint: Constraint,
    cfg: &SolverConfig,
) -> SolverResult {
    let n = f.len();
    let plan = FftPlan::new(n);
    let mut scratch = Vec::new();
    let problem = Problem {
        f: f.values(),
        observed: mask.complement(),
        constraint,
    };

    let mut y = initial_point(f.values(), mask);

    let mut spectrum = y.clone();
    plan.forward_with_scratch(&mut spectrum, &mut scratch);
    let base = median(spectrum.iter().map(|z| z.norm()).collect());
    let base = if base > 0.0 {
        base
    } else {
        let peak = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak > 0.0 {
            peak
        } else {
            1.0
        }
    };
    let gamma = cfg.threshold_step * base;
    let lambda = cfg.relaxation;

    let gap_tol = 1e-8 * (1.0 + f.max_abs());
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut prev = vec![Complex64::new(0.0, 0.0); n];
    let mut converged = false;
    let mut iterations = 0;

    problem.project(&y, &mut x);
    for k in 1..=cfg.max_iters {
        iterations = k;
        for i in 0..n {
            buf[i] = 2.0 * x[i] - y[i];
        }
        plan.forward_with_scratch(&mut buf, &mut scratch);
        for z in buf.iter_mut() {
            *z = soft_threshold(*z, gamma);
        }
        plan.inverse_with_scratch(&mut buf, &mut scratch);

        for i in 0..n {
            y[i] += lambda * (buf[i] - x[i]);
        }
        let x_norm = spectral::l2(&x);
        prev.copy_from_slice(&x);
        problem.project(&y, &mut x);
        let change = x
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();

        if change / (1.0 + x_norm) < cfg.tol && problem.feasibility_gap(&x) <= gap_tol {
            converged = true;
            break;
        }
    }

    let discarded_imag = if f.is_real() {
        let dropped = x.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        x.iter_mut().for_each(|z| z.im = 0.0);
        Some(dropped)
    } else {
        None
    };

    let mut spectrum = x.clone();
    plan.forward_with_scratch(&mut spectrum, &mut scratch);
    let objective = spectral::l1(&spectrum);
    let feasibility_gap = problem.feasibility_gap(&x);
    let g = Signal::time(x).expect("nonempty");
    let h = residual(f, &g).expect("same shape");
    SolverResult {
        g,
        objective,
        h,
        iterations,
        converged,
        feasibility_gap,
        step: gamma,
        discarded_imag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::uniform_mask;
    use std::f64::consts::PI;

    fn cosine(n: usize) -> Signal {
        Signal::from_real(
            &(0..n)
                .map(|x| (2.0 * PI * x as f64 / n as f64).cos())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn empty_mask_returns_input() {
        let f = cosine(8);
        let r = impute_exact(&f, &Mask::empty(8).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(r.g, f);
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn recovers_single_missing_cosine_sample() {
        let f = cosine(8);
        let mask = Mask::new(8, vec![3]).unwrap();
        let r = impute_exact(&f, &mask, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.g.get(3).re - (3.0 * PI / 4.0).cos()).abs() < 1e-6);
        assert!(r.feasibility_gap <= 1e-8 * 2.0);
        assert!(r.discarded_imag.unwrap() < 1e-10);
    }

    #[test]
    fn objective_matches_spectrum_of_output() {
        let f = Signal::from_real(&[1.0, 3.0, -2.0, 0.5, 4.0, 1.0, 0.0, 2.0, -1.0, 0.3]).unwrap();
        let mask = uniform_mask(10, 3, 11).unwrap();
        let r = impute_exact(&f, &mask, &SolverConfig::default()).unwrap();
        let direct = spectral::norm(
            &spectral::dft(&r.g).unwrap(),
            spectral::NormKind::L1Counting,
            None,
        )
        .unwrap();
        assert!((r.objective - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = cosine(8);
        let cfg = SolverConfig::default();
        assert!(impute_exact(&f, &Mask::empty(7).unwrap(), &cfg).is_err());
        let full = Mask::new(8, (0..8).collect()).unwrap();
        assert!(impute_exact(&f, &full, &cfg).is_err());
        let mut bad = f.clone();
        bad.values_mut()[0] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            impute_exact(&bad, &Mask::new(8, vec![3]).unwrap(), &cfg),
            Err(Error::Data(_))
        ));
        // NaN at a masked index is a placeholder and is never read.
        let mut placeholder = f.clone();
        placeholder.values_mut()[3] = Complex64::new(f64::NAN, 0.0);
        assert!(impute_exact(&placeholder, &Mask::new(8, vec![3]).unwrap(), &cfg).is_ok());
        assert!(impute_loose(&f, &Mask::new(8, vec![3]).unwrap(), -0.1, &cfg).is_err());
        let bad_cfg = SolverConfig {
            relaxation: 2.0,
            ..cfg
        };
        assert!(impute_exact(&f, &Mask::new(8, vec![3]).unwrap(), &bad_cfg).is_err());
    }

    #[test]
    fn residual_examples() {
        let f = cosine(6);
        assert!(residual(&f, &f)
            .unwrap()
            .values()
            .iter()
            .all(|z| z.norm() == 0.0));
        let g = Signal::from_real(&[0.5, 0.25, -1.0, 2.0, 0.0, 1.0]).unwrap();
        let h = residual(&f, &g).unwrap();
        for i in 0..6 {
            assert!((g.get(i) + h.get(i) - f.get(i)).norm() <= 1e-15);
        }
        assert!(residual(&f, &cosine(5)).is_err());
    }

    #[test]
    fn large_alpha_admits_zero() {
        let f = Signal::from_real(&[1.0, 3.0, -2.0, 0.5, 4.0, 1.0, 0.0, 2.0]).unwrap();
        let mask = Mask::new(8, vec![2, 5]).unwrap();
        let r = impute_loose(&f, &mask, 1.0, &SolverConfig::default()).unwrap();
        assert!(r.objective < 1e-6, "objective {}", r.objective);
        assert!(r.g.max_abs() < 1e-6);
    }
}
