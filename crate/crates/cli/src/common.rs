use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fourier_impute::baselines::{
    default_harmonics, linear_interpolation_with, trig_poly_regression, Boundary,
};
use fourier_impute::diagnostics::DiagnosticParams;
use fourier_impute::io::{read_series, Series};
use fourier_impute::mask::{generic_mask, uniform_mask, Mask};
use fourier_impute::solver::{impute_exact, impute_loose, SolverConfig, SolverResult};
use fourier_impute::spectral::Signal;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONSTANTS_ENV: &str = "FIMPUTE_CONSTANTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Minimize the spectral L1 norm, observed values fixed.
    L1Exact,
    /// Minimize the spectral L1 norm, observed values may move by `alpha`.
    L1Loose,
    /// The loose program with `alpha = noise_delta / N`.
    L1Noisy,
    /// Piecewise-linear interpolation.
    Linear,
    /// Least-squares trigonometric polynomial.
    Trig,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::L1Exact => "l1-exact",
            Method::L1Loose => "l1-loose",
            Method::L1Noisy => "l1-noisy",
            Method::Linear => "linear",
            Method::Trig => "trig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Constant,
    Cyclic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Constant => Boundary::Constant,
            BoundaryArg::Cyclic => Boundary::Cyclic,
        }
    }
}

/// Everything a method needs besides the data.
#[derive(Debug, Clone)]
pub struct MethodOptions {
    pub alpha: f64,
    pub noise_delta: f64,
    pub harmonics: Option<usize>,
    pub boundary: Boundary,
    pub solver: SolverConfig,
}

pub struct MethodOutput {
    pub g: Signal,
    pub solver: Option<SolverResult>,
    /// Harmonics used by `trig`.
    pub harmonics: Option<usize>,
}

pub fn run_method(
    f: &Signal,
    mask: &Mask,
    method: Method,
    opts: &MethodOptions,
) -> Result<MethodOutput, CliError> {
    let solved = |r: SolverResult| MethodOutput {
        g: r.g.clone(),
        solver: Some(r),
        harmonics: None,
    };
    Ok(match method {
        Method::L1Exact => solved(impute_exact(f, mask, &opts.solver)?),
        Method::L1Loose => solved(impute_loose(f, mask, opts.alpha, &opts.solver)?),
        Method::L1Noisy => solved(impute_loose(
            f,
            mask,
            opts.noise_delta / f.len() as f64,
            &opts.solver,
        )?),
        Method::Linear => MethodOutput {
            g: linear_interpolation_with(f, mask, opts.boundary)?,
            solver: None,
            harmonics: None,
        },
        Method::Trig => {
            let k = opts
                .harmonics
                .unwrap_or_else(|| default_harmonics(mask.observed_len()));
            MethodOutput {
                g: trig_poly_regression(f, mask, k)?,
                solver: None,
                harmonics: Some(k),
            }
        }
    })
}

/// Shared solver flags.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 50_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1.0)]
    pub relaxation: f64,
    /// Multiplier of the median spectral magnitude of the starting point.
    #[arg(long, default_value_t = 1.0)]
    pub threshold_step: f64,
}

impl SolverArgs {
    pub fn config(&self, seed: u64) -> Result<SolverConfig, CliError> {
        let cfg = SolverConfig {
            max_iters: self.max_iters,
            tol: self.tol,
            relaxation: self.relaxation,
            threshold_step: self.threshold_step,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Where the mask comes from. Without any of these flags only the gaps in
/// the input are imputed.
#[derive(Debug, Clone, Args)]
pub struct MaskArgs {
    /// Mask file (`# n=N` header, one index per line).
    #[arg(long, conflicts_with_all = ["mask_p", "mask_size"])]
    pub mask: Option<PathBuf>,
    /// Hide each sample independently with this probability.
    #[arg(long, conflicts_with = "mask_size")]
    pub mask_p: Option<f64>,
    /// Hide exactly this many samples, chosen uniformly.
    #[arg(long)]
    pub mask_size: Option<usize>,
    /// Seed for `--mask-p` and `--mask-size`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl MaskArgs {
    /// The extra mask requested on the command line, if any.
    pub fn build(&self, n: usize) -> Result<Option<Mask>, CliError> {
        if let Some(path) = &self.mask {
            let mask = Mask::from_text(&read_text(path)?)?;
            if mask.n() != n {
                return Err(CliError::data(format!(
                    "mask is for n={}, series has {n} values",
                    mask.n()
                )));
            }
            return Ok(Some(mask));
        }
        if let Some(p) = self.mask_p {
            return Ok(Some(generic_mask(n, p, self.seed)?.mask));
        }
        if let Some(size) = self.mask_size {
            return Ok(Some(uniform_mask(n, size, self.seed)?));
        }
        Ok(None)
    }
}

/// Union of the input gaps and an optional extra mask.
pub fn merge_masks(gaps: &Mask, extra: Option<&Mask>) -> Result<Mask, CliError> {
    match extra {
        None => Ok(gaps.clone()),
        Some(m) => {
            let mut idx: Vec<usize> = gaps.indices().iter().chain(m.indices()).copied().collect();
            idx.sort_unstable();
            idx.dedup();
            Ok(Mask::new(gaps.n(), idx)?)
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn read_series_file(path: &Path) -> Result<Series, CliError> {
    read_series(&read_text(path)?).map_err(|e| CliError::from(e).context(path))
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(e.to_string())),
    }
}

/// Diagnostic constants: `--constants`, then `$FIMPUTE_CONSTANTS`, then the
/// built-in defaults.
pub fn load_constants(path: Option<&Path>) -> Result<DiagnosticParams, CliError> {
    let path = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONSTANTS_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from),
    };
    match path {
        None => Ok(DiagnosticParams::default()),
        Some(p) => toml::from_str(&read_text(&p)?)
            .map_err(|e| CliError::config(format!("{}: {}", p.display(), e.message()))),
    }
}

/// Largest `|S|` with `|M| |S| < N / 2`, at least 1.
pub fn default_s_size(n: usize, mask_len: usize) -> usize {
    if mask_len == 0 {
        return 1;
    }
    (n.div_ceil(2 * mask_len)).saturating_sub(1).clamp(1, n)
}
