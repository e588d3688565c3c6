use std::path::PathBuf;

use clap::Args;
use fourier_impute::baselines::linear_interpolation_with;
use fourier_impute::diagnostics::{full_report, DiagnosticsReport};
use fourier_impute::evaluation::{evaluate, EvaluationReport};
use fourier_impute::io::write_imputed;
use fourier_impute::mask::mask_from_missing_values;
use fourier_impute::solver::{SolverConfig, SolverResult};
use fourier_impute::spectral::Signal;
use serde::Serialize;

use crate::common::{
    default_s_size, load_constants, merge_masks, read_series_file, run_method, write_output,
    BoundaryArg, MaskArgs, Method, MethodOptions, SolverArgs,
};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct ImputeArgs {
    /// Input CSV; empty or `nan` cells are imputed.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::L1Exact)]
    pub method: Method,
    #[command(flatten)]
    pub mask: MaskArgs,
    /// Complete series to score the imputation against. Defaults to the
    /// input itself when the input has no gaps.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Imputed CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report destination.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Relative budget of the `l1-loose` program.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Noise level of the `l1-noisy` program.
    #[arg(long, default_value_t = 0.0)]
    pub noise_delta: f64,
    /// Harmonics for `trig`; defaults to `max(1, observed / 10)`.
    #[arg(long)]
    pub harmonics: Option<usize>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Constant)]
    pub boundary: BoundaryArg,
    /// Size of the concentration set used in the report.
    #[arg(long)]
    pub s_size: Option<usize>,
    /// TOML file of diagnostic constants.
    #[arg(long)]
    pub constants: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Serialize)]
pub struct SolverSummary {
    pub converged: bool,
    pub iterations: usize,
    pub objective: f64,
    pub feasibility_gap: f64,
    pub step: f64,
    pub discarded_imag: Option<f64>,
    pub max_iters: usize,
    pub tol: f64,
    pub relaxation: f64,
    pub threshold_step: f64,
}

impl SolverSummary {
    pub fn new(r: &SolverResult, cfg: &SolverConfig) -> Self {
        SolverSummary {
            converged: r.converged,
            iterations: r.iterations,
            objective: r.objective,
            feasibility_gap: r.feasibility_gap,
            step: r.step,
            discarded_imag: r.discarded_imag,
            max_iters: cfg.max_iters,
            tol: cfg.tol,
            relaxation: cfg.relaxation,
            threshold_step: cfg.threshold_step,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ImputeReport {
    pub method: &'static str,
    pub n: usize,
    pub mask_size: usize,
    pub input_gaps: usize,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub harmonics: Option<usize>,
    pub solver: Option<SolverSummary>,
    /// `truth` when the diagnostics use the ground truth, `imputed` when
    /// they fall back to the imputed series.
    pub diagnostics_source: &'static str,
    pub diagnostics: DiagnosticsReport,
    pub evaluation: Option<EvaluationReport>,
}

/// Returns whether the solver (if any) converged.
pub fn run(args: &ImputeArgs) -> Result<bool, CliError> {
    let series = read_series_file(&args.input)?;
    let (f, gaps) = mask_from_missing_values(&series.values)?;
    let n = f.len();
    let extra = args.mask.build(n)?;
    let mask = merge_masks(&gaps, extra.as_ref())?;

    let truth = match &args.truth {
        Some(path) => {
            let values = read_series_file(path)?
                .complete()
                .map_err(|e| CliError::from(e).context(path))?;
            if values.len() != n {
                return Err(CliError::data(format!(
                    "truth has {} values, input has {n}",
                    values.len()
                )));
            }
            Some(Signal::from_real(&values)?)
        }
        None if gaps.is_empty() => Some(f.clone()),
        None => None,
    };

    let opts = MethodOptions {
        alpha: args.alpha,
        noise_delta: args.noise_delta,
        harmonics: args.harmonics,
        boundary: args.boundary.into(),
        solver: args.solver.config(args.mask.seed)?,
    };
    let out = run_method(&f, &mask, args.method, &opts)?;
    write_output(args.out.as_deref(), &write_imputed(&out.g.re(), &mask))?;

    let converged = out.solver.as_ref().is_none_or(|r| r.converged);
    if let Some(path) = &args.report {
        let effective_alpha = match args.method {
            Method::L1Loose => Some(args.alpha),
            Method::L1Noisy => Some(args.noise_delta / n as f64),
            _ => None,
        };
        let mut params = load_constants(args.constants.as_deref())?;
        params.alpha = effective_alpha.unwrap_or(0.0);
        params.noise_delta = args.noise_delta;
        if let Some(p) = args.mask.mask_p {
            params.p = Some(p);
        }
        let s_size = args.s_size.unwrap_or_else(|| default_s_size(n, mask.len()));
        let (source, reference) = match &truth {
            Some(t) => ("truth", t),
            None => ("imputed", &out.g),
        };
        let diagnostics = full_report(reference, &mask, s_size, &params)?;

        let evaluation = match &truth {
            Some(t) if !mask.is_empty() => {
                let baseline = match args.method {
                    Method::Linear => None,
                    _ => Some(linear_interpolation_with(&f, &mask, opts.boundary)?),
                };
                Some(evaluate(t, &out.g, &mask, baseline.as_ref())?)
            }
            _ => None,
        };

        let solver = out
            .solver
            .as_ref()
            .map(|r| SolverSummary::new(r, &opts.solver));
        let report = ImputeReport {
            method: args.method.name(),
            n,
            mask_size: mask.len(),
            input_gaps: gaps.len(),
            seed: args.mask.seed,
            alpha: effective_alpha,
            harmonics: out.harmonics,
            solver,
            diagnostics_source: source,
            diagnostics,
            evaluation,
        };
        let json =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::io(e.to_string()))?;
        write_output(Some(path), &(json + "\n"))?;
    }
    Ok(converged)
}
