use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use fourier_impute::baselines::Boundary;
use fourier_impute::evaluation::{error_diff_series, mae, mae_weighted};
use fourier_impute::mask::{generic_mask, uniform_mask, Mask};
use fourier_impute::solver::SolverConfig;
use fourier_impute::spectral::Signal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::common::{read_series_file, run_method, Method, MethodOptions};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TOML experiment description.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for the result tables; created if needed.
    #[arg(long, default_value = "bench-out")]
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum MaskModel {
    /// `round(fraction * N)` indices chosen uniformly.
    Uniform { fraction: f64 },
    /// Each index hidden with probability `p`.
    Generic { p: f64 },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub relaxation: Option<f64>,
    pub threshold_step: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    /// Complete series; relative paths resolve against the config file.
    pub dataset: PathBuf,
    /// Use only the first `limit` records.
    pub limit: Option<usize>,
    pub methods: Vec<Method>,
    /// Denominator of the MAE ratio and `g1` of the error differences.
    #[serde(default = "default_reference")]
    pub reference: Method,
    pub seeds: Vec<u64>,
    pub mask: MaskModel,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub noise_deltas: Vec<f64>,
    pub harmonics: Option<usize>,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub solver: SolverSection,
}

fn default_reference() -> Method {
    Method::Linear
}

fn default_alphas() -> Vec<f64> {
    vec![0.01]
}

/// One method with one parameter value.
#[derive(Debug, Clone, Copy)]
struct Variant {
    method: Method,
    param: Option<f64>,
}

impl Variant {
    fn options(&self, base: &MethodOptions) -> MethodOptions {
        let mut o = base.clone();
        match self.method {
            Method::L1Loose => o.alpha = self.param.expect("loose variant has alpha"),
            Method::L1Noisy => o.noise_delta = self.param.expect("noisy variant has delta"),
            _ => {}
        }
        o
    }

    fn file_stem(&self) -> String {
        match self.param {
            Some(p) => format!("{}_{p}", self.method.name()),
            None => self.method.name().to_string(),
        }
    }
}

struct Trial {
    seed: u64,
    variant: Variant,
    mae: f64,
    mae_weighted: Option<f64>,
    ratio: f64,
    iterations: Option<usize>,
    converged: bool,
    error_diff: Vec<(usize, f64)>,
}

#[derive(Debug, Serialize)]
struct VariantSummary {
    method: &'static str,
    param: Option<f64>,
    seeds: usize,
    median_ratio: f64,
    min_ratio: f64,
    max_ratio: f64,
    mean_mae: f64,
    nonconverged: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.seeds.is_empty() {
            return Err(CliError::config("seeds must not be empty"));
        }
        if self.methods.is_empty() {
            return Err(CliError::config("methods must not be empty"));
        }
        let mut seen = self.methods.clone();
        seen.sort_by_key(|m| m.name());
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(CliError::config("methods contain duplicates"));
        }
        if !matches!(
            self.reference,
            Method::Linear | Method::Trig | Method::L1Exact
        ) {
            return Err(CliError::config(
                "reference must be linear, trig or l1-exact",
            ));
        }
        if self.methods.contains(&Method::L1Loose) && self.alphas.is_empty() {
            return Err(CliError::config("l1-loose needs a nonempty alphas grid"));
        }
        if self.methods.contains(&Method::L1Noisy) && self.noise_deltas.is_empty() {
            return Err(CliError::config(
                "l1-noisy needs a nonempty noise_deltas grid",
            ));
        }
        if self
            .alphas
            .iter()
            .chain(&self.noise_deltas)
            .any(|v| !(*v >= 0.0 && v.is_finite()))
        {
            return Err(CliError::config(
                "alphas and noise_deltas must be finite and nonnegative",
            ));
        }
        match self.mask {
            MaskModel::Uniform { fraction } if !(fraction > 0.0 && fraction < 1.0) => {
                Err(CliError::config("mask fraction must lie in (0, 1)"))
            }
            MaskModel::Generic { p } if !(p > 0.0 && p < 1.0) => {
                Err(CliError::config("mask p must lie in (0, 1)"))
            }
            _ => Ok(()),
        }
    }

    fn variants(&self) -> Vec<Variant> {
        self.methods
            .iter()
            .flat_map(|&method| -> Vec<Variant> {
                match method {
                    Method::L1Loose => self
                        .alphas
                        .iter()
                        .map(|&a| Variant {
                            method,
                            param: Some(a),
                        })
                        .collect(),
                    Method::L1Noisy => self
                        .noise_deltas
                        .iter()
                        .map(|&d| Variant {
                            method,
                            param: Some(d),
                        })
                        .collect(),
                    _ => vec![Variant {
                        method,
                        param: None,
                    }],
                }
            })
            .collect()
    }

    fn solver_config(&self, seed: u64) -> Result<SolverConfig, CliError> {
        let d = SolverConfig::default();
        let cfg = SolverConfig {
            max_iters: self.solver.max_iters.unwrap_or(d.max_iters),
            tol: self.solver.tol.unwrap_or(d.tol),
            relaxation: self.solver.relaxation.unwrap_or(d.relaxation),
            threshold_step: self.solver.threshold_step.unwrap_or(d.threshold_step),
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn draw_mask(&self, n: usize, seed: u64) -> Result<Mask, CliError> {
        Ok(match self.mask {
            MaskModel::Uniform { fraction } => {
                uniform_mask(n, (fraction * n as f64).round() as usize, seed)?
            }
            MaskModel::Generic { p } => generic_mask(n, p, seed)?.mask,
        })
    }
}

pub fn load_config(path: &Path) -> Result<BenchConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut cfg: BenchConfig = toml::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message())))?;
    if cfg.dataset.is_relative() {
        if let Some(dir) = path.parent() {
            cfg.dataset = dir.join(&cfg.dataset);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

fn opt(v: Option<impl ToString>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Returns whether every solver run converged.
pub fn run(args: &BenchArgs) -> Result<bool, CliError> {
    let cfg = load_config(&args.config)?;
    let mut series = read_series_file(&cfg.dataset)?;
    if let Some(limit) = cfg.limit {
        series.truncate(limit);
    }
    let values = series
        .complete()
        .map_err(|e| CliError::from(e).context(&cfg.dataset))?;
    let truth = Signal::from_real(&values)?;
    let n = truth.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::config(e.to_string()))?;

    let masks: Vec<Mask> = cfg
        .seeds
        .iter()
        .map(|&s| cfg.draw_mask(n, s))
        .collect::<Result<_, _>>()?;
    let base = |seed: u64| -> Result<MethodOptions, CliError> {
        Ok(MethodOptions {
            alpha: 0.0,
            noise_delta: 0.0,
            harmonics: cfg.harmonics,
            boundary: cfg.boundary,
            solver: cfg.solver_config(seed)?,
        })
    };

    let references: Vec<Signal> = pool.install(|| {
        cfg.seeds
            .par_iter()
            .zip(&masks)
            .map(|(&seed, mask)| Ok(run_method(&truth, mask, cfg.reference, &base(seed)?)?.g))
            .collect::<Result<_, CliError>>()
    })?;

    let variants = cfg.variants();
    let jobs: Vec<(usize, Variant)> = (0..cfg.seeds.len())
        .flat_map(|i| variants.iter().map(move |&v| (i, v)))
        .collect();
    let trials: Vec<Trial> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, variant)| {
                let (seed, mask, reference) = (cfg.seeds[i], &masks[i], &references[i]);
                let out = run_method(&truth, mask, variant.method, &variant.options(&base(seed)?))?;
                let m = mae(&truth, &out.g, mask)?;
                let diff = error_diff_series(&truth, reference, &out.g, mask)?;
                Ok(Trial {
                    seed,
                    variant,
                    mae: m,
                    mae_weighted: mae_weighted(&truth, &out.g, mask).ok(),
                    ratio: m / mae(&truth, reference, mask)?,
                    iterations: out.solver.as_ref().map(|r| r.iterations),
                    converged: out.solver.as_ref().is_none_or(|r| r.converged),
                    error_diff: mask.indices().iter().copied().zip(diff).collect(),
                })
            })
            .collect::<Result<_, CliError>>()
    })?;

    write_tables(&args.out_dir, &cfg, &variants, &trials)?;
    Ok(trials.iter().all(|t| t.converged))
}

fn write_tables(
    dir: &Path,
    cfg: &BenchConfig,
    variants: &[Variant],
    trials: &[Trial],
) -> Result<(), CliError> {
    let plot_dir = dir.join("plot");
    fs::create_dir_all(&plot_dir)
        .map_err(|e| CliError::io(format!("{}: {e}", plot_dir.display())))?;
    let write = |path: PathBuf, text: &str| {
        fs::write(&path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
    };

    let mut results =
        String::from("seed,method,param,mae,mae_weighted,ratio,iterations,converged\n");
    for t in trials {
        let _ = writeln!(
            results,
            "{},{},{},{},{},{},{},{}",
            t.seed,
            t.variant.method.name(),
            opt(t.variant.param),
            t.mae,
            opt(t.mae_weighted),
            t.ratio,
            opt(t.iterations),
            t.converged
        );
    }
    write(dir.join("results.csv"), &results)?;

    let mut diffs = String::from("seed,method,param,index,error_diff\n");
    for t in trials {
        for (x, d) in &t.error_diff {
            let _ = writeln!(
                diffs,
                "{},{},{},{x},{d}",
                t.seed,
                t.variant.method.name(),
                opt(t.variant.param)
            );
        }
    }
    write(dir.join("error_diff.csv"), &diffs)?;

    let mut summaries = Vec::new();
    for (k, v) in variants.iter().enumerate() {
        let mine: Vec<&Trial> = trials.iter().skip(k).step_by(variants.len()).collect();
        let mut pairs = String::from("seed,ratio\n");
        for t in &mine {
            let _ = writeln!(pairs, "{},{}", t.seed, t.ratio);
        }
        write(
            plot_dir.join(format!("ratio_{}.csv", v.file_stem())),
            &pairs,
        )?;
        for t in &mine {
            let mut series = String::from("index,error_diff\n");
            for (x, d) in &t.error_diff {
                let _ = writeln!(series, "{x},{d}");
            }
            write(
                plot_dir.join(format!("error_diff_{}_seed{}.csv", v.file_stem(), t.seed)),
                &series,
            )?;
        }

        let mut ratios: Vec<f64> = mine.iter().map(|t| t.ratio).collect();
        ratios.sort_by(f64::total_cmp);
        summaries.push(VariantSummary {
            method: v.method.name(),
            param: v.param,
            seeds: mine.len(),
            median_ratio: median(&ratios),
            min_ratio: ratios[0],
            max_ratio: ratios[ratios.len() - 1],
            mean_mae: mine.iter().map(|t| t.mae).sum::<f64>() / mine.len() as f64,
            nonconverged: mine.iter().filter(|t| !t.converged).count(),
        });
    }
    let summary = serde_json::json!({
        "reference": cfg.reference.name(),
        "seeds": cfg.seeds,
        "variants": summaries,
    });
    let json = serde_json::to_string_pretty(&summary).map_err(|e| CliError::io(e.to_string()))?;
    write(dir.join("summary.json"), &(json + "\n"))?;

    for s in &summaries {
        println!(
            "{:<10} {:>8} median ratio {:.4} [{:.4}, {:.4}] over {} seeds",
            s.method,
            opt(s.param),
            s.median_ratio,
            s.min_ratio,
            s.max_ratio,
            s.seeds
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<BenchConfig, CliError> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_config() {
        let cfg = parse(
            "dataset = \"x.csv\"\nmethods = [\"linear\", \"l1-loose\"]\nseeds = [1, 2]\n\
             [mask]\nmodel = \"uniform\"\nfraction = 0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.reference, Method::Linear);
        assert_eq!(cfg.alphas, vec![0.01]);
        assert_eq!(cfg.variants().len(), 2);
    }

    #[test]
    fn rejects_bad_configs() {
        let mask = "[mask]\nmodel = \"uniform\"\nfraction = 0.5\n";
        assert!(parse(&format!(
            "dataset = \"x\"\nmethods = [\"linear\"]\nseeds = []\n{mask}"
        ))
        .is_err());
        assert!(parse(&format!(
            "dataset = \"x\"\nmethods = []\nseeds = [1]\n{mask}"
        ))
        .is_err());
        assert!(parse(&format!(
            "dataset = \"x\"\nmethods = [\"l1-noisy\"]\nseeds = [1]\n{mask}"
        ))
        .is_err());
        assert!(parse(&format!(
            "dataset = \"x\"\nmethods = [\"linear\"]\nseeds = [1]\ncolour = 1\n{mask}"
        ))
        .is_err());
        assert!(parse("dataset = \"x\"\nmethods = [\"linear\"]\nseeds = [1]\n[mask]\nmodel = \"uniform\"\nfraction = 1.5\n")
            .is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[1.0, 2.0, 4.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 4.0, 8.0]), 3.0);
    }
}
