use std::path::PathBuf;

use clap::Args;
use fourier_impute::baselines::linear_interpolation;
use fourier_impute::diagnostics::full_report;
use fourier_impute::mask::mask_from_missing_values;

use crate::common::{
    default_s_size, load_constants, merge_masks, read_series_file, write_output, MaskArgs,
};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// Input CSV. Gaps are filled by linear interpolation before the
    /// spectrum is taken.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub mask: MaskArgs,
    /// Size of the concentration set; defaults to the largest size with
    /// `|M| |S| < N / 2`.
    #[arg(long)]
    pub s_size: Option<usize>,
    /// TOML file of diagnostic constants.
    #[arg(long)]
    pub constants: Option<PathBuf>,
    /// `alpha` of the loose bound.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `delta` of the noisy bound.
    #[arg(long)]
    pub noise_delta: Option<f64>,
    /// JSON destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &DiagnoseArgs) -> Result<(), CliError> {
    let series = read_series_file(&args.input)?;
    let (f, gaps) = mask_from_missing_values(&series.values)?;
    let n = f.len();
    let mask = merge_masks(&gaps, args.mask.build(n)?.as_ref())?;
    let filled = if gaps.is_empty() {
        f
    } else {
        linear_interpolation(&f, &gaps)?
    };

    let mut params = load_constants(args.constants.as_deref())?;
    if let Some(a) = args.alpha {
        params.alpha = a;
    }
    if let Some(d) = args.noise_delta {
        params.noise_delta = d;
    }
    if let Some(p) = args.mask.mask_p {
        params.p = Some(p);
    }
    let s_size = args.s_size.unwrap_or_else(|| default_s_size(n, mask.len()));
    let report = full_report(&filled, &mask, s_size, &params)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::io(e.to_string()))?;
    write_output(args.out.as_deref(), &(json + "\n"))
}
