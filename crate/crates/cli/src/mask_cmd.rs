use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fourier_impute::mask::{generic_mask, uniform_mask};

use crate::common::write_output;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaskModel {
    /// Each index missing independently with probability `p`.
    Generic,
    /// Exactly `size` indices, uniformly chosen.
    Uniform,
}

#[derive(Debug, Args)]
pub struct MaskCmdArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub model: MaskModel,
    #[arg(long, required_if_eq("model", "generic"))]
    pub p: Option<f64>,
    #[arg(long, required_if_eq("model", "uniform"))]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Mask file destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &MaskCmdArgs) -> Result<(), CliError> {
    let mask = match args.model {
        MaskModel::Generic => {
            let p = args
                .p
                .ok_or_else(|| CliError::usage("--p is required for the generic model"))?;
            generic_mask(args.n, p, args.seed)?.mask
        }
        MaskModel::Uniform => {
            let size = args
                .size
                .ok_or_else(|| CliError::usage("--size is required for the uniform model"))?;
            uniform_mask(args.n, size, args.seed)?
        }
    };
    write_output(args.out.as_deref(), &mask.to_text())
}
