//! Error metrics over the missing indices.
//!
//! All sums use the complex modulus, so real series are handled as the
//! special case of zero imaginary part.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::spectral::Signal;

fn check_len(a: &Signal, b: &Signal, mask: &Mask) -> Result<()> {
    if a.len() != b.len() || a.len() != mask.n() {
        return Err(Error::param(format!(
            "length mismatch: {} / {} / mask {}",
            a.len(),
            b.len(),
            mask.n()
        )));
    }
    Ok(())
}

/// `(1/|M|) sum_{x in M} |truth(x) - imputed(x)|`.
pub fn mae(truth: &Signal, imputed: &Signal, mask: &Mask) -> Result<f64> {
    check_len(truth, imputed, mask)?;
    if mask.is_empty() {
        return Err(Error::param("MAE over an empty mask is undefined"));
    }
    let total: f64 = mask
        .indices()
        .iter()
        .map(|&i| (truth.get(i) - imputed.get(i)).norm())
        .sum();
    Ok(total / mask.len() as f64)
}

/// `sum_{x in M} |h(x)| / sum_{x in M} |truth(x)|`.
pub fn mae_weighted(truth: &Signal, imputed: &Signal, mask: &Mask) -> Result<f64> {
    check_len(truth, imputed, mask)?;
    let denom: f64 = mask.indices().iter().map(|&i| truth.get(i).norm()).sum();
    if denom == 0.0 {
        return Err(Error::data(
            "truth vanishes on the mask; weighted MAE is undefined",
        ));
    }
    let num: f64 = mask
        .indices()
        .iter()
        .map(|&i| (truth.get(i) - imputed.get(i)).norm())
        .sum();
    Ok(num / denom)
}

/// `|truth(x) - g1(x)| - |truth(x) - g2(x)|` for each `x` in `M`, in index
/// order. Positive entries mean `g2` is closer to the truth.
pub fn error_diff_series(
    truth: &Signal,
    g1: &Signal,
    g2: &Signal,
    mask: &Mask,
) -> Result<Vec<f64>> {
    check_len(truth, g1, mask)?;
    check_len(truth, g2, mask)?;
    Ok(mask
        .indices()
        .iter()
        .map(|&i| (truth.get(i) - g1.get(i)).norm() - (truth.get(i) - g2.get(i)).norm())
        .collect())
}

/// `| mean_{x in M} |f(x)| - mean_{x in Z_N} |f(x)| |`.
pub fn empirical_mean_gap(f: &Signal, mask: &Mask) -> Result<f64> {
    if f.len() != mask.n() {
        return Err(Error::param("mask and signal lengths differ"));
    }
    if mask.is_empty() {
        return Err(Error::param("mean over an empty mask is undefined"));
    }
    let on_mask = mask.indices().iter().map(|&i| f.get(i).norm()).sum::<f64>() / mask.len() as f64;
    let overall = f.values().iter().map(|z| z.norm()).sum::<f64>() / f.len() as f64;
    Ok((on_mask - overall).abs())
}

/// Metrics for one imputation against the ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub mae: f64,
    /// `None` when the truth vanishes on the mask.
    pub mae_weighted: Option<f64>,
    /// `(1/|M|) sum_{x in M} |h(x)|`; numerically the MAE.
    pub mean_abs_h_on_m: f64,
    /// `(1/N) sum_x |truth(x)|`.
    pub mean_abs_f: f64,
    /// [`error_diff_series`] with the baseline as `g1` and the evaluated
    /// imputation as `g2`; empty when no baseline was given.
    pub error_diff: Vec<f64>,
}

pub fn evaluate(
    truth: &Signal,
    imputed: &Signal,
    mask: &Mask,
    baseline: Option<&Signal>,
) -> Result<EvaluationReport> {
    let m = mae(truth, imputed, mask)?;
    let weighted = match mae_weighted(truth, imputed, mask) {
        Ok(v) => Some(v),
        Err(Error::Data(_)) => None,
        Err(e) => return Err(e),
    };
    let error_diff = match baseline {
        Some(b) => error_diff_series(truth, b, imputed, mask)?,
        None => Vec::new(),
    };
    Ok(EvaluationReport {
        mae: m,
        mae_weighted: weighted,
        mean_abs_h_on_m: m,
        mean_abs_f: truth.values().iter().map(|z| z.norm()).sum::<f64>() / truth.len() as f64,
        error_diff,
    })
}
