//! Signals on the cyclic group `Z_N`, the unitary DFT, and the norm
//! conventions used throughout the crate.
//!
//! The transform is normalized symmetrically,
//!
//! ```text
//! f^(w) = N^{-1/2} sum_x f(x) exp(-2 pi i w x / N)
//! f(x)  = N^{-1/2} sum_w f^(w) exp(+2 pi i w x / N)
//! ```
//!
//! so `dft` and `idft` are mutually inverse isometries. Every bound in
//! [`crate::diagnostics`] assumes this normalization.

mod fft;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use fft::{character_table, FftPlan};

use crate::error::{Error, Result};

/// Which side of the transform a [`Signal`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Time,
    Frequency,
}

/// A complex-valued function on `Z_N`, tagged with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<Complex64>,
    domain: Domain,
}

impl Signal {
    /// Wraps `values` as a signal. Fails on an empty vector.
    pub fn new(values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("signal length must be at least 1"));
        }
        Ok(Signal { values, domain })
    }

    pub fn time(values: Vec<Complex64>) -> Result<Self> {
        Self::new(values, Domain::Time)
    }

    pub fn frequency(values: Vec<Complex64>) -> Result<Self> {
        Self::new(values, Domain::Frequency)
    }

    /// Real time-domain series.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::time(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize, domain: Domain) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n], domain)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a signal has at least one sample.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// Real parts of the samples.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max_x |u(x)|`.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `alpha * self + beta * other`, entrywise.
    pub fn combine(&self, alpha: Complex64, other: &Signal, beta: Complex64) -> Result<Signal> {
        check_compatible(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Signal::new(values, self.domain)
    }
}

pub(crate) fn check_compatible(a: &Signal, b: &Signal) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::param(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.domain != b.domain {
        return Err(Error::param("domain tags differ"));
    }
    Ok(())
}

/// Unitary forward transform of a time-domain signal.
pub fn dft(f: &Signal) -> Result<Signal> {
    if f.domain != Domain::Time {
        return Err(Error::param("dft expects a time-domain signal"));
    }
    let mut values = f.values.clone();
    FftPlan::new(values.len()).forward(&mut values);
    Signal::frequency(values)
}

/// Unitary inverse transform of a frequency-domain signal.
pub fn idft(spectrum: &Signal) -> Result<Signal> {
    if spectrum.domain != Domain::Frequency {
        return Err(Error::param("idft expects a frequency-domain signal"));
    }
    let mut values = spectrum.values.clone();
    FftPlan::new(values.len()).inverse(&mut values);
    Signal::time(values)
}

/// Norm selector.
///
/// Counting norms sum over the index set with no prefactor; the `Mu` norms
/// use the normalized counting measure and carry a `1/N` prefactor inside the
/// root, so `L1Mu = L1Counting / N` and `L2Mu = L2Counting / sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    L1Counting,
    L2Counting,
    L1Mu,
    L2Mu,
    LInf,
}

/// Norm of `u`, optionally restricted to the indices in `on`.
///
/// The `Mu` prefactor is `1/N` with `N = u.len()` even when the sum is
/// restricted.
pub fn norm(u: &Signal, kind: NormKind, on: Option<&[usize]>) -> Result<f64> {
    let n = u.len();
    if let Some(idx) = on {
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::param(format!(
                "index {bad} out of range for length {n}"
            )));
        }
    }
    let mags: Box<dyn Iterator<Item = f64>> = match on {
        Some(idx) => Box::new(idx.iter().map(|&i| u.values[i].norm())),
        None => Box::new(u.values.iter().map(|z| z.norm())),
    };
    let nf = n as f64;
    Ok(match kind {
        NormKind::L1Counting => mags.sum(),
        NormKind::L1Mu => mags.sum::<f64>() / nf,
        NormKind::L2Counting => mags.map(|m| m * m).sum::<f64>().sqrt(),
        NormKind::L2Mu => (mags.map(|m| m * m).sum::<f64>() / nf).sqrt(),
        NormKind::LInf => mags.fold(0.0, f64::max),
    })
}

/// `sum |z|` over a slice.
pub(crate) fn l1(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).sum()
}

pub(crate) fn l2(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn delta_transforms_to_constant() {
        let f = Signal::time(vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let spec = dft(&f).unwrap();
        assert_eq!(spec.domain(), Domain::Frequency);
        for z in spec.values() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_transforms_to_scaled_delta() {
        let f = Signal::from_real(&[1.0; 4]).unwrap();
        let spec = dft(&f).unwrap();
        let want = [2.0, 0.0, 0.0, 0.0];
        for (z, w) in spec.values().iter().zip(want) {
            assert!((z - c(w)).norm() < 1e-15);
        }
        let back = idft(&spec).unwrap();
        for z in back.values() {
            assert!((z - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_spectrum_inverts_to_zero() {
        let z = Signal::zeros(7, Domain::Frequency).unwrap();
        assert!(idft(&z).unwrap().values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let f = Signal::from_real(&[1.0, 2.0]).unwrap();
        assert!(idft(&f).is_err());
        assert!(dft(&dft(&f).unwrap()).is_err());
        assert!(Signal::time(vec![]).is_err());
    }

    #[test]
    fn norm_examples() {
        let u = Signal::from_real(&[3.0, 4.0]).unwrap();
        assert_eq!(norm(&u, NormKind::L2Counting, None).unwrap(), 5.0);
        let ones = Signal::from_real(&[1.0; 4]).unwrap();
        assert_eq!(norm(&ones, NormKind::L1Mu, None).unwrap(), 1.0);
        let v = Signal::from_real(&[1.0, -2.0, 3.0, -4.0]).unwrap();
        assert_eq!(norm(&v, NormKind::L1Counting, Some(&[1, 3])).unwrap(), 6.0);
        assert_eq!(norm(&v, NormKind::LInf, None).unwrap(), 4.0);
        assert!(norm(&v, NormKind::L1Counting, Some(&[4])).is_err());
    }

    #[test]
    fn mu_norms_rescale_counting_norms() {
        let v = Signal::from_real(&[1.0, -2.0, 3.0, -4.0, 0.5]).unwrap();
        let n = 5.0_f64;
        let l1 = norm(&v, NormKind::L1Counting, None).unwrap();
        let l2 = norm(&v, NormKind::L2Counting, None).unwrap();
        assert!((norm(&v, NormKind::L1Mu, None).unwrap() - l1 / n).abs() < 1e-15);
        assert!((norm(&v, NormKind::L2Mu, None).unwrap() - l2 / n.sqrt()).abs() < 1e-15);
    }
}
