//! Missing-value imputation for time series on `Z_N` by minimizing the `l1`
//! norm of the Fourier transform, with the concentration measures, error
//! bounds and recovery thresholds that certify the result.
//!
//! * [`spectral`]: signals, the unitary DFT and norms;
//! * [`mask`] and [`rng`]: reproducible random masks;
//! * [`solver`]: the exact and loose `l1` programs;
//! * [`diagnostics`]: concentration, bounds, thresholds, sampling tails;
//! * [`baselines`] and [`evaluation`]: reference imputers and metrics;
//! * [`io`]: the CSV dialect.
//!
//! ```
//! use fourier_impute::mask::uniform_mask;
//! use fourier_impute::solver::{impute_exact, SolverConfig};
//! use fourier_impute::spectral::Signal;
//!
//! let f = Signal::from_real(&[3.0, 1.0, -1.0, 1.0, 3.0, 1.0, -1.0, 1.0]).unwrap();
//! let mask = uniform_mask(8, 1, 4).unwrap();
//! let r = impute_exact(&f, &mask, &SolverConfig::default()).unwrap();
//! assert!((r.g.get(mask.indices()[0]) - f.get(mask.indices()[0])).norm() < 1e-6);
//! ```

pub mod baselines;
pub mod diagnostics;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod mask;
pub mod rng;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fourier.md")]
    struct Fourier;
    #[doc = include_str!("../../../book/src/masks.md")]
    struct Masks;
    #[doc = include_str!("../../../book/src/imputation.md")]
    struct Imputation;
    #[doc = include_str!("../../../book/src/bounds.md")]
    struct Bounds;
    #[doc = include_str!("../../../book/src/thresholds.md")]
    struct Thresholds;
    #[doc = include_str!("../../../book/src/baselines.md")]
    struct Baselines;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
