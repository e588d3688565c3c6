//! Reference imputers to compare the `l1` method against.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::spectral::{Domain, Signal};

/// How gaps touching either end of the series are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Repeat the nearest observed value.
    #[default]
    Constant,
    /// Treat the series as periodic and interpolate across the wrap.
    Cyclic,
}

fn check(f: &Signal, mask: &Mask) -> Result<Vec<usize>> {
    if f.domain() != Domain::Time {
        return Err(Error::param("baselines expect a time-domain signal"));
    }
    if mask.n() != f.len() {
        return Err(Error::param("mask and signal lengths differ"));
    }
    let observed = mask.complement();
    if observed.is_empty() {
        return Err(Error::param("at least one observed value is required"));
    }
    Ok(observed)
}

/// Piecewise-linear interpolation between the nearest observed neighbours,
/// constant extension at the ends.
pub fn linear_interpolation(f: &Signal, mask: &Mask) -> Result<Signal> {
    linear_interpolation_with(f, mask, Boundary::Constant)
}

/// Fills each missing `x` with `f(a) + (f(b) - f(a)) (x - a) / (b - a)`,
/// where `a < x < b` are the nearest observed indices.
pub fn linear_interpolation_with(f: &Signal, mask: &Mask, boundary: Boundary) -> Result<Signal> {
    let observed = check(f, mask)?;
    let n = f.len();
    let mut g = f.values().to_vec();
    let first = observed[0];
    let last = *observed.last().expect("nonempty");

    for pair in observed.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (fa, fb) = (f.get(a), f.get(b));
        let span = (b - a) as f64;
        for (x, slot) in g.iter_mut().enumerate().take(b).skip(a + 1) {
            *slot = fa + (fb - fa) * ((x - a) as f64 / span);
        }
    }

    match boundary {
        Boundary::Constant => {
            let (ff, fl) = (f.get(first), f.get(last));
            g[..first].iter_mut().for_each(|v| *v = ff);
            g[last + 1..].iter_mut().for_each(|v| *v = fl);
        }
        Boundary::Cyclic => {
            // the gap runs from `last` through the end and wraps to `first`
            let (fa, fb) = (f.get(last), f.get(first));
            let span = (first + n - last) as f64;
            let fill = |offset: usize| fa + (fb - fa) * (offset as f64 / span);
            for (x, v) in g.iter_mut().enumerate().skip(last + 1) {
                *v = fill(x - last);
            }
            for (x, v) in g.iter_mut().enumerate().take(first) {
                *v = fill(x + n - last);
            }
        }
    }
    Signal::time(g)
}

/// Default number of harmonics: `max(1, floor(m/10))`, capped at
/// `floor((m-1)/2)`, where `m` is the number of observed samples.
pub fn default_harmonics(observed: usize) -> usize {
    (observed / 10).max(1).min(observed.saturating_sub(1) / 2)
}

/// Least-squares fit of
/// `c0 + sum_{k=1..K} (a_k cos(2 pi k x / N) + b_k sin(2 pi k x / N))`
/// to the observed samples; missing samples are read off the fit.
///
/// The design matrix is factored by Householder QR. Real and imaginary parts
/// are fitted separately.
pub fn trig_poly_regression(f: &Signal, mask: &Mask, harmonics: usize) -> Result<Signal> {
    let observed = check(f, mask)?;
    let cols = 2 * harmonics + 1;
    if observed.len() < cols {
        return Err(Error::param(format!(
            "{} observed samples cannot determine {} coefficients",
            observed.len(),
            cols
        )));
    }
    let n = f.len();
    let basis = |x: usize, j: usize| -> f64 {
        if j == 0 {
            return 1.0;
        }
        let k = j.div_ceil(2);
        let ang = 2.0 * PI * ((k * x) % n) as f64 / n as f64;
        if j % 2 == 1 {
            ang.cos()
        } else {
            ang.sin()
        }
    };
    let a = DMatrix::from_fn(observed.len(), cols, |r, c| basis(observed[r], c));
    let qr = a.qr();
    let r = qr.r();
    let diag_max = r.diagonal().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if r.diagonal()
        .iter()
        .any(|v| v.abs() <= 1e-10 * diag_max.max(1.0))
    {
        return Err(Error::param(format!(
            "design matrix is rank deficient for {harmonics} harmonics on {n} points"
        )));
    }
    let q = qr.q();
    let solve = |y: DVector<f64>| -> DVector<f64> {
        r.solve_upper_triangular(&(q.transpose() * y))
            .expect("nonsingular triangle")
    };
    let re = solve(DVector::from_iterator(
        observed.len(),
        observed.iter().map(|&i| f.get(i).re),
    ));
    let im = solve(DVector::from_iterator(
        observed.len(),
        observed.iter().map(|&i| f.get(i).im),
    ));

    let mut g = f.values().to_vec();
    for &x in mask.indices() {
        let (mut vr, mut vi) = (0.0, 0.0);
        for j in 0..cols {
            let b = basis(x, j);
            vr += re[j] * b;
            vi += im[j] * b;
        }
        g[x] = Complex64::new(vr, vi);
    }
    Signal::time(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_of_a_line() {
        let f = Signal::from_real(&[1.0, 0.0, 3.0]).unwrap();
        let g = linear_interpolation(&f, &Mask::new(3, vec![1]).unwrap()).unwrap();
        assert_eq!(g.re(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn empty_mask_is_identity() {
        let f = Signal::from_real(&[1.0, 5.0, 3.0]).unwrap();
        assert_eq!(
            linear_interpolation(&f, &Mask::empty(3).unwrap()).unwrap(),
            f
        );
    }

    #[test]
    fn boundary_gaps_use_constant_extension() {
        let f = Signal::from_real(&[0.0, 0.0, 4.0, 5.0, 0.0]).unwrap();
        let g = linear_interpolation(&f, &Mask::new(5, vec![0, 1, 4]).unwrap()).unwrap();
        assert_eq!(g.re(), vec![4.0, 4.0, 4.0, 5.0, 5.0]);
    }

    #[test]
    fn cyclic_boundary_wraps() {
        // observed 1 -> 1.0 and 3 -> 3.0; wrap gap 4, 0 spans 3 -> 1 (+N)
        let f = Signal::from_real(&[0.0, 1.0, 0.0, 3.0, 0.0]).unwrap();
        let g =
            linear_interpolation_with(&f, &Mask::new(5, vec![0, 2, 4]).unwrap(), Boundary::Cyclic)
                .unwrap();
        let want = [5.0 / 3.0, 1.0, 2.0, 3.0, 7.0 / 3.0];
        for (a, b) in g.re().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_on_affine_interiors() {
        let f =
            Signal::from_real(&(0..20).map(|x| 2.5 * x as f64 - 7.0).collect::<Vec<_>>()).unwrap();
        let mask = Mask::new(20, vec![1, 2, 3, 7, 11, 12, 18]).unwrap();
        let g = linear_interpolation(&f, &mask).unwrap();
        for x in 0..20 {
            assert!((g.get(x) - f.get(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn trig_fit_recovers_a_harmonic() {
        let n = 16;
        let f = Signal::from_real(
            &(0..n)
                .map(|x| 2.0 * (2.0 * PI * x as f64 / n as f64).cos() + 0.5)
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let mask = Mask::new(n, vec![0, 3, 4, 5, 9, 10, 11, 12, 13]).unwrap();
        let g = trig_poly_regression(&f, &mask, 1).unwrap();
        for x in 0..n {
            assert!((g.get(x) - f.get(x)).norm() < 1e-8);
        }
    }

    #[test]
    fn trig_fit_constant_with_no_harmonics() {
        let f = Signal::from_real(&[3.0, 0.0, 3.0, 3.0]).unwrap();
        let g = trig_poly_regression(&f, &Mask::new(4, vec![1]).unwrap(), 0).unwrap();
        assert!((g.get(1).re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trig_fit_rejects_underdetermined() {
        let f = Signal::from_real(&[1.0; 8]).unwrap();
        let mask = Mask::new(8, vec![0, 1, 2, 3, 4]).unwrap();
        assert!(matches!(
            trig_poly_regression(&f, &mask, 2),
            Err(Error::Parameter(_))
        ));
        // 4 harmonics on 8 points: sin(pi x) vanishes on the integers
        assert!(trig_poly_regression(&f, &Mask::empty(8).unwrap(), 4).is_err());
    }

    #[test]
    fn default_harmonics_rule() {
        assert_eq!(default_harmonics(150), 15);
        assert_eq!(default_harmonics(5), 1);
        assert_eq!(default_harmonics(2), 0);
        assert_eq!(default_harmonics(1000), 100);
    }
}
