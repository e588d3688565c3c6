//! Closed-form proximal maps and projections used by the splitting solver.

use num_complex::Complex64;

/// Complex soft-thresholding, the proximal map of `gamma * |z|`.
///
/// Keeps the phase of `z` and shrinks its modulus to `max(|z| - gamma, 0)`.
#[inline]
pub fn soft_threshold(z: Complex64, gamma: f64) -> Complex64 {
    let m = z.norm();
    if m <= gamma {
        Complex64::new(0.0, 0.0)
    } else {
        z * (1.0 - gamma / m)
    }
}

/// Euclidean projection of `v` onto `{m >= 0 : sum(m) <= radius}`.
///
/// Uses the sort-based simplex projection when the clipped vector lies
/// outside the ball.
pub fn project_capped_simplex(v: &[f64], radius: f64) -> Vec<f64> {
    assert!(radius >= 0.0, "radius must be nonnegative");
    let clipped: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= radius {
        return clipped;
    }
    if radius == 0.0 {
        return vec![0.0; v.len()];
    }
    let mut sorted = clipped.clone();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - radius) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    clipped.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection of a complex vector onto the `l1` ball `{d : sum |d_i| <= radius}`.
///
/// Moduli are projected with [`project_capped_simplex`]; phases are kept.
pub fn project_l1_ball(d: &[Complex64], radius: f64) -> Vec<Complex64> {
    let mags: Vec<f64> = d.iter().map(|z| z.norm()).collect();
    if mags.iter().sum::<f64>() <= radius {
        return d.to_vec();
    }
    let shrunk = project_capped_simplex(&mags, radius);
    d.iter()
        .zip(mags.iter().zip(&shrunk))
        .map(|(z, (&m, &s))| {
            if m > 0.0 {
                z * (s / m)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}
