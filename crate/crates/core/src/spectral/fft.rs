//! In-place unitary FFT for arbitrary lengths.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley–Tukey kernel. Every
//! other length goes through Bluestein's chirp-z reformulation, which turns
//! the length-`n` transform into a circular convolution evaluated with a
//! power-of-two kernel of length `m >= 2n - 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Values of the standard character `chi(s) = exp(2*pi*i*s/n)` for
/// `s = 0..n`.
pub fn character_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|s| Complex64::from_polar(1.0, 2.0 * PI * s as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    /// `exp(-2*pi*i*k/n)` for `k < n/2`.
    twiddles: Vec<Complex64>,
    bit_rev: Vec<usize>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let chars = character_table(n);
        // chi(-k) = conj(chi(k))
        let twiddles = chars[..n / 2].iter().map(|c| c.conj()).collect();
        let bits = n.trailing_zeros();
        let bit_rev = (0..n)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Radix2 {
            n,
            twiddles,
            bit_rev,
        }
    }

    /// Unnormalized forward transform, `X[k] = sum_j x[j] exp(-2 pi i jk/n)`.
    fn forward(&self, buf: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let j = self.bit_rev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }

    /// Unnormalized inverse, `x[j] = sum_k X[k] exp(+2 pi i jk/n)`.
    fn backward(&self, buf: &mut [Complex64]) {
        buf.iter_mut().for_each(|z| *z = z.conj());
        self.forward(buf);
        buf.iter_mut().for_each(|z| *z = z.conj());
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    n: usize,
    inner: Radix2,
    /// `exp(-pi*i*j^2/n)` for `j < n`.
    chirp: Vec<Complex64>,
    /// Forward transform of the conjugate chirp, wrapped to length `m`.
    kernel_hat: Vec<Complex64>,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let inner = Radix2::new(m);
        // j^2 is reduced mod 2n before the angle is formed; otherwise the
        // phase loses precision for large j.
        let two_n = 2 * n as u128;
        let chirp: Vec<Complex64> = (0..n)
            .map(|j| {
                let r = (j as u128 * j as u128) % two_n;
                Complex64::from_polar(1.0, -PI * r as f64 / n as f64)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for j in 1..n {
            kernel[j] = chirp[j].conj();
            kernel[m - j] = chirp[j].conj();
        }
        inner.forward(&mut kernel);
        Bluestein {
            n,
            inner,
            chirp,
            kernel_hat: kernel,
        }
    }

    fn forward(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let m = self.inner.n;
        scratch.clear();
        scratch.resize(m, Complex64::new(0.0, 0.0));
        for j in 0..self.n {
            scratch[j] = buf[j] * self.chirp[j];
        }
        self.inner.forward(scratch);
        for (s, k) in scratch.iter_mut().zip(&self.kernel_hat) {
            *s *= k;
        }
        self.inner.backward(scratch);
        let inv_m = 1.0 / m as f64;
        for k in 0..self.n {
            buf[k] = scratch[k] * self.chirp[k] * inv_m;
        }
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// A reusable plan for the unitary DFT of a fixed length.
///
/// Both directions carry the symmetric `n^{-1/2}` factor, so the transform is
/// an isometry of `C^n`.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    scale: f64,
    kernel: Kernel,
}

impl FftPlan {
    /// Builds a plan for length `n`. Panics if `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "FFT length must be positive");
        let kernel = if n.is_power_of_two() {
            Kernel::Radix2(Radix2::new(n))
        } else {
            Kernel::Bluestein(Bluestein::new(n))
        };
        FftPlan {
            n,
            scale: 1.0 / (n as f64).sqrt(),
            kernel,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward unitary transform in place:
    /// `X[w] = n^{-1/2} sum_x x[x] exp(-2 pi i w x / n)`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        match &self.kernel {
            Kernel::Radix2(r) => r.forward(buf),
            Kernel::Bluestein(b) => b.forward(buf, &mut Vec::new()),
        }
        let s = self.scale;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// Inverse unitary transform in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        buf.iter_mut().for_each(|z| *z = z.conj());
        self.forward(buf);
        buf.iter_mut().for_each(|z| *z = z.conj());
    }

    /// Like [`FftPlan::forward`], reusing `scratch` for the Bluestein
    /// convolution buffer.
    pub fn forward_with_scratch(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        match &self.kernel {
            Kernel::Radix2(r) => r.forward(buf),
            Kernel::Bluestein(b) => b.forward(buf, scratch),
        }
        let s = self.scale;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    pub fn inverse_with_scratch(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        buf.iter_mut().for_each(|z| *z = z.conj());
        self.forward_with_scratch(buf, scratch);
        buf.iter_mut().for_each(|z| *z = z.conj());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        let s = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|w| {
                x.iter()
                    .enumerate()
                    .map(|(t, v)| {
                        let ang = -2.0 * PI * ((w * t) % n) as f64 / n as f64;
                        v * Complex64::from_polar(1.0, ang)
                    })
                    .sum::<Complex64>()
                    * s
            })
            .collect()
    }

    fn ramp(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new(i as f64 * 0.37 - 1.0, (i * i % 7) as f64))
            .collect()
    }

    #[test]
    fn characters_have_unit_modulus() {
        for n in [1, 2, 3, 8, 300, 1024] {
            for c in character_table(n) {
                assert!((c.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn radix2_and_bluestein_match_direct() {
        for n in [1, 2, 3, 4, 5, 7, 12, 16, 31, 64, 100, 300] {
            let x = ramp(n);
            let mut y = x.clone();
            FftPlan::new(n).forward(&mut y);
            let want = direct(&x);
            let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for (a, b) in y.iter().zip(&want) {
                assert!((a - b).norm() <= 1e-12 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        for n in [1, 6, 128, 300] {
            let x = ramp(n);
            let plan = FftPlan::new(n);
            let mut y = x.clone();
            plan.forward(&mut y);
            plan.inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a - b).norm() < 1e-11);
            }
        }
    }
}
