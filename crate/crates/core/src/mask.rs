//! Sets of missing indices and the random models used to draw them.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::MaskRng;
use crate::spectral::Signal;

/// A subset `M` of `Z_N` marking unobserved samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    n: usize,
    indices: Vec<usize>,
}

impl Mask {
    /// Builds a mask from arbitrary-order indices. Duplicates and
    /// out-of-range entries are rejected.
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("mask length must be positive"));
        }
        indices.sort_unstable();
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::param(format!(
                    "mask index {last} out of range for n={n}"
                )));
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("mask indices must be distinct"));
        }
        Ok(Mask { n, indices })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Length of the underlying series.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Missing indices, strictly increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `|M|`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Observed indices `M^c`, increasing.
    pub fn complement(&self) -> Vec<usize> {
        let missing = self.membership();
        (0..self.n).filter(|&i| !missing[i]).collect()
    }

    /// `|M^c|`.
    pub fn observed_len(&self) -> usize {
        self.n - self.indices.len()
    }

    /// Dense boolean view: `true` at missing positions.
    pub fn membership(&self) -> Vec<bool> {
        let mut v = vec![false; self.n];
        for &i in &self.indices {
            v[i] = true;
        }
        v
    }

    /// Text form: a `# n=<N>` header followed by one index per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# n={}\n", self.n);
        for i in &self.indices {
            let _ = writeln!(out, "{i}");
        }
        out
    }

    /// Parses the format written by [`Mask::to_text`]. Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut indices = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("n=") {
                    let parsed = v.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        message: format!("bad n: {e}"),
                    })?;
                    n = Some(parsed);
                }
                continue;
            }
            let idx = line.parse::<usize>().map_err(|e| Error::Parse {
                line: lineno + 1,
                message: format!("bad index {line:?}: {e}"),
            })?;
            indices.push(idx);
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            message: "missing `# n=<N>` header".into(),
        })?;
        Mask::new(n, indices)
    }
}

/// Result of a generic draw together with how many degenerate draws
/// (empty or full) were discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskDraw {
    pub mask: Mask,
    pub redraws: usize,
}

/// Generic random mask: every index is missing independently with
/// probability `p`.
///
/// One uniform is consumed per index, in index order; index `x` is missing
/// when its uniform is `< p`. Draws that come out empty or equal to all of
/// `Z_N` are discarded and the stream continues.
pub fn generic_mask(n: usize, p: f64, seed: u64) -> Result<MaskDraw> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!(
            "inclusion probability must lie in (0,1), got {p}"
        )));
    }
    if n < 2 {
        return Err(Error::param("a nontrivial mask needs n >= 2"));
    }
    let mut rng = MaskRng::new(seed);
    let mut redraws = 0;
    loop {
        let indices: Vec<usize> = (0..n).filter(|_| rng.next_f64() < p).collect();
        if !indices.is_empty() && indices.len() < n {
            return Ok(MaskDraw {
                mask: Mask { n, indices },
                redraws,
            });
        }
        redraws += 1;
    }
}

/// Uniformly random mask of exactly `size` indices (partial Fisher–Yates).
///
/// Position `i` (for `i < size`) of the identity permutation is swapped with
/// position `i + below(n - i)`; the first `size` entries, sorted, form the
/// mask.
pub fn uniform_mask(n: usize, size: usize, seed: u64) -> Result<Mask> {
    if size == 0 || size >= n {
        return Err(Error::param(format!(
            "mask size must lie in [1, n-1], got {size} for n={n}"
        )));
    }
    let mut rng = MaskRng::new(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = i + rng.below((n - i) as u64) as usize;
        perm.swap(i, j);
    }
    perm.truncate(size);
    perm.sort_unstable();
    Ok(Mask { n, indices: perm })
}

/// Splits a series with gaps into a signal (zeros at the gaps) and the mask
/// of gap positions.
pub fn mask_from_missing_values(series: &[Option<f64>]) -> Result<(Signal, Mask)> {
    if series.is_empty() {
        return Err(Error::data("empty series"));
    }
    if series.iter().all(Option::is_none) {
        return Err(Error::data("every value is missing"));
    }
    let mut missing = Vec::new();
    let values = series
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Some(x) => Complex64::new(*x, 0.0),
            None => {
                missing.push(i);
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((
        Signal::time(values)?,
        Mask {
            n: series.len(),
            indices: missing,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_is_deterministic() {
        let a = generic_mask(100, 0.3, 1).unwrap();
        let b = generic_mask(100, 0.3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.mask, generic_mask(100, 0.3, 2).unwrap().mask);
    }

    #[test]
    fn generic_rejects_bad_parameters() {
        assert!(generic_mask(1, 0.5, 0).is_err());
        assert!(generic_mask(10, 0.0, 0).is_err());
        assert!(generic_mask(10, 1.0, 0).is_err());
        assert!(generic_mask(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn generic_redraws_degenerate_sets() {
        // With p tiny and n small nearly every draw is empty.
        let d = generic_mask(3, 1e-3, 9).unwrap();
        assert!(!d.mask.is_empty() && d.mask.len() < 3);
        assert!(d.redraws > 0);
    }

    #[test]
    fn uniform_has_requested_size() {
        let m = uniform_mask(100, 10, 3).unwrap();
        assert_eq!(m.len(), 10);
        assert!(m.indices().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(m, uniform_mask(100, 10, 3).unwrap());
        assert!(uniform_mask(5, 5, 0).is_err());
        assert!(uniform_mask(5, 0, 0).is_err());
    }

    #[test]
    fn missing_values_become_mask() {
        let (sig, m) = mask_from_missing_values(&[Some(1.0), None, Some(3.0)]).unwrap();
        assert_eq!(m.indices(), &[1]);
        assert_eq!(sig.re(), vec![1.0, 0.0, 3.0]);

        let (_, m) = mask_from_missing_values(&[Some(1.0), Some(2.0)]).unwrap();
        assert!(m.is_empty());

        assert!(matches!(
            mask_from_missing_values(&[None, None]),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn constructor_validates() {
        assert!(Mask::new(4, vec![4]).is_err());
        assert!(Mask::new(4, vec![1, 1]).is_err());
        assert_eq!(Mask::new(4, vec![3, 0]).unwrap().indices(), &[0, 3]);
        assert_eq!(
            Mask::new(5, vec![1, 3]).unwrap().complement(),
            vec![0, 2, 4]
        );
    }

    #[test]
    fn text_format() {
        let m = Mask::new(6, vec![0, 4]).unwrap();
        assert_eq!(m.to_text(), "# n=6\n0\n4\n");
        assert_eq!(Mask::from_text(&m.to_text()).unwrap(), m);
        assert!(Mask::from_text("0\n1\n").is_err());
        assert!(Mask::from_text("# n=3\nx\n").is_err());
    }
}
