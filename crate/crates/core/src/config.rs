use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GfdmError, Result};

/// System parameters of one GFDM block.
///
/// A block carries `n_subcarriers * overlap_factor` data symbols and is
/// `n_subcarriers * overlap_factor` samples long, preceded by `cp_len`
/// samples of cyclic prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GfdmConfig {
    n_subcarriers: usize,
    overlap_factor: usize,
    cp_len: usize,
}

impl GfdmConfig {
    pub fn new(n_subcarriers: usize, overlap_factor: usize, cp_len: usize) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(GfdmError::InvalidConfig("N must be at least 1".into()));
        }
        if overlap_factor == 0 {
            return Err(GfdmError::InvalidConfig("M must be at least 1".into()));
        }
        let block_len = n_subcarriers
            .checked_mul(overlap_factor)
            .ok_or_else(|| GfdmError::InvalidConfig("N*M overflows".into()))?;
        if cp_len >= block_len {
            return Err(GfdmError::CpOutOfRange { cp_len, block_len });
        }
        Ok(Self {
            n_subcarriers,
            overlap_factor,
            cp_len,
        })
    }

    /// N.
    pub fn n(&self) -> usize {
        self.n_subcarriers
    }

    /// M.
    pub fn m(&self) -> usize {
        self.overlap_factor
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    /// MN, the number of samples (and data symbols) in one block.
    pub fn block_len(&self) -> usize {
        self.n_subcarriers * self.overlap_factor
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.block_len() {
            return Err(GfdmError::LengthMismatch {
                expected: self.block_len(),
                actual: len,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_shape(&self, other: &GfdmConfig) -> Result<()> {
        if self.n() != other.n() || self.m() != other.m() {
            return Err(GfdmError::ConfigMismatch {
                expected_n: self.n(),
                expected_m: self.m(),
                n: other.n(),
                m: other.m(),
            });
        }
        Ok(())
    }
}

/// A block of MN complex samples.
///
/// Data blocks `d` are subcarrier-major: element `i*M + m` is the symbol
/// sent on subcarrier `i` in time slot `m`. Time-domain blocks `x` and `y`
/// are in natural sample order. Intermediate per-branch vectors (the block
/// DFT output and the receiver branch outputs) are grouped branch-major,
/// `M` samples per branch.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexBlock {
    samples: Vec<Complex64>,
}

impl ComplexBlock {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Standard basis vector `e_k` of length `len`.
    pub fn unit(len: usize, k: usize) -> Self {
        let mut b = Self::zeros(len);
        b.samples[k] = Complex64::new(1.0, 0.0);
        b
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Largest elementwise distance to `other`. Blocks of different length
    /// are infinitely far apart.
    pub fn max_abs_diff(&self, other: &ComplexBlock) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// The `M` samples `[x_k, x_{k+N}, ..., x_{k+(M-1)N}]` of a
    /// sample-ordered block.
    pub fn decimated(&self, k: usize, n: usize) -> Vec<Complex64> {
        self.samples.iter().skip(k).step_by(n).copied().collect()
    }
}

impl From<Vec<Complex64>> for ComplexBlock {
    fn from(samples: Vec<Complex64>) -> Self {
        Self::new(samples)
    }
}

impl std::ops::Index<usize> for ComplexBlock {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.samples[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_sizes() {
        assert!(GfdmConfig::new(0, 3, 0).is_err());
        assert!(GfdmConfig::new(4, 0, 0).is_err());
        assert_eq!(
            GfdmConfig::new(4, 3, 12),
            Err(GfdmError::CpOutOfRange {
                cp_len: 12,
                block_len: 12
            })
        );
        let cfg = GfdmConfig::new(4, 3, 11).unwrap();
        assert_eq!(cfg.block_len(), 12);
    }

    #[test]
    fn decimation_picks_every_nth_sample() {
        let b = ComplexBlock::new((0..12).map(|k| Complex64::new(k as f64, 0.0)).collect());
        let got: Vec<f64> = b.decimated(1, 4).iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 5.0, 9.0]);
    }
}
