//! Multipath channel with cyclic prefix, AWGN, and frequency-domain
//! equalization.
//!
//! Noise comes from ChaCha8 seeded with [`ChannelSpec::seed`]. ChaCha is
//! counter based, so Monte Carlo trial `t` draws from its own stream
//! (`ChannelSpec::for_trial(t)`) and its noise does not depend on which
//! worker runs it or in what order.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};

use crate::config::ComplexBlock;
use crate::error::{GfdmError, Result};

/// Channel bins below this magnitude cannot be equalized.
pub const NULL_BIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    taps: Vec<Complex64>,
    sigma2: f64,
    seed: u64,
    stream: u64,
}

impl ChannelSpec {
    pub fn new(taps: Vec<Complex64>, sigma2: f64, seed: u64) -> Result<Self> {
        if taps.is_empty() {
            return Err(GfdmError::InvalidConfig("channel needs at least one tap".into()));
        }
        if taps.iter().any(|t| !(t.re.is_finite() && t.im.is_finite())) {
            return Err(GfdmError::InvalidConfig("non-finite channel tap".into()));
        }
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(GfdmError::InvalidConfig(format!("noise variance {sigma2} must be >= 0")));
        }
        Ok(Self {
            taps,
            sigma2,
            seed,
            stream: 0,
        })
    }

    /// Single unit tap: pure AWGN.
    pub fn awgn(sigma2: f64, seed: u64) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0)], sigma2, seed)
    }

    /// Scales the taps to unit energy.
    pub fn with_unit_energy(mut self) -> Result<Self> {
        let e: f64 = self.taps.iter().map(|t| t.norm_sqr()).sum();
        if e == 0.0 {
            return Err(GfdmError::InvalidConfig("all-zero channel".into()));
        }
        let s = 1.0 / e.sqrt();
        self.taps.iter_mut().for_each(|t| *t *= s);
        Ok(self)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(GfdmError::InvalidConfig(format!("noise variance {sigma2} must be >= 0")));
        }
        self.sigma2 = sigma2;
        Ok(self)
    }

    /// The same channel drawing noise from substream `trial`.
    pub fn for_trial(&self, trial: u64) -> Self {
        Self {
            stream: trial,
            ..self.clone()
        }
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Named unit-energy tap profiles.
pub fn preset(name: &str) -> Option<Vec<Complex64>> {
    let real = |v: &[f64]| -> Vec<Complex64> {
        let e: f64 = v.iter().map(|x| x * x).sum();
        v.iter().map(|x| Complex64::new(x / e.sqrt(), 0.0)).collect()
    };
    match name {
        "awgn" | "flat" => Some(real(&[1.0])),
        "two-ray" => Some(real(&[1.0, 0.5])),
        // exponential power-delay profile, 3 dB per tap
        "exp4" => Some(real(&[1.0, 0.5f64.sqrt(), 0.5, 0.125f64.sqrt()])),
        _ => None,
    }
}

/// Parses a tap list: one `re im` (or `re,im`) pair per line, `#` starts a
/// comment.
pub fn parse_taps(text: &str) -> Result<Vec<Complex64>> {
    let mut taps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| GfdmError::InvalidConfig(format!("tap line {}: '{s}' is not a number", lineno + 1)))
        };
        match parts.as_slice() {
            [re, im] => taps.push(Complex64::new(parse(re)?, parse(im)?)),
            _ => {
                return Err(GfdmError::InvalidConfig(format!(
                    "tap line {}: expected two numbers",
                    lineno + 1
                )))
            }
        }
    }
    if taps.is_empty() {
        return Err(GfdmError::InvalidConfig("tap list is empty".into()));
    }
    Ok(taps)
}

/// Resolves a preset name or reads a tap file.
pub fn load_taps(preset_or_path: &str) -> Result<Vec<Complex64>> {
    if let Some(taps) = preset(preset_or_path) {
        return Ok(taps);
    }
    let text = std::fs::read_to_string(Path::new(preset_or_path))
        .map_err(|e| GfdmError::Io(format!("channel '{preset_or_path}': {e}")))?;
    parse_taps(&text)
}

/// Passes a CP-extended block through the channel: linear convolution with
/// the taps, truncated to the input length, plus complex Gaussian noise of
/// variance `sigma2` per sample.
///
/// The channel memory (taps - 1) must fit inside the cyclic prefix.
pub fn transmit_through(spec: &ChannelSpec, x_cp: &[Complex64], cp_len: usize) -> Result<Vec<Complex64>> {
    let taps = spec.taps();
    if taps.len() - 1 > cp_len {
        return Err(GfdmError::CpShorterThanChannel {
            taps: taps.len(),
            cp_len,
        });
    }
    let mut out: Vec<Complex64> = (0..x_cp.len())
        .map(|k| {
            taps.iter()
                .enumerate()
                .take(k + 1)
                .map(|(j, h)| h * x_cp[k - j])
                .sum()
        })
        .collect();
    if spec.sigma2() > 0.0 {
        let std = (spec.sigma2() / 2.0).sqrt();
        let mut rng = spec.rng();
        for s in out.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *s += Complex64::new(re * std, im * std);
        }
    }
    Ok(out)
}

/// Drops the first `cp_len` samples.
pub fn remove_cp(r_cp: &[Complex64], cp_len: usize) -> Result<ComplexBlock> {
    if cp_len >= r_cp.len() {
        return Err(GfdmError::LengthMismatch {
            expected: cp_len + 1,
            actual: r_cp.len(),
        });
    }
    Ok(ComplexBlock::new(r_cp[cp_len..].to_vec()))
}

/// One-tap-per-bin equalizer for a fixed block length.
#[derive(Clone)]
pub struct FdEqualizer {
    inverse_response: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FdEqualizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FdEqualizer")
            .field("len", &self.inverse_response.len())
            .finish()
    }
}

impl FdEqualizer {
    pub fn new(spec: &ChannelSpec, block_len: usize) -> Result<Self> {
        let taps = spec.taps();
        if taps.len() > block_len {
            return Err(GfdmError::InvalidConfig(format!(
                "{} channel taps exceed the block length {block_len}",
                taps.len()
            )));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(block_len);
        let inverse = planner.plan_fft_inverse(block_len);
        let mut h = vec![Complex64::new(0.0, 0.0); block_len];
        h[..taps.len()].copy_from_slice(taps);
        forward.process(&mut h);
        let nulls: Vec<usize> = h
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() < NULL_BIN)
            .map(|(k, _)| k)
            .collect();
        if !nulls.is_empty() {
            return Err(GfdmError::SingularChannel { bins: nulls });
        }
        let scale = 1.0 / block_len as f64;
        let inverse_response = h.iter().map(|v| scale / v).collect();
        Ok(Self {
            inverse_response,
            forward,
            inverse,
        })
    }

    pub fn equalize(&self, r: &ComplexBlock) -> Result<ComplexBlock> {
        if r.len() != self.inverse_response.len() {
            return Err(GfdmError::LengthMismatch {
                expected: self.inverse_response.len(),
                actual: r.len(),
            });
        }
        let mut buf = r.as_slice().to_vec();
        self.forward.process(&mut buf);
        for (b, h) in buf.iter_mut().zip(&self.inverse_response) {
            *b *= h;
        }
        self.inverse.process(&mut buf);
        Ok(ComplexBlock::new(buf))
    }
}

/// `y = F^H H^-1 F r`.
pub fn fde(r: &ComplexBlock, spec: &ChannelSpec) -> Result<ComplexBlock> {
    FdEqualizer::new(spec, r.len())?.equalize(r)
}
