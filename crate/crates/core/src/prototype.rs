//! Prototype filters and their polyphase decomposition.
//!
//! Every generated prototype is real, has length `MN` and is scaled so that
//! `sum(g^2) = 1/N`. Filters are laid out with their peak at index 0 and are
//! circularly symmetric (`g[n] = g[MN - n]`), the usual GFDM convention.

use std::f64::consts::PI;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::GfdmConfig;
use crate::error::{GfdmError, Result};

/// Imaginary parts above this are rejected when importing custom taps.
const IMAG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FilterKind {
    /// Time-domain raised cosine with the given roll-off in `[0, 1]`,
    /// sampled at `t = (k + 1/2 - MN/2) / N` symbol periods. The half-sample
    /// offset keeps every tap off the pulse's zero crossings.
    RaisedCosine { rolloff: f64 },
    /// Rectangular spectrum exactly one subcarrier wide.
    Dirichlet,
    /// `[c, 0, ..., 0]`; the block degenerates to per-slot sums.
    UnitImpulse,
    Custom,
}

impl FilterKind {
    /// Tag stored in filter-bank files.
    pub fn tag(&self) -> u8 {
        match self {
            FilterKind::RaisedCosine { .. } => 0,
            FilterKind::Dirichlet => 1,
            FilterKind::UnitImpulse => 2,
            FilterKind::Custom => 3,
        }
    }

    /// Inverse of [`FilterKind::tag`]. The roll-off is not stored in files,
    /// so a raised-cosine tag decodes with a roll-off of NaN.
    pub fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => FilterKind::RaisedCosine { rolloff: f64::NAN },
            1 => FilterKind::Dirichlet,
            2 => FilterKind::UnitImpulse,
            3 => FilterKind::Custom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeFilter {
    cfg: GfdmConfig,
    coeffs: Vec<f64>,
    kind: FilterKind,
}

impl PrototypeFilter {
    /// Wraps real taps as given, without normalization.
    pub fn from_real_coeffs(cfg: GfdmConfig, coeffs: Vec<f64>) -> Result<Self> {
        cfg.check_len(coeffs.len()).map_err(|_| {
            GfdmError::InvalidFilter(format!(
                "expected {} taps, got {}",
                cfg.block_len(),
                coeffs.len()
            ))
        })?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GfdmError::InvalidFilter("non-finite tap".into()));
        }
        Ok(Self {
            cfg,
            coeffs,
            kind: FilterKind::Custom,
        })
    }

    pub fn cfg(&self) -> &GfdmConfig {
        &self.cfg
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Content hash of the taps and shape, used to key receiver caches.
    pub fn id(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.cfg.n().hash(&mut h);
        self.cfg.m().hash(&mut h);
        for c in &self.coeffs {
            c.to_bits().hash(&mut h);
        }
        h.finish()
    }

    /// Forward polyphase component `g_k = [g_k, g_{k+N}, ..., g_{k+(M-1)N}]`.
    pub fn polyphase_forward(&self, branch: usize) -> Result<Vec<f64>> {
        let n = self.cfg.n();
        if branch >= n {
            return Err(GfdmError::BranchOutOfRange {
                branch,
                n_subcarriers: n,
            });
        }
        Ok(self.coeffs.iter().skip(branch).step_by(n).copied().collect())
    }

    pub fn polyphase(&self, branch: usize) -> Result<PolyphaseComponent> {
        let forward = self.polyphase_forward(branch)?;
        let folded = fold(&forward);
        Ok(PolyphaseComponent {
            branch,
            forward,
            folded,
        })
    }
}

/// One polyphase branch of a prototype filter.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyphaseComponent {
    pub branch: usize,
    /// `[g_k, g_{k+N}, ..., g_{k+(M-1)N}]`.
    pub forward: Vec<f64>,
    /// Circular fold of `forward`: `[g_k, g_{k+(M-1)N}, ..., g_{k+N}]`.
    pub folded: Vec<f64>,
}

/// Circular fold `v[(M - k) mod M]`. An involution.
pub fn fold<T: Copy>(v: &[T]) -> Vec<T> {
    let m = v.len();
    (0..m).map(|k| v[(m - k) % m]).collect()
}

pub fn polyphase(filter: &PrototypeFilter, branch: usize) -> Result<PolyphaseComponent> {
    filter.polyphase(branch)
}

/// Builds a normalized prototype of the requested family.
///
/// `FilterKind::Custom` has no taps of its own; use [`make_custom`].
pub fn make_prototype(cfg: GfdmConfig, kind: FilterKind) -> Result<PrototypeFilter> {
    let len = cfg.block_len();
    let n = cfg.n();
    let raw: Vec<f64> = match kind {
        FilterKind::RaisedCosine { rolloff } => {
            if !(0.0..=1.0).contains(&rolloff) {
                return Err(GfdmError::InvalidFilter(format!(
                    "roll-off {rolloff} outside [0, 1]"
                )));
            }
            (0..len)
                .map(|k| raised_cosine((k as f64 + 0.5 - len as f64 / 2.0) / n as f64, rolloff))
                .collect()
        }
        FilterKind::Dirichlet => dirichlet(cfg),
        FilterKind::UnitImpulse => {
            let mut g = vec![0.0; len];
            g[0] = 1.0;
            g
        }
        FilterKind::Custom => {
            return Err(GfdmError::InvalidFilter(
                "custom prototypes need taps; use make_custom".into(),
            ))
        }
    };
    let mut filter = normalized(cfg, raw)?;
    filter.kind = kind;
    Ok(filter)
}

/// Imports custom taps, rejecting complex values, and normalizes them.
pub fn make_custom(cfg: GfdmConfig, taps: &[Complex64]) -> Result<PrototypeFilter> {
    if let Some(pos) = taps.iter().position(|t| t.im.abs() > IMAG_TOLERANCE) {
        return Err(GfdmError::InvalidFilter(format!(
            "tap {pos} has imaginary part {}; prototypes must be real",
            taps[pos].im
        )));
    }
    normalized(cfg, taps.iter().map(|t| t.re).collect())
}

fn normalized(cfg: GfdmConfig, raw: Vec<f64>) -> Result<PrototypeFilter> {
    let mut filter = PrototypeFilter::from_real_coeffs(cfg, raw)?;
    let energy = filter.energy();
    if energy <= 0.0 {
        return Err(GfdmError::InvalidFilter("all-zero prototype".into()));
    }
    let scale = (1.0 / (cfg.n() as f64 * energy)).sqrt();
    filter.coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(filter)
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// Raised-cosine pulse at `t` symbol periods.
fn raised_cosine(t: f64, rolloff: f64) -> f64 {
    let denom = 1.0 - (2.0 * rolloff * t).powi(2);
    if denom.abs() < 1e-12 {
        // removable singularity at |t| = 1 / (2 rolloff)
        PI / 4.0 * sinc(1.0 / (2.0 * rolloff))
    } else {
        sinc(t) * (PI * rolloff * t).cos() / denom
    }
}

/// Spectrum of `M` unit bins centred on DC (half-weight edge bins for even
/// `M`, which keeps the pulse real).
fn dirichlet(cfg: GfdmConfig) -> Vec<f64> {
    let len = cfg.block_len();
    let m = cfg.m() as i64;
    let bins: Vec<(i64, f64)> = if m % 2 == 1 {
        (-(m - 1) / 2..=(m - 1) / 2).map(|b| (b, 1.0)).collect()
    } else {
        (-m / 2..=m / 2)
            .map(|b| (b, if b.abs() == m / 2 { 0.5 } else { 1.0 }))
            .collect()
    };
    (0..len)
        .map(|k| {
            bins.iter()
                .map(|&(b, w)| w * (2.0 * PI * (b * k as i64) as f64 / len as f64).cos())
                .sum()
        })
        .collect()
}
