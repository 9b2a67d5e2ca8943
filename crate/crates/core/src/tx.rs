//! Low-complexity GFDM transmitter.
//!
//! The block DFT turns the modulation matrix into `N` independent
//! `M`-point circular convolutions. A block is modulated in two steps:
//!
//! 1. one `N`-point DFT across the subcarriers for each of the `M` time slots,
//! 2. one `M`-point circular convolution per polyphase branch `kappa`, whose
//!    output lands on samples `kappa, kappa + N, ..., kappa + (M-1)N`.
//!
//! The `1/sqrt(N)` of the normalized block DFT and the `sqrt(N)` of the
//! scaled polyphase filters cancel, so neither is applied at run time.

use num_complex::Complex64;

use crate::complexity::{cm_count, CmCount, CmTally, Technique, TracedRun, DEFAULT_I, DEFAULT_L};
use crate::config::{ComplexBlock, GfdmConfig};
use crate::dsp::{circ_conv_real, circ_conv_spectral, real_spectrum, Transform};
use crate::error::{GfdmError, Result};
use crate::prototype::PrototypeFilter;

/// Smallest power-of-two `M` at which [`ConvPath::Auto`] switches the
/// branch convolutions to the transform domain.
pub const SPECTRAL_CROSSOVER: usize = 8;

/// How the `M`-point branch convolutions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvPath {
    /// Time domain below [`SPECTRAL_CROSSOVER`] or for non-power-of-two
    /// `M`; transform domain otherwise.
    #[default]
    Auto,
    Time,
    Spectral,
}

impl ConvPath {
    pub(crate) fn use_spectral(self, m: usize) -> bool {
        match self {
            ConvPath::Auto => m.is_power_of_two() && m >= SPECTRAL_CROSSOVER,
            ConvPath::Time => false,
            ConvPath::Spectral => true,
        }
    }
}

/// Precomputed state for modulating blocks of one configuration.
#[derive(Debug, Clone)]
pub struct TxPlan {
    cfg: GfdmConfig,
    scaled_polyphase: Vec<Vec<f64>>,
    taps: Vec<Vec<f64>>,
    spectra: Option<Vec<Vec<Complex64>>>,
    dft_n: Transform,
    dft_m: Transform,
    cm_budget: CmCount,
    instrumented: bool,
}

impl TxPlan {
    pub fn new(cfg: GfdmConfig, filter: &PrototypeFilter) -> Result<Self> {
        Self::with_options(cfg, filter, ConvPath::Auto, false)
    }

    /// Plan whose runs record executed multiplications; see
    /// [`TxPlan::modulate_traced`].
    pub fn instrumented(cfg: GfdmConfig, filter: &PrototypeFilter) -> Result<Self> {
        Self::with_options(cfg, filter, ConvPath::Auto, true)
    }

    pub fn with_options(
        cfg: GfdmConfig,
        filter: &PrototypeFilter,
        path: ConvPath,
        instrumented: bool,
    ) -> Result<Self> {
        cfg.check_same_shape(filter.cfg())?;
        let (n, m) = (cfg.n(), cfg.m());
        let taps = (0..n)
            .map(|k| filter.polyphase_forward(k))
            .collect::<Result<Vec<_>>>()?;
        let root_n = (n as f64).sqrt();
        let scaled_polyphase = taps
            .iter()
            .map(|g| g.iter().map(|v| v * root_n).collect())
            .collect();
        let spectra = path.use_spectral(m).then(|| {
            taps.iter()
                .map(|g| real_spectrum(g).into_iter().map(|s| s / m as f64).collect())
                .collect()
        });
        Ok(Self {
            cfg,
            scaled_polyphase,
            taps,
            spectra,
            dft_n: Transform::new(n),
            dft_m: Transform::new(m),
            cm_budget: cm_count(Technique::ProposedTx, n, m, DEFAULT_L, DEFAULT_I)?,
            instrumented,
        })
    }

    pub fn cfg(&self) -> &GfdmConfig {
        &self.cfg
    }

    /// `sqrt(N) * g_kappa` for each branch.
    pub fn scaled_polyphase(&self) -> &[Vec<f64>] {
        &self.scaled_polyphase
    }

    /// Predicted cost of one [`TxPlan::modulate`] call.
    pub fn cm_budget(&self) -> CmCount {
        self.cm_budget
    }

    pub fn is_spectral(&self) -> bool {
        self.spectra.is_some()
    }

    /// `x = A d` for a subcarrier-major data block `d`.
    pub fn modulate(&self, d: &ComplexBlock) -> Result<ComplexBlock> {
        self.run(d, None)
    }

    /// Like [`TxPlan::modulate`], also returning the multiplication tally
    /// when the plan is instrumented.
    pub fn modulate_traced(&self, d: &ComplexBlock) -> Result<TracedRun> {
        let mut tally = CmTally::default();
        let output = self.run(d, self.instrumented.then_some(&mut tally))?;
        Ok(TracedRun {
            output,
            tally: self.instrumented.then_some(tally),
        })
    }

    fn run(&self, d: &ComplexBlock, mut tally: Option<&mut CmTally>) -> Result<ComplexBlock> {
        self.cfg.check_len(d.len())?;
        let (n, m) = (self.cfg.n(), self.cfg.m());
        let data = d.as_slice();

        // unnormalized DFT across subcarriers, grouped per output index
        let mut dbar = vec![Complex64::new(0.0, 0.0); n * m];
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for slot in 0..m {
            for (i, c) in column.iter_mut().enumerate() {
                *c = data[i * m + slot];
            }
            self.dft_n.forward(&mut column, tally.as_deref_mut());
            for (i, c) in column.iter().enumerate() {
                dbar[i * m + slot] = *c;
            }
        }

        let mut x = vec![Complex64::new(0.0, 0.0); n * m];
        let mut branch = vec![Complex64::new(0.0, 0.0); m];
        for kappa in 0..n {
            let src = &dbar[((n - kappa) % n) * m..][..m];
            match &self.spectra {
                Some(spectra) => {
                    branch.copy_from_slice(src);
                    circ_conv_spectral(&self.dft_m, &spectra[kappa], &mut branch, tally.as_deref_mut());
                }
                None => circ_conv_real(&self.taps[kappa], src, &mut branch, tally.as_deref_mut()),
            }
            for (k, v) in branch.iter().enumerate() {
                x[kappa + k * n] = *v;
            }
        }
        Ok(ComplexBlock::new(x))
    }
}

/// Normalized block DFT `F_b d`, grouped as `M` samples per output index.
pub fn block_dft(cfg: &GfdmConfig, d: &ComplexBlock) -> Result<ComplexBlock> {
    cfg.check_len(d.len())?;
    let (n, m) = (cfg.n(), cfg.m());
    let dft = Transform::new(n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = vec![Complex64::new(0.0, 0.0); n * m];
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for slot in 0..m {
        for (i, c) in column.iter_mut().enumerate() {
            *c = d[i * m + slot];
        }
        dft.forward(&mut column, None);
        for (i, c) in column.iter().enumerate() {
            out[i * m + slot] = c * scale;
        }
    }
    Ok(ComplexBlock::new(out))
}

/// Prepends the last `cp_len` samples of `x`.
pub fn add_cp(x: &ComplexBlock, cp_len: usize) -> Result<Vec<Complex64>> {
    let len = x.len();
    if cp_len >= len {
        return Err(GfdmError::CpOutOfRange {
            cp_len,
            block_len: len,
        });
    }
    let mut out = Vec::with_capacity(len + cp_len);
    out.extend_from_slice(&x.as_slice()[len - cp_len..]);
    out.extend_from_slice(x.as_slice());
    Ok(out)
}
