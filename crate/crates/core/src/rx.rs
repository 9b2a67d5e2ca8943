//! Unified low-complexity MF / ZF / MMSE receiver.
//!
//! All three detectors share one structure. Output branch `i` circularly
//! filters the decimated input `y_kappa = [y_kappa, y_{kappa+N}, ...]`,
//! `kappa = (N - i) mod N`, with an `M`-tap filter that depends on the
//! mode; `M` inverse `N`-point DFTs across the branches then give the data
//! estimate. Only the branch filters differ:
//!
//! * MF: `v_kappa = sqrt(N) * gfold_kappa`
//! * ZF: `q_kappa = circ(g_kappa)^-1 e_0 / sqrt(N)`
//! * MMSE: `p_kappa` with spectrum `sqrt(N) G* / (N |G|^2 + s)`, where `G` is
//!   the unnormalized `M`-point spectrum of `g_kappa` and `s` the noise
//!   variance.

use std::collections::VecDeque;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complexity::{CmTally, TracedRun};
use crate::config::{ComplexBlock, GfdmConfig};
use crate::dsp::{circ_conv_real, circ_conv_spectral, naive_dft, real_spectrum, Transform};
use crate::error::{GfdmError, Result};
use crate::prototype::{fold, FilterKind, PrototypeFilter};
use crate::tx::ConvPath;

/// Polyphase spectral bins below this magnitude make ZF undefined.
pub const SINGULAR_BIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReceiverMode {
    Mf,
    Zf,
    Mmse,
}

impl ReceiverMode {
    pub fn tag(&self) -> u8 {
        match self {
            ReceiverMode::Mf => 0,
            ReceiverMode::Zf => 1,
            ReceiverMode::Mmse => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(ReceiverMode::Mf),
            1 => Some(ReceiverMode::Zf),
            2 => Some(ReceiverMode::Mmse),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReceiverMode::Mf => "mf",
            ReceiverMode::Zf => "zf",
            ReceiverMode::Mmse => "mmse",
        }
    }
}

impl std::str::FromStr for ReceiverMode {
    type Err = GfdmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mf" => Ok(ReceiverMode::Mf),
            "zf" => Ok(ReceiverMode::Zf),
            "mmse" => Ok(ReceiverMode::Mmse),
            other => Err(GfdmError::InvalidConfig(format!("unknown receiver mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    /// Real taps, already divided by `sqrt(N)`.
    Real(Vec<Vec<f64>>),
    /// Spectra, already divided by `M sqrt(N)`.
    Spectral(Vec<Vec<Complex64>>),
}

/// Branch filters of one receiver mode.
#[derive(Debug, Clone)]
pub struct ReceiverFilterBank {
    cfg: GfdmConfig,
    mode: ReceiverMode,
    sigma2: f64,
    filter_kind: FilterKind,
    branch_filters: Vec<Vec<Complex64>>,
    kernel: Kernel,
    dft_n: Transform,
    dft_m: Option<Transform>,
    instrumented: bool,
}

impl PartialEq for ReceiverFilterBank {
    fn eq(&self, other: &Self) -> bool {
        self.cfg.n() == other.cfg.n()
            && self.cfg.m() == other.cfg.m()
            && self.mode == other.mode
            && self.sigma2.to_bits() == other.sigma2.to_bits()
            && self.filter_kind.tag() == other.filter_kind.tag()
            && self.branch_filters == other.branch_filters
    }
}

/// Builds the branch filters for `mode`. `sigma2` is only used by MMSE.
pub fn build_filter_bank(
    filter: &PrototypeFilter,
    cfg: &GfdmConfig,
    mode: ReceiverMode,
    sigma2: f64,
) -> Result<ReceiverFilterBank> {
    cfg.check_same_shape(filter.cfg())?;
    if !(sigma2.is_finite() && sigma2 >= 0.0) {
        return Err(GfdmError::InvalidConfig(format!("noise variance {sigma2} must be >= 0")));
    }
    let (n, m) = (cfg.n(), cfg.m());
    let root_n = (n as f64).sqrt();
    let polyphase: Vec<Vec<f64>> = (0..n)
        .map(|k| filter.polyphase_forward(k))
        .collect::<Result<_>>()?;

    let branch_filters: Vec<Vec<Complex64>> = match mode {
        ReceiverMode::Mf => polyphase
            .iter()
            .map(|g| fold(g).into_iter().map(|v| Complex64::new(root_n * v, 0.0)).collect())
            .collect(),
        ReceiverMode::Zf | ReceiverMode::Mmse => {
            let spectra: Vec<Vec<Complex64>> = polyphase.iter().map(|g| real_spectrum(g)).collect();
            let regularization = if mode == ReceiverMode::Zf { 0.0 } else { sigma2 };
            if regularization == 0.0 {
                let singular: Vec<usize> = spectra
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.iter().any(|b| b.norm() < SINGULAR_BIN))
                    .map(|(k, _)| k)
                    .collect();
                if !singular.is_empty() {
                    return Err(GfdmError::SingularPolyphase { branches: singular });
                }
            }
            let dft_m = Transform::new(m);
            spectra
                .iter()
                .map(|spec| {
                    let mut p: Vec<Complex64> = spec
                        .iter()
                        .map(|&g| root_n * g.conj() / (n as f64 * g.norm_sqr() + regularization))
                        .collect();
                    dft_m.inverse(&mut p, None);
                    p.iter_mut().for_each(|v| *v /= m as f64);
                    if mode == ReceiverMode::Zf {
                        // q is real for real prototypes; drop rounding residue
                        p.iter_mut().for_each(|v| v.im = 0.0);
                    }
                    p
                })
                .collect()
        }
    };
    Ok(ReceiverFilterBank::from_parts(
        *cfg,
        mode,
        if mode == ReceiverMode::Mmse { sigma2 } else { 0.0 },
        filter.kind(),
        branch_filters,
    ))
}

impl ReceiverFilterBank {
    fn from_parts(
        cfg: GfdmConfig,
        mode: ReceiverMode,
        sigma2: f64,
        filter_kind: FilterKind,
        branch_filters: Vec<Vec<Complex64>>,
    ) -> Self {
        Self::with_path(cfg, mode, sigma2, filter_kind, branch_filters, ConvPath::Auto)
    }

    fn with_path(
        cfg: GfdmConfig,
        mode: ReceiverMode,
        sigma2: f64,
        filter_kind: FilterKind,
        branch_filters: Vec<Vec<Complex64>>,
        path: ConvPath,
    ) -> Self {
        let (n, m) = (cfg.n(), cfg.m());
        let root_n = (n as f64).sqrt();
        let spectral = mode == ReceiverMode::Mmse || path.use_spectral(m);
        let kernel = if spectral {
            let dft = Transform::new(m);
            Kernel::Spectral(
                branch_filters
                    .iter()
                    .map(|f| {
                        let mut s = f.clone();
                        dft.forward(&mut s, None);
                        s.into_iter().map(|v| v / (m as f64 * root_n)).collect()
                    })
                    .collect(),
            )
        } else {
            Kernel::Real(
                branch_filters
                    .iter()
                    .map(|f| f.iter().map(|v| v.re / root_n).collect())
                    .collect(),
            )
        };
        // MMSE below the crossover evaluates its transforms directly
        let dft_m = match &kernel {
            Kernel::Spectral(_) if mode != ReceiverMode::Mmse || path.use_spectral(m) => Some(Transform::new(m)),
            _ => None,
        };
        Self {
            cfg,
            mode,
            sigma2,
            filter_kind,
            branch_filters,
            kernel,
            dft_n: Transform::new(n),
            dft_m,
            instrumented: false,
        }
    }

    /// Same bank, with every branch convolution forced onto `path` (MMSE
    /// always filters in the transform domain).
    pub fn with_conv_path(self, path: ConvPath) -> Self {
        let instrumented = self.instrumented;
        let mut out = Self::with_path(self.cfg, self.mode, self.sigma2, self.filter_kind, self.branch_filters, path);
        out.instrumented = instrumented;
        out
    }

    /// Enables multiplication counting for [`ReceiverFilterBank::demodulate_traced`].
    pub fn with_instrumentation(mut self) -> Self {
        self.instrumented = true;
        self
    }

    pub fn cfg(&self) -> &GfdmConfig {
        &self.cfg
    }

    pub fn mode(&self) -> ReceiverMode {
        self.mode
    }

    /// Noise variance the bank was built for; 0 for MF and ZF.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn filter_kind(&self) -> FilterKind {
        self.filter_kind
    }

    /// `v_kappa`, `q_kappa` or `p_kappa`, indexed by `kappa`.
    pub fn branch_filters(&self) -> &[Vec<Complex64>] {
        &self.branch_filters
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.kernel, Kernel::Spectral(_))
    }

    pub fn demodulate(&self, y: &ComplexBlock) -> Result<ComplexBlock> {
        self.run(y, None)
    }

    pub fn demodulate_traced(&self, y: &ComplexBlock) -> Result<TracedRun> {
        let mut tally = CmTally::default();
        let output = self.run(y, self.instrumented.then_some(&mut tally))?;
        Ok(TracedRun {
            output,
            tally: self.instrumented.then_some(tally),
        })
    }

    fn run(&self, y: &ComplexBlock, mut tally: Option<&mut CmTally>) -> Result<ComplexBlock> {
        self.cfg.check_len(y.len())?;
        let (n, m) = (self.cfg.n(), self.cfg.m());

        // branch outputs, grouped per output index i
        let mut stacked = vec![Complex64::new(0.0, 0.0); n * m];
        for (i, out) in stacked.chunks_mut(m).enumerate() {
            let kappa = (n - i) % n;
            let input = y.decimated(kappa, n);
            match &self.kernel {
                Kernel::Real(taps) => circ_conv_real(&taps[kappa], &input, out, tally.as_deref_mut()),
                Kernel::Spectral(spectra) => {
                    out.copy_from_slice(&input);
                    match &self.dft_m {
                        Some(dft) => circ_conv_spectral(dft, &spectra[kappa], out, tally.as_deref_mut()),
                        None => {
                            let mut s = naive_dft(out, false, tally.as_deref_mut());
                            for (v, h) in s.iter_mut().zip(&spectra[kappa]) {
                                *v *= h;
                            }
                            if let Some(t) = tally.as_deref_mut() {
                                t.add_complex(m as u64);
                            }
                            out.copy_from_slice(&naive_dft(&s, true, tally.as_deref_mut()));
                        }
                    }
                    if self.mode == ReceiverMode::Mmse {
                        if let Some(t) = tally.as_deref_mut() {
                            // per-block regularized inversion of the diagonal
                            t.add_model(m as f64 / 2.0);
                        }
                    }
                }
            }
        }

        // inverse DFT across branches for each time slot
        let mut d = vec![Complex64::new(0.0, 0.0); n * m];
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for slot in 0..m {
            for (i, c) in column.iter_mut().enumerate() {
                *c = stacked[i * m + slot];
            }
            self.dft_n.inverse(&mut column, tally.as_deref_mut());
            for (i, c) in column.iter().enumerate() {
                d[i * m + slot] = *c;
            }
        }
        Ok(ComplexBlock::new(d))
    }
}

/// Free-function form of [`ReceiverFilterBank::demodulate`].
pub fn demodulate(bank: &ReceiverFilterBank, y: &ComplexBlock) -> Result<ComplexBlock> {
    bank.demodulate(y)
}

type CacheKey = (u64, ReceiverMode, u64);

/// Least-recently-used cache of filter banks keyed by prototype, mode and
/// noise variance.
#[derive(Debug)]
pub struct FilterBankCache {
    capacity: usize,
    entries: Mutex<VecDeque<(CacheKey, Arc<ReceiverFilterBank>)>>,
}

impl Default for FilterBankCache {
    fn default() -> Self {
        Self::new(16)
    }
}

impl FilterBankCache {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            entries: Mutex::new(VecDeque::new()),
        }
    }

    pub fn get_or_build(
        &self,
        filter: &PrototypeFilter,
        mode: ReceiverMode,
        sigma2: f64,
    ) -> Result<Arc<ReceiverFilterBank>> {
        let key_sigma = if mode == ReceiverMode::Mmse { sigma2.to_bits() } else { 0 };
        let key = (filter.id(), mode, key_sigma);
        {
            let mut entries = self.entries.lock().expect("cache lock poisoned");
            if let Some(pos) = entries.iter().position(|(k, _)| *k == key) {
                let hit = entries.remove(pos).expect("position is valid");
                let bank = Arc::clone(&hit.1);
                entries.push_front(hit);
                return Ok(bank);
            }
        }
        let bank = Arc::new(build_filter_bank(filter, filter.cfg(), mode, sigma2)?);
        let mut entries = self.entries.lock().expect("cache lock poisoned");
        if !entries.iter().any(|(k, _)| *k == key) {
            entries.push_front((key, Arc::clone(&bank)));
            entries.truncate(self.capacity);
        }
        Ok(bank)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const MAGIC: &[u8; 4] = b"GFB1";
/// magic, N (u32), M (u32), mode (u8), noise variance (f64), filter kind (u8)
const HEADER_LEN: usize = 4 + 4 + 4 + 1 + 8 + 1;

/// Serializes a bank into the `GFB1` container.
///
/// All integers and floats are little-endian. The header is followed by the
/// real parts of the `N x M` branch filters, branch-major; MMSE banks add a
/// second plane with the imaginary parts.
pub fn encode_bank(bank: &ReceiverFilterBank) -> Vec<u8> {
    let (n, m) = (bank.cfg.n(), bank.cfg.m());
    let planes = if bank.mode == ReceiverMode::Mmse { 2 } else { 1 };
    let mut out = Vec::with_capacity(HEADER_LEN + planes * n * m * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.push(bank.mode.tag());
    out.extend_from_slice(&bank.sigma2.to_le_bytes());
    out.push(bank.filter_kind.tag());
    for f in &bank.branch_filters {
        for v in f {
            out.extend_from_slice(&v.re.to_le_bytes());
        }
    }
    if planes == 2 {
        for f in &bank.branch_filters {
            for v in f {
                out.extend_from_slice(&v.im.to_le_bytes());
            }
        }
    }
    out
}

/// Parses a `GFB1` container. With `expected_mode`, a bank of another mode
/// is rejected.
pub fn decode_bank(bytes: &[u8], expected_mode: Option<ReceiverMode>) -> Result<ReceiverFilterBank> {
    if bytes.len() < HEADER_LEN {
        return Err(GfdmError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(GfdmError::Format("bad magic, expected GFB1".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes")) as usize;
    let n = u32_at(4);
    let m = u32_at(8);
    let mode = ReceiverMode::from_tag(bytes[12])
        .ok_or_else(|| GfdmError::Format(format!("unknown mode tag {}", bytes[12])))?;
    let sigma2 = f64::from_le_bytes(bytes[13..21].try_into().expect("8 bytes"));
    let filter_kind = FilterKind::from_tag(bytes[21])
        .ok_or_else(|| GfdmError::Format(format!("unknown filter tag {}", bytes[21])))?;
    if let Some(want) = expected_mode {
        if want != mode {
            return Err(GfdmError::Format(format!(
                "file holds a {} bank, expected {}",
                mode.name(),
                want.name()
            )));
        }
    }
    let cfg = GfdmConfig::new(n, m, 0)?;
    let planes = if mode == ReceiverMode::Mmse { 2 } else { 1 };
    let expected = HEADER_LEN + planes * n * m * 8;
    if bytes.len() != expected {
        return Err(if bytes.len() < expected {
            GfdmError::Truncated {
                expected,
                found: bytes.len(),
            }
        } else {
            GfdmError::Format(format!("{} trailing bytes", bytes.len() - expected))
        });
    }
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let imag_base = HEADER_LEN + n * m * 8;
    let branch_filters = (0..n)
        .map(|k| {
            (0..m)
                .map(|j| {
                    let idx = (k * m + j) * 8;
                    let re = f64_at(HEADER_LEN + idx);
                    let im = if planes == 2 { f64_at(imag_base + idx) } else { 0.0 };
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    Ok(ReceiverFilterBank::from_parts(cfg, mode, sigma2, filter_kind, branch_filters))
}

pub fn write_bank(bank: &ReceiverFilterBank, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode_bank(bank))?;
    Ok(())
}

pub fn read_bank(path: &Path, expected_mode: Option<ReceiverMode>) -> Result<ReceiverFilterBank> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_bank(&bytes, expected_mode)
}
