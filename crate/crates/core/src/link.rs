//! End-to-end QPSK link and the Monte Carlo BER harness.
//!
//! SNR is `Es/N0` per data symbol. The transmitted energy per symbol is the
//! prototype energy `sum(g^2)`, so a point at `snr_db` uses noise variance
//! `sum(g^2) * 10^(-snr_db / 10)`; with unit-variance symbols that is also
//! the variance the MMSE receiver is built for.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{remove_cp, transmit_through, ChannelSpec, FdEqualizer};
use crate::config::{ComplexBlock, GfdmConfig};
use crate::error::{GfdmError, Result};
use crate::prototype::PrototypeFilter;
use crate::rx::{FilterBankCache, ReceiverMode};
use crate::tx::{add_cp, TxPlan};

/// Offset separating the data streams from the noise streams of a seed.
const DATA_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Gray-mapped QPSK: bit pair `(b0, b1)` maps to `((1-2b0) + j(1-2b1))/sqrt(2)`.
pub fn qpsk_map(bits: &[bool]) -> Vec<Complex64> {
    bits.chunks_exact(2)
        .map(|p| {
            let re = if p[0] { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
            let im = if p[1] { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
            Complex64::new(re, im)
        })
        .collect()
}

/// Hard decision on each quadrature.
pub fn qpsk_slice(symbols: &[Complex64]) -> Vec<bool> {
    symbols.iter().flat_map(|s| [s.re < 0.0, s.im < 0.0]).collect()
}

/// Noise variance for a per-symbol SNR in dB.
pub fn sigma2_for_snr(filter: &PrototypeFilter, snr_db: f64) -> f64 {
    filter.energy() * 10f64.powf(-snr_db / 10.0)
}

#[derive(Debug, Clone)]
pub struct BerSetup {
    pub cfg: GfdmConfig,
    pub filter: PrototypeFilter,
    pub channel_taps: Vec<Complex64>,
    pub modes: Vec<ReceiverMode>,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub mode: ReceiverMode,
    pub trials: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

/// Runs every `(snr, mode)` point. Trial `t` uses data stream `t` and noise
/// stream `t` at every point, so modes and SNRs see common random numbers.
pub fn simulate_ber(setup: &BerSetup) -> Result<Vec<BerPoint>> {
    if setup.trials == 0 {
        return Err(GfdmError::InvalidConfig("trials must be >= 1".into()));
    }
    if setup.modes.is_empty() || setup.snr_db.is_empty() {
        return Err(GfdmError::InvalidConfig("need at least one mode and one SNR".into()));
    }
    let run = || simulate_points(setup);
    match setup.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| GfdmError::InvalidConfig(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn simulate_points(setup: &BerSetup) -> Result<Vec<BerPoint>> {
    let cfg = setup.cfg;
    let tx = TxPlan::new(cfg, &setup.filter)?;
    let cache = FilterBankCache::default();
    let base = ChannelSpec::new(setup.channel_taps.clone(), 0.0, setup.seed)?;
    let equalizer = FdEqualizer::new(&base, cfg.block_len())?;
    let bits_per_block = 2 * cfg.block_len() as u64;

    let mut out = Vec::new();
    for &snr in &setup.snr_db {
        let sigma2 = sigma2_for_snr(&setup.filter, snr);
        let channel = base.clone().with_sigma2(sigma2)?;
        for &mode in &setup.modes {
            let bank = cache.get_or_build(&setup.filter, mode, sigma2)?;
            let errors = (0..setup.trials)
                .into_par_iter()
                .map(|t| -> Result<u64> {
                    let bits = trial_bits(setup.seed, t, bits_per_block as usize);
                    let d = ComplexBlock::new(qpsk_map(&bits));
                    let x = tx.modulate(&d)?;
                    let r_cp = transmit_through(&channel.for_trial(t), &add_cp(&x, cfg.cp_len())?, cfg.cp_len())?;
                    let y = equalizer.equalize(&remove_cp(&r_cp, cfg.cp_len())?)?;
                    let dh = bank.demodulate(&y)?;
                    Ok(qpsk_slice(dh.as_slice())
                        .iter()
                        .zip(&bits)
                        .filter(|(a, b)| a != b)
                        .count() as u64)
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            let bits = bits_per_block * setup.trials;
            out.push(BerPoint {
                snr_db: snr,
                mode,
                trials: setup.trials,
                bits,
                bit_errors: errors,
                ber: errors as f64 / bits as f64,
            });
        }
    }
    Ok(out)
}

fn trial_bits(seed: u64, trial: u64, count: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(DATA_SEED_OFFSET));
    rng.set_stream(trial);
    (0..count).map(|_| rng.random::<bool>()).collect()
}

pub const BER_CSV_HEADER: &str = "snr_db,mode,trials,bit_errors,ber";

pub fn ber_csv(points: &[BerPoint]) -> String {
    let mut s = String::from("# snr_db is Es/N0 per data symbol; noise variance = sum(g^2) * 10^(-snr_db/10)\n");
    s.push_str(BER_CSV_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            p.snr_db,
            p.mode.name(),
            p.trials,
            p.bit_errors,
            p.ber
        ));
    }
    s
}
