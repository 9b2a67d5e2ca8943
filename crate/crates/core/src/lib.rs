//! Low-complexity GFDM modem.
//!
//! The fast transmitter ([`TxPlan`]) and the unified MF/ZF/MMSE receivers
//! ([`ReceiverFilterBank`]) work per polyphase branch with `M`-point circular
//! convolutions and one `N`-point DFT per slot. The [`oracle`] module holds
//! the dense-matrix reference they are checked against, [`channel`] the
//! cyclic-prefix channel and frequency-domain equalizer, and [`complexity`]
//! the complex-multiplication counts of every technique.
//!
//! ```
//! use gfdm::{build_filter_bank, make_prototype, ComplexBlock, FilterKind, GfdmConfig, ReceiverMode, TxPlan};
//!
//! let cfg = GfdmConfig::new(8, 3, 2)?;
//! let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 })?;
//! let d = ComplexBlock::unit(cfg.block_len(), 5);
//! let x = TxPlan::new(cfg, &g)?.modulate(&d)?;
//! let zf = build_filter_bank(&g, &cfg, ReceiverMode::Zf, 0.0)?;
//! assert!(zf.demodulate(&x)?.max_abs_diff(&d) < 1e-12);
//! # Ok::<(), gfdm::GfdmError>(())
//! ```

pub mod channel;
pub mod cli;
pub mod complexity;
pub mod config;
mod dsp;
pub mod error;
pub mod link;
pub mod oracle;
pub mod prototype;
pub mod rx;
pub mod tx;

pub use channel::{fde, remove_cp, transmit_through, ChannelSpec, FdEqualizer};
pub use complexity::{cm_count, measured_multiplies, sweep, CmCount, Technique, TracedRun};
pub use config::{ComplexBlock, GfdmConfig};
pub use error::{GfdmError, Result};
pub use prototype::{make_custom, make_prototype, polyphase, FilterKind, PrototypeFilter};
pub use rx::{build_filter_bank, demodulate, FilterBankCache, ReceiverFilterBank, ReceiverMode};
pub use tx::{add_cp, ConvPath, TxPlan};
