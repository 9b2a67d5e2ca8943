// Monte Carlo BER of ZF and MMSE over a two-ray channel. SNR is Es/N0 per
// data symbol.
//
// ```text
// cargo run --release --example ber_sweep
// ```

use gfdm::channel::preset;
use gfdm::link::{ber_csv, simulate_ber, BerSetup};
use gfdm::{make_prototype, FilterKind, GfdmConfig, ReceiverMode};

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(64, 5, 16)?;
    let setup = BerSetup {
        cfg,
        filter: make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 })?,
        channel_taps: preset("two-ray").expect("preset"),
        modes: vec![ReceiverMode::Zf, ReceiverMode::Mmse],
        snr_db: vec![0.0, 5.0, 10.0],
        trials: 50,
        seed: 1,
        threads: None,
    };
    print!("{}", ber_csv(&simulate_ber(&setup)?));
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
