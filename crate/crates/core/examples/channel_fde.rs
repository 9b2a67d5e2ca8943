// Multipath link: CP insertion, a three-tap channel, CP removal,
// frequency-domain equalization and ZF detection.
//
// ```text
// cargo run --example channel_fde
// ```

use gfdm::channel::preset;
use gfdm::link::{qpsk_map, qpsk_slice};
use gfdm::{
    add_cp, build_filter_bank, fde, make_prototype, remove_cp, transmit_through, ChannelSpec, ComplexBlock,
    FilterKind, GfdmConfig, ReceiverMode, TxPlan,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(64, 3, 8)?;
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.3 })?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bits: Vec<bool> = (0..2 * cfg.block_len()).map(|_| rng.random()).collect();
    let d = ComplexBlock::new(qpsk_map(&bits));
    let x = TxPlan::new(cfg, &g)?.modulate(&d)?;

    let taps = vec![Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.5), Complex64::new(-0.2, 0.1)];
    let zf = build_filter_bank(&g, &cfg, ReceiverMode::Zf, 0.0)?;
    for (name, spec) in [
        ("noiseless 3-tap", ChannelSpec::new(taps.clone(), 0.0, 1)?),
        ("3-tap, noise 1e-3", ChannelSpec::new(taps, 1e-3, 1)?),
        ("exp4 preset, noise 1e-3", ChannelSpec::new(preset("exp4").expect("preset"), 1e-3, 1)?),
    ] {
        let r = transmit_through(&spec, &add_cp(&x, cfg.cp_len())?, cfg.cp_len())?;
        let y = fde(&remove_cp(&r, cfg.cp_len())?, &spec)?;
        let errors = qpsk_slice(zf.demodulate(&y)?.as_slice())
            .iter()
            .zip(&bits)
            .filter(|(a, b)| a != b)
            .count();
        println!("{name:>24}: |x - FDE(r)| {:.2e}, bit errors {errors}/{}", y.max_abs_diff(&x), bits.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
