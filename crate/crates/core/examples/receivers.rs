// MF, ZF and MMSE receivers on a noisy block. ZF removes the
// self-interference, MMSE trades some of it for less noise.
//
// ```text
// cargo run --example receivers
// ```

use gfdm::link::{qpsk_map, sigma2_for_snr};
use gfdm::{build_filter_bank, make_prototype, ComplexBlock, FilterKind, GfdmConfig, ReceiverMode, TxPlan};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(32, 5, 0)?;
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.9 })?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bits: Vec<bool> = (0..2 * cfg.block_len()).map(|_| rng.random()).collect();
    let d = ComplexBlock::new(qpsk_map(&bits));
    let x = TxPlan::new(cfg, &g)?.modulate(&d)?;

    let sigma2 = sigma2_for_snr(&g, 10.0);
    let scale = (sigma2 / 2.0).sqrt();
    let y: Vec<Complex64> = x
        .as_slice()
        .iter()
        .map(|s| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            s + Complex64::new(re, im) * scale
        })
        .collect();
    let y = ComplexBlock::new(y);

    println!("SNR 10 dB, noise variance {sigma2:.3e}");
    for mode in [ReceiverMode::Mf, ReceiverMode::Zf, ReceiverMode::Mmse] {
        let bank = build_filter_bank(&g, &cfg, mode, sigma2)?;
        let dh = bank.demodulate(&y)?;
        let mse = dh
            .as_slice()
            .iter()
            .zip(d.as_slice())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / d.len() as f64;
        println!("{:>4}: symbol MSE {mse:.4}", mode.name());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
