// Fast GFDM transmitter: modulate one QPSK block, check it against the
// dense modulation matrix and prepend a cyclic prefix.
//
// ```text
// cargo run --example modulate
// ```

use gfdm::link::qpsk_map;
use gfdm::oracle::build_modulation_matrix;
use gfdm::{add_cp, make_prototype, ComplexBlock, FilterKind, GfdmConfig, TxPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(16, 5, 4)?;
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 })?;
    println!("N={} M={} CP={} prototype energy {:.4}", cfg.n(), cfg.m(), cfg.cp_len(), g.energy());

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let bits: Vec<bool> = (0..2 * cfg.block_len()).map(|_| rng.random()).collect();
    let d = ComplexBlock::new(qpsk_map(&bits));

    let plan = TxPlan::new(cfg, &g)?;
    let x = plan.modulate(&d)?;
    let direct = build_modulation_matrix(&cfg, &g)?.apply(&d)?;
    println!("max |fast - A d| = {:.2e}", x.max_abs_diff(&direct));
    println!("budget {} CMs per block", plan.cm_budget().value);

    let framed = add_cp(&x, cfg.cp_len())?;
    println!("transmitted {} samples, first {:.4}", framed.len(), framed[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
