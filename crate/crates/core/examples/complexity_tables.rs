// Complex-multiplication counts of every technique at N=1024, the
// published reduction claims, and a measured tally of the fast path.
//
// ```text
// cargo run --example complexity_tables
// ```

use gfdm::complexity::{check_claims, DEFAULT_I, DEFAULT_L};
use gfdm::{cm_count, make_prototype, measured_multiplies, ComplexBlock, ConvPath, FilterKind, GfdmConfig, Technique, TxPlan};

pub fn run_example() -> gfdm::Result<()> {
    let n = 1024;
    print!("{:>16}", "M");
    let ms = [1, 3, 5, 7, 13, 21];
    for m in ms {
        print!("{m:>12}");
    }
    println!();
    for t in Technique::ALL {
        print!("{:>16}", t.label());
        for m in ms {
            print!("{:>12.4e}", cm_count(t, n, m, DEFAULT_L, DEFAULT_I)?.value);
        }
        println!();
    }

    println!();
    for c in check_claims(n, DEFAULT_L, DEFAULT_I)? {
        println!("[{}] {}: {}", if c.holds { "PASS" } else { "FAIL" }, c.name, c.detail);
    }

    let cfg = GfdmConfig::new(n, 5, 0)?;
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 })?;
    let plan = TxPlan::with_options(cfg, &g, ConvPath::Time, true)?;
    let run = plan.modulate_traced(&ComplexBlock::unit(cfg.block_len(), 0))?;
    println!(
        "\nmeasured tx at N={n} M=5: {} CMs, formula {}",
        measured_multiplies(&run)?,
        cm_count(Technique::ProposedTx, n, 5, DEFAULT_L, DEFAULT_I)?.value
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
