// Receiver filter banks: build once, cache, save to a GFB1 file and load
// them back.
//
// ```text
// cargo run --example filter_bank_io
// ```

use gfdm::rx::{read_bank, write_bank};
use gfdm::{make_prototype, FilterBankCache, FilterKind, GfdmConfig, ReceiverMode};

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(8, 3, 0)?;
    let g = make_prototype(cfg, FilterKind::Dirichlet)?;
    let cache = FilterBankCache::default();
    let mmse = cache.get_or_build(&g, ReceiverMode::Mmse, 0.05)?;
    cache.get_or_build(&g, ReceiverMode::Mmse, 0.05)?;
    println!("cache holds {} bank(s) after two lookups", cache.len());

    let path = std::env::temp_dir().join(format!("gfdm-example-{}.gfb", std::process::id()));
    write_bank(&mmse, &path)?;
    let size = std::fs::metadata(&path)?.len();
    let back = read_bank(&path, Some(ReceiverMode::Mmse))?;
    std::fs::remove_file(&path)?;
    println!("wrote {size} bytes; reloaded bank identical: {}", back == *mmse);
    println!("branch 0 taps: {:.4?}", back.branch_filters()[0]);

    // loading with the wrong mode is rejected
    write_bank(&mmse, &path)?;
    let err = read_bank(&path, Some(ReceiverMode::Zf)).unwrap_err();
    std::fs::remove_file(&path)?;
    println!("reading as ZF: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
