// The block DFT sparsifies the modulation matrix and block-diagonalizes
// its Gram matrix. Prints the sparsity of Gamma and the block energies of D.
//
// ```text
// cargo run --example structure
// ```

use gfdm::oracle::{
    block_circulant_deviation, build_block_dft, build_modulation_matrix, d_block_closed_form, d_direct,
    gamma_direct, off_block_energy_ratio, DenseMatrix,
};
use gfdm::{make_prototype, FilterKind, GfdmConfig};

pub fn run_example() -> gfdm::Result<()> {
    let cfg = GfdmConfig::new(4, 3, 0)?;
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 })?;
    let a = build_modulation_matrix(&cfg, &g)?;
    let fb = build_block_dft(&cfg);
    let (n, m) = (cfg.n(), cfg.m());

    let gamma = gamma_direct(&a, &fb);
    println!(
        "Gamma: {} of {} entries nonzero (N M^2 = {}), max |imag| {:.1e}",
        gamma.count_nonzero(1e-12),
        gamma.rows() * gamma.cols(),
        n * m * m,
        gamma.max_abs_imag()
    );
    for row in 0..gamma.rows() {
        let line: String = (0..gamma.cols())
            .map(|c| if gamma.get(row, c).norm() > 1e-12 { '#' } else { '.' })
            .collect();
        println!("  {line}");
    }

    let aha = a.adjoint().mul(&a);
    println!("A^H A block-circulant deviation {:.1e}", block_circulant_deviation(&aha, m));
    let d = d_direct(&a, &fb);
    println!("D off-block energy ratio {:.1e}", off_block_energy_ratio(&d, m));
    for i in 0..n {
        let err = DenseMatrix(d.block(i, i, m)).max_abs_diff(&d_block_closed_form(&g, i));
        println!("  D_{i} vs N circ(g_k * gfold_k): {err:.1e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gfdm::Result<()> {
    run_example()
}
