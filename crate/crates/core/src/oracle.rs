//! Direct matrix implementation of the GFDM system model.
//!
//! Everything here is deliberately naive: the modulation matrix is built
//! entry by entry and the receivers solve dense `MN x MN` systems. The fast
//! transmitter and receivers are validated against these functions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::{ComplexBlock, GfdmConfig};
use crate::error::{GfdmError, Result};
use crate::prototype::{fold, PrototypeFilter};
use crate::rx::ReceiverMode;

/// Reciprocal condition number below which `A^H A` counts as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

/// Dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(pub DMatrix<Complex64>);

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &DenseMatrix) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, v: &ComplexBlock) -> Result<ComplexBlock> {
        if v.len() != self.cols() {
            return Err(GfdmError::LengthMismatch {
                expected: self.cols(),
                actual: v.len(),
            });
        }
        let x = DVector::from_column_slice(v.as_slice());
        Ok(ComplexBlock::new((&self.0 * x).as_slice().to_vec()))
    }

    /// Copy of the `size x size` block at block coordinates `(br, bc)`.
    pub fn block(&self, br: usize, bc: usize, size: usize) -> DMatrix<Complex64> {
        self.0.view((br * size, bc * size), (size, size)).into_owned()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        (&self.0 - &other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Number of entries whose magnitude exceeds `tol`.
    pub fn count_nonzero(&self, tol: f64) -> usize {
        self.0.iter().filter(|z| z.norm() > tol).count()
    }
}

/// `[A]_{n,c} = g[(n - mN) mod MN] * exp(j 2 pi n i / N)` for column
/// `c = iM + m`.
pub fn build_modulation_matrix(cfg: &GfdmConfig, filter: &PrototypeFilter) -> Result<DenseMatrix> {
    cfg.check_same_shape(filter.cfg())?;
    let (n, m, len) = (cfg.n(), cfg.m(), cfg.block_len());
    let g = filter.coeffs();
    let a = DMatrix::from_fn(len, len, |row, col| {
        let sub = col / m;
        let slot = col % m;
        let tap = g[(row + len - (slot * n) % len) % len];
        tap * Complex64::from_polar(1.0, 2.0 * PI * ((row * sub) % n) as f64 / n as f64)
    });
    Ok(DenseMatrix(a))
}

pub fn direct_modulate(a: &DenseMatrix, d: &ComplexBlock) -> Result<ComplexBlock> {
    a.apply(d)
}

/// Dense-solver MF/ZF/MMSE detector with its factorization cached, for
/// repeated use on one modulation matrix.
#[derive(Debug, Clone)]
pub struct DirectReceiver {
    mode: ReceiverMode,
    a_h: DMatrix<Complex64>,
    lu: Option<nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl DirectReceiver {
    pub fn new(a: &DenseMatrix, mode: ReceiverMode, sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(GfdmError::InvalidConfig(format!("noise variance {sigma2} must be >= 0")));
        }
        let a_h = a.0.adjoint();
        let lu = match mode {
            ReceiverMode::Mf => None,
            ReceiverMode::Zf | ReceiverMode::Mmse => {
                let reg = if mode == ReceiverMode::Zf { 0.0 } else { sigma2 };
                let mut gram = &a_h * &a.0;
                for k in 0..gram.nrows() {
                    gram[(k, k)] += reg;
                }
                let rcond = hermitian_rcond(&gram);
                // NaN counts as singular
                if rcond.is_nan() || rcond < SINGULAR_RCOND {
                    return Err(GfdmError::SingularSystem { rcond });
                }
                Some(gram.lu())
            }
        };
        Ok(Self { mode, a_h, lu })
    }

    pub fn mode(&self) -> ReceiverMode {
        self.mode
    }

    pub fn receive(&self, y: &ComplexBlock) -> Result<ComplexBlock> {
        if y.len() != self.a_h.ncols() {
            return Err(GfdmError::LengthMismatch {
                expected: self.a_h.ncols(),
                actual: y.len(),
            });
        }
        let rhs = &self.a_h * DVector::from_column_slice(y.as_slice());
        let out = match &self.lu {
            None => rhs,
            Some(lu) => lu
                .solve(&rhs)
                .ok_or(GfdmError::SingularSystem { rcond: 0.0 })?,
        };
        Ok(ComplexBlock::new(out.as_slice().to_vec()))
    }
}

/// MF: `A^H y`; ZF: `(A^H A)^-1 A^H y`; MMSE: `(A^H A + s I)^-1 A^H y`.
/// `sigma2` is ignored by MF and ZF.
pub fn direct_receive(a: &DenseMatrix, y: &ComplexBlock, mode: ReceiverMode, sigma2: f64) -> Result<ComplexBlock> {
    DirectReceiver::new(a, mode, sigma2)?.receive(y)
}

/// Ratio of smallest to largest eigenvalue of a Hermitian PSD matrix.
fn hermitian_rcond(m: &DMatrix<Complex64>) -> f64 {
    let eig = m.clone().symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if max <= 0.0 {
        0.0
    } else {
        min.max(0.0) / max
    }
}

/// Normalized block DFT: block `(r, c)` is `exp(-j 2 pi r c / N) / sqrt(N) * I_M`.
pub fn build_block_dft(cfg: &GfdmConfig) -> DenseMatrix {
    let (n, m, len) = (cfg.n(), cfg.m(), cfg.block_len());
    let scale = 1.0 / (n as f64).sqrt();
    DenseMatrix(DMatrix::from_fn(len, len, |row, col| {
        if row % m != col % m {
            return Complex64::new(0.0, 0.0);
        }
        let (br, bc) = (row / m, col / m);
        Complex64::from_polar(scale, -2.0 * PI * ((br * bc) % n) as f64 / n as f64)
    }))
}

/// Normalized `L`-point DFT matrix.
pub fn dft_matrix(len: usize) -> DenseMatrix {
    let scale = 1.0 / (len as f64).sqrt();
    DenseMatrix(DMatrix::from_fn(len, len, |r, c| {
        Complex64::from_polar(scale, -2.0 * PI * ((r * c) % len) as f64 / len as f64)
    }))
}

/// Circulant matrix whose first column is `first`.
pub fn circulant(first: &[Complex64]) -> DenseMatrix {
    let l = first.len();
    DenseMatrix(DMatrix::from_fn(l, l, |r, c| first[(r + l - c) % l]))
}

/// `Gamma = F_b A^H`, by dense multiplication.
pub fn gamma_direct(a: &DenseMatrix, fb: &DenseMatrix) -> DenseMatrix {
    fb.mul(&a.adjoint())
}

/// `D = F_b (A^H A) F_b^H`, by dense multiplication.
pub fn d_direct(a: &DenseMatrix, fb: &DenseMatrix) -> DenseMatrix {
    let gram = a.adjoint().mul(a);
    fb.mul(&gram).mul(&fb.adjoint())
}

/// `Gamma` from its index rule: row `r` in block `kappa = r / M` is nonzero
/// only in columns `c` with `c mod N = (N - kappa) mod N`, where it holds
/// `sqrt(N) * gfold_{c mod N}[(r + M - c / N) mod M]`.
pub fn gamma_closed_form(filter: &PrototypeFilter) -> DenseMatrix {
    let cfg = filter.cfg();
    let (n, m, len) = (cfg.n(), cfg.m(), cfg.block_len());
    let root_n = (n as f64).sqrt();
    let folded: Vec<Vec<f64>> = (0..n)
        .map(|k| fold(&filter.polyphase_forward(k).expect("branch in range")))
        .collect();
    DenseMatrix(DMatrix::from_fn(len, len, |row, col| {
        let block = row / m;
        let branch = col % n;
        if branch != (n - block) % n {
            return Complex64::new(0.0, 0.0);
        }
        let k = (row % m + m - col / n) % m;
        Complex64::new(root_n * folded[branch][k], 0.0)
    }))
}

/// `N circ(g_kappa (*) gfold_kappa)` with `kappa = (N - i) mod N`.
pub fn d_block_closed_form(filter: &PrototypeFilter, i: usize) -> DenseMatrix {
    let cfg = filter.cfg();
    let (n, m) = (cfg.n(), cfg.m());
    let g = filter.polyphase_forward((n - i % n) % n).expect("branch in range");
    let gf = fold(&g);
    let conv: Vec<Complex64> = (0..m)
        .map(|k| {
            let s: f64 = (0..m).map(|j| g[j] * gf[(k + m - j) % m]).sum();
            Complex64::new(n as f64 * s, 0.0)
        })
        .collect();
    circulant(&conv)
}

/// Largest deviation of `mat` from block-circulant structure with
/// `size x size` blocks: block `(r, c)` against block `(r+1, c+1)`, cyclically.
pub fn block_circulant_deviation(mat: &DenseMatrix, size: usize) -> f64 {
    let nb = mat.rows() / size;
    let mut worst: f64 = 0.0;
    for r in 0..nb {
        for c in 0..nb {
            let a = mat.block(r, c, size);
            let b = mat.block((r + 1) % nb, (c + 1) % nb, size);
            worst = worst.max((a - b).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    worst
}

/// Off-block-diagonal energy of `mat` divided by its total energy.
pub fn off_block_energy_ratio(mat: &DenseMatrix, size: usize) -> f64 {
    let mut off = 0.0;
    let mut total = 0.0;
    for ((r, c), z) in mat.0.iter().enumerate().map(|(k, z)| ((k % mat.rows(), k / mat.rows()), z)) {
        let e = z.norm_sqr();
        total += e;
        if r / size != c / size {
            off += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        off / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototype::{make_prototype, FilterKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(n: usize, m: usize) -> GfdmConfig {
        GfdmConfig::new(n, m, 0).unwrap()
    }

    fn rc(n: usize, m: usize) -> PrototypeFilter {
        make_prototype(cfg(n, m), FilterKind::RaisedCosine { rolloff: 0.5 }).unwrap()
    }

    fn flat_2x1() -> (DenseMatrix, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let g = PrototypeFilter::from_real_coeffs(cfg(2, 1), vec![h, h]).unwrap();
        (build_modulation_matrix(&cfg(2, 1), &g).unwrap(), h)
    }

    fn random_block(len: usize, seed: u64) -> ComplexBlock {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexBlock::new(
            (0..len)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    }

    #[test]
    fn single_sample_system() {
        let g = make_prototype(cfg(1, 1), FilterKind::UnitImpulse).unwrap();
        let a = build_modulation_matrix(&cfg(1, 1), &g).unwrap();
        assert_eq!(a.0.as_slice(), &[c(1.0, 0.0)]);
        let x = direct_modulate(&a, &ComplexBlock::new(vec![c(1.0, 0.0)])).unwrap();
        assert_eq!(x.as_slice(), &[c(1.0, 0.0)]);
        let fb = build_block_dft(&cfg(1, 1));
        assert_eq!(gamma_direct(&a, &fb).0.as_slice(), &[c(1.0, 0.0)]);
        assert_eq!(d_direct(&a, &fb).0.as_slice(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn flat_two_subcarrier_matrix_is_unitary_hadamard() {
        let (a, h) = flat_2x1();
        let want = [c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)];
        for (got, w) in a.0.iter().zip(want) {
            assert!((got - w).norm() < 1e-15);
        }
        let x = direct_modulate(&a, &ComplexBlock::new(vec![c(h, 0.0), c(h, 0.0)])).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(x[1].norm() < 1e-15);
    }

    #[test]
    fn unitary_receivers() {
        let (a, _) = flat_2x1();
        let d = ComplexBlock::new(vec![c(1.0, -1.0), c(-1.0, 1.0)]);
        let y = direct_modulate(&a, &d).unwrap();
        let zf = direct_receive(&a, &y, ReceiverMode::Zf, 0.0).unwrap();
        assert!(zf.max_abs_diff(&d) < 1e-12);
        let mmse = direct_receive(&a, &y, ReceiverMode::Mmse, 1.0).unwrap();
        let half = ComplexBlock::new(d.as_slice().iter().map(|z| z / 2.0).collect());
        assert!(mmse.max_abs_diff(&half) < 1e-12);
    }

    #[test]
    fn columns_are_shifted_copies_of_prototype() {
        let g = rc(4, 3);
        let a = build_modulation_matrix(&cfg(4, 3), &g).unwrap();
        for r in 0..12 {
            assert_eq!(a.get(r, 0), c(g.coeffs()[r], 0.0));
            assert_eq!(a.get(r, 1), c(g.coeffs()[(r + 12 - 4) % 12], 0.0));
        }
    }

    #[test]
    fn zf_reconstructs_random_data() {
        let g = rc(4, 3);
        let a = build_modulation_matrix(&cfg(4, 3), &g).unwrap();
        let d = random_block(12, 9);
        let y = direct_modulate(&a, &d).unwrap();
        let dh = direct_receive(&a, &y, ReceiverMode::Zf, 0.0).unwrap();
        assert!(dh.max_abs_diff(&d) < 1e-10);
    }

    #[test]
    fn zf_flags_singular_even_m() {
        let g = make_prototype(cfg(4, 4), FilterKind::Dirichlet).unwrap();
        let a = build_modulation_matrix(&cfg(4, 4), &g).unwrap();
        let y = random_block(16, 1);
        assert!(matches!(
            direct_receive(&a, &y, ReceiverMode::Zf, 0.0),
            Err(GfdmError::SingularSystem { .. })
        ));
        // MMSE stays well posed
        assert!(direct_receive(&a, &y, ReceiverMode::Mmse, 0.1).is_ok());
        assert!(direct_receive(&a, &y, ReceiverMode::Mmse, -1.0).is_err());
    }

    #[test]
    fn block_dft_small_cases_and_unitarity() {
        assert!(build_block_dft(&cfg(1, 2)).max_abs_diff(&DenseMatrix(DMatrix::identity(2, 2))) < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = build_block_dft(&cfg(2, 1));
        let want = DenseMatrix(DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]));
        assert!(f.max_abs_diff(&want) < 1e-15);
        let f = build_block_dft(&cfg(4, 3));
        let eye = DenseMatrix(DMatrix::identity(12, 12));
        assert!(f.mul(&f.adjoint()).max_abs_diff(&eye) < 1e-12);
    }

    #[test]
    fn gamma_is_sparse_real_and_folded() {
        let g = rc(4, 3);
        let a = build_modulation_matrix(&cfg(4, 3), &g).unwrap();
        let gamma = gamma_direct(&a, &build_block_dft(&cfg(4, 3)));
        assert_eq!(gamma.count_nonzero(1e-12), 4 * 3 * 3);
        assert!(gamma.max_abs_imag() < 1e-12);
        for i in 0..4 {
            let kappa = (4 - i) % 4;
            let cols: Vec<usize> = (0..12)
                .filter(|&col| (0..3).any(|r| gamma.get(i * 3 + r, col).norm() > 1e-12))
                .collect();
            assert_eq!(cols, vec![kappa, kappa + 4, kappa + 8]);
            let folded = g.polyphase(kappa).unwrap().folded;
            for r in 0..3 {
                assert!((gamma.get(i * 3 + r, kappa).re - 2.0 * folded[r]).abs() < 1e-12);
            }
        }
        assert!(gamma.max_abs_diff(&gamma_closed_form(&g)) < 1e-12);
    }

    #[test]
    fn d_is_block_diagonal_and_matches_closed_form() {
        let g = rc(4, 3);
        let a = build_modulation_matrix(&cfg(4, 3), &g).unwrap();
        let d = d_direct(&a, &build_block_dft(&cfg(4, 3)));
        assert!(off_block_energy_ratio(&d, 3) < 1e-20);
        for i in 0..4 {
            let blk = DenseMatrix(d.block(i, i, 3));
            assert!(blk.max_abs_imag() < 1e-12);
            assert!(blk.max_abs_diff(&d_block_closed_form(&g, i)) < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn setup() -> impl Strategy<Value = PrototypeFilter> {
            (1usize..7, 1usize..5, 0usize..3, 0.05f64..0.95).prop_map(|(n, m, which, a)| {
                let kind = match which {
                    0 => FilterKind::RaisedCosine { rolloff: a },
                    1 => FilterKind::Dirichlet,
                    _ => FilterKind::UnitImpulse,
                };
                make_prototype(cfg(n, m), kind).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn gram_is_block_circulant(g in setup()) {
                let a = build_modulation_matrix(g.cfg(), &g).unwrap();
                let gram = a.adjoint().mul(&a);
                prop_assert!(block_circulant_deviation(&gram, g.cfg().m()) < 1e-12);
            }

            #[test]
            fn gamma_matches_index_rule(g in setup()) {
                let a = build_modulation_matrix(g.cfg(), &g).unwrap();
                let gamma = gamma_direct(&a, &build_block_dft(g.cfg()));
                prop_assert!(gamma.max_abs_diff(&gamma_closed_form(&g)) < 1e-12);
            }

            #[test]
            fn gamma_gram_is_d_and_blocks_orthogonal(g in setup()) {
                let a = build_modulation_matrix(g.cfg(), &g).unwrap();
                let fb = build_block_dft(g.cfg());
                let gamma = gamma_direct(&a, &fb);
                let gg = gamma.mul(&gamma.adjoint());
                prop_assert!(gg.max_abs_diff(&d_direct(&a, &fb)) < 1e-12);
                let m = g.cfg().m();
                for i in 0..g.cfg().n() {
                    for j in 0..g.cfg().n() {
                        if i != j {
                            let blk = gg.block(i, j, m);
                            prop_assert!(blk.iter().all(|z| z.norm() < 1e-12));
                        }
                    }
                }
            }
        }
    }
}
