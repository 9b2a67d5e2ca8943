//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! check and exits non-zero if any failed.

use std::time::Instant;

use gfdm::channel::{fde, remove_cp, transmit_through, ChannelSpec};
use gfdm::complexity::{check_claims, cm_count, measured_multiplies, Technique};
use gfdm::link::{qpsk_map, simulate_ber, BerSetup};
use gfdm::oracle::{
    block_circulant_deviation, build_block_dft, build_modulation_matrix, d_block_closed_form, d_direct,
    direct_receive, gamma_direct, off_block_energy_ratio, DenseMatrix,
};
use gfdm::{
    add_cp, build_filter_bank, make_prototype, ComplexBlock, ConvPath, FilterKind, GfdmConfig, GfdmError,
    PrototypeFilter, ReceiverMode, TxPlan,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

const NS: [usize; 5] = [2, 4, 8, 16, 32];
const MS: [usize; 5] = [1, 2, 3, 4, 5];

fn kinds() -> Vec<FilterKind> {
    vec![
        FilterKind::RaisedCosine { rolloff: 0.1 },
        FilterKind::RaisedCosine { rolloff: 0.5 },
        FilterKind::RaisedCosine { rolloff: 0.9 },
        FilterKind::Dirichlet,
        FilterKind::UnitImpulse,
    ]
}

fn grid() -> impl Iterator<Item = (GfdmConfig, PrototypeFilter)> {
    NS.into_iter().flat_map(|n| {
        MS.into_iter().flat_map(move |m| {
            let cfg = GfdmConfig::new(n, m, 0).unwrap();
            kinds().into_iter().map(move |k| (cfg, make_prototype(cfg, k).unwrap()))
        })
    })
}

fn qpsk_block(len: usize, rng: &mut ChaCha8Rng) -> ComplexBlock {
    let bits: Vec<bool> = (0..2 * len).map(|_| rng.random()).collect();
    ComplexBlock::new(qpsk_map(&bits))
}

fn complex_block(len: usize, rng: &mut ChaCha8Rng) -> ComplexBlock {
    ComplexBlock::new(
        (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

fn label(cfg: &GfdmConfig, g: &PrototypeFilter) -> String {
    format!("N={} M={} {:?}", cfg.n(), cfg.m(), g.kind())
}

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn transmitter_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut points = 0;
    for (cfg, g) in grid() {
        let a = build_modulation_matrix(&cfg, &g).unwrap();
        let plan = TxPlan::new(cfg, &g).unwrap();
        for _ in 0..20 {
            let d = qpsk_block(cfg.block_len(), &mut rng);
            let err = plan.modulate(&d).unwrap().max_abs_diff(&a.apply(&d).unwrap());
            if err >= 1e-10 {
                return Err(format!("{}: error {err:e}", label(&cfg, &g)));
            }
            worst = worst.max(err);
        }
        points += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("runtime {secs:.1}s exceeds 30s"));
    }
    Ok(format!("{points} grid points, max error {worst:.2e}, {secs:.2}s"))
}

fn receiver_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut singular_zf = 0;
    let cases = [
        (ReceiverMode::Mf, 0.0),
        (ReceiverMode::Zf, 0.0),
        (ReceiverMode::Mmse, 1e-6),
        (ReceiverMode::Mmse, 0.1),
        (ReceiverMode::Mmse, 1.0),
    ];
    for (cfg, g) in grid() {
        let a = build_modulation_matrix(&cfg, &g).unwrap();
        let y = complex_block(cfg.block_len(), &mut rng);
        for (mode, s2) in cases {
            let fast = build_filter_bank(&g, &cfg, mode, s2).and_then(|b| b.demodulate(&y));
            let slow = direct_receive(&a, &y, mode, s2);
            match (fast, slow) {
                (Ok(f), Ok(s)) => {
                    let err = f.max_abs_diff(&s);
                    if err >= 1e-8 {
                        return Err(format!("{} {} s2={s2}: error {err:e}", label(&cfg, &g), mode.name()));
                    }
                    worst = worst.max(err);
                    compared += 1;
                }
                (Err(f), Err(s)) if mode == ReceiverMode::Zf && f.is_singular() && s.is_singular() => {
                    singular_zf += 1;
                }
                (f, s) => {
                    return Err(format!(
                        "{} {}: fast {:?} vs direct {:?}",
                        label(&cfg, &g),
                        mode.name(),
                        f.err(),
                        s.err()
                    ))
                }
            }
        }
    }
    Ok(format!(
        "{compared} comparisons, max error {worst:.2e}; ZF singular in both at {singular_zf} points"
    ))
}

fn perfect_reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut tested = 0;
    for (cfg, g) in grid() {
        let zf = match build_filter_bank(&g, &cfg, ReceiverMode::Zf, 0.0) {
            Ok(b) => b,
            Err(GfdmError::SingularPolyphase { .. }) => continue,
            Err(e) => return Err(format!("{}: {e}", label(&cfg, &g))),
        };
        let plan = TxPlan::new(cfg, &g).unwrap();
        let len = cfg.block_len();
        let basis = (0..len).map(|k| ComplexBlock::unit(len, k));
        let random: Vec<ComplexBlock> = (0..50).map(|_| complex_block(len, &mut rng)).collect();
        for d in basis.chain(random) {
            let err = zf.demodulate(&plan.modulate(&d).unwrap()).unwrap().max_abs_diff(&d);
            if err >= 1e-10 {
                return Err(format!("{}: error {err:e}", label(&cfg, &g)));
            }
            worst = worst.max(err);
        }
        tested += 1;
    }
    Ok(format!("{tested} nonsingular prototypes, max error {worst:.2e}"))
}

fn structure_theorems() -> Outcome {
    let mut checked = 0;
    let mut worst_off = 0.0f64;
    for n in [2, 4, 8, 16] {
        for m in MS {
            let cfg = GfdmConfig::new(n, m, 0).unwrap();
            for alpha in [0.1, 0.5, 0.9] {
                let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: alpha }).unwrap();
                let tag = label(&cfg, &g);
                let a = build_modulation_matrix(&cfg, &g).unwrap();
                let fb = build_block_dft(&cfg);

                let gamma = gamma_direct(&a, &fb);
                let nnz = gamma.count_nonzero(1e-12);
                if nnz != n * m * m {
                    return Err(format!("{tag}: Gamma has {nnz} nonzeros, expected {}", n * m * m));
                }
                if gamma.max_abs_imag() >= 1e-12 {
                    return Err(format!("{tag}: Gamma imaginary part {:e}", gamma.max_abs_imag()));
                }

                let d = d_direct(&a, &fb);
                let off = off_block_energy_ratio(&d, m);
                if off >= 1e-18 {
                    return Err(format!("{tag}: off-block energy ratio {off:e}"));
                }
                worst_off = worst_off.max(off);
                for i in 0..n {
                    let want = d_block_closed_form(&g, i);
                    let got = DenseMatrix(d.block(i, i, m));
                    let err = got.max_abs_diff(&want);
                    if err >= 1e-12 {
                        return Err(format!("{tag}: D block {i} differs by {err:e}"));
                    }
                }

                let aha = a.adjoint().mul(&a);
                let dev = block_circulant_deviation(&aha, m);
                if dev >= 1e-12 {
                    return Err(format!("{tag}: A^H A block-circulant deviation {dev:e}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} RC configurations, worst off-block ratio {worst_off:.2e}"))
}

fn complexity_tallies() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for log_n in 3..=10 {
        let n = 1usize << log_n;
        for m in [1, 3, 5, 7] {
            let cfg = GfdmConfig::new(n, m, 0).unwrap();
            let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 }).unwrap();
            let d = complex_block(cfg.block_len(), &mut rng);
            let formula = |t| cm_count(t, n, m, 2.0, 8).unwrap().value;

            let tx = TxPlan::with_options(cfg, &g, ConvPath::Time, true).unwrap();
            let measured = measured_multiplies(&tx.modulate_traced(&d).unwrap()).unwrap();
            if measured != formula(Technique::ProposedTx) {
                return Err(format!(
                    "N={n} M={m} tx: measured {measured} vs {}",
                    formula(Technique::ProposedTx)
                ));
            }
            for (mode, t, s2) in [
                (ReceiverMode::Mf, Technique::ProposedMfZf, 0.0),
                (ReceiverMode::Zf, Technique::ProposedMfZf, 0.0),
                (ReceiverMode::Mmse, Technique::ProposedMmse, 0.1),
            ] {
                let bank = build_filter_bank(&g, &cfg, mode, s2)
                    .unwrap()
                    .with_conv_path(ConvPath::Time)
                    .with_instrumentation();
                let measured = measured_multiplies(&bank.demodulate_traced(&d).unwrap()).unwrap();
                if measured != formula(t) {
                    return Err(format!("N={n} M={m} {}: measured {measured} vs {}", mode.name(), formula(t)));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (N, M) points, tx and all three receivers exact"))
}

fn ber_q(snr_db: f64) -> f64 {
    let snr = 10f64.powf(snr_db / 10.0);
    0.5 * erfc((snr / 2.0).sqrt())
}

fn link_sanity() -> Outcome {
    let cfg = GfdmConfig::new(64, 1, 0).unwrap();
    let setup = BerSetup {
        cfg,
        filter: make_prototype(cfg, FilterKind::Dirichlet).unwrap(),
        channel_taps: vec![Complex64::new(1.0, 0.0)],
        modes: vec![ReceiverMode::Zf],
        snr_db: vec![4.0, 6.0, 8.0],
        trials: 8_000,
        seed: 6,
        threads: None,
    };
    let pts = simulate_ber(&setup).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for p in &pts {
        let want = ber_q(p.snr_db);
        let rel = (p.ber - want).abs() / want;
        if p.bits < 1_000_000 || rel > 0.10 {
            return Err(format!(
                "{} dB: BER {:.4e} vs {want:.4e} ({:.1}% off, {} bits)",
                p.snr_db,
                p.ber,
                100.0 * rel,
                p.bits
            ));
        }
        parts.push(format!("{} dB {:.3e}/{want:.3e}", p.snr_db, p.ber));
    }

    // GFDM self-interference: ZF at M=5 is no better than M=1
    let cfg5 = GfdmConfig::new(64, 5, 0).unwrap();
    let mut overlapped = setup.clone();
    overlapped.cfg = cfg5;
    overlapped.filter = make_prototype(cfg5, FilterKind::RaisedCosine { rolloff: 0.5 }).unwrap();
    overlapped.trials = 1_600;
    let pts5 = simulate_ber(&overlapped).map_err(|e| e.to_string())?;
    for (p1, p5) in pts.iter().zip(&pts5) {
        if p5.ber < p1.ber {
            return Err(format!("{} dB: BER M=5 {:.3e} < M=1 {:.3e}", p1.snr_db, p5.ber, p1.ber));
        }
    }
    parts.push("BER(M=5) >= BER(M=1) at every SNR".into());
    Ok(parts.join("; "))
}

fn fde_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = GfdmConfig::new(16, 5, 3).unwrap();
    let g = make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 }).unwrap();
    let plan = TxPlan::new(cfg, &g).unwrap();
    let mut worst = 0.0f64;
    let mut channels = 0;
    while channels < 10 {
        let taps: Vec<Complex64> = (0..rng.random_range(1..=4usize))
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let spec = ChannelSpec::new(taps, 0.0, 0).unwrap();
        let x = plan.modulate(&qpsk_block(cfg.block_len(), &mut rng)).unwrap();
        let received = transmit_through(&spec, &add_cp(&x, cfg.cp_len()).unwrap(), cfg.cp_len()).unwrap();
        let eq = match fde(&remove_cp(&received, cfg.cp_len()).unwrap(), &spec) {
            Ok(v) => v,
            // deep fade; draw another channel
            Err(GfdmError::SingularChannel { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let err = eq.max_abs_diff(&x);
        if err >= 1e-10 {
            return Err(format!("taps {:?}: error {err:e}", spec.taps()));
        }
        worst = worst.max(err);
        channels += 1;
    }
    Ok(format!("{channels} channels, max error {worst:.2e}"))
}

fn claim(index: usize) -> Outcome {
    let claims = check_claims(1024, 2.0, 8).map_err(|e| e.to_string())?;
    let c = &claims[index];
    let line = format!("{}: {}", c.name, c.detail);
    if c.holds {
        Ok(line)
    } else {
        Err(line)
    }
}

fn main() {
    let checks: Vec<Check> = vec![
        ("1 transmitter equivalence", transmitter_equivalence),
        ("2 receiver equivalence", receiver_equivalence),
        ("3 perfect reconstruction", perfect_reconstruction),
        ("4 structure theorems", structure_theorems),
        ("5a complexity tallies", complexity_tallies),
        ("5b claim: tx ratio at M=5", || claim(0)),
        ("5c claim: tx ratio for M>=13", || claim(1)),
        ("5d claim: MF+SIC vs MF/ZF", || claim(2)),
        ("5e claim: MF+SIC vs MMSE", || claim(3)),
        ("6 link sanity", link_sanity),
        ("7 FDE identity", fde_identity),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
