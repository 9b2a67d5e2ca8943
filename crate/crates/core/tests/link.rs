use gfdm::channel::preset;
use gfdm::link::{simulate_ber, BerSetup};
use gfdm::{make_prototype, FilterKind, GfdmConfig, ReceiverMode};

#[test]
fn mmse_is_never_worse_than_zf() {
    let cfg = GfdmConfig::new(64, 5, 16).unwrap();
    let setup = BerSetup {
        cfg,
        filter: make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.5 }).unwrap(),
        channel_taps: preset("awgn").unwrap(),
        modes: vec![ReceiverMode::Zf, ReceiverMode::Mmse],
        snr_db: vec![0.0, 4.0, 8.0],
        trials: 300,
        seed: 17,
        threads: None,
    };
    let pts = simulate_ber(&setup).unwrap();
    for pair in pts.chunks(2) {
        let (zf, mmse) = (&pair[0], &pair[1]);
        assert_eq!(zf.mode, ReceiverMode::Zf);
        assert!(mmse.ber <= zf.ber, "{} dB: MMSE {} > ZF {}", zf.snr_db, mmse.ber, zf.ber);
    }
}

#[test]
fn multipath_with_cp_costs_nothing_without_noise() {
    let cfg = GfdmConfig::new(32, 3, 3).unwrap();
    let setup = BerSetup {
        cfg,
        filter: make_prototype(cfg, FilterKind::RaisedCosine { rolloff: 0.2 }).unwrap(),
        channel_taps: preset("exp4").unwrap(),
        modes: vec![ReceiverMode::Zf, ReceiverMode::Mmse],
        snr_db: vec![f64::INFINITY],
        trials: 20,
        seed: 4,
        threads: Some(3),
    };
    assert!(simulate_ber(&setup).unwrap().iter().all(|p| p.bit_errors == 0));
}
