//! Command-line surface.
//!
//! Flags may also come from a flat `key = value` file passed with
//! `--config`; flags on the command line win. Exit codes: 0 pass, 1 check
//! failure, 2 usage error, 3 numerical singularity.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::channel::load_taps;
use crate::complexity::{check_claims, sweep, to_csv, ClaimCheck, Technique, DEFAULT_I, DEFAULT_L};
use crate::config::{ComplexBlock, GfdmConfig};
use crate::error::{GfdmError, Result};
use crate::link::{ber_csv, qpsk_map, simulate_ber, BerPoint, BerSetup};
use crate::oracle::{build_modulation_matrix, DirectReceiver};
use crate::prototype::{make_prototype, FilterKind, PrototypeFilter};
use crate::rx::{build_filter_bank, decode_bank, encode_bank, ReceiverFilterBank, ReceiverMode};
use crate::tx::TxPlan;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Fast-versus-oracle agreement required by `roundtrip`.
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-8;

pub const SNR_DEFINITION: &str = "Es/N0 per data symbol; noise variance = sum(g^2) * 10^(-snr_db/10)";

#[derive(Debug, Parser)]
#[command(name = "gfdm", version, about = "Low-complexity GFDM modem toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the fast transmitter and receivers with the matrix oracle.
    Roundtrip(SystemArgs),
    /// Monte Carlo bit-error rate of the QPSK link.
    Ber(SystemArgs),
    /// Emit the complexity sweep as CSV.
    Complexity(ComplexityArgs),
    /// Write a receiver filter bank to a GFB1 file.
    ExportFilters(SystemArgs),
    /// Read a GFB1 file and print its header.
    InspectFilters {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtoArg {
    Rc,
    Dirichlet,
    Impulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// Flat key=value file supplying defaults for the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, alias = "N")]
    pub n: Option<usize>,
    #[arg(long, alias = "M")]
    pub m: Option<usize>,
    /// Cyclic prefix length; defaults to N/4.
    #[arg(long)]
    pub cp: Option<usize>,
    #[arg(long, value_enum)]
    pub proto: Option<ProtoArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Receiver mode(s): mf, zf, mmse; comma separated for `ber`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Comma-separated SNR points in dB.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Channel preset (awgn, two-ray, exp4) or a tap file.
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Args)]
pub struct ComplexityArgs {
    #[arg(long, alias = "N", default_value_t = 1024)]
    pub n: usize,
    /// Overlap factors: `a..b` (inclusive), a comma list, or one value.
    #[arg(long, alias = "M", default_value = "1..21")]
    pub m: String,
    #[arg(long, default_value_t = DEFAULT_L)]
    pub l: f64,
    #[arg(long, default_value_t = DEFAULT_I)]
    pub i: u32,
    /// Verify the published complexity-reduction ratios; exit 1 if any fails.
    #[arg(long)]
    pub check_claims: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved parameters of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub m: usize,
    pub cp: usize,
    pub proto: String,
    pub alpha: f64,
    pub modes: Vec<ReceiverMode>,
    pub snr_db: Vec<f64>,
    pub sigma2: Option<f64>,
    pub channel: String,
    pub seed: u64,
    pub trials: u64,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub snr_definition: &'static str,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 64,
            m: 5,
            cp: 16,
            proto: "rc".into(),
            alpha: 0.5,
            modes: vec![ReceiverMode::Zf],
            snr_db: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
            sigma2: None,
            channel: "awgn".into(),
            seed: 42,
            trials: 100,
            out: None,
            format: None,
            snr_definition: SNR_DEFINITION,
        }
    }
}

fn usage(msg: impl Into<String>) -> GfdmError {
    GfdmError::InvalidConfig(msg.into())
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", k + 1)))?;
        out.insert(key.trim().replace('_', "-").to_ascii_lowercase(), value.trim().to_string());
    }
    Ok(out)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| usage(format!("bad {what} '{p}'"))))
        .collect()
}

/// `a..b` (inclusive), `a,b,c`, or `a`.
pub fn parse_m_range(s: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| usage(format!("bad range '{s}'")))?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| usage(format!("bad range '{s}'")))?;
        if a > b {
            return Err(usage(format!("empty range '{s}'")));
        }
        return Ok((a..=b).collect());
    }
    parse_list(s, "M")
}

impl RunConfig {
    /// Merges the optional config file under the explicit flags.
    pub fn resolve(args: &SystemArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => parse_config_file(&std::fs::read_to_string(p).map_err(|e| usage(format!("config {}: {e}", p.display())))?)?,
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);
        fn num<T: std::str::FromStr>(v: Option<&str>, k: &str) -> Result<Option<T>> {
            v.map(|s| s.parse::<T>().map_err(|_| usage(format!("bad value for {k}: '{s}'"))))
                .transpose()
        }
        for key in file.keys() {
            const KNOWN: [&str; 13] = [
                "n", "m", "cp", "proto", "alpha", "mode", "snr-db", "sigma2", "channel", "seed", "trials", "out",
                "format",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(usage(format!("unknown config key '{key}'")));
            }
        }

        let mut c = RunConfig::default();
        if let Some(v) = args.n.or(num(get("n"), "n")?) {
            c.n = v;
        }
        if let Some(v) = args.m.or(num(get("m"), "m")?) {
            c.m = v;
        }
        // without an explicit CP, use a quarter of the subcarrier count
        c.cp = match args.cp.or(num(get("cp"), "cp")?) {
            Some(v) => v,
            None => c.n / 4,
        };
        let proto = match args.proto {
            Some(ProtoArg::Rc) => Some("rc".to_string()),
            Some(ProtoArg::Dirichlet) => Some("dirichlet".to_string()),
            Some(ProtoArg::Impulse) => Some("impulse".to_string()),
            None => get("proto").map(str::to_string),
        };
        if let Some(p) = proto {
            if !["rc", "dirichlet", "impulse"].contains(&p.as_str()) {
                return Err(usage(format!("unknown prototype '{p}'")));
            }
            c.proto = p;
        }
        if let Some(v) = args.alpha.or(num(get("alpha"), "alpha")?) {
            c.alpha = v;
        }
        if let Some(v) = args.mode.as_deref().or(get("mode")) {
            c.modes = parse_list(v, "mode")?;
            if c.modes.is_empty() {
                return Err(usage("no receiver mode given"));
            }
        }
        if let Some(v) = args.snr_db.as_deref().or(get("snr-db")) {
            c.snr_db = parse_list(v, "SNR")?;
        }
        c.sigma2 = args.sigma2.or(num(get("sigma2"), "sigma2")?);
        if let Some(v) = args.channel.as_deref().or(get("channel")) {
            c.channel = v.to_string();
        }
        if let Some(v) = args.seed.or(num(get("seed"), "seed")?) {
            c.seed = v;
        }
        if let Some(v) = args.trials.or(num(get("trials"), "trials")?) {
            c.trials = v;
        }
        c.out = args.out.clone().or(get("out").map(PathBuf::from));
        c.format = match args.format {
            Some(FormatArg::Csv) => Some("csv".into()),
            Some(FormatArg::Json) => Some("json".into()),
            None => get("format").map(str::to_string),
        };
        if let Some(f) = &c.format {
            if f != "csv" && f != "json" {
                return Err(usage(format!("unknown format '{f}'")));
            }
        }
        if let Some(s) = c.sigma2 {
            if !(s.is_finite() && s >= 0.0) {
                return Err(usage(format!("sigma2 {s} must be >= 0")));
            }
        }
        Ok(c)
    }

    pub fn gfdm_config(&self) -> Result<GfdmConfig> {
        GfdmConfig::new(self.n, self.m, self.cp)
    }

    pub fn filter_kind(&self) -> FilterKind {
        match self.proto.as_str() {
            "dirichlet" => FilterKind::Dirichlet,
            "impulse" => FilterKind::UnitImpulse,
            _ => FilterKind::RaisedCosine { rolloff: self.alpha },
        }
    }

    pub fn prototype(&self) -> Result<PrototypeFilter> {
        make_prototype(self.gfdm_config()?, self.filter_kind())
    }

    /// Noise variance for MMSE in `roundtrip` and `export-filters`.
    pub fn mmse_sigma2(&self) -> f64 {
        self.sigma2.unwrap_or(0.1)
    }
}

/// Single-command JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub metrics: serde_json::Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_abs_error: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub checks: Vec<CheckResult>,
    /// Set when a check failed because an operator is singular.
    pub singular: Option<String>,
}

impl RoundtripReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn random_complex(len: usize, rng: &mut ChaCha8Rng) -> ComplexBlock {
    ComplexBlock::new(
        (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

/// Runs the transmitter and the three receivers against the oracle, plus
/// ZF reconstruction of the transmitted block.
pub fn cmd_roundtrip(cfg: &RunConfig) -> Result<RoundtripReport> {
    let gcfg = cfg.gfdm_config()?;
    let filter = cfg.prototype()?;
    let a = build_modulation_matrix(&gcfg, &filter)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bits: Vec<bool> = (0..2 * gcfg.block_len()).map(|_| rng.random()).collect();
    let d = ComplexBlock::new(qpsk_map(&bits));
    let y = random_complex(gcfg.block_len(), &mut rng);

    let mut checks = Vec::new();
    let mut singular = None;
    let mut record = |name: &'static str, outcome: Result<f64>| {
        let check = match outcome {
            Ok(err) => CheckResult {
                name,
                max_abs_error: Some(err),
                pass: err < ROUNDTRIP_TOLERANCE,
                error: None,
            },
            Err(e) => {
                if e.is_singular() && singular.is_none() {
                    singular = Some(format!("{name}: {e}"));
                }
                CheckResult {
                    name,
                    max_abs_error: None,
                    pass: false,
                    error: Some(e.to_string()),
                }
            }
        };
        checks.push(check);
    };

    let plan = TxPlan::new(gcfg, &filter)?;
    let x = plan.modulate(&d)?;
    record("tx", Ok(x.max_abs_diff(&a.apply(&d)?)));

    let sigma2 = cfg.mmse_sigma2();
    for (name, mode) in [("mf", ReceiverMode::Mf), ("zf", ReceiverMode::Zf), ("mmse", ReceiverMode::Mmse)] {
        let outcome = build_filter_bank(&filter, &gcfg, mode, sigma2).and_then(|bank| {
            let fast = bank.demodulate(&y)?;
            let slow = DirectReceiver::new(&a, mode, sigma2)?.receive(&y)?;
            Ok(fast.max_abs_diff(&slow))
        });
        record(name, outcome);
    }

    let recon = build_filter_bank(&filter, &gcfg, ReceiverMode::Zf, 0.0)
        .and_then(|bank| Ok(bank.demodulate(&x)?.max_abs_diff(&d)));
    record("zf_reconstruction", recon);

    Ok(RoundtripReport { checks, singular })
}

/// Monte Carlo BER over every requested SNR and mode.
pub fn cmd_ber(cfg: &RunConfig) -> Result<Vec<BerPoint>> {
    let gcfg = cfg.gfdm_config()?;
    let threads = std::env::var("GFDM_THREADS")
        .ok()
        .map(|v| v.parse::<usize>().map_err(|_| usage(format!("GFDM_THREADS='{v}' is not a count"))))
        .transpose()?;
    simulate_ber(&BerSetup {
        cfg: gcfg,
        filter: cfg.prototype()?,
        channel_taps: load_taps(&cfg.channel)?,
        modes: cfg.modes.clone(),
        snr_db: cfg.snr_db.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        threads,
    })
}

/// Sweep CSV, plus the claim checks when requested.
pub fn cmd_complexity(args: &ComplexityArgs) -> Result<(String, Option<Vec<ClaimCheck>>)> {
    let ms = parse_m_range(&args.m)?;
    let rows = sweep(&Technique::ALL, args.n, &ms, args.l, args.i)?;
    let claims = if args.check_claims {
        Some(check_claims(args.n, args.l, args.i)?)
    } else {
        None
    };
    Ok((to_csv(&rows), claims))
}

/// Builds the bank for the first requested mode and writes it to `path`.
pub fn cmd_export_filters(cfg: &RunConfig, path: &Path) -> Result<ReceiverFilterBank> {
    let gcfg = cfg.gfdm_config()?;
    let filter = cfg.prototype()?;
    let mode = cfg.modes[0];
    let bank = build_filter_bank(&filter, &gcfg, mode, cfg.mmse_sigma2())?;
    std::fs::write(path, encode_bank(&bank))?;
    Ok(bank)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn exit_code_for(e: &GfdmError) -> i32 {
    match e {
        e if e.is_singular() => EXIT_SINGULAR,
        GfdmError::InvalidConfig(_)
        | GfdmError::InvalidFilter(_)
        | GfdmError::CpOutOfRange { .. }
        | GfdmError::CpShorterThanChannel { .. }
        | GfdmError::Domain(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Roundtrip(args) => {
            let cfg = RunConfig::resolve(&args)?;
            let rep = cmd_roundtrip(&cfg)?;
            let pass = rep.pass();
            let singular = rep.singular.clone();
            for c in rep.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "check {} failed: {}",
                    c.name,
                    c.error.clone().unwrap_or_else(|| format!("max error {:e}", c.max_abs_error.unwrap_or(f64::NAN)))
                );
            }
            let report = Report {
                command: "roundtrip",
                config: cfg.clone(),
                metrics: json!({ "tolerance": ROUNDTRIP_TOLERANCE, "checks": rep.checks }),
                pass,
            };
            emit(cfg.out.as_deref(), &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))?;
            Ok(if pass {
                EXIT_OK
            } else if singular.is_some() {
                EXIT_SINGULAR
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Ber(args) => {
            let cfg = RunConfig::resolve(&args)?;
            let points = cmd_ber(&cfg)?;
            let text = if cfg.format.as_deref() == Some("json") {
                let report = Report {
                    command: "ber",
                    config: cfg.clone(),
                    metrics: json!({ "points": points }),
                    pass: true,
                };
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            } else {
                ber_csv(&points)
            };
            emit(cfg.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Complexity(args) => {
            let (csv, claims) = cmd_complexity(&args)?;
            emit(args.out.as_deref(), &csv)?;
            match claims {
                None => Ok(EXIT_OK),
                Some(claims) => {
                    for c in &claims {
                        eprintln!("[{}] {}: {}", if c.holds { "PASS" } else { "FAIL" }, c.name, c.detail);
                    }
                    Ok(if claims.iter().all(|c| c.holds) { EXIT_OK } else { EXIT_CHECK_FAILED })
                }
            }
        }
        Command::ExportFilters(args) => {
            let cfg = RunConfig::resolve(&args)?;
            let path = cfg.out.clone().ok_or_else(|| usage("export-filters needs --out <path>"))?;
            let bank = cmd_export_filters(&cfg, &path)?;
            eprintln!(
                "wrote {} bank (N={}, M={}) to {}",
                bank.mode().name(),
                bank.cfg().n(),
                bank.cfg().m(),
                path.display()
            );
            Ok(EXIT_OK)
        }
        Command::InspectFilters { path } => {
            let bank = decode_bank(&std::fs::read(&path)?, None)?;
            let header = json!({
                "n": bank.cfg().n(),
                "m": bank.cfg().m(),
                "mode": bank.mode().name(),
                "sigma2": bank.sigma2(),
                "filter_kind_tag": bank.filter_kind().tag(),
            });
            println!("{}", serde_json::to_string_pretty(&header).expect("serializable"));
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(n: usize, m: usize) -> SystemArgs {
        SystemArgs {
            n: Some(n),
            m: Some(m),
            cp: Some(0),
            ..Default::default()
        }
    }

    #[test]
    fn roundtrip_rc_4x3_passes() {
        let mut a = args(4, 3);
        a.alpha = Some(0.5);
        a.seed = Some(42);
        let rep = cmd_roundtrip(&RunConfig::resolve(&a).unwrap()).unwrap();
        assert_eq!(rep.checks.len(), 5);
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.checks.iter().all(|c| c.max_abs_error.unwrap() < 1e-10));
    }

    #[test]
    fn roundtrip_trivial_size_has_no_error() {
        let rep = cmd_roundtrip(&RunConfig::resolve(&args(1, 1)).unwrap()).unwrap();
        assert!(rep.pass());
        assert!(rep.checks.iter().all(|c| c.max_abs_error == Some(0.0)), "{rep:?}");
    }

    #[test]
    fn roundtrip_reports_singular_zf() {
        let mut a = args(4, 4);
        a.proto = Some(ProtoArg::Dirichlet);
        let rep = cmd_roundtrip(&RunConfig::resolve(&a).unwrap()).unwrap();
        assert!(!rep.pass());
        let zf = rep.checks.iter().find(|c| c.name == "zf").unwrap();
        assert!(zf.error.as_ref().unwrap().contains("branches"));
        assert!(rep.singular.is_some());
        // MF and MMSE are unaffected
        assert!(rep.checks.iter().find(|c| c.name == "mmse").unwrap().pass);
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let kv = parse_config_file("n = 8\nm=3 # slots\nproto = dirichlet\nsnr_db = 1,2\n").unwrap();
        assert_eq!(kv["snr-db"], "1,2");
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "n = 8\nm = 3\nproto = dirichlet\nmode = zf,mmse\n").unwrap();
        let a = SystemArgs {
            config: Some(p.clone()),
            m: Some(5),
            ..Default::default()
        };
        let c = RunConfig::resolve(&a).unwrap();
        assert_eq!((c.n, c.m, c.proto.as_str()), (8, 5, "dirichlet"));
        assert_eq!(c.modes, vec![ReceiverMode::Zf, ReceiverMode::Mmse]);

        std::fs::write(&p, "bogus = 1\n").unwrap();
        assert!(RunConfig::resolve(&a).is_err());
        std::fs::write(&p, "n 8\n").unwrap();
        assert!(RunConfig::resolve(&a).is_err());
    }

    #[test]
    fn m_ranges() {
        assert_eq!(parse_m_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_m_range("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_m_range("3,5").unwrap(), vec![3, 5]);
        assert_eq!(parse_m_range("7").unwrap(), vec![7]);
        assert!(parse_m_range("4..1").is_err());
        assert!(parse_m_range("x").is_err());
    }

    #[test]
    fn export_then_import_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        for (mode, s2) in [("mf", None), ("mmse", Some(0.1))] {
            let mut a = args(8, 3);
            a.mode = Some(mode.into());
            a.sigma2 = s2;
            let c = RunConfig::resolve(&a).unwrap();
            let path = dir.path().join(format!("{mode}.gfb"));
            let bank = cmd_export_filters(&c, &path).unwrap();
            let back = crate::rx::read_bank(&path, Some(bank.mode())).unwrap();
            assert_eq!(back, bank);
            if let Some(s) = s2 {
                assert_eq!(back.sigma2(), s);
            }
        }
    }

    #[test]
    fn complexity_single_point() {
        let a = ComplexityArgs {
            n: 1,
            m: "1".into(),
            l: 2.0,
            i: 8,
            check_claims: false,
            out: None,
        };
        let (csv, claims) = cmd_complexity(&a).unwrap();
        assert!(claims.is_none());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "technique,N,M,L,I,cm");
        assert_eq!(lines.len(), 1 + Technique::ALL.len());
        assert!(lines.contains(&"ProposedTx,1,1,2,8,0.5"));
        assert!(lines.contains(&"DirectTx,1,1,2,8,1"));
        assert!(lines.contains(&"DirectMmse,1,1,2,8,2.3333333333333335"));
    }
}
