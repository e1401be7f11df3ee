//! Command-line harness: apply portrait maps, report entropies and
//! inequality margins, compute tomograms, minimize tomographic entropy,
//! and run seeded verification campaigns.
//!
//! Exit codes: 0 on success with zero violations, 2 when a campaign found
//! violations, 1 on usage, configuration, or runtime errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qportrait::campaign::{run_campaign, CampaignConfig, CampaignReport, ReportFormat, RunOptions};
use qportrait::density::pad_with_zeros;
use qportrait::entropy::{
    relative_entropy_margin, subadditivity_margin, von_neumann, InequalityId,
};
use qportrait::io::{read_merge_map_file, read_state_file, read_unitary_file};
use qportrait::tomography::{
    min_tomographic_entropy, tomogram, tomogram_spectral, OptimizerConfig,
};
use qportrait::{portrait_density, qutrit_standard_maps, ComplexMatrix, Tolerances};

#[derive(Parser)]
#[command(
    name = "qportrait",
    about = "Portrait maps, entropic inequalities, and tomographic entropy of qudit states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Apply portrait maps to a state and print the results with entropies.
    Portrait(PortraitArgs),
    /// Report the entropies and inequality margins of a state.
    Entropy(EntropyArgs),
    /// Compute the outcome probabilities of a state in a rotated basis.
    Tomogram(TomogramArgs),
    /// Minimize tomographic Shannon entropy over measurement bases.
    Tomomin(TomominArgs),
    /// Run a seeded verification campaign for one inequality.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PortraitArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Merge-map JSON file; defaults to the two standard qutrit maps.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Zero-pad portraits back to the input dimension for display.
    #[arg(long)]
    pad: bool,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct EntropyArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct TomogramArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Unitary-matrix JSON file.
    #[arg(long)]
    unitary: PathBuf,
    /// Use the spectral route (eigendecomposition + unistochastic matrix).
    #[arg(long)]
    spectral: bool,
    /// Report the tomogram entropy in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct TomominArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Random restarts on top of the analytic start.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Iteration budget per simplex descent.
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Acceptance threshold on the certificate.
    #[arg(long, default_value_t = 1e-6)]
    opt_tol: f64,
    /// Seed for the random restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Campaign config file (JSON mirror of the campaign configuration).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inequality to verify.
    #[arg(long)]
    inequality: Option<InequalityId>,
    /// Number of seeded trials.
    #[arg(long)]
    trials: Option<usize>,
    /// State or vector dimension (defaults per inequality).
    #[arg(long)]
    dim: Option<usize>,
    /// Fixed state rank; omitted ranks cycle 1..=dim by trial.
    #[arg(long)]
    rank: Option<usize>,
    /// Renyi order (eq2a-renyi only).
    #[arg(long)]
    alpha: Option<f64>,
    /// Tsallis order (eq2a-tsallis only).
    #[arg(long)]
    q: Option<f64>,
    /// Base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Base stream; trial t uses stream base + t.
    #[arg(long)]
    stream: Option<u64>,
    /// Violation tolerance (margins below -tol count as violations).
    #[arg(long)]
    tol: Option<f64>,
    /// Report output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Worker threads (0 = automatic).
    #[arg(long)]
    workers: Option<usize>,
    /// Dump every per-trial margin to this CSV file.
    #[arg(long)]
    dump_margins: Option<PathBuf>,
    /// eq14 only: random restarts.
    #[arg(long)]
    restarts: Option<usize>,
    /// eq14 only: iteration budget per descent.
    #[arg(long)]
    max_iters: Option<usize>,
    /// eq14 only: certificate tolerance.
    #[arg(long)]
    opt_tol: Option<f64>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path too; those
            // are not usage errors.
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { 0 } else { 1 };
        }
    };
    let result = match cli.command {
        Command::Portrait(args) => cmd_portrait(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Tomogram(args) => cmd_tomogram(args),
        Command::Tomomin(args) => cmd_tomomin(args),
        Command::Verify(args) => return cmd_verify(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

struct EntropyUnit {
    bits: bool,
}

impl EntropyUnit {
    fn new(bits: bool) -> Self {
        Self { bits }
    }

    fn show(&self, nats: f64) -> String {
        if self.bits {
            format!("{:.6} bits", nats / std::f64::consts::LN_2)
        } else {
            format!("{nats:.6} nats")
        }
    }
}

fn print_matrix(m: &ComplexMatrix) {
    print!("{m}");
}

fn cmd_portrait(args: PortraitArgs) -> qportrait::Result<()> {
    let rho = read_state_file(&args.state, &Tolerances::default())?;
    let unit = EntropyUnit::new(args.bits);
    let maps = match &args.map {
        Some(path) => vec![read_merge_map_file(path)?],
        None => {
            let (m1, m2) = qutrit_standard_maps();
            vec![m1, m2]
        }
    };
    println!(
        "state: dim {}, S = {}",
        rho.dim(),
        unit.show(von_neumann(&rho)?)
    );
    for (i, map) in maps.iter().enumerate() {
        let portrait = portrait_density(map, &rho)?;
        let kept: Vec<String> = map.kept().iter().map(|k| (k + 1).to_string()).collect();
        println!("portrait {} (kept {{{}}}):", i + 1, kept.join(","));
        if args.pad {
            print_matrix(&pad_with_zeros(&portrait, rho.dim())?);
        } else {
            print_matrix(portrait.matrix());
        }
        println!("  S = {}", unit.show(von_neumann(&portrait)?));
    }
    Ok(())
}

fn cmd_entropy(args: EntropyArgs) -> qportrait::Result<()> {
    let rho = read_state_file(&args.state, &Tolerances::default())?;
    let unit = EntropyUnit::new(args.bits);
    println!("S = {}", unit.show(von_neumann(&rho)?));
    if rho.dim() == 3 {
        let (margin, information) = subadditivity_margin(&rho)?;
        println!("S1 + S2 = {}", unit.show(margin.right));
        println!("I_q = {}", unit.show(information));
        let relative = relative_entropy_margin(&rho)?;
        if relative.infinite {
            println!("D(rho1 || rho2) = infinity (disjoint support)");
        } else {
            println!("D(rho1 || rho2) = {}", unit.show(relative.margin));
        }
    } else {
        println!("(portrait margins are reported for qutrit states only)");
    }
    Ok(())
}

fn cmd_tomogram(args: TomogramArgs) -> qportrait::Result<()> {
    let rho = read_state_file(&args.state, &Tolerances::default())?;
    let u = read_unitary_file(&args.unitary)?;
    let t = if args.spectral {
        tomogram_spectral(&rho, &u)?
    } else {
        tomogram(&rho, &u)?
    };
    for (m, p) in t.probabilities.probabilities().iter().enumerate() {
        println!("w[{}] = {:.12}", m + 1, p);
    }
    let unit = EntropyUnit::new(args.bits);
    println!("H(w) = {}", unit.show(qportrait::shannon(&t.probabilities)));
    Ok(())
}

fn cmd_tomomin(args: TomominArgs) -> qportrait::Result<()> {
    let rho = read_state_file(&args.state, &Tolerances::default())?;
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iters: args.max_iters,
        opt_tol: args.opt_tol,
        seed: args.seed,
    };
    let out = min_tomographic_entropy(&rho, &cfg)?;
    let unit = EntropyUnit::new(args.bits);
    println!("min H(w) = {}", unit.show(out.min_entropy));
    println!("S(rho)   = {}", unit.show(out.von_neumann));
    println!("certificate = {:.3e}", out.certificate);
    println!(
        "argmin angles = {}",
        serde_json::to_string(&out.argmin).expect("angles serialize")
    );
    Ok(())
}

fn config_error(reason: String) -> qportrait::Error {
    qportrait::Error::ConfigError { reason }
}

#[derive(serde::Deserialize)]
struct VerifyFile {
    #[serde(flatten)]
    config: CampaignConfig,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    format: Option<ReportFormat>,
    #[serde(default)]
    workers: Option<usize>,
    #[serde(default)]
    dump_margins: Option<PathBuf>,
}

fn build_verify_plan(
    args: VerifyArgs,
) -> qportrait::Result<(CampaignConfig, RunOptions, Option<PathBuf>, ReportFormat)> {
    let mut out = args.out;
    let mut format = args.format;
    let mut workers = args.workers;
    let mut dump_margins = args.dump_margins;

    let mut config = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| qportrait::Error::IoError {
            path: path.display().to_string(),
            source,
        })?;
        let file: VerifyFile =
            serde_json::from_str(&text).map_err(|e| qportrait::Error::ParseError {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
        out = out.or(file.out);
        format = format.or(file.format);
        workers = workers.or(file.workers);
        dump_margins = dump_margins.or(file.dump_margins);
        let mut config = file.config;
        if let Some(id) = args.inequality {
            config.inequality = id;
        }
        config
    } else {
        let id = args
            .inequality
            .ok_or_else(|| config_error("--inequality (or --config) is required".into()))?;
        CampaignConfig::new(id)
    };

    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if args.dim.is_some() {
        config.dim = args.dim;
    }
    if args.rank.is_some() {
        config.rank = args.rank;
    }
    match (args.alpha, args.q) {
        (Some(_), Some(_)) => {
            return Err(config_error(
                "--alpha and --q are mutually exclusive".into(),
            ));
        }
        (Some(alpha), None) => config.order = Some(alpha),
        (None, Some(q)) => config.order = Some(q),
        (None, None) => {}
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(stream) = args.stream {
        config.stream = stream;
    }
    if let Some(tol) = args.tol {
        config.tolerance = tol;
    }
    if let Some(restarts) = args.restarts {
        config.optimizer.restarts = restarts;
    }
    if let Some(max_iters) = args.max_iters {
        config.optimizer.max_iters = max_iters;
    }
    if let Some(opt_tol) = args.opt_tol {
        config.optimizer.opt_tol = opt_tol;
    }

    let run = RunOptions {
        workers: workers.unwrap_or(0),
        dump_margins,
    };
    Ok((config, run, out, format.unwrap_or(ReportFormat::Json)))
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    let (config, run, out, format) = match build_verify_plan(args) {
        Ok(plan) => plan,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let report: CampaignReport = match run_campaign(&config, &run) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let rendered = qportrait::campaign::render_report(&report, format);
    match &out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
            println!(
                "{}: {} trials, {} violations, {} infinite, {} errored -> {}",
                report.config.inequality,
                report.trials_run,
                report.violations,
                report.infinite_margins,
                report.errored_trials,
                path.display()
            );
        }
        None => print!("{rendered}"),
    }
    if report.violations > 0 {
        2
    } else {
        0
    }
}
