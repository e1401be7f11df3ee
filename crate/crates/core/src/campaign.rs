//! Batch verification campaigns: run seeded trials of one inequality,
//! aggregate the margins, and emit machine-readable reports.
//!
//! Trial `t` draws all of its inputs from the stream `base_stream + t`, so
//! any recorded margin can be replayed exactly from the report alone.
//! Aggregation happens sequentially in trial order after the (possibly
//! parallel) evaluation pass, which makes reports byte-identical across
//! worker counts.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::entropy::{
    classical_portrait_margin, relative_entropy_margin, ssa_margin, subadditivity_margin,
    EntropyKind, InequalityId,
};
use crate::error::{Error, Result};
use crate::portrait::{portrait_density, portrait_pair_via_embedding, qutrit_standard_maps};
use crate::rng::{CounterRng, SeedSpec};
use crate::sampler;
use crate::tomography::{min_tomographic_entropy, OptimizerConfig};

/// Report and config schema version.
pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_trials() -> usize {
    1000
}

fn default_tolerance() -> f64 {
    1e-10
}

/// Campaign description. `dim` and `rank` may be omitted: the dimension
/// defaults per inequality and an omitted rank cycles through 1..=dim by
/// trial index, which exercises boundary (low-rank) states alongside
/// full-rank ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub inequality: InequalityId,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub rank: Option<usize>,
    /// Renyi alpha or Tsallis q, required exactly for those inequalities.
    #[serde(default)]
    pub order: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Base stream; trial t uses stream base + t.
    #[serde(default)]
    pub stream: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Settings for the eq14 minimizer; ignored by other inequalities.
    #[serde(default)]
    pub optimizer: OptimizerConfig,
}

impl CampaignConfig {
    pub fn new(inequality: InequalityId) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            inequality,
            trials: default_trials(),
            dim: None,
            rank: None,
            order: None,
            seed: 0,
            stream: 0,
            tolerance: default_tolerance(),
            optimizer: OptimizerConfig::default(),
        }
    }

    fn default_dim(inequality: InequalityId) -> usize {
        match inequality {
            InequalityId::Ssa => 8,
            _ => 3,
        }
    }

    fn uses_density_sampler(inequality: InequalityId) -> bool {
        !matches!(
            inequality,
            InequalityId::Eq2aShannon | InequalityId::Eq2aRenyi | InequalityId::Eq2aTsallis
        )
    }

    /// Fill defaults and check every invariant; the result is the config
    /// echoed verbatim in reports.
    pub fn validated(&self) -> Result<CampaignConfig> {
        let fail = |reason: String| Err(Error::ConfigError { reason });
        if self.schema != SCHEMA_VERSION {
            return fail(format!("unsupported schema {}", self.schema));
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return fail(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        let dim = self
            .dim
            .unwrap_or_else(|| Self::default_dim(self.inequality));
        match self.inequality {
            InequalityId::Eq2aShannon | InequalityId::Eq2aRenyi | InequalityId::Eq2aTsallis => {
                if dim < 2 {
                    return fail(format!("dim must be >= 2, got {dim}"));
                }
            }
            InequalityId::Eq6Subadditivity
            | InequalityId::Eq9Information
            | InequalityId::Eq10Relative
            | InequalityId::PortraitPositivity
            | InequalityId::OracleEmbedding => {
                if dim != 3 {
                    return fail(format!(
                        "{} is defined for qutrits (dim 3), got dim {dim}",
                        self.inequality
                    ));
                }
            }
            InequalityId::Ssa => {
                if !(2..=8).contains(&dim) {
                    return fail(format!("ssa needs 2 <= dim <= 8, got {dim}"));
                }
            }
            InequalityId::Eq14Minimization => {
                if !(2..=8).contains(&dim) {
                    return fail(format!("eq14-minimization needs 2 <= dim <= 8, got {dim}"));
                }
            }
        }
        match self.order {
            Some(order) if !self.inequality.needs_order() => {
                return fail(format!(
                    "{} takes no order parameter (got {order})",
                    self.inequality
                ));
            }
            Some(order) => {
                if !order.is_finite() || order <= 0.0 || (order - 1.0).abs() <= 1e-9 {
                    return fail(format!(
                        "order must be positive and away from 1, got {order}"
                    ));
                }
            }
            None if self.inequality.needs_order() => {
                return fail(format!("{} requires an order parameter", self.inequality));
            }
            None => {}
        }
        if let Some(rank) = self.rank {
            if !Self::uses_density_sampler(self.inequality) {
                return fail(format!("{} takes no rank parameter", self.inequality));
            }
            if rank == 0 || rank > dim {
                return fail(format!("rank must be in 1..={dim}, got {rank}"));
            }
        }
        let mut resolved = self.clone();
        resolved.dim = Some(dim);
        Ok(resolved)
    }
}

/// How to execute a campaign; none of this affects report contents except
/// the wall-time field.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker thread count; 0 picks the rayon default.
    pub workers: usize,
    /// Optional CSV dump of every per-trial margin.
    pub dump_margins: Option<PathBuf>,
}

/// Seed/stream address of the minimal-margin trial; enough to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub trial: u64,
    pub seed: u64,
    pub stream: u64,
    pub margin: f64,
}

/// Aggregate outcome of a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema: u32,
    pub config: CampaignConfig,
    pub trials_run: usize,
    /// Finite margins below -tolerance.
    pub violations: usize,
    /// Infinite margins (disjoint-support relative entropy), satisfied by
    /// convention and excluded from the finite statistics.
    pub infinite_margins: usize,
    /// Trials that failed numerically; counted, never silently dropped.
    pub errored_trials: usize,
    pub min_margin: Option<f64>,
    pub mean_margin: Option<f64>,
    pub max_margin: Option<f64>,
    pub worst_case: Option<WorstCase>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone)]
enum TrialOutcome {
    Finite(f64),
    Infinite,
    Errored(String),
}

fn rank_for_trial(cfg: &CampaignConfig, dim: usize, trial: u64) -> usize {
    cfg.rank.unwrap_or((trial as usize % dim) + 1)
}

fn classical_trial(dim: usize, rng: &mut CounterRng, kind: EntropyKind) -> Result<TrialOutcome> {
    let p = sampler::random_probability_vector_from_rng(dim, rng);
    let out_dim = rng.uniform_below(dim as u64) as usize + 1;
    let map = sampler::random_coarse_grain_map_from_rng(dim, out_dim, rng)?;
    let margin = classical_portrait_margin(&p, &map, kind)?;
    Ok(TrialOutcome::Finite(margin.margin))
}

fn sampled_state(
    cfg: &CampaignConfig,
    dim: usize,
    trial: u64,
    rng: &mut CounterRng,
) -> Result<DensityMatrix> {
    sampler::random_density_from_rng(dim, rank_for_trial(cfg, dim, trial), rng)
}

fn run_trial(cfg: &CampaignConfig, trial: u64) -> TrialOutcome {
    let dim = cfg.dim.expect("validated config");
    let stream = cfg.stream + trial;
    let mut rng = CounterRng::new(SeedSpec::new(cfg.seed, stream));
    let result = (|| -> Result<TrialOutcome> {
        match cfg.inequality {
            InequalityId::Eq2aShannon => classical_trial(dim, &mut rng, EntropyKind::Shannon),
            InequalityId::Eq2aRenyi => {
                let alpha = cfg.order.expect("validated config");
                classical_trial(dim, &mut rng, EntropyKind::Renyi(alpha))
            }
            InequalityId::Eq2aTsallis => {
                let q = cfg.order.expect("validated config");
                classical_trial(dim, &mut rng, EntropyKind::Tsallis(q))
            }
            InequalityId::Eq6Subadditivity | InequalityId::Eq9Information => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                let (_, information) = subadditivity_margin(&rho)?;
                Ok(TrialOutcome::Finite(information))
            }
            InequalityId::Eq10Relative => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                let margin = relative_entropy_margin(&rho)?;
                if margin.infinite {
                    Ok(TrialOutcome::Infinite)
                } else {
                    Ok(TrialOutcome::Finite(margin.margin))
                }
            }
            InequalityId::Ssa => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                Ok(TrialOutcome::Finite(ssa_margin(&rho)?.margin))
            }
            InequalityId::Eq14Minimization => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                let optimizer = OptimizerConfig {
                    seed: stream,
                    ..cfg.optimizer
                };
                let out = min_tomographic_entropy(&rho, &optimizer)?;
                Ok(TrialOutcome::Finite(out.certificate))
            }
            InequalityId::PortraitPositivity => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                let (m1, m2) = qutrit_standard_maps();
                let mut min_eig = f64::INFINITY;
                for map in [&m1, &m2] {
                    let portrait = portrait_density(map, &rho)?;
                    let trace_dev = (portrait.matrix().trace().re - 1.0).abs();
                    if trace_dev > 1e-12 {
                        return Err(Error::ConfigError {
                            reason: format!("portrait trace drifted by {trace_dev:e}"),
                        });
                    }
                    min_eig = min_eig.min(portrait.eig()?.eigenvalues[0]);
                }
                Ok(TrialOutcome::Finite(min_eig))
            }
            InequalityId::OracleEmbedding => {
                let rho = sampled_state(cfg, dim, trial, &mut rng)?;
                let (m1, m2) = qutrit_standard_maps();
                let direct1 = portrait_density(&m1, &rho)?;
                let direct2 = portrait_density(&m2, &rho)?;
                let (trace1, trace2) = portrait_pair_via_embedding(&rho)?;
                let diff = direct1
                    .matrix()
                    .max_abs_diff(trace1.matrix())
                    .max(direct2.matrix().max_abs_diff(trace2.matrix()));
                Ok(TrialOutcome::Finite(0.0 - diff))
            }
        }
    })();
    match result {
        Ok(outcome) => outcome,
        Err(e) => TrialOutcome::Errored(e.to_string()),
    }
}

/// Execute a campaign. The report depends only on the validated config;
/// worker count changes nothing but the wall time.
pub fn run_campaign(cfg: &CampaignConfig, opts: &RunOptions) -> Result<CampaignReport> {
    let cfg = cfg.validated()?;
    let started = Instant::now();

    let trials: Vec<u64> = (0..cfg.trials as u64).collect();
    let outcomes: Vec<TrialOutcome> = if opts.workers == 1 {
        trials.iter().map(|&t| run_trial(&cfg, t)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::ConfigError {
                reason: format!("could not build worker pool: {e}"),
            })?;
        pool.install(|| trials.par_iter().map(|&t| run_trial(&cfg, t)).collect())
    };

    if let Some(path) = &opts.dump_margins {
        dump_margins(&cfg, &outcomes, path)?;
    }

    // Aggregate sequentially in trial order.
    let mut violations = 0;
    let mut infinite_margins = 0;
    let mut errored_trials = 0;
    let mut finite_count = 0usize;
    let mut sum = 0.0;
    let mut min_margin = f64::INFINITY;
    let mut max_margin = f64::NEG_INFINITY;
    let mut worst: Option<WorstCase> = None;
    for (t, outcome) in outcomes.iter().enumerate() {
        match outcome {
            TrialOutcome::Finite(margin) => {
                finite_count += 1;
                sum += margin;
                if *margin < -cfg.tolerance {
                    violations += 1;
                }
                if *margin > max_margin {
                    max_margin = *margin;
                }
                if *margin < min_margin {
                    min_margin = *margin;
                    worst = Some(WorstCase {
                        trial: t as u64,
                        seed: cfg.seed,
                        stream: cfg.stream + t as u64,
                        margin: *margin,
                    });
                }
            }
            TrialOutcome::Infinite => infinite_margins += 1,
            TrialOutcome::Errored(_) => errored_trials += 1,
        }
    }

    Ok(CampaignReport {
        schema: SCHEMA_VERSION,
        config: cfg.clone(),
        trials_run: outcomes.len(),
        violations,
        infinite_margins,
        errored_trials,
        min_margin: (finite_count > 0).then_some(min_margin),
        mean_margin: (finite_count > 0).then_some(sum / finite_count as f64),
        max_margin: (finite_count > 0).then_some(max_margin),
        worst_case: worst,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

fn dump_margins(cfg: &CampaignConfig, outcomes: &[TrialOutcome], path: &Path) -> Result<()> {
    let io_err = |source: std::io::Error| Error::IoError {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    let mut write = |line: String| out.write_all(line.as_bytes()).map_err(io_err);
    write("trial,stream,margin,infinite,error\n".into())?;
    for (t, outcome) in outcomes.iter().enumerate() {
        let stream = cfg.stream + t as u64;
        let line = match outcome {
            TrialOutcome::Finite(m) => format!("{t},{stream},{m},false,\n"),
            TrialOutcome::Infinite => format!("{t},{stream},,true,\n"),
            TrialOutcome::Errored(e) => {
                format!("{t},{stream},,false,\"{}\"\n", e.replace('"', "\"\""))
            }
        };
        write(line)?;
    }
    Ok(())
}

/// Report output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::ConfigError {
                reason: format!("unknown format {other:?} (expected json or csv)"),
            }),
        }
    }
}

/// Render a report; JSON is the full schema, CSV is one flat aggregate row.
pub fn render_report(report: &CampaignReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let cfg = &report.config;
            let opt_num = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            let opt_count = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
            let mut s = String::new();
            s.push_str(
                "schema,inequality,trials,dim,rank,order,seed,stream,tolerance,\
                 trials_run,violations,infinite_margins,errored_trials,\
                 min_margin,mean_margin,max_margin,worst_trial,worst_stream,wall_time_seconds\n",
            );
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                report.schema,
                cfg.inequality,
                cfg.trials,
                opt_count(cfg.dim),
                opt_count(cfg.rank),
                opt_num(cfg.order),
                cfg.seed,
                cfg.stream,
                cfg.tolerance,
                report.trials_run,
                report.violations,
                report.infinite_margins,
                report.errored_trials,
                opt_num(report.min_margin),
                opt_num(report.mean_margin),
                opt_num(report.max_margin),
                report
                    .worst_case
                    .as_ref()
                    .map_or(String::new(), |w| w.trial.to_string()),
                report
                    .worst_case
                    .as_ref()
                    .map_or(String::new(), |w| w.stream.to_string()),
                report.wall_time_seconds,
            ));
            s
        }
    }
}

/// Write a report to disk in the chosen format.
pub fn write_report(
    report: &CampaignReport,
    path: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_report(report, format)).map_err(|source| Error::IoError {
        path: path.display().to_string(),
        source,
    })
}

/// Parse a JSON report back; the inverse of the JSON side of
/// [`write_report`].
pub fn read_report(path: impl AsRef<Path>) -> Result<CampaignReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::IoError {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::ParseError {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}
