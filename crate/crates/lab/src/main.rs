use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multidraw_lab::config::{
    CapacityConfig, ClusterCountConfig, DecoderChoice, E2eConfig, Lemma1Config, Lemma2Config, PairCell,
    PairConsistencyConfig, RateScale, RegimeCurvesConfig,
};
use multidraw_lab::experiments::{
    lemma2_warning, run_capacity, run_cluster_count, run_e2e_sweep, run_lemma1, run_lemma2, run_pair_consistency,
    run_regime_curves,
};
use multidraw_lab::output::{emit_csv, emit_json, trials_path, write_csv_file};
use multidraw_lab::{load_config, DistributionSpec, ExperimentConfig, ExperimentKind, LabError, Result};

#[derive(Parser)]
#[command(
    name = "multidraw",
    version,
    about = "Simulations for the BEC multi-draw shuffling channel"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Maximum candidate systems per exhaustive decode.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Stop decoding at the first valid message.
    #[arg(long, global = true)]
    first_hit: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity, p_eff, gamma and regime for one parameter point (JSON).
    Capacity {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Distribution as JSON, e.g. '{"pmf":[0.1,0.9]}'.
        #[arg(long)]
        dist: Option<DistributionSpec>,
    },
    /// Region boundaries beta_blue(p) and beta_green(p) on a log grid (CSV).
    RegimeCurves {
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Full-rank probability of random submatrices vs the exact product (CSV).
    Lemma1 {
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<f64>>,
    },
    /// Incorrect and correct edge counts across strand counts (CSV).
    Lemma2 {
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        dist: Option<DistributionSpec>,
    },
    /// Consistency frequency of independent strands vs the closed form (CSV).
    PairConsistency {
        /// Cells as p:L, e.g. 0.1:8,0.3:16.
        #[arg(long, value_delimiter = ',', value_parser = parse_cell)]
        cells: Option<Vec<PairCell>>,
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Cluster-count deviations vs the Hoeffding bound (CSV).
    ClusterCount {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Repeatable.
        #[arg(long)]
        dist: Vec<DistributionSpec>,
    },
    /// End-to-end encode, transmit and decode over a rate grid (CSV).
    Simulate {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, conflicts_with = "beta")]
        l: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        dist: Option<DistributionSpec>,
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        rate_scale: Option<Scale>,
        #[arg(long)]
        messages: Option<u64>,
        #[arg(long)]
        genie_only: bool,
        /// Per-trial records (default: <out stem>.trials.csv).
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Absolute,
    Capacity,
}

fn parse_cell(s: &str) -> std::result::Result<PairCell, String> {
    let (p, l) = s.split_once(':').ok_or_else(|| format!("expected p:L, got {s}"))?;
    Ok(PairCell {
        p: p.parse().map_err(|e| format!("{p}: {e}"))?,
        l: l.parse().map_err(|e| format!("{l}: {e}"))?,
    })
}

fn base_config(common: &Common, kind: ExperimentKind) -> Result<Option<ExperimentConfig>> {
    let Some(path) = &common.config else {
        return Ok(None);
    };
    let cfg = load_config(path)?;
    if cfg.kind() != kind {
        return Err(LabError::Config {
            path: Some(path.clone()),
            line: None,
            column: None,
            message: format!("config is for experiment \"{}\", not \"{kind}\"", cfg.kind()),
        });
    }
    Ok(Some(cfg))
}

macro_rules! load_as {
    ($common:expr, $kind:ident, $ty:ty) => {
        match base_config($common, ExperimentKind::$kind)? {
            Some(ExperimentConfig::$kind(c)) => c,
            Some(_) => unreachable!("kind checked"),
            None => <$ty>::default(),
        }
    };
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn run(cli: Cli) -> Result<()> {
    let common = cli.common;
    match cli.command {
        Command::Capacity { p, beta, dist } => {
            let mut c = load_as!(&common, Capacity, CapacityConfig);
            set(&mut c.p, p);
            set(&mut c.beta, beta);
            set(&mut c.distribution, dist);
            c.out = common.out.or(c.out);
            let report = run_capacity(&c)?;
            emit_json(c.out.as_deref(), &report)
        }
        Command::RegimeCurves { p_min, p_max, points } => {
            let mut c = load_as!(&common, RegimeCurves, RegimeCurvesConfig);
            set(&mut c.p_min, p_min);
            set(&mut c.p_max, p_max);
            set(&mut c.points, points);
            c.out = common.out.or(c.out);
            emit_csv(c.out.as_deref(), &run_regime_curves(&c)?)
        }
        Command::Lemma1 { b, delta } => {
            let mut c = load_as!(&common, Lemma1, Lemma1Config);
            set(&mut c.b_list, b);
            set(&mut c.delta_list, delta);
            set(&mut c.trials, common.trials);
            set(&mut c.seed, common.seed);
            c.out = common.out.or(c.out);
            emit_csv(c.out.as_deref(), &run_lemma1(&c)?)
        }
        Command::Lemma2 { m, p, beta, dist } => {
            let mut c = load_as!(&common, Lemma2, Lemma2Config);
            set(&mut c.m_list, m);
            set(&mut c.p, p);
            set(&mut c.beta, beta);
            set(&mut c.distribution, dist);
            set(&mut c.trials, common.trials);
            set(&mut c.seed, common.seed);
            c.out = common.out.or(c.out);
            if let Some(w) = lemma2_warning(&c) {
                eprintln!("warning: {w}");
            }
            emit_csv(c.out.as_deref(), &run_lemma2(&c)?)
        }
        Command::PairConsistency { cells, pairs } => {
            let mut c = load_as!(&common, PairConsistency, PairConsistencyConfig);
            set(&mut c.cells, cells);
            set(&mut c.pairs, pairs.or(common.trials));
            set(&mut c.seed, common.seed);
            c.out = common.out.or(c.out);
            emit_csv(c.out.as_deref(), &run_pair_consistency(&c)?)
        }
        Command::ClusterCount { m, epsilon, dist } => {
            let mut c = load_as!(&common, ClusterCount, ClusterCountConfig);
            set(&mut c.m, m);
            set(&mut c.epsilon, epsilon);
            if !dist.is_empty() {
                c.distributions = dist;
            }
            set(&mut c.trials, common.trials);
            set(&mut c.seed, common.seed);
            c.out = common.out.or(c.out);
            emit_csv(c.out.as_deref(), &run_cluster_count(&c)?)
        }
        Command::Simulate {
            m,
            l,
            beta,
            p,
            dist,
            rates,
            rate_scale,
            messages,
            genie_only,
            trials_out,
        } => {
            let mut c = load_as!(&common, E2eSweep, E2eConfig);
            set(&mut c.channel.m, m);
            if l.is_some() {
                c.channel.l = l;
                c.channel.beta = None;
            }
            if beta.is_some() {
                c.channel.beta = beta;
                c.channel.l = None;
            }
            set(&mut c.channel.p, p);
            set(&mut c.distribution, dist);
            set(&mut c.rates, rates);
            set(
                &mut c.rate_scale,
                rate_scale.map(|s| match s {
                    Scale::Absolute => RateScale::Absolute,
                    Scale::Capacity => RateScale::Capacity,
                }),
            );
            set(&mut c.num_messages, messages);
            set(&mut c.trials, common.trials);
            set(&mut c.seed, common.seed);
            c.budget = common.budget.or(c.budget);
            c.first_hit |= common.first_hit;
            if genie_only {
                c.decoder = DecoderChoice::Genie;
            }
            c.out = common.out.or(c.out);
            c.trials_out = trials_out.or(c.trials_out);
            let result = run_e2e_sweep(&c)?;
            emit_csv(c.out.as_deref(), &result.rows)?;
            let trials_file = c.trials_out.clone().or_else(|| c.out.as_deref().map(trials_path));
            if let Some(path) = trials_file {
                write_csv_file(&path, &result.trials)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
