//! Experiment drivers. Each returns plain rows; writing them out is left to
//! [`crate::output`].
//!
//! Randomness comes from one root seed per experiment. Cell `c` gets
//! `derive_seed(root, stream, c)` and trial `t` of that cell gets
//! `derive_seed(cell_seed, 0, t)`, so every row can be recomputed from the
//! seed it reports, and parallel execution cannot change any result.

use std::collections::BTreeMap;
use std::time::Instant;

use multidraw_core::channel::{
    beta_blue, beta_green, boundary_curves, capacity, capacity_from_expected_bec, expected_bec_capacity, gamma, p_eff,
    regime, sample_draw_counts, transmit, ChannelParams, SamplingDistribution, Strand,
};
use multidraw_core::cluster::{
    consensus, count_clusterings, edge_stats, empirical_pair_consistency, enumerate_clusterings,
    pair_consistency_probability, Clustering, ConsistencyGraph,
};
use multidraw_core::codec::{
    cluster_count_bound, cluster_count_range, exhaustive_decode, genie_decode, rate_dimension, Codebook, DecodeResult,
    DecodeStatus, DecoderConfig,
};
use multidraw_core::gf2::{full_rank_hits, full_rank_probability, kept_rows};
use multidraw_core::seed::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    CapacityConfig, ClusterCountConfig, DecoderChoice, DistributionSpec, E2eConfig, Lemma1Config, Lemma2Config,
    PairConsistencyConfig, RateScale, RegimeCurvesConfig,
};
use crate::error::{LabError, Result};

/// Exhaustive decoding is refused above this many strands unless lifted.
pub const GUARD_MAX_M: usize = 8;
/// Exhaustive decoding is skipped for pools with more reads than this.
pub const GUARD_MAX_POOL: usize = 16;

const STREAM_LEMMA1: u64 = 1;
const STREAM_LEMMA2: u64 = 2;
const STREAM_PAIR: u64 = 3;
const STREAM_CLUSTER_COUNT: u64 = 4;
const STREAM_E2E: u64 = 5;
const STREAM_LEMMA3: u64 = 6;
const STREAM_CONSENSUS: u64 = 7;

const PAIR_CHUNK: usize = 1000;

fn trial_rng(cell_seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(cell_seed, 0, trial as u64))
}

fn par_trials<T, F>(cell_seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(&mut trial_rng(cell_seed, t)))
        .collect()
}

fn z_score(estimate: f64, target: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        (estimate - target) / sigma
    } else if estimate == target {
        0.0
    } else {
        (estimate - target).signum() * f64::INFINITY
    }
}

/// Smallest value with at least `q` of the sample at or below it.
pub fn nearest_rank_quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub p: f64,
    pub beta: f64,
    pub distribution: String,
    pub q0: f64,
    pub p_eff: f64,
    pub expected_bec_capacity: f64,
    pub capacity: f64,
    pub capacity_via_expected_bec: f64,
    pub gamma: f64,
    pub regime: String,
    pub beta_blue: f64,
    pub beta_green: f64,
}

/// Tolerance for the two capacity expressions to agree.
pub const CAPACITY_FORM_TOLERANCE: f64 = 1e-12;

pub fn run_capacity(cfg: &CapacityConfig) -> Result<CapacityReport> {
    cfg.validate()?;
    let dist = cfg.distribution.build()?;
    let c = capacity(&dist, cfg.p, cfg.beta);
    let c2 = capacity_from_expected_bec(&dist, cfg.p, cfg.beta);
    if (c - c2).abs() > CAPACITY_FORM_TOLERANCE {
        return Err(LabError::Invariant(format!("capacity forms disagree: {c} vs {c2}")));
    }
    Ok(CapacityReport {
        p: cfg.p,
        beta: cfg.beta,
        distribution: cfg.distribution.to_string(),
        q0: dist.q0(),
        p_eff: p_eff(&dist, cfg.p),
        expected_bec_capacity: expected_bec_capacity(&dist, cfg.p),
        capacity: c,
        capacity_via_expected_bec: c2,
        gamma: gamma(cfg.p, cfg.beta),
        regime: regime(cfg.p, cfg.beta).as_str().to_string(),
        beta_blue: beta_blue(cfg.p),
        beta_green: beta_green(cfg.p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeRow {
    pub p: f64,
    pub beta_blue: f64,
    pub beta_green: f64,
}

/// `points` values of `p`, evenly spaced in `log p` from `p_min` to `p_max`.
pub fn log_grid(p_min: f64, p_max: f64, points: usize) -> Vec<f64> {
    let (a, b) = (p_min.ln(), p_max.ln());
    (0..points)
        .map(|i| match i {
            0 => p_min,
            _ if i == points - 1 => p_max,
            _ => (a + (b - a) * i as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

pub fn run_regime_curves(cfg: &RegimeCurvesConfig) -> Result<Vec<RegimeRow>> {
    cfg.validate()?;
    let grid = log_grid(cfg.p_min, cfg.p_max, cfg.points);
    Ok(boundary_curves(&grid)?
        .into_iter()
        .map(|b| RegimeRow {
            p: b.p,
            beta_blue: b.beta_blue,
            beta_green: b.beta_green,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Row {
    pub b: usize,
    pub delta: f64,
    pub rows: usize,
    pub trials: usize,
    pub seed: u64,
    pub hits: usize,
    pub empirical: f64,
    pub exact: f64,
    pub std_error: f64,
    pub z: f64,
}

/// One `(B, delta)` cell: `trials` fresh matrices under `cell_seed`.
pub fn lemma1_cell(b: usize, delta: f64, trials: usize, cell_seed: u64) -> Lemma1Row {
    let hits: usize = par_trials(cell_seed, trials, |rng| full_rank_hits(b, delta, 1, rng))
        .into_iter()
        .sum();
    let rows = kept_rows(b, delta);
    let exact = full_rank_probability(b, rows);
    let empirical = hits as f64 / trials as f64;
    let std_error = (exact * (1.0 - exact) / trials as f64).sqrt();
    Lemma1Row {
        b,
        delta,
        rows,
        trials,
        seed: cell_seed,
        hits,
        empirical,
        exact,
        std_error,
        z: z_score(empirical, exact, std_error),
    }
}

pub fn run_lemma1(cfg: &Lemma1Config) -> Result<Vec<Lemma1Row>> {
    cfg.validate()?;
    let cells = cfg
        .b_list
        .iter()
        .flat_map(|&b| cfg.delta_list.iter().map(move |&d| (b, d)));
    Ok(cells
        .enumerate()
        .map(|(i, (b, d))| lemma1_cell(b, d, cfg.trials, derive_seed(cfg.seed, STREAM_LEMMA1, i as u64)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Row {
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub beta: f64,
    pub gamma: f64,
    pub distribution: String,
    pub trials: usize,
    pub seed: u64,
    pub z_mean: f64,
    pub z_p95: f64,
    pub z_max: f64,
    /// `M^{2 - gamma}`.
    pub z_scale: f64,
    /// `M^{2 - gamma + 0.5}`.
    pub z_bound: f64,
    pub z_over_scale_mean: f64,
    pub correct_mean: f64,
    /// `(M/2) E[Q^2]`.
    pub correct_bound: f64,
    pub u_over_m_mean: f64,
    pub u_over_m_max: f64,
}

struct EdgeSample {
    correct: f64,
    incorrect: f64,
}

/// Edge counts for one strand count `m` under `cell_seed`.
pub fn lemma2_cell(
    m: usize,
    p: f64,
    beta: f64,
    dist: &DistributionSpec,
    trials: usize,
    cell_seed: u64,
) -> Result<Lemma2Row> {
    let params = ChannelParams::from_beta(m, beta, p)?;
    let sampling = dist.build()?;
    let g = gamma(p, params.beta());
    let samples = par_trials(cell_seed, trials, |rng| {
        let input: Vec<Strand> = (0..m).map(|_| Strand::random(params.l(), rng)).collect();
        let pool = transmit(&input, &params, &sampling, rng);
        let graph = ConsistencyGraph::build(pool.reads());
        let stats = edge_stats(&graph, pool.origins(), p, params.beta());
        EdgeSample {
            correct: stats.correct_edges as f64,
            incorrect: stats.incorrect_edges as f64,
        }
    });
    let z: Vec<f64> = samples.iter().map(|s| s.incorrect).collect();
    let correct: Vec<f64> = samples.iter().map(|s| s.correct).collect();
    let u_over_m: Vec<f64> = samples.iter().map(|s| (s.correct + s.incorrect) / m as f64).collect();
    let mf = m as f64;
    let z_scale = mf.powf(2.0 - g);
    Ok(Lemma2Row {
        m,
        l: params.l(),
        p,
        beta: params.beta(),
        gamma: g,
        distribution: dist.to_string(),
        trials,
        seed: cell_seed,
        z_mean: mean(&z),
        z_p95: nearest_rank_quantile(&z, 0.95),
        z_max: z.iter().copied().fold(0.0, f64::max),
        z_scale,
        z_bound: mf.powf(2.5 - g),
        z_over_scale_mean: mean(&z) / z_scale,
        correct_mean: mean(&correct),
        correct_bound: mf / 2.0 * sampling.second_moment(),
        u_over_m_mean: mean(&u_over_m),
        u_over_m_max: u_over_m.iter().copied().fold(0.0, f64::max),
    })
}

pub fn run_lemma2(cfg: &Lemma2Config) -> Result<Vec<Lemma2Row>> {
    cfg.validate()?;
    cfg.m_list
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            lemma2_cell(
                m,
                cfg.p,
                cfg.beta,
                &cfg.distribution,
                cfg.trials,
                derive_seed(cfg.seed, STREAM_LEMMA2, i as u64),
            )
        })
        .collect()
}

/// Warning text when the configured point lies outside `gamma > 1`.
pub fn lemma2_warning(cfg: &Lemma2Config) -> Option<String> {
    let g = gamma(cfg.p, cfg.beta);
    (g <= 1.0).then(|| format!("gamma = {g:.4} <= 1: incorrect edges are not expected to vanish"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRow {
    pub p: f64,
    pub l: usize,
    pub pairs: usize,
    pub seed: u64,
    pub hits: usize,
    pub empirical: f64,
    pub exact: f64,
    pub sigma: f64,
    pub z: f64,
}

pub fn pair_cell(p: f64, l: usize, pairs: usize, cell_seed: u64) -> PairRow {
    let chunks = pairs.div_ceil(PAIR_CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = PAIR_CHUNK.min(pairs - c * PAIR_CHUNK);
            empirical_pair_consistency(p, l, n, &mut trial_rng(cell_seed, c))
        })
        .sum();
    let exact = pair_consistency_probability(p, l);
    let empirical = hits as f64 / pairs as f64;
    let sigma = (exact * (1.0 - exact) / pairs as f64).sqrt();
    PairRow {
        p,
        l,
        pairs,
        seed: cell_seed,
        hits,
        empirical,
        exact,
        sigma,
        z: z_score(empirical, exact, sigma),
    }
}

pub fn run_pair_consistency(cfg: &PairConsistencyConfig) -> Result<Vec<PairRow>> {
    cfg.validate()?;
    Ok(cfg
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| pair_cell(c.p, c.l, cfg.pairs, derive_seed(cfg.seed, STREAM_PAIR, i as u64)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterCountRow {
    pub distribution: String,
    pub q0: f64,
    pub m: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub mean_clusters: f64,
    pub violations: usize,
    pub frequency: f64,
    pub bound: f64,
}

/// Frequency of `|#nonempty clusters - (1 - q0) M| > eps M`.
pub fn cluster_count_cell(
    dist: &DistributionSpec,
    m: usize,
    epsilon: f64,
    trials: usize,
    cell_seed: u64,
) -> Result<ClusterCountRow> {
    let sampling = dist.build()?;
    let expected = (1.0 - sampling.q0()) * m as f64;
    let counts = par_trials(cell_seed, trials, |rng| {
        sample_draw_counts(&sampling, m, rng).iter().filter(|&&n| n > 0).count()
    });
    let violations = counts
        .iter()
        .filter(|&&k| (k as f64 - expected).abs() > epsilon * m as f64)
        .count();
    Ok(ClusterCountRow {
        distribution: dist.to_string(),
        q0: sampling.q0(),
        m,
        epsilon,
        trials,
        seed: cell_seed,
        mean_clusters: counts.iter().sum::<usize>() as f64 / trials as f64,
        violations,
        frequency: violations as f64 / trials as f64,
        bound: cluster_count_bound(m, epsilon),
    })
}

pub fn run_cluster_count(cfg: &ClusterCountConfig) -> Result<Vec<ClusterCountRow>> {
    cfg.validate()?;
    cfg.distributions
        .iter()
        .enumerate()
        .map(|(i, d)| {
            cluster_count_cell(
                d,
                cfg.m,
                cfg.epsilon,
                cfg.trials,
                derive_seed(cfg.seed, STREAM_CLUSTER_COUNT, i as u64),
            )
        })
        .collect()
}

/// Settings for the clustering-count fuzz suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Fuzz {
    pub instances: usize,
    pub max_edges: usize,
    pub max_reads: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for Lemma3Fuzz {
    fn default() -> Self {
        Self {
            instances: 200,
            max_edges: 20,
            max_reads: 12,
            epsilon: 0.25,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma3Record {
    pub instance: usize,
    pub seed: u64,
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub distribution: String,
    pub reads: usize,
    pub edges: usize,
    /// All clique partitions, any cluster count.
    pub clusterings: u64,
    pub min_clusters: usize,
    pub max_clusters: usize,
    pub clusterings_in_range: u64,
    pub true_clusters: usize,
    pub true_in_range: bool,
    pub true_found: bool,
}

/// Small random pools with few edges, high erasure, and their clique
/// partition counts. Candidates with too many reads or edges are redrawn.
pub fn run_lemma3_fuzz(fuzz: &Lemma3Fuzz) -> Result<Vec<Lemma3Record>> {
    let families = [
        DistributionSpec::Fixed { n: 1 },
        DistributionSpec::Fixed { n: 2 },
        DistributionSpec::BernoulliDraw { q0: 0.3 },
        DistributionSpec::Poisson { lambda: 1.2, nmax: 4 },
    ];
    let mut accepted = Vec::with_capacity(fuzz.instances);
    let mut attempt = 0u64;
    while accepted.len() < fuzz.instances {
        let seed = derive_seed(fuzz.seed, STREAM_LEMMA3, attempt);
        attempt += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=5);
        let l = rng.gen_range(3..=6);
        let p = rng.gen_range(0.2..0.7);
        let dist = families[rng.gen_range(0..families.len())].clone();
        let params = ChannelParams::new(m, l, p)?;
        let sampling = dist.build()?;
        let input: Vec<Strand> = (0..m).map(|_| Strand::random(l, &mut rng)).collect();
        let pool = transmit(&input, &params, &sampling, &mut rng);
        if pool.is_empty() || pool.len() > fuzz.max_reads {
            continue;
        }
        let graph = ConsistencyGraph::build(pool.reads());
        if graph.edge_count() > fuzz.max_edges {
            continue;
        }
        accepted.push((seed, m, l, p, dist, sampling, pool, graph));
    }
    Ok(accepted
        .into_par_iter()
        .enumerate()
        .map(|(instance, (seed, m, l, p, dist, sampling, pool, graph))| {
            let (lo, hi) = cluster_count_range(m, sampling.q0(), fuzz.epsilon);
            let truth = Clustering::from_labels(pool.origins());
            let in_range = (lo..=hi).contains(&truth.group_count());
            let (mut in_range_count, mut found) = (0u64, false);
            if lo <= hi {
                for c in enumerate_clusterings(&graph, lo, hi) {
                    in_range_count += 1;
                    found |= c == truth;
                }
            }
            Lemma3Record {
                instance,
                seed,
                m,
                l,
                p,
                distribution: dist.to_string(),
                reads: pool.len(),
                edges: graph.edge_count(),
                clusterings: count_clusterings(&graph, 0, graph.vertex_count()),
                min_clusters: lo,
                max_clusters: hi,
                clusterings_in_range: in_range_count,
                true_clusters: truth.group_count(),
                true_in_range: in_range,
                true_found: found,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusGainReport {
    pub draws: usize,
    pub p: f64,
    pub symbols: usize,
    pub seed: u64,
    pub erased: usize,
    pub rate: f64,
    pub target: f64,
    pub sigma: f64,
    pub z: f64,
}

/// Residual erasure rate of per-strand consensus when every strand is read
/// exactly `draws` times. Runs the full channel with `m` strands of length
/// `l` until at least `symbols` consensus symbols are collected.
pub fn run_consensus_gain(
    draws: usize,
    p: f64,
    m: usize,
    l: usize,
    symbols: usize,
    seed: u64,
) -> Result<ConsensusGainReport> {
    let params = ChannelParams::new(m, l, p)?;
    let sampling = SamplingDistribution::fixed(draws)?;
    let trials = symbols.div_ceil(m * l);
    let cell_seed = derive_seed(seed, STREAM_CONSENSUS, draws as u64);
    let erased: usize = par_trials(cell_seed, trials, |rng| {
        let input: Vec<Strand> = (0..m).map(|_| Strand::random(l, rng)).collect();
        let pool = transmit(&input, &params, &sampling, rng);
        let mut by_origin: BTreeMap<usize, Vec<&Strand>> = BTreeMap::new();
        for (r, &o) in pool.reads().iter().zip(pool.origins()) {
            by_origin.entry(o).or_default().push(r);
        }
        by_origin
            .into_values()
            .map(|g| consensus(g).erasure_count())
            .sum::<usize>()
    })
    .into_iter()
    .sum();
    let total = trials * m * l;
    let target = p.powi(draws as i32);
    let rate = erased as f64 / total as f64;
    let sigma = (target * (1.0 - target) / total as f64).sqrt();
    Ok(ConsensusGainReport {
        draws,
        p,
        symbols: total,
        seed: cell_seed,
        erased,
        rate,
        target,
        sigma,
        z: z_score(rate, target, sigma),
    })
}

/// Everything needed to rerun one end-to-end trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub params: ChannelParams,
    pub distribution: DistributionSpec,
    pub dimension: usize,
    pub num_messages: u64,
    pub epsilon: f64,
    pub budget: u64,
    pub first_hit: bool,
    pub decoder: DecoderChoice,
    pub allow_large: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveOutcome {
    Ran(DecodeResult),
    /// The pool or strand count exceeded the desk-scale guard.
    GuardSkipped,
    NotRequested,
}

impl ExhaustiveOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            ExhaustiveOutcome::Ran(r) => r.status.as_str(),
            ExhaustiveOutcome::GuardSkipped => "guard_skipped",
            ExhaustiveOutcome::NotRequested => "not_requested",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub sent: u64,
    pub pool_size: usize,
    pub edges: usize,
    pub genie: DecodeResult,
    pub exhaustive: ExhaustiveOutcome,
}

impl TrialOutcome {
    pub fn genie_correct(&self) -> bool {
        self.genie.decoded_message_index == Some(self.sent)
    }

    pub fn exhaustive_correct(&self) -> Option<bool> {
        match self.exhaustive {
            ExhaustiveOutcome::Ran(r) => Some(r.decoded_message_index == Some(self.sent)),
            _ => None,
        }
    }

    /// Both decoders succeeded but named different messages.
    pub fn disagree(&self) -> bool {
        match self.exhaustive {
            ExhaustiveOutcome::Ran(r) => {
                r.is_success() && self.genie.is_success() && r.decoded_message_index != self.genie.decoded_message_index
            }
            _ => false,
        }
    }
}

/// One channel use: fresh codebook, uniformly chosen message, transmission,
/// then both decoders. Depends only on `spec`.
pub fn run_e2e_trial(spec: &TrialSpec) -> Result<TrialOutcome> {
    let dist = spec.distribution.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cb = Codebook::build(spec.params, spec.dimension, spec.num_messages, &mut rng)?;
    let sent = rng.gen_range(0..spec.num_messages);
    let pool = transmit(&cb.encode(sent), &spec.params, &dist, &mut rng);
    let genie = genie_decode(&cb, &pool);
    let edges = ConsistencyGraph::build(pool.reads()).edge_count();
    let guarded = !spec.allow_large && (spec.params.m() > GUARD_MAX_M || pool.len() > GUARD_MAX_POOL);
    let exhaustive = match spec.decoder {
        DecoderChoice::Genie => ExhaustiveOutcome::NotRequested,
        DecoderChoice::Both if guarded => ExhaustiveOutcome::GuardSkipped,
        DecoderChoice::Both => {
            let cfg = DecoderConfig {
                epsilon: spec.epsilon,
                budget: spec.budget,
                first_hit: spec.first_hit,
                prune: true,
            };
            ExhaustiveOutcome::Ran(exhaustive_decode(&cb, pool.reads(), &dist, &cfg))
        }
    };
    Ok(TrialOutcome {
        sent,
        pool_size: pool.len(),
        edges,
        genie,
        exhaustive,
    })
}

/// Per-trial CSV record. The seed and parameter columns are enough to
/// rebuild the [`TrialSpec`] and replay the trial.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct TrialRecord {
    pub rate_index: usize,
    pub rate: f64,
    pub trial: usize,
    pub seed: u64,
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub beta: f64,
    pub distribution: String,
    pub dimension: usize,
    pub num_messages: u64,
    pub epsilon: f64,
    pub budget: u64,
    pub first_hit: bool,
    pub decoder: String,
    pub allow_large: bool,
    pub sent: u64,
    pub pool_size: usize,
    pub edges: usize,
    pub genie_status: String,
    pub genie_index: Option<u64>,
    pub exhaustive_status: String,
    pub exhaustive_index: Option<u64>,
    pub systems_tried: Option<u64>,
    pub clusterings_tried: Option<u64>,
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    pub fn spec(&self) -> Result<TrialSpec> {
        Ok(TrialSpec {
            params: ChannelParams::new(self.m, self.l, self.p)?,
            distribution: self.distribution.parse()?,
            dimension: self.dimension,
            num_messages: self.num_messages,
            epsilon: self.epsilon,
            budget: self.budget,
            first_hit: self.first_hit,
            decoder: match self.decoder.as_str() {
                "genie" => DecoderChoice::Genie,
                _ => DecoderChoice::Both,
            },
            allow_large: self.allow_large,
            seed: self.seed,
        })
    }

    /// True iff `outcome` matches the recorded outcome columns.
    pub fn matches(&self, outcome: &TrialOutcome) -> bool {
        let (ex_index, systems, clusterings) = match outcome.exhaustive {
            ExhaustiveOutcome::Ran(r) => (
                r.decoded_message_index,
                Some(r.systems_tried),
                Some(r.clusterings_tried),
            ),
            _ => (None, None, None),
        };
        self.sent == outcome.sent
            && self.pool_size == outcome.pool_size
            && self.edges == outcome.edges
            && self.genie_status == outcome.genie.status.as_str()
            && self.genie_index == outcome.genie.decoded_message_index
            && self.exhaustive_status == outcome.exhaustive.label()
            && self.exhaustive_index == ex_index
            && self.systems_tried == systems
            && self.clusterings_tried == clusterings
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub rate_index: usize,
    pub rate: f64,
    pub rate_over_capacity: Option<f64>,
    pub capacity: f64,
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub beta: f64,
    pub distribution: String,
    pub num_messages: u64,
    pub dimension: usize,
    /// False when the rate needs a dimension above `ML`; no trials run then.
    pub feasible: bool,
    pub trials: usize,
    pub seed: u64,
    /// Exhaustive-decoder errors among trials it completed.
    pub errors: usize,
    pub error_rate: Option<f64>,
    pub genie_errors: usize,
    pub genie_error_rate: f64,
    pub budget_exhausted: usize,
    pub guard_skipped: usize,
    pub ambiguous: usize,
    pub no_valid_system: usize,
    pub disagreements: usize,
    pub mean_systems_tried: Option<f64>,
    pub mean_edges_over_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub trials: Vec<TrialRecord>,
}

fn resolved_rate(cfg: &E2eConfig, cap: f64, r: f64) -> f64 {
    match cfg.rate_scale {
        RateScale::Absolute => r,
        RateScale::Capacity => r * cap,
    }
}

pub fn run_e2e_sweep(cfg: &E2eConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let params = cfg.channel.build()?;
    let dist = cfg.distribution.build()?;
    let cap = capacity(&dist, params.p(), params.beta());
    let budget = cfg.budget.expect("validated");
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (ri, &r) in cfg.rates.iter().enumerate() {
        let rate = resolved_rate(cfg, cap, r);
        let dimension = rate_dimension(&params, &dist, rate, cfg.epsilon);
        let feasible = dimension <= params.codeword_len();
        let cell_seed = derive_seed(cfg.seed, STREAM_E2E, ri as u64);
        let mut row = SweepRow {
            rate_index: ri,
            rate,
            rate_over_capacity: (cap > 0.0).then(|| rate / cap),
            capacity: cap,
            m: params.m(),
            l: params.l(),
            p: params.p(),
            beta: params.beta(),
            distribution: cfg.distribution.to_string(),
            num_messages: cfg.num_messages,
            dimension,
            feasible,
            trials: cfg.trials,
            seed: cell_seed,
            errors: 0,
            error_rate: None,
            genie_errors: cfg.trials,
            genie_error_rate: 1.0,
            budget_exhausted: 0,
            guard_skipped: 0,
            ambiguous: 0,
            no_valid_system: 0,
            disagreements: 0,
            mean_systems_tried: None,
            mean_edges_over_m: None,
        };
        if !feasible {
            if cfg.decoder == DecoderChoice::Both {
                row.errors = cfg.trials;
                row.error_rate = Some(1.0);
            }
            rows.push(row);
            continue;
        }
        let specs: Vec<TrialSpec> = (0..cfg.trials)
            .map(|t| TrialSpec {
                params,
                distribution: cfg.distribution.clone(),
                dimension,
                num_messages: cfg.num_messages,
                epsilon: cfg.epsilon,
                budget,
                first_hit: cfg.first_hit,
                decoder: cfg.decoder,
                allow_large: cfg.allow_large,
                seed: derive_seed(cell_seed, 0, t as u64),
            })
            .collect();
        let outcomes: Vec<(TrialOutcome, Option<f64>)> = specs
            .par_iter()
            .map(|s| {
                let start = Instant::now();
                let out = run_e2e_trial(s)?;
                let ms = cfg.record_wall_time.then(|| start.elapsed().as_secs_f64() * 1e3);
                Ok((out, ms))
            })
            .collect::<Result<_>>()?;

        let mut systems = Vec::new();
        let mut edges_over_m = Vec::new();
        row.genie_errors = 0;
        for (t, (spec, (o, ms))) in specs.iter().zip(&outcomes).enumerate() {
            row.genie_errors += !o.genie_correct() as usize;
            row.disagreements += o.disagree() as usize;
            edges_over_m.push(o.edges as f64 / params.m() as f64);
            let (ex_index, sys, clus) = match o.exhaustive {
                ExhaustiveOutcome::Ran(r) => {
                    match r.status {
                        DecodeStatus::BudgetExhausted => row.budget_exhausted += 1,
                        DecodeStatus::Ambiguous => row.ambiguous += 1,
                        DecodeStatus::NoValidSystem => row.no_valid_system += 1,
                        DecodeStatus::Success => {}
                    }
                    if r.status != DecodeStatus::BudgetExhausted {
                        systems.push(r.systems_tried as f64);
                        row.errors += (r.decoded_message_index != Some(o.sent)) as usize;
                    }
                    (
                        r.decoded_message_index,
                        Some(r.systems_tried),
                        Some(r.clusterings_tried),
                    )
                }
                ExhaustiveOutcome::GuardSkipped => {
                    row.guard_skipped += 1;
                    (None, None, None)
                }
                ExhaustiveOutcome::NotRequested => (None, None, None),
            };
            records.push(TrialRecord {
                rate_index: ri,
                rate,
                trial: t,
                seed: spec.seed,
                m: params.m(),
                l: params.l(),
                p: params.p(),
                beta: params.beta(),
                distribution: cfg.distribution.to_string(),
                dimension,
                num_messages: cfg.num_messages,
                epsilon: cfg.epsilon,
                budget,
                first_hit: cfg.first_hit,
                decoder: match cfg.decoder {
                    DecoderChoice::Both => "both".into(),
                    DecoderChoice::Genie => "genie".into(),
                },
                allow_large: cfg.allow_large,
                sent: o.sent,
                pool_size: o.pool_size,
                edges: o.edges,
                genie_status: o.genie.status.as_str().into(),
                genie_index: o.genie.decoded_message_index,
                exhaustive_status: o.exhaustive.label().into(),
                exhaustive_index: ex_index,
                systems_tried: sys,
                clusterings_tried: clus,
                wall_ms: *ms,
            });
        }
        row.genie_error_rate = row.genie_errors as f64 / cfg.trials as f64;
        let completed = systems.len();
        if completed > 0 {
            row.error_rate = Some(row.errors as f64 / completed as f64);
            row.mean_systems_tried = Some(mean(&systems));
        }
        row.mean_edges_over_m = Some(mean(&edges_over_m));
        rows.push(row);
    }
    Ok(SweepResult { rows, trials: records })
}
