//! The random linear coding scheme and its two decoders.
//!
//! A codebook is an `ML x B` generator matrix `G` with i.i.d. fair entries
//! plus a list of random length-`B` message vectors `t_i`. Message `i` is sent
//! as `G t_i`, cut into `M` strands of length `L`.
//!
//! The genie decoder is told which reads came from which strand. The
//! exhaustive decoder is not: it enumerates every clique partition of the
//! consistency graph with an admissible cluster count, every injective
//! assignment of clusters to strand indices, and keeps the systems whose
//! unique solution is a codebook message.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{p_eff, ChannelParams, ReadPool, SamplingDistribution, Strand};
use crate::cluster::{consensus, enumerate_clusterings, ConsistencyGraph, ReducedPool};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Eliminator, SolveStatus};
use crate::seed::derive_seed;

/// Shared slack for the cluster-count window and the dimension choice.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Message sets up to this size are stored explicitly.
pub const MATERIALIZE_LIMIT: u64 = 1 << 20;

// guards floor/ceil of products like 0.95 * 6 against representation error
const ROUNDING_SLACK: f64 = 1e-9;

/// The codebook's message vectors `t_i`.
#[derive(Debug, Clone)]
pub enum MessageSet {
    Materialized {
        messages: Vec<BitVector>,
        // first index of each distinct vector
        index: BTreeMap<BitVector, u64>,
    },
    /// `t_i` is regenerated from `(seed, i)` on demand. Lookup is a linear
    /// scan, so this only suits very sparse membership queries.
    Implicit { seed: u64, count: u64, len: usize },
}

impl MessageSet {
    fn generate<R: Rng + ?Sized>(len: usize, count: u64, rng: &mut R) -> Self {
        if count <= MATERIALIZE_LIMIT {
            let messages: Vec<BitVector> = (0..count).map(|_| BitVector::random(len, rng)).collect();
            let mut index = BTreeMap::new();
            for (i, t) in messages.iter().enumerate() {
                index.entry(t.clone()).or_insert(i as u64);
            }
            MessageSet::Materialized { messages, index }
        } else {
            MessageSet::Implicit {
                seed: rng.gen(),
                count,
                len,
            }
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            MessageSet::Materialized { messages, .. } => messages.len() as u64,
            MessageSet::Implicit { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// # Panics
    ///
    /// Panics if `i` is out of range.
    pub fn get(&self, i: u64) -> BitVector {
        assert!(i < self.len(), "message index {i} out of range");
        match self {
            MessageSet::Materialized { messages, .. } => messages[i as usize].clone(),
            MessageSet::Implicit { seed, len, .. } => {
                BitVector::random(*len, &mut ChaCha8Rng::seed_from_u64(derive_seed(*seed, 0, i)))
            }
        }
    }

    /// Smallest index whose message equals `t`.
    pub fn lookup(&self, t: &BitVector) -> Option<u64> {
        match self {
            MessageSet::Materialized { index, .. } => index.get(t).copied(),
            MessageSet::Implicit { count, .. } => (0..*count).find(|&i| &self.get(i) == t),
        }
    }
}

/// Generator matrix, message set and channel dimensions.
#[derive(Debug, Clone)]
pub struct Codebook {
    generator: BitMatrix,
    messages: MessageSet,
    params: ChannelParams,
}

impl Codebook {
    /// Draws `G` and `num_messages` messages of length `dimension`.
    pub fn build<R: Rng + ?Sized>(
        params: ChannelParams,
        dimension: usize,
        num_messages: u64,
        rng: &mut R,
    ) -> Result<Self> {
        if num_messages < 2 {
            return Err(Error::Configuration(format!(
                "a codebook needs at least 2 messages, got {num_messages}"
            )));
        }
        if dimension == 0 || dimension > params.codeword_len() {
            return Err(Error::Configuration(format!(
                "dimension B = {dimension} must lie in 1..=ML = {}",
                params.codeword_len()
            )));
        }
        let generator = BitMatrix::random(params.codeword_len(), dimension, rng);
        let messages = MessageSet::generate(dimension, num_messages, rng);
        Ok(Self {
            generator,
            messages,
            params,
        })
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn messages(&self) -> &MessageSet {
        &self.messages
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// `B`.
    pub fn dimension(&self) -> usize {
        self.generator.cols()
    }

    pub fn num_messages(&self) -> u64 {
        self.messages.len()
    }

    /// `log2(num_messages) / (ML)` bits per channel bit.
    pub fn rate(&self) -> f64 {
        libm::log2(self.num_messages() as f64) / self.params.codeword_len() as f64
    }

    /// `G t_i`.
    pub fn codeword(&self, index: u64) -> BitVector {
        self.generator.mul_vec(&self.messages.get(index))
    }

    /// The `M` strands carrying message `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index` is out of range.
    pub fn encode(&self, index: u64) -> Vec<Strand> {
        let word = self.codeword(index);
        let l = self.params.l();
        (0..self.params.m())
            .map(|i| Strand::from_bits(word.slice(i * l, l)))
            .collect()
    }
}

/// Dimension from the multi-draw sizing rule,
/// `B = floor(M L (1 - q_0 - eps)(1 - p_eff - eps)(1 - eps))`.
pub fn choose_dimension(params: &ChannelParams, dist: &SamplingDistribution, epsilon: f64) -> Result<usize> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::Configuration(format!("epsilon = {epsilon} must be positive")));
    }
    let p_lower = 1.0 - dist.q0() - epsilon;
    let unerased = 1.0 - p_eff(dist, params.p()) - epsilon;
    if p_lower <= 0.0 || unerased <= 0.0 {
        return Err(Error::Configuration(format!(
            "epsilon = {epsilon} leaves no room: 1 - q0 - eps = {p_lower}, 1 - p_eff - eps = {unerased}"
        )));
    }
    let b = libm::floor(params.codeword_len() as f64 * p_lower * unerased * (1.0 - epsilon) + ROUNDING_SLACK);
    if b < 1.0 {
        return Err(Error::Configuration(format!("dimension B = {b} is below 1")));
    }
    Ok(b as usize)
}

/// Smallest dimension at which the collision exponent of a rate-`rate` code
/// is non-positive with `alpha = 0`:
/// `B = ceil(M L (rate + (1 - q_0 + eps) / beta))`.
///
/// This is message bits plus `log2` of the number of label assignments. The
/// result may exceed `ML`, in which case no codebook of this construction
/// can carry the rate.
pub fn rate_dimension(params: &ChannelParams, dist: &SamplingDistribution, rate: f64, epsilon: f64) -> usize {
    let p_upper = 1.0 - dist.q0() + epsilon;
    let bits = params.codeword_len() as f64 * (rate + p_upper / params.beta());
    libm::ceil(bits - ROUNDING_SLACK).max(1.0) as usize
}

/// Admissible cluster counts `[ceil((1 - q_0 - eps) M), floor((1 - q_0 + eps) M)]`.
pub fn cluster_count_range(m: usize, q0: f64, epsilon: f64) -> (usize, usize) {
    let m = m as f64;
    let lo = libm::ceil((1.0 - q0 - epsilon) * m - ROUNDING_SLACK).max(0.0);
    let hi = libm::floor((1.0 - q0 + epsilon) * m + ROUNDING_SLACK).min(m);
    (lo as usize, hi as usize)
}

/// Union-bound exponent (base 2) and value for a wrong system's solution
/// colliding with some message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionBound {
    pub exponent: f64,
    pub bound: f64,
}

impl CollisionBound {
    fn from_exponent(exponent: f64) -> Self {
        Self {
            exponent,
            bound: libm::exp2(exponent),
        }
    }
}

/// Multi-draw bound `2^{alpha M} M^{p_U M} 2^{MLR} 2^{-B}` written as
/// `2^{ML (alpha/L + p_U/beta + R - B/(ML))}` with `p_U = 1 - q_0 + eps`.
pub fn collision_bound(
    params: &ChannelParams,
    dist: &SamplingDistribution,
    rate: f64,
    dimension: usize,
    alpha: f64,
    epsilon: f64,
) -> CollisionBound {
    let ml = params.codeword_len() as f64;
    let p_upper = 1.0 - dist.q0() + epsilon;
    let exponent = ml * (alpha / params.l() as f64 + p_upper / params.beta() + rate - dimension as f64 / ml);
    CollisionBound::from_exponent(exponent)
}

/// Single-draw bound `2^{ML [R - (1 - p - eps - 1/beta)]}`, the union over
/// `M!` orderings at `B = ML(1 - p - eps)`.
pub fn single_draw_collision_bound(params: &ChannelParams, rate: f64, epsilon: f64) -> CollisionBound {
    let ml = params.codeword_len() as f64;
    let exponent = ml * (rate - (1.0 - params.p() - epsilon - 1.0 / params.beta()));
    CollisionBound::from_exponent(exponent)
}

/// Hoeffding bound `2 exp(-2 M eps^2)` on the cluster count leaving its
/// window.
pub fn cluster_count_bound(m: usize, epsilon: f64) -> f64 {
    2.0 * libm::exp(-2.0 * m as f64 * epsilon * epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    Success,
    /// No candidate system had a unique solution that is a message.
    NoValidSystem,
    /// Systems produced at least two different messages.
    Ambiguous,
    /// The enumeration budget ran out before the search finished.
    BudgetExhausted,
}

impl DecodeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecodeStatus::Success => "success",
            DecodeStatus::NoValidSystem => "failure_no_valid_system",
            DecodeStatus::Ambiguous => "failure_ambiguous",
            DecodeStatus::BudgetExhausted => "budget_exhausted",
        }
    }
}

impl core::fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decoder outcome. `decoded_message_index` is set iff the status is
/// [`DecodeStatus::Success`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub decoded_message_index: Option<u64>,
    /// Candidate systems resolved. A system is resolved by solving it, or,
    /// with pruning on, by rejecting a partial assignment that no completion
    /// can rescue; a rejected prefix counts once.
    pub systems_tried: u64,
    pub clusterings_tried: u64,
}

impl DecodeResult {
    fn failure(status: DecodeStatus, systems_tried: u64, clusterings_tried: u64) -> Self {
        Self {
            status,
            decoded_message_index: None,
            systems_tried,
            clusterings_tried,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

/// Decodes with the true clustering and ordering: consensus per origin,
/// erased and missing rows dropped from `y` and `G`, then one solve.
pub fn genie_decode(cb: &Codebook, pool: &ReadPool) -> DecodeResult {
    if pool.is_empty() {
        return DecodeResult::failure(DecodeStatus::NoValidSystem, 0, 0);
    }
    let l = cb.params().l();
    let mut by_origin: BTreeMap<usize, Vec<&Strand>> = BTreeMap::new();
    for (read, &origin) in pool.reads().iter().zip(pool.origins()) {
        by_origin.entry(origin).or_default().push(read);
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (origin, reads) in by_origin {
        let merged = consensus(reads);
        for pos in 0..l {
            if merged.known().get(pos) {
                rows.push(origin * l + pos);
                rhs.push(merged.values().get(pos));
            }
        }
    }
    let report = cb.generator().select_rows(&rows).solve(&BitVector::from_bools(&rhs));
    let found = match (report.status, report.witness) {
        (SolveStatus::Unique, Some(t)) => cb.messages().lookup(&t),
        _ => None,
    };
    match found {
        Some(index) => DecodeResult {
            status: DecodeStatus::Success,
            decoded_message_index: Some(index),
            systems_tried: 1,
            clusterings_tried: 1,
        },
        None => DecodeResult::failure(DecodeStatus::NoValidSystem, 1, 1),
    }
}

/// Settings for [`exhaustive_decode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub epsilon: f64,
    /// Maximum number of candidate systems to resolve.
    pub budget: u64,
    /// Stop at the first valid message instead of proving there is no second.
    pub first_hit: bool,
    /// Reject partial label assignments that are already inconsistent or can
    /// no longer reach rank `B`. Results are identical either way; only the
    /// amount of work and `systems_tried` change.
    pub prune: bool,
}

impl DecoderConfig {
    pub fn new(budget: u64) -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            budget,
            first_hit: false,
            prune: true,
        }
    }
}

/// Code-aware decoding from the reads alone.
///
/// Every clique partition of the consistency graph with a cluster count in
/// [`cluster_count_range`] is tried, and for each, every injective labelling
/// of its clusters by strand indices. A system counts when its solution is
/// unique and is a codebook message. Decoding succeeds iff exactly one
/// message index comes out of all systems.
///
/// Identical reads are merged before enumeration and all-erased reads are
/// ignored, since neither changes the equations a partition produces.
pub fn exhaustive_decode(
    cb: &Codebook,
    reads: &[Strand],
    dist: &SamplingDistribution,
    config: &DecoderConfig,
) -> DecodeResult {
    let params = cb.params();
    let (lo, hi) = cluster_count_range(params.m(), dist.q0(), config.epsilon);
    let reduced = ReducedPool::new(reads);
    if reduced.distinct.is_empty() || lo > hi {
        return DecodeResult::failure(DecodeStatus::NoValidSystem, 0, 0);
    }
    let graph = ConsistencyGraph::build(&reduced.distinct);
    let mut search = Search {
        cb,
        config,
        systems: 0,
        hits: Vec::new(),
        stop: None,
        used: vec![false; params.m()],
    };
    let mut clusterings = 0u64;
    for clustering in enumerate_clusterings(&graph, lo, hi) {
        clusterings += 1;
        let mut clusters: Vec<Vec<(usize, bool)>> = clustering
            .groups()
            .iter()
            .map(|g| {
                let merged = consensus(g.iter().map(|&d| &reduced.distinct[d]));
                (0..params.l())
                    .filter(|&pos| merged.known().get(pos))
                    .map(|pos| (pos, merged.values().get(pos)))
                    .collect()
            })
            .collect();
        // most informative clusters first, so pruning bites early
        clusters.sort_by_key(|eqs| core::cmp::Reverse(eqs.len()));
        let mut remaining = vec![0; clusters.len() + 1];
        for k in (0..clusters.len()).rev() {
            remaining[k] = remaining[k + 1] + clusters[k].len();
        }
        search.assign(&clusters, &remaining, 0, &Eliminator::new(cb.dimension()));
        if search.stop.is_some() {
            break;
        }
    }
    let status = match search.stop {
        Some(Stop::Budget) => DecodeStatus::BudgetExhausted,
        Some(Stop::Ambiguous) => DecodeStatus::Ambiguous,
        Some(Stop::FirstHit) => DecodeStatus::Success,
        None if search.hits.len() == 1 => DecodeStatus::Success,
        None => DecodeStatus::NoValidSystem,
    };
    DecodeResult {
        status,
        decoded_message_index: (status == DecodeStatus::Success).then(|| search.hits[0]),
        systems_tried: search.systems,
        clusterings_tried: clusterings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Budget,
    Ambiguous,
    FirstHit,
}

struct Search<'a> {
    cb: &'a Codebook,
    config: &'a DecoderConfig,
    systems: u64,
    hits: Vec<u64>,
    stop: Option<Stop>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Claims one unit of budget; false once the budget is spent.
    fn charge(&mut self) -> bool {
        if self.systems >= self.config.budget {
            self.stop = Some(Stop::Budget);
            return false;
        }
        self.systems += 1;
        true
    }

    fn assign(&mut self, clusters: &[Vec<(usize, bool)>], remaining: &[usize], depth: usize, elim: &Eliminator) {
        if depth == clusters.len() {
            self.leaf(elim);
            return;
        }
        let b = self.cb.dimension();
        let l = self.cb.params().l();
        for label in 0..self.used.len() {
            if self.used[label] {
                continue;
            }
            let mut next = elim.clone();
            for &(pos, bit) in &clusters[depth] {
                next.absorb(self.cb.generator().row_words(label * l + pos), bit);
                if self.config.prune && !next.is_consistent() {
                    break;
                }
            }
            if self.config.prune && (!next.is_consistent() || next.rank() + remaining[depth + 1] < b) {
                if !self.charge() {
                    return;
                }
                continue;
            }
            self.used[label] = true;
            self.assign(clusters, remaining, depth + 1, &next);
            self.used[label] = false;
            if self.stop.is_some() {
                return;
            }
        }
    }

    fn leaf(&mut self, elim: &Eliminator) {
        if !self.charge() {
            return;
        }
        if !elim.is_consistent() || elim.rank() != self.cb.dimension() {
            return;
        }
        let Some(t) = elim.solve().witness else {
            return;
        };
        if let Some(index) = self.cb.messages().lookup(&t) {
            if !self.hits.contains(&index) {
                self.hits.push(index);
            }
            if self.hits.len() >= 2 {
                self.stop = Some(Stop::Ambiguous);
            } else if self.config.first_hit {
                self.stop = Some(Stop::FirstHit);
            }
        }
    }
}
