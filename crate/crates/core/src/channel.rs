//! The BEC multi-draw shuffling-sampling channel and its closed-form
//! capacity and regime analysis.
//!
//! Each of `M` input strands of length `L` is drawn `Q` times, `Q ~ {q_n}`.
//! Every drawn copy goes through a binary erasure channel with erasure
//! probability `p`, and the resulting reads are shuffled. All logarithms are
//! base 2, so `L = beta * log2(M)` and rates are in bits per channel bit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// One position of a read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Erased,
}

/// A length-`L` sequence over `{0, 1, erased}`.
///
/// Stored as a value bit-vector plus a mask of non-erased positions; value
/// bits under erased positions are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strand {
    values: BitVector,
    known: BitVector,
}

impl Strand {
    /// An erasure-free strand carrying `bits`.
    pub fn from_bits(bits: BitVector) -> Self {
        let mut known = BitVector::zeros(bits.len());
        for i in 0..bits.len() {
            known.set(i, true);
        }
        Self { values: bits, known }
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let mut values = BitVector::zeros(symbols.len());
        let mut known = BitVector::zeros(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            match s {
                Symbol::Zero => known.set(i, true),
                Symbol::One => {
                    known.set(i, true);
                    values.set(i, true);
                }
                Symbol::Erased => {}
            }
        }
        Self { values, known }
    }

    /// Builds a strand from a value vector and a mask of known positions.
    ///
    /// # Panics
    ///
    /// Panics if the lengths differ.
    pub fn from_parts(values: &BitVector, known: &BitVector) -> Self {
        assert_eq!(values.len(), known.len(), "value and mask lengths differ");
        let words = values.words().iter().zip(known.words()).map(|(v, k)| v & k).collect();
        Self {
            values: BitVector::from_words(values.len(), words),
            known: known.clone(),
        }
    }

    pub fn all_erased(len: usize) -> Self {
        Self {
            values: BitVector::zeros(len),
            known: BitVector::zeros(len),
        }
    }

    /// A uniformly random erasure-free strand.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self::from_bits(BitVector::random(len, rng))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn symbol(&self, index: usize) -> Symbol {
        match (self.known.get(index), self.values.get(index)) {
            (false, _) => Symbol::Erased,
            (true, false) => Symbol::Zero,
            (true, true) => Symbol::One,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len()).map(move |i| self.symbol(i))
    }

    /// Value bits; zero under erasures.
    #[inline]
    pub fn values(&self) -> &BitVector {
        &self.values
    }

    /// Mask of non-erased positions.
    #[inline]
    pub fn known(&self) -> &BitVector {
        &self.known
    }

    pub fn known_count(&self) -> usize {
        self.known.count_ones()
    }

    pub fn erasure_count(&self) -> usize {
        self.len() - self.known_count()
    }

    pub fn is_all_erased(&self) -> bool {
        self.known.is_zero()
    }

    pub fn is_erasure_free(&self) -> bool {
        self.known_count() == self.len()
    }

    /// Passes the strand through BEC(`p`): every known symbol is
    /// independently erased with probability `p`.
    pub fn erase<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Strand {
        let mut out = self.clone();
        for i in 0..self.len() {
            if self.known.get(i) && rng.gen_bool(p) {
                out.known.set(i, false);
                out.values.set(i, false);
            }
        }
        out
    }
}

impl FromStr for Strand {
    type Err = crate::gf2::ParseBitsError;

    /// Accepts `0`, `1`, and `e`, `ε`, `*` or `?` for an erasure. Whitespace
    /// is ignored.
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let mut symbols = Vec::new();
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => symbols.push(Symbol::Zero),
                '1' => symbols.push(Symbol::One),
                'e' | 'ε' | '*' | '?' => symbols.push(Symbol::Erased),
                c if c.is_whitespace() => {}
                _ => return Err(crate::gf2::ParseBitsError { position }),
            }
        }
        Ok(Strand::from_symbols(&symbols))
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            f.write_str(match s {
                Symbol::Zero => "0",
                Symbol::One => "1",
                Symbol::Erased => "ε",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strand({self})")
    }
}

const PMF_TOLERANCE: f64 = 1e-9;

/// The pmf `{q_n}` of the draw count `Q`, truncated to a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingDistribution {
    pmf: Vec<f64>,
    name: Option<String>,
}

impl SamplingDistribution {
    /// Validates an explicit pmf `[q_0, q_1, ...]`. The entries must be
    /// non-negative, sum to one within `1e-9`, and leave `q_0 < 1`.
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidDistribution("pmf is empty".into()));
        }
        if let Some((n, q)) = pmf.iter().enumerate().find(|(_, q)| !q.is_finite() || **q < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "q_{n} = {q} is not a non-negative number"
            )));
        }
        let total: f64 = pmf.iter().sum();
        if libm::fabs(total - 1.0) > PMF_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("pmf sums to {total}, expected 1")));
        }
        if pmf[0] >= 1.0 {
            return Err(Error::InvalidDistribution("q_0 = 1: no strand is ever observed".into()));
        }
        Ok(Self { pmf, name: None })
    }

    fn normalized(weights: Vec<f64>, name: String) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidDistribution(format!("{name}: no probability mass")));
        }
        let pmf = weights.into_iter().map(|w| w / total).collect();
        Ok(Self::new(pmf)?.with_name(name))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Every strand is drawn exactly `n` times.
    pub fn fixed(n: usize) -> Result<Self> {
        let mut pmf = alloc::vec![0.0; n + 1];
        pmf[n] = 1.0;
        Ok(Self::new(pmf)?.with_name(format!("fixed({n})")))
    }

    /// One-or-none draws: `q_0 = q0`, `q_1 = 1 - q0`.
    pub fn bernoulli_draw(q0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q0) {
            return Err(Error::InvalidDistribution(format!("q0 = {q0} must lie in [0, 1)")));
        }
        Ok(Self::new(alloc::vec![q0, 1.0 - q0])?.with_name(format!("bernoulli-draw({q0})")))
    }

    /// Poisson(`lambda`) truncated to `0..=nmax` and renormalized.
    pub fn poisson(lambda: f64, nmax: usize) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "poisson lambda = {lambda} must be positive"
            )));
        }
        let mut weights = Vec::with_capacity(nmax + 1);
        let mut term = libm::exp(-lambda);
        for n in 0..=nmax {
            if n > 0 {
                term *= lambda / n as f64;
            }
            weights.push(term);
        }
        Self::normalized(weights, format!("poisson({lambda},{nmax})"))
    }

    /// Geometric law `q_n ∝ (1 - r) r^n`, truncated to `0..=nmax` and
    /// renormalized.
    pub fn geometric(r: f64, nmax: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidDistribution(format!(
                "geometric r = {r} must lie in [0, 1)"
            )));
        }
        let weights = (0..=nmax).map(|n| (1.0 - r) * libm::pow(r, n as f64)).collect();
        Self::normalized(weights, format!("geometric({r},{nmax})"))
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `q_n`, zero beyond the support.
    pub fn q(&self, n: usize) -> f64 {
        self.pmf.get(n).copied().unwrap_or(0.0)
    }

    pub fn q0(&self) -> f64 {
        self.pmf[0]
    }

    pub fn max_count(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(n, q)| n as f64 * q).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(n, q)| (n * n) as f64 * q).sum()
    }

    /// Inverse-CDF draw of `Q`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (n, q) in self.pmf.iter().enumerate() {
            acc += q;
            if u < acc {
                return n;
            }
        }
        // rounding left u above the accumulated total
        self.pmf.iter().rposition(|&q| q > 0.0).unwrap_or(0)
    }
}

/// `(M, L, p)` together with the derived `beta = L / log2(M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    m: usize,
    l: usize,
    p: f64,
    beta: f64,
}

impl ChannelParams {
    pub fn new(m: usize, l: usize, p: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("M = {m} must be at least 2")));
        }
        if l == 0 {
            return Err(Error::InvalidParams("L must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("p = {p} must lie in [0, 1]")));
        }
        let beta = l as f64 / libm::log2(m as f64);
        Ok(Self { m, l, p, beta })
    }

    /// Picks `L = round(beta * log2 M)`. The stored `beta` is the realized
    /// `L / log2 M`.
    pub fn from_beta(m: usize, beta: f64, p: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta = {beta} must be positive")));
        }
        if m < 2 {
            return Err(Error::InvalidParams(format!("M = {m} must be at least 2")));
        }
        let l = libm::round(beta * libm::log2(m as f64)) as usize;
        Self::new(m, l, p)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `M * L`, the codeword length.
    #[inline]
    pub fn codeword_len(&self) -> usize {
        self.m * self.l
    }
}

/// Shuffled channel output. `origins[i]` is the input index read `i` came
/// from; only genie decoding and edge statistics may look at it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadPool {
    reads: Vec<Strand>,
    origins: Vec<usize>,
}

impl ReadPool {
    /// # Panics
    ///
    /// Panics if the two lists differ in length.
    pub fn from_parts(reads: Vec<Strand>, origins: Vec<usize>) -> Self {
        assert_eq!(reads.len(), origins.len(), "every read needs an origin");
        Self { reads, origins }
    }

    /// The decoder-facing view: reads only, origins stripped.
    #[inline]
    pub fn reads(&self) -> &[Strand] {
        &self.reads
    }

    #[inline]
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Number of distinct input strands observed at least once.
    pub fn observed_strands(&self) -> usize {
        let mut seen: Vec<usize> = self.origins.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Draws `N_1, ..., N_M` i.i.d. from `dist`.
pub fn sample_draw_counts<R: Rng + ?Sized>(dist: &SamplingDistribution, m: usize, rng: &mut R) -> Vec<usize> {
    (0..m).map(|_| dist.sample(rng)).collect()
}

/// Runs one channel use: draw counts, per-copy erasures, then a uniform
/// shuffle of the pool.
///
/// # Panics
///
/// Panics if `input` does not hold `M` erasure-free strands of length `L`.
pub fn transmit<R: Rng + ?Sized>(
    input: &[Strand],
    params: &ChannelParams,
    dist: &SamplingDistribution,
    rng: &mut R,
) -> ReadPool {
    assert_eq!(input.len(), params.m(), "expected {} input strands", params.m());
    let counts = sample_draw_counts(dist, params.m(), rng);
    transmit_with_counts(input, params, &counts, rng)
}

/// [`transmit`] with the draw counts fixed by the caller.
pub fn transmit_with_counts<R: Rng + ?Sized>(
    input: &[Strand],
    params: &ChannelParams,
    counts: &[usize],
    rng: &mut R,
) -> ReadPool {
    assert_eq!(input.len(), counts.len(), "one draw count per input strand");
    for s in input {
        assert_eq!(s.len(), params.l(), "input strand length must be L");
        assert!(s.is_erasure_free(), "input strands must be erasure-free");
    }
    let mut tagged: Vec<(Strand, usize)> = Vec::with_capacity(counts.iter().sum());
    for (i, (strand, &n)) in input.iter().zip(counts).enumerate() {
        for _ in 0..n {
            tagged.push((strand.erase(params.p(), rng), i));
        }
    }
    tagged.shuffle(rng);
    let (reads, origins) = tagged.into_iter().unzip();
    ReadPool { reads, origins }
}

/// `p_eff = E[p^Q | Q >= 1] = sum_{n>=1} q_n p^n / (1 - q_0)`.
pub fn p_eff(dist: &SamplingDistribution, p: f64) -> f64 {
    let tail: f64 = dist
        .pmf()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, q)| q * libm::pow(p, n as f64))
        .sum();
    tail / (1.0 - dist.q0())
}

/// `E[C_BEC,Q | Q >= 1]`, the expected capacity of the consensus erasure
/// channel given at least one draw, summed term by term as
/// `sum_{n>=1} q_n (1 - p^n) / (1 - q_0)`.
pub fn expected_bec_capacity(dist: &SamplingDistribution, p: f64) -> f64 {
    let total: f64 = dist
        .pmf()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, q)| q * (1.0 - libm::pow(p, n as f64)))
        .sum();
    total / (1.0 - dist.q0())
}

/// `(1 - q_0)(1 - p_eff - 1/beta)`, clamped below at zero.
pub fn capacity(dist: &SamplingDistribution, p: f64, beta: f64) -> f64 {
    ((1.0 - dist.q0()) * (1.0 - p_eff(dist, p) - 1.0 / beta)).max(0.0)
}

/// The same capacity written as `(1 - q_0)(E[C_BEC,Q | Q >= 1] - 1/beta)`,
/// clamped below at zero. Agrees with [`capacity`] up to rounding.
pub fn capacity_from_expected_bec(dist: &SamplingDistribution, p: f64, beta: f64) -> f64 {
    ((1.0 - dist.q0()) * (expected_bec_capacity(dist, p) - 1.0 / beta)).max(0.0)
}

/// `gamma = -beta log2(1 - (1 - p)^2 / 2)`, the exponent of the probability
/// `M^{-gamma}` that reads of two different strands are consistent.
pub fn gamma(p: f64, beta: f64) -> f64 {
    let q = 1.0 - p;
    -beta * libm::log2(1.0 - 0.5 * q * q)
}

/// Smallest `beta` of the region where the capacity expression is known to
/// be tight: `2 / (1 - p)^2`.
pub fn beta_blue(p: f64) -> f64 {
    let q = 1.0 - p;
    2.0 / (q * q)
}

/// Smallest `beta` with `gamma > 1`: `-1 / log2(1 - (1 - p)^2 / 2)`.
pub fn beta_green(p: f64) -> f64 {
    let q = 1.0 - p;
    -1.0 / libm::log2(1.0 - 0.5 * q * q)
}

/// Which part of the `(p, beta)` plane a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `beta > 2/(1-p)^2`: capacity is `(1-q_0)(1-p_eff-1/beta)`.
    CapacityKnown,
    /// `gamma > 1`: that rate is achievable, tightness unknown.
    Achievable,
    /// `beta < 1`: capacity is zero.
    Zero,
    /// Everything else.
    Open,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::CapacityKnown => "capacity_known_blue",
            Regime::Achievable => "achievable_green",
            Regime::Zero => "zero_red",
            Regime::Open => "open_gray",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn regime(p: f64, beta: f64) -> Regime {
    if beta > beta_blue(p) {
        Regime::CapacityKnown
    } else if gamma(p, beta) > 1.0 {
        Regime::Achievable
    } else if beta < 1.0 {
        Regime::Zero
    } else {
        Regime::Open
    }
}

/// One row of the regime boundary table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub p: f64,
    pub beta_blue: f64,
    pub beta_green: f64,
}

/// Evaluates both region boundaries on `p_grid`. Every `p` must lie in
/// `(0, 1)`.
pub fn boundary_curves(p_grid: &[f64]) -> Result<Vec<BoundaryPoint>> {
    p_grid
        .iter()
        .map(|&p| {
            if p > 0.0 && p < 1.0 {
                Ok(BoundaryPoint {
                    p,
                    beta_blue: beta_blue(p),
                    beta_green: beta_green(p),
                })
            } else {
                Err(Error::InvalidParams(format!("boundary p = {p} must lie in (0, 1)")))
            }
        })
        .collect()
}
