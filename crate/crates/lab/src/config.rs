//! JSON experiment configurations.
//!
//! A config file is one JSON object whose `experiment` field names its kind.
//! Each kind has its own set of fields; unknown fields are rejected. Every
//! field has a default, so `{"experiment": "lemma1"}` is a complete config.

use std::fmt;
use std::path::{Path, PathBuf};

use multidraw_core::channel::{ChannelParams, SamplingDistribution};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Capacity,
    RegimeCurves,
    Lemma1,
    Lemma2,
    PairConsistency,
    ClusterCount,
    E2eSweep,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Capacity => "capacity",
            ExperimentKind::RegimeCurves => "regime-curves",
            ExperimentKind::Lemma1 => "lemma1",
            ExperimentKind::Lemma2 => "lemma2",
            ExperimentKind::PairConsistency => "pair-consistency",
            ExperimentKind::ClusterCount => "cluster-count",
            ExperimentKind::E2eSweep => "e2e-sweep",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A draw-count law as written in config files: either an explicit
/// `{"pmf": [q0, q1, ...]}` or a named family such as
/// `{"family": "poisson", "lambda": 1.0, "nmax": 10}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub enum DistributionSpec {
    Pmf(Vec<f64>),
    Fixed { n: usize },
    BernoulliDraw { q0: f64 },
    Poisson { lambda: f64, nmax: usize },
    Geometric { r: f64, nmax: usize },
}

impl DistributionSpec {
    pub fn build(&self) -> Result<SamplingDistribution> {
        let d = match self {
            DistributionSpec::Pmf(pmf) => SamplingDistribution::new(pmf.clone())?,
            DistributionSpec::Fixed { n } => SamplingDistribution::fixed(*n)?,
            DistributionSpec::BernoulliDraw { q0 } => SamplingDistribution::bernoulli_draw(*q0)?,
            DistributionSpec::Poisson { lambda, nmax } => SamplingDistribution::poisson(*lambda, *nmax)?,
            DistributionSpec::Geometric { r, nmax } => SamplingDistribution::geometric(*r, *nmax)?,
        };
        Ok(d)
    }
}

/// Compact JSON, the same form the config parser accepts.
impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&text)
    }
}

impl std::str::FromStr for DistributionSpec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| LabError::from_json(e, None))
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pmf: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nmax: Option<usize>,
}

impl TryFrom<RawDistribution> for DistributionSpec {
    type Error = String;

    fn try_from(raw: RawDistribution) -> Result<Self, String> {
        fn need<T>(v: Option<T>, family: &str, field: &str) -> Result<T, String> {
            v.ok_or_else(|| format!("family \"{family}\" requires field \"{field}\""))
        }
        let spec = match (raw.pmf, raw.family.as_deref()) {
            (Some(_), Some(_)) => return Err("give either \"pmf\" or \"family\", not both".into()),
            (None, None) => return Err("distribution needs a \"pmf\" or a \"family\"".into()),
            (Some(pmf), None) => {
                if raw.n.or(raw.nmax).is_some() || raw.q0.or(raw.lambda).or(raw.r).is_some() {
                    return Err("an explicit pmf takes no family parameters".into());
                }
                DistributionSpec::Pmf(pmf)
            }
            (None, Some(family)) => {
                let extras = |allowed: &[&str]| -> Result<(), String> {
                    let present = [
                        ("n", raw.n.is_some()),
                        ("q0", raw.q0.is_some()),
                        ("lambda", raw.lambda.is_some()),
                        ("r", raw.r.is_some()),
                        ("nmax", raw.nmax.is_some()),
                    ];
                    match present.iter().find(|(k, set)| *set && !allowed.contains(k)) {
                        Some((k, _)) => Err(format!("family \"{family}\" takes no field \"{k}\"")),
                        None => Ok(()),
                    }
                };
                match family {
                    "fixed" => {
                        extras(&["n"])?;
                        DistributionSpec::Fixed {
                            n: need(raw.n, family, "n")?,
                        }
                    }
                    "bernoulli" | "bernoulli-draw" => {
                        extras(&["q0"])?;
                        DistributionSpec::BernoulliDraw {
                            q0: need(raw.q0, family, "q0")?,
                        }
                    }
                    "poisson" => {
                        extras(&["lambda", "nmax"])?;
                        DistributionSpec::Poisson {
                            lambda: need(raw.lambda, family, "lambda")?,
                            nmax: need(raw.nmax, family, "nmax")?,
                        }
                    }
                    "geometric" => {
                        extras(&["r", "nmax"])?;
                        DistributionSpec::Geometric {
                            r: need(raw.r, family, "r")?,
                            nmax: need(raw.nmax, family, "nmax")?,
                        }
                    }
                    other => {
                        return Err(format!(
                            "unknown family \"{other}\" (expected fixed, bernoulli-draw, poisson or geometric)"
                        ))
                    }
                }
            }
        };
        spec.build().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl From<DistributionSpec> for RawDistribution {
    fn from(spec: DistributionSpec) -> Self {
        let family = |name: &str| Some(name.to_string());
        match spec {
            DistributionSpec::Pmf(pmf) => RawDistribution {
                pmf: Some(pmf),
                ..Default::default()
            },
            DistributionSpec::Fixed { n } => RawDistribution {
                family: family("fixed"),
                n: Some(n),
                ..Default::default()
            },
            DistributionSpec::BernoulliDraw { q0 } => RawDistribution {
                family: family("bernoulli-draw"),
                q0: Some(q0),
                ..Default::default()
            },
            DistributionSpec::Poisson { lambda, nmax } => RawDistribution {
                family: family("poisson"),
                lambda: Some(lambda),
                nmax: Some(nmax),
                ..Default::default()
            },
            DistributionSpec::Geometric { r, nmax } => RawDistribution {
                family: family("geometric"),
                r: Some(r),
                nmax: Some(nmax),
                ..Default::default()
            },
        }
    }
}

/// Strand count plus either `l` or `beta` (then `L = round(beta log2 M)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub p: f64,
}

impl ChannelSpec {
    pub fn build(&self) -> Result<ChannelParams> {
        match (self.l, self.beta) {
            (Some(l), None) => Ok(ChannelParams::new(self.m, l, self.p)?),
            (None, Some(beta)) => Ok(ChannelParams::from_beta(self.m, beta, self.p)?),
            _ => Err(LabError::config("channel needs exactly one of \"l\" and \"beta\"")),
        }
    }
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub p: f64,
    pub beta: f64,
    pub distribution: DistributionSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            p: 0.0,
            beta: 2.0,
            distribution: DistributionSpec::Fixed { n: 1 },
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimeCurvesConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for RegimeCurvesConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            p_min: 1e-4,
            p_max: 0.9,
            points: 200,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma1Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub b_list: Vec<usize>,
    pub delta_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for Lemma1Config {
    fn default() -> Self {
        Self {
            experiment: None,
            b_list: vec![200],
            delta_list: vec![0.0, 0.1],
            trials: 10_000,
            seed: default_seed(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma2Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub m_list: Vec<usize>,
    pub p: f64,
    pub beta: f64,
    pub distribution: DistributionSpec,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for Lemma2Config {
    fn default() -> Self {
        Self {
            experiment: None,
            m_list: vec![8, 16, 32, 64],
            p: 0.1,
            beta: 2.0,
            distribution: DistributionSpec::Poisson { lambda: 1.0, nmax: 10 },
            trials: 500,
            seed: default_seed(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCell {
    pub p: f64,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairConsistencyConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub cells: Vec<PairCell>,
    pub pairs: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for PairConsistencyConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            cells: vec![
                PairCell { p: 0.1, l: 8 },
                PairCell { p: 0.3, l: 16 },
                PairCell { p: 0.5, l: 16 },
            ],
            pairs: 100_000,
            seed: default_seed(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterCountConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub distributions: Vec<DistributionSpec>,
    pub m: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for ClusterCountConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            distributions: vec![
                DistributionSpec::Geometric { r: 0.5, nmax: 30 },
                DistributionSpec::Poisson { lambda: 1.0, nmax: 10 },
            ],
            m: 50,
            epsilon: 0.2,
            trials: 10_000,
            seed: default_seed(),
            out: None,
        }
    }
}

/// How the entries of `rates` are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateScale {
    /// Bits per channel bit.
    #[default]
    Absolute,
    /// Multiples of the channel capacity.
    Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderChoice {
    #[default]
    Both,
    Genie,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct E2eConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub channel: ChannelSpec,
    pub distribution: DistributionSpec,
    pub rates: Vec<f64>,
    pub rate_scale: RateScale,
    pub num_messages: u64,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    /// Maximum candidate systems per exhaustive decode. Required.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub first_hit: bool,
    pub decoder: DecoderChoice,
    /// Lift the exhaustive-decoding guard (M <= 8, pool <= 16).
    pub allow_large: bool,
    pub record_wall_time: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Per-trial records; defaults to `<out stem>.trials.csv`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_out: Option<PathBuf>,
}

impl Default for E2eConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            channel: ChannelSpec {
                m: 6,
                l: Some(24),
                beta: None,
                p: 0.1,
            },
            distribution: DistributionSpec::Fixed { n: 1 },
            rates: vec![0.6, 1.2],
            rate_scale: RateScale::Capacity,
            num_messages: 16,
            epsilon: multidraw_core::codec::DEFAULT_EPSILON,
            trials: 200,
            seed: default_seed(),
            budget: None,
            first_hit: false,
            decoder: DecoderChoice::Both,
            allow_large: false,
            record_wall_time: false,
            out: None,
            trials_out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    Capacity(CapacityConfig),
    RegimeCurves(RegimeCurvesConfig),
    Lemma1(Lemma1Config),
    Lemma2(Lemma2Config),
    PairConsistency(PairConsistencyConfig),
    ClusterCount(ClusterCountConfig),
    E2eSweep(E2eConfig),
}

impl ExperimentConfig {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            ExperimentConfig::Capacity(_) => ExperimentKind::Capacity,
            ExperimentConfig::RegimeCurves(_) => ExperimentKind::RegimeCurves,
            ExperimentConfig::Lemma1(_) => ExperimentKind::Lemma1,
            ExperimentConfig::Lemma2(_) => ExperimentKind::Lemma2,
            ExperimentConfig::PairConsistency(_) => ExperimentKind::PairConsistency,
            ExperimentConfig::ClusterCount(_) => ExperimentKind::ClusterCount,
            ExperimentConfig::E2eSweep(_) => ExperimentKind::E2eSweep,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::Capacity(c) => c.validate(),
            ExperimentConfig::RegimeCurves(c) => c.validate(),
            ExperimentConfig::Lemma1(c) => c.validate(),
            ExperimentConfig::Lemma2(c) => c.validate(),
            ExperimentConfig::PairConsistency(c) => c.validate(),
            ExperimentConfig::ClusterCount(c) => c.validate(),
            ExperimentConfig::E2eSweep(c) => c.validate(),
        }
    }
}

#[derive(Deserialize)]
struct Probe {
    experiment: ExperimentKind,
}

/// Parses and validates a config document. Syntax and type errors carry the
/// line and column of the offending token.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let probe: Probe = serde_json::from_str(text).map_err(|e| LabError::from_json(e, None))?;
    let parsed = match probe.experiment {
        ExperimentKind::Capacity => serde_json::from_str(text).map(ExperimentConfig::Capacity),
        ExperimentKind::RegimeCurves => serde_json::from_str(text).map(ExperimentConfig::RegimeCurves),
        ExperimentKind::Lemma1 => serde_json::from_str(text).map(ExperimentConfig::Lemma1),
        ExperimentKind::Lemma2 => serde_json::from_str(text).map(ExperimentConfig::Lemma2),
        ExperimentKind::PairConsistency => serde_json::from_str(text).map(ExperimentConfig::PairConsistency),
        ExperimentKind::ClusterCount => serde_json::from_str(text).map(ExperimentConfig::ClusterCount),
        ExperimentKind::E2eSweep => serde_json::from_str(text).map(ExperimentConfig::E2eSweep),
    };
    let config = parsed.map_err(|e| LabError::from_json(e, None))?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_config(&text).map_err(|e| e.with_path(path.to_path_buf()))
}

fn check(cond: bool, message: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(LabError::config(message()))
    }
}

fn check_trials(trials: usize) -> Result<()> {
    check(trials >= 1, || "trials must be at least 1".into())
}

impl CapacityConfig {
    pub fn validate(&self) -> Result<()> {
        check((0.0..=1.0).contains(&self.p), || {
            format!("p = {} must lie in [0, 1]", self.p)
        })?;
        check(self.beta.is_finite() && self.beta > 0.0, || {
            format!("beta = {} must be positive", self.beta)
        })?;
        self.distribution.build().map(|_| ())
    }
}

impl RegimeCurvesConfig {
    pub fn validate(&self) -> Result<()> {
        check(0.0 < self.p_min && self.p_min < self.p_max && self.p_max < 1.0, || {
            format!(
                "need 0 < p_min < p_max < 1, got p_min = {}, p_max = {}",
                self.p_min, self.p_max
            )
        })?;
        check(self.points >= 2, || "points must be at least 2".into())
    }
}

impl Lemma1Config {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        check(!self.b_list.is_empty() && !self.delta_list.is_empty(), || {
            "b_list and delta_list must be non-empty".into()
        })?;
        for &b in &self.b_list {
            for &d in &self.delta_list {
                check((0.0..1.0).contains(&d), || format!("delta = {d} must lie in [0, 1)"))?;
                check(multidraw_core::gf2::kept_rows(b, d) >= 1, || {
                    format!("B = {b}, delta = {d} keeps no rows")
                })?;
            }
        }
        Ok(())
    }
}

impl Lemma2Config {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        check(!self.m_list.is_empty(), || "m_list must be non-empty".into())?;
        check((0.0..1.0).contains(&self.p), || {
            format!("p = {} must lie in [0, 1)", self.p)
        })?;
        for &m in &self.m_list {
            ChannelParams::from_beta(m, self.beta, self.p)?;
        }
        self.distribution.build().map(|_| ())
    }
}

impl PairConsistencyConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.pairs >= 1, || "pairs must be at least 1".into())?;
        for c in &self.cells {
            check((0.0..=1.0).contains(&c.p), || format!("p = {} must lie in [0, 1]", c.p))?;
        }
        Ok(())
    }
}

impl ClusterCountConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        check(self.m >= 1, || "m must be at least 1".into())?;
        check(self.epsilon > 0.0, || {
            format!("epsilon = {} must be positive", self.epsilon)
        })?;
        for d in &self.distributions {
            d.build()?;
        }
        Ok(())
    }
}

impl E2eConfig {
    pub fn validate(&self) -> Result<()> {
        check_trials(self.trials)?;
        let params = self.channel.build()?;
        let dist = self.distribution.build()?;
        check(!self.rates.is_empty(), || "rates must be non-empty".into())?;
        for &r in &self.rates {
            check(r.is_finite() && r > 0.0, || format!("rate {r} must be positive"))?;
        }
        check(self.num_messages >= 2, || "num_messages must be at least 2".into())?;
        check(self.budget.is_some_and(|b| b >= 1), || {
            "budget (maximum systems per decode) is required and must be at least 1".into()
        })?;
        check(self.epsilon > 0.0 && self.epsilon < 1.0 - dist.q0(), || {
            format!("epsilon = {} must lie in (0, 1 - q0)", self.epsilon)
        })?;
        if self.decoder == DecoderChoice::Both && !self.allow_large {
            check(params.m() <= crate::experiments::GUARD_MAX_M, || {
                format!(
                    "exhaustive decoding is limited to M <= {}; use decoder \"genie\" or set allow_large",
                    crate::experiments::GUARD_MAX_M
                )
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_configs_take_defaults() {
        let c = parse_config(r#"{"experiment": "lemma1"}"#).unwrap();
        let expected = Lemma1Config {
            experiment: Some(ExperimentKind::Lemma1),
            ..Default::default()
        };
        assert_eq!(c, ExperimentConfig::Lemma1(expected));
        let c = parse_config(r#"{"experiment": "lemma2", "trials": 3}"#).unwrap();
        match c {
            ExperimentConfig::Lemma2(l) => assert_eq!(l.trials, 3),
            _ => panic!(),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_config("{\"experiment\": \"lemma1\",\n  \"trails\": 5}").unwrap_err();
        match err {
            LabError::Config { line, message, .. } => {
                assert_eq!(line, Some(2));
                assert!(message.contains("trails"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_config(r#"{"experiment": "nope"}"#).is_err());
        assert!(parse_config(r#"{"trials": 5}"#).is_err());
        assert!(parse_config(r#"{"experiment": "lemma1", "trials": 0}"#).is_err());
    }

    #[test]
    fn distribution_forms() {
        let d: DistributionSpec = r#"{"pmf": [0.5, 0.25, 0.25]}"#.parse().unwrap();
        assert_eq!(d, DistributionSpec::Pmf(vec![0.5, 0.25, 0.25]));
        let d: DistributionSpec = r#"{"family": "poisson", "lambda": 2, "nmax": 8}"#.parse().unwrap();
        assert_eq!(d, DistributionSpec::Poisson { lambda: 2.0, nmax: 8 });
        let round: DistributionSpec = d.to_string().parse().unwrap();
        assert_eq!(round, d);
        assert!(r#"{"pmf": [1.0]}"#.parse::<DistributionSpec>().is_err());
        assert!(r#"{"pmf": [0.5, 0.6]}"#.parse::<DistributionSpec>().is_err());
        assert!(r#"{"family": "poisson", "lambda": 2}"#.parse::<DistributionSpec>().is_err());
        assert!(r#"{"family": "fixed", "n": 1, "r": 0.2}"#.parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn e2e_requires_budget() {
        assert!(parse_config(r#"{"experiment": "e2e-sweep"}"#).is_err());
        assert!(parse_config(r#"{"experiment": "e2e-sweep", "budget": 1000}"#).is_ok());
        let big = r#"{"experiment": "e2e-sweep", "budget": 10, "channel": {"m": 12, "l": 30, "p": 0.1}}"#;
        assert!(parse_config(big).is_err());
    }
}
