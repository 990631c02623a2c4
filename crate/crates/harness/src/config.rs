use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use stechkin_core::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Campaign {
    Constants,
    Theorem1Upper,
    Theorem2Alpha,
    Theorem3PiOverN,
    Theorem4SmallR,
    OmegaStarSharpness,
    LowerBound,
    ConjectureSweep,
    L2Chernykh,
    VpDirect,
    FavardEquality,
    OperatorIdentities,
}

impl Campaign {
    pub const ALL: [Campaign; 12] = [
        Campaign::Constants,
        Campaign::Theorem1Upper,
        Campaign::Theorem2Alpha,
        Campaign::Theorem3PiOverN,
        Campaign::Theorem4SmallR,
        Campaign::OmegaStarSharpness,
        Campaign::LowerBound,
        Campaign::ConjectureSweep,
        Campaign::L2Chernykh,
        Campaign::VpDirect,
        Campaign::FavardEquality,
        Campaign::OperatorIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Campaign::Constants => "constants",
            Campaign::Theorem1Upper => "theorem1-upper",
            Campaign::Theorem2Alpha => "theorem2-alpha",
            Campaign::Theorem3PiOverN => "theorem3-pi-over-n",
            Campaign::Theorem4SmallR => "theorem4-small-r",
            Campaign::OmegaStarSharpness => "omega-star-sharpness",
            Campaign::LowerBound => "lower-bound",
            Campaign::ConjectureSweep => "conjecture-sweep",
            Campaign::L2Chernykh => "l2-chernykh",
            Campaign::VpDirect => "vp-direct",
            Campaign::FavardEquality => "favard-equality",
            Campaign::OperatorIdentities => "operator-identities",
        }
    }
}

/// Function families in the test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    CosN,
    Step,
    SmoothedStep,
    FavardSign,
    RandomTrig,
    SampledNoise,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 6] = [
        CorpusKind::CosN,
        CorpusKind::Step,
        CorpusKind::SmoothedStep,
        CorpusKind::FavardSign,
        CorpusKind::RandomTrig,
        CorpusKind::SampledNoise,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaign: Campaign,
    pub n_range: Vec<usize>,
    pub r_range: Vec<u32>,
    pub alpha: Vec<f64>,
    pub corpus: Vec<CorpusKind>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub grid_nodes: usize,
    pub refine_depth: usize,
    /// Number of random trigonometric polynomials per `n`.
    pub random_polys: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self::for_campaign(Campaign::Theorem1Upper)
    }
}

impl CampaignConfig {
    /// Defaults tuned per campaign.
    pub fn for_campaign(campaign: Campaign) -> Self {
        let (n_range, r_range, alpha): (Vec<usize>, Vec<u32>, Vec<f64>) = match campaign {
            Campaign::Constants => (vec![], vec![], vec![]),
            Campaign::Theorem1Upper => (vec![8, 12, 18, 24], (1..=8).collect(), vec![2.0]),
            Campaign::Theorem2Alpha => (vec![8, 12], (1..=6).collect(), vec![1.25, 1.5, 1.75]),
            Campaign::Theorem3PiOverN => (vec![8, 12], (1..=6).collect(), vec![1.0]),
            Campaign::Theorem4SmallR => (vec![8, 12], (1..=6).collect(), vec![1.0, 2.0]),
            Campaign::OmegaStarSharpness => (vec![4, 8, 16], (1..=8).map(|k| 2 * k).collect(), vec![1.0]),
            Campaign::LowerBound => (vec![12, 16], (1..=6).collect(), vec![2.0]),
            Campaign::ConjectureSweep => (vec![8, 12], (1..=6).collect(), vec![1.0]),
            Campaign::L2Chernykh => (vec![8, 12], (1..=6).collect(), vec![2.0]),
            Campaign::VpDirect => (vec![9, 18, 27], (1..=8).collect(), vec![2.0]),
            Campaign::FavardEquality => (vec![4, 8, 16], (1..=8).map(|k| 2 * k).collect(), vec![1.0]),
            Campaign::OperatorIdentities => (vec![8], vec![2, 4, 6, 8], vec![1.0]),
        };
        Self {
            campaign,
            n_range,
            r_range,
            alpha,
            corpus: CorpusKind::ALL.to_vec(),
            tolerances: BTreeMap::new(),
            seed: 20240607,
            grid_nodes: stechkin_core::fncore::DEFAULT_NODES,
            refine_depth: stechkin_core::fncore::DEFAULT_REFINE_DEPTH,
            random_polys: 10,
        }
    }

    pub fn from_toml_str(s: &str) -> anyhow::Result<Self> {
        let raw: toml::Value = toml::from_str(s).context("parsing campaign config")?;
        // start from the campaign's defaults, then apply the file's keys
        let campaign = match raw.get("campaign") {
            Some(v) => v.clone().try_into::<Campaign>().context("unknown campaign")?,
            None => Campaign::Theorem1Upper,
        };
        let mut base = toml::Value::try_from(Self::for_campaign(campaign))?;
        if let (Some(b), Some(r)) = (base.as_table_mut(), raw.as_table()) {
            for (k, v) in r {
                b.insert(k.clone(), v.clone());
            }
        }
        let cfg: Self = base.try_into().context("invalid campaign config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.campaign != Campaign::Constants {
            if self.n_range.is_empty() || self.r_range.is_empty() || self.alpha.is_empty() {
                bail!("n, r and alpha ranges must be non-empty");
            }
            if self.corpus.is_empty() {
                bail!("corpus must be non-empty");
            }
        }
        if self.n_range.contains(&0) || self.r_range.contains(&0) {
            bail!("n and r must be positive");
        }
        if self.alpha.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            bail!("alpha values must be positive");
        }
        GridSpec::new(self.grid_nodes, self.refine_depth)?;
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.grid_nodes, self.refine_depth).expect("validated grid")
    }

    /// Tolerance override or the given default.
    pub fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_overrides_defaults() {
        let cfg = CampaignConfig::from_toml_str("campaign = \"vp-direct\"\nseed = 7\nn_range = [18]").unwrap();
        assert_eq!(cfg.campaign, Campaign::VpDirect);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.n_range, vec![18]);
        assert_eq!(cfg.r_range, (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_empty_ranges_and_unknown_keys() {
        assert!(CampaignConfig::from_toml_str("r_range = []").is_err());
        assert!(CampaignConfig::from_toml_str("bogus = 1").is_err());
        assert!(CampaignConfig::from_toml_str("campaign = \"nope\"").is_err());
    }
}
