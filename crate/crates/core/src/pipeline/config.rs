use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classify::TopologyParams;
use crate::corpus::IngestConfig;
use crate::error::{Error, Result};
use crate::metrics::{MetricsConfig, NoveltyConfig};
use crate::rng::derive_seed;

use super::Stage;

/// Declarative pipeline configuration, usually read from a TOML file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub year_min: i32,
    pub year_max: i32,
    pub max_dim: usize,
    pub min_persistence: i32,
    pub null_replicates: usize,
    pub n_rand: usize,
    pub swaps_per_edge: usize,
    pub cd_window: Option<u32>,
    pub sb_horizon: usize,
    pub verb_lexicon_path: Option<PathBuf>,
    /// Master seed; the per-stage seeds below derive from it unless set.
    pub seed: u64,
    pub seeds: Seeds,
    pub threads: Option<usize>,
    pub stages: StageFlags,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub null: Option<u64>,
    pub novelty: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageFlags {
    pub ingest: bool,
    pub network: bool,
    pub persist: bool,
    pub classify: bool,
    pub metrics: bool,
    pub report: bool,
}

impl Default for StageFlags {
    fn default() -> Self {
        Self {
            ingest: true,
            network: true,
            persist: true,
            classify: true,
            metrics: true,
            report: true,
        }
    }
}

impl StageFlags {
    pub fn enabled(&self, stage: Stage) -> bool {
        match stage {
            Stage::Ingest => self.ingest,
            Stage::Network => self.network,
            Stage::Persist => self.persist,
            Stage::Classify => self.classify,
            Stage::Metrics => self.metrics,
            Stage::Report => self.report,
        }
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let ingest = IngestConfig::default();
        let topo = TopologyParams::default();
        let metrics = MetricsConfig::default();
        Self {
            corpus_path: None,
            output_dir: PathBuf::from("gapminer-out"),
            year_min: ingest.year_min,
            year_max: ingest.year_max,
            max_dim: topo.max_dim,
            min_persistence: topo.min_persistence,
            null_replicates: 10,
            n_rand: metrics.novelty.n_rand,
            swaps_per_edge: metrics.novelty.swaps_per_edge,
            cd_window: metrics.cd_window,
            sb_horizon: metrics.sb_horizon,
            verb_lexicon_path: None,
            seed: 0,
            seeds: Seeds::default(),
            threads: None,
            stages: StageFlags::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.year_min > self.year_max {
            return fail(format!("year_min {} exceeds year_max {}", self.year_min, self.year_max));
        }
        if self.max_dim < 1 {
            return fail("max_dim must be at least 1".into());
        }
        if self.min_persistence < 0 {
            return fail("min_persistence must be non-negative".into());
        }
        if self.null_replicates < 1 {
            return fail("null_replicates must be at least 1".into());
        }
        if self.n_rand < 1 {
            return fail("n_rand must be at least 1".into());
        }
        if self.threads == Some(0) {
            return fail("threads must be at least 1".into());
        }
        if let Some(p) = &self.verb_lexicon_path {
            if !p.is_file() {
                return fail(format!("verb lexicon {} does not exist", p.display()));
            }
        }
        Ok(())
    }

    pub fn ingest(&self) -> IngestConfig {
        IngestConfig {
            year_min: self.year_min,
            year_max: self.year_max,
        }
    }

    pub fn topology(&self) -> TopologyParams {
        TopologyParams {
            max_dim: self.max_dim,
            min_persistence: self.min_persistence,
        }
    }

    pub fn null_seed(&self) -> u64 {
        self.seeds.null.unwrap_or_else(|| derive_seed(self.seed, &[1]))
    }

    pub fn novelty_seed(&self) -> u64 {
        self.seeds.novelty.unwrap_or_else(|| derive_seed(self.seed, &[2]))
    }

    pub fn metrics(&self) -> MetricsConfig {
        MetricsConfig {
            cd_window: self.cd_window,
            sb_horizon: self.sb_horizon,
            novelty: NoveltyConfig {
                n_rand: self.n_rand,
                swaps_per_edge: self.swaps_per_edge,
                seed: self.novelty_seed(),
                ..NoveltyConfig::default()
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn parses_nested_tables() {
        let c = PipelineConfig::from_toml(
            "max_dim = 1\nseed = 7\n[seeds]\nnull = 3\n[stages]\nreport = false\n",
        )
        .unwrap();
        assert_eq!(c.max_dim, 1);
        assert_eq!(c.null_seed(), 3);
        assert_ne!(c.novelty_seed(), 3);
        assert!(!c.stages.report);
        assert!(c.stages.metrics);
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        assert!(matches!(PipelineConfig::from_toml("max_dimm = 2"), Err(Error::Config(_))));
    }

    #[test]
    fn validation() {
        let mut c = PipelineConfig::default();
        assert!(c.validate().is_ok());
        c.null_replicates = 0;
        assert!(c.validate().is_err());
    }
}
