//! Run configuration, read from TOML and overridable from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusFormat, LabelMapping, SpeakerFilter, TagsetVariant};
use crate::error::{Error, Result};
use crate::eval::{CvSettings, DictionaryScope, ExperimentKind, ExperimentSettings, Granularity};
use crate::features::{
    ContextMode, ContextSpec, FeatureConfig, LabelDimensions, MarkupMode, NGramSpec,
};
use crate::svm::SolverParams;

/// Environment variable naming the directory relative corpus paths resolve against.
pub const CORPUS_ROOT_ENV: &str = "DACTX_CORPUS_ROOT";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub corpus: CorpusSection,
    #[serde(default)]
    pub features: FeaturesSection,
    #[serde(default)]
    pub svm: SvmSection,
    #[serde(default)]
    pub context: ContextSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub path: Option<PathBuf>,
    pub format: CorpusFormat,
    /// Defaults to `swda42` for Switchboard and `iso` otherwise.
    pub variant: Option<TagsetVariant>,
    /// `default` for the built-in LEGO mapping, otherwise a mapping file.
    pub mapping: Option<String>,
    pub markup: MarkupMode,
    pub targets: SpeakerFilter,
}

impl Default for CorpusSection {
    fn default() -> Self {
        CorpusSection {
            path: None,
            format: CorpusFormat::Swda,
            variant: None,
            mapping: None,
            markup: MarkupMode::default(),
            targets: SpeakerFilter::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeaturesSection {
    pub max_n: usize,
    pub cumulative: bool,
    pub dictionary: DictionaryScope,
}

impl Default for FeaturesSection {
    fn default() -> Self {
        let spec = NGramSpec::default();
        FeaturesSection {
            max_n: spec.max_n,
            cumulative: spec.cumulative,
            dictionary: DictionaryScope::Fold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmSection {
    pub cost: f64,
    pub stop_tol: f64,
    pub max_epochs: usize,
    pub bias: f64,
}

impl Default for SvmSection {
    fn default() -> Self {
        let p = SolverParams::default();
        SvmSection {
            cost: p.cost,
            stop_tol: p.stop_tol,
            max_epochs: p.max_epochs,
            bias: p.bias,
        }
    }
}

/// Where label context features take their labels from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    #[default]
    Manual,
    Predicted,
}

impl std::str::FromStr for LabelSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manual" => Ok(LabelSource::Manual),
            "predicted" => Ok(LabelSource::Predicted),
            other => Err(Error::Config(format!("unknown label source `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContextSection {
    pub mode: String,
    pub n_prev: usize,
    pub label_source: LabelSource,
    pub dimensions: LabelDimensions,
}

impl Default for ContextSection {
    fn default() -> Self {
        ContextSection {
            mode: "none".into(),
            n_prev: 0,
            label_source: LabelSource::Manual,
            dimensions: LabelDimensions::Task,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub folds: usize,
    pub granularity: Granularity,
    pub modes: Vec<String>,
    pub max_prev: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            kind: ExperimentKind::Influence,
            folds: 10,
            granularity: Granularity::Dialog,
            modes: vec!["untagged".into(), "tagged".into(), "labels".into()],
            max_prev: 5,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required (set `seed` or pass --seed)".into()))
    }

    pub fn variant(&self) -> TagsetVariant {
        self.corpus.variant.unwrap_or(match self.corpus.format {
            CorpusFormat::Swda => TagsetVariant::Swda42,
            _ => TagsetVariant::Iso,
        })
    }

    /// Corpus path, resolved against the corpus root directory when relative.
    pub fn corpus_path(&self) -> Result<PathBuf> {
        let path = self
            .corpus
            .path
            .clone()
            .ok_or_else(|| Error::Config("no corpus path given".into()))?;
        Ok(match std::env::var_os(CORPUS_ROOT_ENV) {
            Some(root) if path.is_relative() => PathBuf::from(root).join(path),
            _ => path,
        })
    }

    pub fn mapping(&self) -> Result<Option<LabelMapping>> {
        match self.corpus.mapping.as_deref() {
            None => Ok(None),
            Some("default") => Ok(Some(LabelMapping::default_lego())),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
                Ok(Some(LabelMapping::parse(&text, path)?))
            }
        }
    }

    pub fn feature_config(&self) -> Result<FeatureConfig> {
        Ok(FeatureConfig {
            ngrams: NGramSpec::new(self.features.max_n, self.features.cumulative)?,
            markup: self.corpus.markup,
        })
    }

    pub fn solver_params(&self) -> Result<SolverParams> {
        let p = self.unseeded_solver_params(self.seed()?);
        p.validate()?;
        Ok(p)
    }

    fn unseeded_solver_params(&self, seed: u64) -> SolverParams {
        SolverParams {
            cost: self.svm.cost,
            stop_tol: self.svm.stop_tol,
            max_epochs: self.svm.max_epochs,
            bias: self.svm.bias,
            seed,
        }
    }

    pub fn context_spec(&self) -> Result<ContextSpec> {
        let mode = ContextMode::parse(&self.context.mode, self.context.dimensions)?;
        ContextSpec::new(mode, self.context.n_prev)
    }

    pub fn cv_settings(&self) -> Result<CvSettings> {
        Ok(CvSettings {
            svm: self.solver_params()?,
            dictionary: self.features.dictionary,
        })
    }

    pub fn experiment_settings(&self) -> Result<ExperimentSettings> {
        let modes = self
            .experiment
            .modes
            .iter()
            .map(|m| ContextMode::parse(m, self.context.dimensions))
            .collect::<Result<Vec<_>>>()?;
        if modes.is_empty() {
            return Err(Error::Config("no context modes to sweep".into()));
        }
        Ok(ExperimentSettings {
            folds: self.experiment.folds,
            granularity: self.experiment.granularity,
            seed: self.seed()?,
            cv: self.cv_settings()?,
            modes,
            max_prev: self.experiment.max_prev,
        })
    }

    /// Checks every setting that can be checked without touching the corpus.
    /// The seed is only required by the commands that train.
    pub fn validate(&self) -> Result<()> {
        self.feature_config()?;
        self.unseeded_solver_params(0).validate()?;
        self.context_spec()?;
        for m in &self.experiment.modes {
            ContextMode::parse(m, self.context.dimensions)?;
        }
        if self.experiment.modes.is_empty() {
            return Err(Error::Config("no context modes to sweep".into()));
        }
        if self.experiment.folds < 2 {
            return Err(Error::Config(format!(
                "need at least 2 folds, got {}",
                self.experiment.folds
            )));
        }
        if self.experiment.max_prev == 0 || self.experiment.max_prev > crate::features::MAX_CONTEXT
        {
            return Err(Error::Config(format!(
                "max_prev must be in 1..={}, got {}",
                crate::features::MAX_CONTEXT,
                self.experiment.max_prev
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_round_trip() {
        let c = RunConfig::from_toml_str("seed = 7\n[corpus]\npath = \"x\"\nformat = \"lego\"\n")
            .unwrap();
        assert_eq!(c.variant(), TagsetVariant::Iso);
        assert_eq!(c.experiment.folds, 10);
        c.validate().unwrap();
        assert_eq!(RunConfig::from_toml_str(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for text in [
            "seed = 1\n[svm]\ncost = -1.0\n",
            "seed = 1\n[features]\nmax_n = 9\n",
            "seed = 1\n[context]\nmode = \"none\"\nn_prev = 2\n",
            "seed = 1\n[context]\nn_prev = 6\nmode = \"tagged\"\n",
            "seed = 1\n[experiment]\nfolds = 1\n",
        ] {
            let err = RunConfig::from_toml_str(text)
                .and_then(|c| c.validate())
                .unwrap_err();
            assert!(err.is_config(), "{text}: {err}");
        }
        let unseeded = RunConfig::from_toml_str("[svm]\ncost = 1.0\n").unwrap();
        unseeded.validate().unwrap();
        assert!(unseeded.solver_params().unwrap_err().is_config());
        assert!(RunConfig::from_toml_str("seed = 1\nbogus = 2\n")
            .unwrap_err()
            .is_config());
    }
}
