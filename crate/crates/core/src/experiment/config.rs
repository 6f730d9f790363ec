use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classify::ClassifierKind;
use crate::error::{Error, Result};
use crate::samplers::{AdasynConfig, BorderlineConfig, MixupConfig, SmoteConfig, SvmSmoteConfig};
use crate::synth::TwoGaussians;
use crate::tabular::{load_csv, CsvSchema, Dataset, SplitFractions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSource {
    Csv {
        /// Relative paths are resolved against the config file's directory.
        path: PathBuf,
        #[serde(flatten)]
        schema: CsvSchema,
    },
    TwoGaussians(TwoGaussians),
}

impl DatasetSource {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DatasetSource::Csv { path, schema } => load_csv(path, schema),
            DatasetSource::TwoGaussians(g) => Ok(crate::synth::two_gaussians(g)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SamplerChoice {
    None,
    Smote(SmoteConfig),
    SmoteNc(SmoteConfig),
    Borderline(BorderlineConfig),
    SvmSmote(SvmSmoteConfig),
    Adasyn(AdasynConfig),
    SmoteTomek {
        #[serde(default)]
        smote: SmoteConfig,
        #[serde(default)]
        remove_both: bool,
    },
    SmoteEnn(SmoteConfig),
    Mixup(MixupConfig),
    Stem {
        #[serde(default)]
        smote: SmoteConfig,
        #[serde(default)]
        mixup: MixupConfig,
    },
}

impl SamplerChoice {
    pub fn key(&self) -> &'static str {
        match self {
            SamplerChoice::None => "none",
            SamplerChoice::Smote(_) => "smote",
            SamplerChoice::SmoteNc(_) => "smote_nc",
            SamplerChoice::Borderline(_) => "borderline",
            SamplerChoice::SvmSmote(_) => "svm_smote",
            SamplerChoice::Adasyn(_) => "adasyn",
            SamplerChoice::SmoteTomek { .. } => "smote_tomek",
            SamplerChoice::SmoteEnn(_) => "smote_enn",
            SamplerChoice::Mixup(_) => "mixup",
            SamplerChoice::Stem { .. } => "stem",
        }
    }

    /// Row label in the results table.
    pub fn display_name(&self) -> &'static str {
        match self {
            SamplerChoice::None => "None",
            SamplerChoice::Smote(_) => "SMOTE",
            SamplerChoice::SmoteNc(_) => "SMOTE-NC",
            SamplerChoice::Borderline(_) => "Borderline-SMOTE",
            SamplerChoice::SvmSmote(_) => "SVM-SMOTE",
            SamplerChoice::Adasyn(_) => "ADASYN",
            SamplerChoice::SmoteTomek { .. } => "SMOTE-Tomek",
            SamplerChoice::SmoteEnn(_) => "SMOTE-ENN",
            SamplerChoice::Mixup(_) => "Mixup",
            SamplerChoice::Stem { .. } => "STEM",
        }
    }

    /// Every sampler with default parameters, `none` first.
    pub fn all() -> Vec<SamplerChoice> {
        vec![
            SamplerChoice::None,
            SamplerChoice::Smote(SmoteConfig::default()),
            SamplerChoice::SmoteNc(SmoteConfig::default()),
            SamplerChoice::Borderline(BorderlineConfig::default()),
            SamplerChoice::SvmSmote(SvmSmoteConfig::default()),
            SamplerChoice::Adasyn(AdasynConfig::default()),
            SamplerChoice::SmoteTomek {
                smote: SmoteConfig::default(),
                remove_both: false,
            },
            SamplerChoice::SmoteEnn(SmoteConfig::default()),
            SamplerChoice::Mixup(MixupConfig::default()),
            SamplerChoice::Stem {
                smote: SmoteConfig::default(),
                mixup: MixupConfig::default(),
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSettings {
    pub seed: u64,
    pub repetitions: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            seed: 0,
            repetitions: 10,
            out_dir: None,
        }
    }
}

fn default_classifiers() -> Vec<ClassifierKind> {
    ClassifierKind::defaults()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    #[serde(default)]
    pub split: SplitFractions,
    #[serde(default)]
    pub run: RunSettings,
    #[serde(rename = "sampler")]
    pub samplers: Vec<SamplerChoice>,
    #[serde(rename = "classifier", default = "default_classifiers")]
    pub classifiers: Vec<ClassifierKind>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML config, or the `config` object of a JSON run manifest.
    /// Relative dataset paths become absolute against the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = if path.extension().is_some_and(|e| e == "json") {
            let manifest: serde_json::Value = serde_json::from_str(&text)?;
            let inner = manifest.get("config").cloned().unwrap_or(manifest);
            let cfg: ExperimentConfig = serde_json::from_value(inner)?;
            cfg.validate()?;
            cfg
        } else {
            ExperimentConfig::from_toml_str(&text)?
        };
        if let DatasetSource::Csv { path: data_path, .. } = &mut cfg.dataset {
            if data_path.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                let joined = base.join(&*data_path);
                *data_path = joined.canonicalize().unwrap_or(joined);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samplers.is_empty() {
            return Err(Error::Config("at least one [[sampler]] is required".into()));
        }
        if self.classifiers.len() < 3 {
            return Err(Error::Config(format!(
                "at least three [[classifier]] entries are required, got {}",
                self.classifiers.len()
            )));
        }
        if self.run.repetitions == 0 {
            return Err(Error::Config("run.repetitions must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.samplers {
            if !seen.insert(s.key()) {
                return Err(Error::Config(format!("sampler `{}` listed twice", s.key())));
            }
        }
        let f = self.split;
        if [f.train, f.validation, f.holdout].iter().any(|v| !(*v > 0.0)) || ((f.train + f.validation + f.holdout) - 1.0).abs() > 1e-9 {
            return Err(Error::Config("split fractions must be positive and sum to 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml_gets_defaults() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            # smoke
            [dataset]
            source = "two_gaussians"
            rows = 300

            [[sampler]]
            name = "none"

            [[sampler]]
            name = "stem"
            [sampler.mixup]
            alpha = 0.4
            "#,
        )
        .unwrap();
        assert_eq!(cfg.run.repetitions, 10);
        assert_eq!(cfg.classifiers.len(), 6);
        assert_eq!(cfg.split, SplitFractions::default());
        let SamplerChoice::Stem { smote, mixup } = cfg.samplers[1] else { panic!() };
        assert_eq!(smote, SmoteConfig::default());
        assert_eq!(mixup.alpha, 0.4);
        let DatasetSource::TwoGaussians(g) = cfg.dataset else { panic!() };
        assert_eq!(g.rows, 300);
    }

    #[test]
    fn csv_schema_is_flattened() {
        let cfg = ExperimentConfig::from_toml_str(
            "[dataset]\nsource = \"csv\"\npath = \"x.csv\"\nlabel_column = \"y\"\nignore_columns = [\"id\"]\n[[sampler]]\nname = \"smote\"\nk = 3\n",
        )
        .unwrap();
        let DatasetSource::Csv { schema, .. } = &cfg.dataset else { panic!() };
        assert_eq!(schema.label_column, "y");
        assert_eq!(schema.ignore_columns, vec!["id".to_string()]);
        assert_eq!(cfg.samplers[0], SamplerChoice::Smote(SmoteConfig { k: 3, ..Default::default() }));
    }

    #[test]
    fn invalid_configs() {
        let base = "[dataset]\nsource = \"two_gaussians\"\n";
        assert!(ExperimentConfig::from_toml_str(base).is_err());
        let two = format!("{base}[[sampler]]\nname = \"none\"\n[[classifier]]\nkind = \"lda\"\n[[classifier]]\nkind = \"qda\"\n");
        assert!(matches!(ExperimentConfig::from_toml_str(&two), Err(Error::Config(_))));
        let dup = format!("{base}[[sampler]]\nname = \"none\"\n[[sampler]]\nname = \"none\"\n");
        assert!(ExperimentConfig::from_toml_str(&dup).is_err());
        let split = format!("{base}[split]\ntrain = 0.5\nvalidation = 0.1\nholdout = 0.1\n[[sampler]]\nname = \"none\"\n");
        assert!(ExperimentConfig::from_toml_str(&split).is_err());
    }
}
