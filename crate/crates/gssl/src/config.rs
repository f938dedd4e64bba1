//! Experiment configuration, readable from TOML. Every field has a default,
//! so a file only needs the keys it changes.

use std::path::{Path, PathBuf};

use gssl_core::algorithms::{
    AucSpec, AucSpecConfig, InitMode, LabelPropagation, LeadingEigenvectors, SslMethod, ThresholdMode,
};
use gssl_core::data::{balanced_subsample, gen_gaussian_mixture, gen_rectangle, gen_ring_of_gaussians};
use gssl_core::graph::{DEFAULT_NEIGHBOR_K, DEFAULT_SCALE_K};
use gssl_core::spectral::{DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL};
use gssl_core::Dataset;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{load_csv, DEFAULT_LABEL_COLUMN};

pub const DEFAULT_BUDGETS: [usize; 5] = [8, 10, 12, 20, 200];
pub const DEFAULT_TRIALS: usize = 50;
pub const METHOD_NAMES: [&str; 3] = ["auc_spec", "lp", "eigs"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSpec {
    Ring {
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    Gmm {
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    Rectangle {
        n: usize,
        beta: f64,
        #[serde(default)]
        seed: u64,
    },
    Csv {
        path: PathBuf,
        #[serde(default = "default_label_column")]
        label_column: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        features: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subsample: Option<Subsample>,
    },
}

fn default_label_column() -> String {
    DEFAULT_LABEL_COLUMN.to_string()
}

/// Balanced binary subsample of a multi-class CSV dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subsample {
    pub n: usize,
    /// Source class ids relabeled to 0 and 1.
    pub classes: (usize, usize),
    #[serde(default)]
    pub seed: u64,
}

impl DatasetSpec {
    /// Parse the command-line shorthand: a generator name or a CSV path.
    pub fn from_flag(name: &str, n: Option<usize>, beta: Option<f64>, seed: u64) -> Result<Self> {
        let need_n = || n.ok_or_else(|| Error::Usage(format!("--n is required for generator '{name}'")));
        Ok(match name {
            "ring" => DatasetSpec::Ring { n: need_n()?, seed },
            "gmm" => DatasetSpec::Gmm { n: need_n()?, seed },
            "rectangle" => DatasetSpec::Rectangle {
                n: need_n()?,
                beta: beta.ok_or_else(|| Error::Usage("--beta is required for 'rectangle'".into()))?,
                seed,
            },
            path => DatasetSpec::Csv {
                path: PathBuf::from(path),
                label_column: default_label_column(),
                features: None,
                subsample: None,
            },
        })
    }

    pub fn load(&self) -> Result<Dataset> {
        Ok(match self {
            DatasetSpec::Ring { n, seed } => gen_ring_of_gaussians(*n, *seed)?,
            DatasetSpec::Gmm { n, seed } => gen_gaussian_mixture(*n, *seed)?,
            DatasetSpec::Rectangle { n, beta, seed } => gen_rectangle(*n, *beta, *seed)?,
            DatasetSpec::Csv {
                path,
                label_column,
                features,
                subsample,
            } => {
                let data = load_csv(path, features.as_deref(), label_column)?;
                match subsample {
                    Some(s) => {
                        let name = format!("{}-{}v{}", data.name(), s.classes.0, s.classes.1);
                        balanced_subsample(&data, s.n, s.classes, s.seed)?.with_name(name)
                    }
                    None => data,
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSetting {
    Negative,
    Zero,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSetting {
    Zero,
    BestOnLabeled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AucSpecSettings {
    pub warmup_iters: usize,
    pub warmup_step: f64,
    pub main_step: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub init: InitSetting,
    pub threshold: ThresholdSetting,
    pub init_seed: u64,
}

impl Default for AucSpecSettings {
    fn default() -> Self {
        Self::from(AucSpecConfig::default())
    }
}

impl From<AucSpecConfig> for AucSpecSettings {
    fn from(c: AucSpecConfig) -> Self {
        Self {
            warmup_iters: c.warmup_iters,
            warmup_step: c.warmup_step,
            main_step: c.main_step,
            tol: c.tol,
            max_iter: c.max_iter,
            init: match c.init_mode {
                InitMode::Negative => InitSetting::Negative,
                InitMode::Zero => InitSetting::Zero,
                InitMode::Random => InitSetting::Random,
            },
            threshold: match c.threshold_mode {
                ThresholdMode::Zero => ThresholdSetting::Zero,
                ThresholdMode::BestOnLabeled => ThresholdSetting::BestOnLabeled,
            },
            init_seed: c.seed,
        }
    }
}

impl AucSpecSettings {
    pub fn to_core(&self) -> AucSpecConfig {
        AucSpecConfig {
            warmup_iters: self.warmup_iters,
            warmup_step: self.warmup_step,
            main_step: self.main_step,
            tol: self.tol,
            max_iter: self.max_iter,
            init_mode: match self.init {
                InitSetting::Negative => InitMode::Negative,
                InitSetting::Zero => InitMode::Zero,
                InitSetting::Random => InitMode::Random,
            },
            threshold_mode: match self.threshold {
                ThresholdSetting::Zero => ThresholdMode::Zero,
                ThresholdSetting::BestOnLabeled => ThresholdMode::BestOnLabeled,
            },
            seed: self.init_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LpSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LpSettings {
    fn default() -> Self {
        let d = LabelPropagation::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigsSettings {
    pub k: usize,
    pub ridge: f64,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for EigsSettings {
    fn default() -> Self {
        let d = LeadingEigenvectors::default();
        Self {
            k: d.k,
            ridge: d.ridge,
            eigen_tol: DEFAULT_EIGEN_TOL,
            eigen_max_iter: DEFAULT_EIGEN_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetSpec>,
    pub scale_k: usize,
    pub neighbor_k: usize,
    pub methods: Vec<String>,
    pub budgets: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub output: PathBuf,
    pub auc_spec: AucSpecSettings,
    pub lp: LpSettings,
    pub eigs: EigsSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            scale_k: DEFAULT_SCALE_K,
            neighbor_k: DEFAULT_NEIGHBOR_K,
            methods: METHOD_NAMES.iter().map(|s| s.to_string()).collect(),
            budgets: DEFAULT_BUDGETS.to_vec(),
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            output: PathBuf::from("results"),
            auc_spec: AucSpecSettings::default(),
            lp: LpSettings::default(),
            eigs: EigsSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Structural checks; budget feasibility is checked per dataset at run
    /// time.
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods".into()));
        }
        if self.budgets.is_empty() || self.budgets.contains(&0) {
            return Err(Error::Config("budgets must be a non-empty list of positive sizes".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        for m in &self.methods {
            self.method(m)?;
        }
        self.auc_spec.to_core().validate()?;
        Ok(())
    }

    pub fn method(&self, name: &str) -> Result<Box<dyn SslMethod>> {
        Ok(match name {
            "auc_spec" => Box::new(AucSpec {
                config: self.auc_spec.to_core(),
            }),
            "lp" => Box::new(LabelPropagation {
                tol: self.lp.tol,
                max_iter: self.lp.max_iter,
            }),
            "eigs" => Box::new(LeadingEigenvectors {
                k: self.eigs.k,
                ridge: self.eigs.ridge,
                eigen_tol: self.eigs.eigen_tol,
                eigen_max_iter: self.eigs.eigen_max_iter,
            }),
            other => {
                return Err(Error::Config(format!(
                    "unknown method '{other}' (expected one of {})",
                    METHOD_NAMES.join(", ")
                )))
            }
        })
    }
}
