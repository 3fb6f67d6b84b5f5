//! The `frontier.json` interchange format.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use mogavs::moga::{GaConfig, MogaRun, Snapshot};
use mogavs::{Dataset, EvaluatedModel, Frontier, ModelMask, ObjectiveVector};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "mogavs-frontier/1";

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FrontierFile {
    pub format: String,
    /// `moga` or `exhaustive`.
    pub producer: String,
    /// Search settings; present when `producer` is `moga`.
    pub config: Option<GaConfig>,
    /// Largest size enumerated; present when `producer` is `exhaustive`.
    #[serde(default)]
    pub max_complexity: Option<usize>,
    pub data: DataRef,
    pub models: Vec<ModelRecord>,
    pub stats: Option<StatsRecord>,
    #[serde(default)]
    pub snapshots: Vec<SnapshotRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DataRef {
    pub path: PathBuf,
    pub target: String,
    pub header: bool,
    pub n: usize,
    pub names: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub mask: String,
    pub variables: Vec<String>,
    /// Number of selected predictors.
    pub phi1: usize,
    /// Objective error (in-sample or cross-validated MSE).
    pub phi2: f64,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StatsRecord {
    pub generations: usize,
    pub models_evaluated: usize,
    pub unique_models: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SnapshotRecord {
    pub generation: usize,
    /// `[phi1, phi2]` for every population member.
    pub objectives: Vec<(usize, f64)>,
}

impl ModelRecord {
    pub fn from_model(m: &EvaluatedModel, names: &[String]) -> Self {
        Self {
            mask: m.mask.to_string(),
            variables: m.mask.indices().into_iter().map(|j| names[j].clone()).collect(),
            phi1: m.objective.complexity,
            phi2: m.objective.error,
            intercept: m.intercept,
            coefficients: m.coefficients.clone(),
        }
    }

    pub fn to_model(&self) -> Result<EvaluatedModel> {
        let mask: ModelMask = self.mask.parse().map_err(|e| anyhow::anyhow!("bad mask {:?}: {e}", self.mask))?;
        anyhow::ensure!(
            mask.count_ones() == self.phi1 && self.coefficients.len() == self.phi1,
            "model {} is inconsistent: phi1={} with {} coefficients",
            self.mask,
            self.phi1,
            self.coefficients.len()
        );
        Ok(EvaluatedModel {
            mask,
            objective: ObjectiveVector::new(self.phi1, self.phi2),
            intercept: self.intercept,
            coefficients: self.coefficients.clone(),
        })
    }
}

impl DataRef {
    pub fn new(path: &Path, target: &str, header: bool, data: &Dataset) -> Self {
        // An absolute path keeps replays independent of the working directory.
        let path = fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf());
        Self { path, target: target.into(), header, n: data.n(), names: data.names().to_vec() }
    }

    pub fn load(&self) -> Result<Dataset> {
        let data = mogavs::data::load_csv(&self.path, &self.target, self.header)?;
        anyhow::ensure!(
            data.n() == self.n && data.names() == self.names.as_slice(),
            "{} no longer matches the recorded data ({} rows, {} predictors expected)",
            self.path.display(),
            self.n,
            self.names.len()
        );
        Ok(data)
    }
}

impl FrontierFile {
    pub fn from_run(config: &GaConfig, data_ref: DataRef, run: &MogaRun) -> Self {
        let models = records(&run.frontier, &data_ref.names);
        Self {
            format: FORMAT.into(),
            producer: "moga".into(),
            config: Some(config.clone()),
            max_complexity: None,
            data: data_ref,
            models,
            stats: Some(StatsRecord {
                generations: run.stats.generations,
                models_evaluated: run.stats.models_evaluated,
                unique_models: run.stats.unique_models,
            }),
            snapshots: run.snapshots.iter().map(SnapshotRecord::from).collect(),
        }
    }

    pub fn from_exhaustive(frontier: &Frontier, max_complexity: usize, data_ref: DataRef) -> Self {
        Self {
            format: FORMAT.into(),
            producer: "exhaustive".into(),
            config: None,
            max_complexity: Some(max_complexity),
            models: records(frontier, &data_ref.names),
            data: data_ref,
            stats: None,
            snapshots: Vec::new(),
        }
    }

    pub fn frontier(&self) -> Result<Frontier> {
        let models = self.models.iter().map(ModelRecord::to_model).collect::<Result<Vec<_>>>()?;
        Ok(Frontier::from_models(&models))
    }

    pub fn snapshots(&self) -> Vec<Snapshot> {
        self.snapshots
            .iter()
            .map(|s| Snapshot {
                generation: s.generation,
                objectives: s.objectives.iter().map(|&(c, e)| ObjectiveVector::new(c, e)).collect(),
            })
            .collect()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        anyhow::ensure!(file.format == FORMAT, "{}: unsupported format {:?}", path.display(), file.format);
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

impl From<&Snapshot> for SnapshotRecord {
    fn from(s: &Snapshot) -> Self {
        Self { generation: s.generation, objectives: s.objectives.iter().map(|o| (o.complexity, o.error)).collect() }
    }
}

fn records(frontier: &Frontier, names: &[String]) -> Vec<ModelRecord> {
    frontier.iter().map(|m| ModelRecord::from_model(m, names)).collect()
}

/// `complexity,mse,variables,mask` rows.
pub fn frontier_csv(models: &[ModelRecord]) -> String {
    let mut out = String::from("complexity,mse,variables,mask\n");
    for m in models {
        out.push_str(&format!("{},{},{},{}\n", m.phi1, m.phi2, m.variables.join(" "), m.mask));
    }
    out
}
