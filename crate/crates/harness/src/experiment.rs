use std::fs;
use std::path::Path;

use chaostex_core::classify::{DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID};
use chaostex_core::{fit_pca, Classifier, LdaTrainer, PcaDims, Trainer};
use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetIndex;
use crate::error::{HarnessError, Result};
use crate::features::{extract_dataset, ExtractOptions};
use crate::splits::{check_leakage, make_splits, Protocol, Split};
use crate::table::{FeatureTable, TableMeta};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub protocol: Protocol,
    pub rounds: usize,
    pub seed: u64,
    pub pca: PcaDims,
    pub lambda_grid: Vec<f64>,
    pub folds: usize,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            protocol: Protocol::RandomHalf,
            rounds: 10,
            seed: 0,
            pca: PcaDims::Auto,
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
        }
    }
}

impl EvalSettings {
    pub fn trainer(&self) -> LdaTrainer {
        LdaTrainer { grid: self.lambda_grid.clone(), folds: self.folds, seed: self.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundResult {
    pub split: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub accuracy: f64,
    pub pca_dims: usize,
    pub lambda: Option<f64>,
    /// Rows are true labels, columns predictions.
    pub confusion: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub evaluation: EvalSettings,
    pub features: TableMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub labels: Vec<String>,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single round.
    pub std: f64,
    /// Summed over rounds.
    pub confusion: Vec<Vec<u64>>,
    pub rounds: Vec<RoundResult>,
    pub config: ConfigEcho,
}

impl ExperimentResult {
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| HarnessError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Header row of labels followed by one row of integer counts per label.
    pub fn confusion_csv(&self) -> String {
        let mut out = self.labels.join(",");
        out.push('\n');
        for row in &self.confusion {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// `trace / total`.
pub fn confusion_accuracy(cm: &[Vec<u64>]) -> f64 {
    let total: u64 = cm.iter().flatten().sum();
    let trace: u64 = cm.iter().enumerate().map(|(i, r)| r[i]).sum();
    if total == 0 {
        0.0
    } else {
        trace as f64 / total as f64
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn run_round<T: Trainer>(
    table: &FeatureTable,
    labels: &[String],
    split: &Split,
    pca: PcaDims,
    trainer: &T,
) -> Result<RoundResult> {
    check_leakage(&table.samples, split)?;
    if split.train.is_empty() || split.test.is_empty() {
        return Err(HarnessError::data("empty train or test side"));
    }
    let train_x: Vec<Vec<f64>> = split.train.iter().map(|&i| table.values[i].clone()).collect();
    let train_y: Vec<String> = split.train.iter().map(|&i| table.samples[i].label.clone()).collect();
    let mut classes = train_y.clone();
    classes.sort();
    classes.dedup();

    let pca_model = fit_pca(&train_x, pca, Some(classes.len()))?;
    let projected = train_x.iter().map(|x| pca_model.apply(x)).collect::<chaostex_core::Result<Vec<_>>>()?;
    let model = trainer.train(&projected, &train_y)?;

    let mut confusion = vec![vec![0u64; labels.len()]; labels.len()];
    for &i in &split.test {
        let z = pca_model.apply(&table.values[i])?;
        let predicted = model.predict(&z)?;
        let row = labels.binary_search(&table.samples[i].label).expect("label of the table");
        let col = labels.binary_search_by(|l| l.as_str().cmp(predicted)).expect("trained label");
        confusion[row][col] += 1;
    }
    Ok(RoundResult {
        split: split.id,
        train_size: split.train.len(),
        test_size: split.test.len(),
        accuracy: confusion_accuracy(&confusion),
        pca_dims: pca_model.output_dim(),
        lambda: model.regularization(),
        confusion,
    })
}

/// Fits PCA and `trainer` on each training side and scores the test side.
/// Rounds run in parallel; the result depends only on the inputs.
pub fn evaluate_splits<T: Trainer + Sync>(
    table: &FeatureTable,
    splits: &[Split],
    pca: PcaDims,
    trainer: &T,
    echo: ConfigEcho,
) -> Result<ExperimentResult> {
    if splits.is_empty() {
        return Err(HarnessError::usage("no splits to evaluate"));
    }
    let labels = table.labels();
    let rounds = splits
        .par_iter()
        .map(|split| {
            run_round(table, &labels, split, pca, trainer)
                .map_err(|e| HarnessError::Round { split: split.id, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;

    let accuracies: Vec<f64> = rounds.iter().map(|r| r.accuracy).collect();
    let (mean, std) = mean_std(&accuracies);
    let mut confusion = vec![vec![0u64; labels.len()]; labels.len()];
    for r in &rounds {
        for (acc, row) in confusion.iter_mut().zip(&r.confusion) {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
    }
    info!("{} rounds, accuracy {:.4} +- {:.4}", rounds.len(), mean, std);
    Ok(ExperimentResult { labels, accuracies, mean, std, confusion, rounds, config: echo })
}

/// Splits `table` per `settings` and evaluates LDA on it.
pub fn evaluate(table: &FeatureTable, settings: &EvalSettings) -> Result<ExperimentResult> {
    let splits = make_splits(&table.samples, settings.protocol, settings.rounds, settings.seed)?;
    let echo = ConfigEcho { evaluation: settings.clone(), features: table.meta.clone() };
    evaluate_splits(table, &splits, settings.pca, &settings.trainer(), echo)
}

/// Extraction (through the cache) followed by [`evaluate`].
pub fn run_experiment(
    index: &DatasetIndex,
    meta: &TableMeta,
    settings: &EvalSettings,
    options: ExtractOptions,
) -> Result<ExperimentResult> {
    let table = extract_dataset(index, meta, options)?;
    evaluate(&table, settings)
}
