//! Detection accuracy against per-principle ground-truth labels.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use critiq_core::analyze::{detect_all, Principle};
use critiq_core::metrics::FallbackMetrics;
use critiq_core::model::parse_design;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "issue")]
    Issue,
    #[serde(rename = "no_issue")]
    NoIssue,
    /// Excluded from every count except `na`.
    #[serde(rename = "NA")]
    NotApplicable,
}

/// One line of the labels file. Missing principles count as NA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub design_id: String,
    #[serde(default = "na")]
    pub hierarchy: Label,
    #[serde(default = "na")]
    pub alignment: Label,
    #[serde(default = "na")]
    pub whitespace: Label,
    #[serde(default = "na")]
    pub unity: Label,
}

fn na() -> Label {
    Label::NotApplicable
}

impl GroundTruth {
    pub fn label(&self, p: Principle) -> Label {
        match p {
            Principle::Hierarchy => self.hierarchy,
            Principle::Alignment => self.alignment,
            Principle::Whitespace => self.whitespace,
            Principle::Unity => self.unity,
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed labels file {path}: {reason}")]
    Labels { path: PathBuf, reason: String },
    #[error("no design file for labeled id `{0}`")]
    MissingDesign(String),
    #[error("design `{id}` does not parse: {reason}")]
    BadDesign { id: String, reason: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub na: usize,
}

impl Counts {
    pub fn record(&mut self, label: Label, predicted_issue: bool) {
        match (label, predicted_issue) {
            (Label::NotApplicable, _) => self.na += 1,
            (Label::Issue, true) => self.tp += 1,
            (Label::Issue, false) => self.fn_ += 1,
            (Label::NoIssue, false) => self.tn += 1,
            (Label::NoIssue, true) => self.fp += 1,
        }
    }

    pub fn judged(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// `None` when every design is NA for this principle.
    pub fn accuracy(&self) -> Option<f64> {
        let n = self.judged();
        (n > 0).then(|| (self.tp + self.tn) as f64 / n as f64)
    }
}

/// A design whose prediction disagrees with its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Miss {
    pub design_id: String,
    pub principle: Principle,
    pub label: Label,
    pub predicted_issue: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub corpus_size: usize,
    pub counts: BTreeMap<Principle, Counts>,
    pub misses: Vec<Miss>,
}

impl EvaluationReport {
    pub fn accuracy(&self, p: Principle) -> Option<f64> {
        self.counts.get(&p).and_then(Counts::accuracy)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Detection accuracy\n");
        let _ = writeln!(s, "Designs: {}\n", self.corpus_size);
        let _ = writeln!(s, "| principle | accuracy | TP | TN | FP | FN | NA |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for p in Principle::ALL {
            let c = self.counts.get(&p).copied().unwrap_or_default();
            let acc = c
                .accuracy()
                .map_or("n/a".to_string(), |a| format!("{a:.3}"));
            let _ = writeln!(
                s,
                "| {} | {acc} | {} | {} | {} | {} | {} |",
                p, c.tp, c.tn, c.fp, c.fn_, c.na
            );
        }
        if !self.misses.is_empty() {
            let _ = writeln!(s, "\n## Mispredictions\n");
            for m in &self.misses {
                let _ = writeln!(
                    s,
                    "- {} / {}: labeled {:?}, predicted {}",
                    m.design_id,
                    m.principle,
                    m.label,
                    if m.predicted_issue {
                        "issue"
                    } else {
                        "no_issue"
                    }
                );
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        let accuracy: BTreeMap<Principle, Option<f64>> = Principle::ALL
            .iter()
            .map(|p| (*p, self.accuracy(*p)))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "corpus_size": self.corpus_size,
            "accuracy": accuracy,
            "counts": self.counts,
            "misses": self.misses,
        }))
        .expect("report serialization is infallible")
    }
}

pub fn load_labels(path: &Path) -> Result<Vec<GroundTruth>, EvalError> {
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| EvalError::Labels {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Scores `detect_all` on `<corpus_dir>/<design_id>.json` for each label.
/// Designs are visited in `design_id` order.
pub fn evaluate(corpus_dir: &Path, labels: &[GroundTruth]) -> Result<EvaluationReport, EvalError> {
    let mut sorted: Vec<&GroundTruth> = labels.iter().collect();
    sorted.sort_by(|a, b| a.design_id.cmp(&b.design_id));
    let mut counts: BTreeMap<Principle, Counts> = Principle::ALL
        .iter()
        .map(|p| (*p, Counts::default()))
        .collect();
    let mut misses = Vec::new();
    for gt in &sorted {
        let path = corpus_dir.join(format!("{}.json", gt.design_id));
        if !path.is_file() {
            return Err(EvalError::MissingDesign(gt.design_id.clone()));
        }
        let text = fs::read_to_string(&path).map_err(|source| EvalError::Io {
            path: path.clone(),
            source,
        })?;
        let doc = parse_design(&text).map_err(|e| EvalError::BadDesign {
            id: gt.design_id.clone(),
            reason: e.to_string(),
        })?;
        let flags = detect_all(&doc, &FallbackMetrics).issue_flags;
        for p in Principle::ALL {
            let label = gt.label(p);
            let predicted = flags.get(p);
            counts
                .get_mut(&p)
                .expect("all principles")
                .record(label, predicted);
            let wrong = matches!(
                (label, predicted),
                (Label::Issue, false) | (Label::NoIssue, true)
            );
            if wrong {
                misses.push(Miss {
                    design_id: gt.design_id.clone(),
                    principle: p,
                    label,
                    predicted_issue: predicted,
                });
            }
        }
    }
    Ok(EvaluationReport {
        corpus_size: sorted.len(),
        counts,
        misses,
    })
}
