//! Confusion matrices and precision / recall / F1.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, Error, Result};
use crate::roof::RoofClass;

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, DomainError> {
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|row| row.len() != n) {
            return Err(DomainError::Invalid(format!("confusion counts must be {n}x{n}")));
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|row| row[j]).sum()
    }
}

/// Tallies aligned truth/prediction sequences over the six canonical classes.
pub fn confusion(truth: &[RoofClass], predicted: &[RoofClass]) -> Result<ConfusionMatrix, DomainError> {
    if truth.len() != predicted.len() {
        return Err(DomainError::Invalid(format!(
            "truth has {} labels but predictions have {}",
            truth.len(),
            predicted.len()
        )));
    }
    let mut counts = vec![vec![0u64; 6]; 6];
    for (t, p) in truth.iter().zip(predicted) {
        counts[t.index()][p.index()] += 1;
    }
    let labels = RoofClass::ALL.iter().map(|c| c.code().to_string()).collect();
    Ok(ConfusionMatrix { labels, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerClass {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub per_class: Vec<PerClass>,
    /// Pooled over all decisions; equals accuracy for single-label data.
    pub micro: Averages,
    /// Unweighted mean over classes with nonzero support.
    pub macro_avg: Averages,
    /// Support-weighted mean over classes.
    pub weighted: Averages,
    pub total: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> ClassMetrics {
    let n = cm.size();
    let total = cm.total();
    let per_class: Vec<PerClass> = (0..n)
        .map(|i| {
            let tp = cm.counts[i][i];
            let precision = ratio(tp, cm.col_sum(i));
            let recall = ratio(tp, cm.row_sum(i));
            PerClass {
                label: cm.labels[i].clone(),
                precision,
                recall,
                f1: f1_score(precision, recall),
                support: cm.row_sum(i),
            }
        })
        .collect();

    let correct: u64 = (0..n).map(|i| cm.counts[i][i]).sum();
    let micro_p = ratio(correct, total);
    let micro = Averages { precision: micro_p, recall: micro_p, f1: f1_score(micro_p, micro_p) };

    let supported: Vec<&PerClass> = per_class.iter().filter(|c| c.support > 0).collect();
    let k = supported.len().max(1) as f64;
    let macro_avg = Averages {
        precision: supported.iter().map(|c| c.precision).sum::<f64>() / k,
        recall: supported.iter().map(|c| c.recall).sum::<f64>() / k,
        f1: supported.iter().map(|c| c.f1).sum::<f64>() / k,
    };
    let w = |f: fn(&PerClass) -> f64| {
        if total == 0 {
            0.0
        } else {
            per_class.iter().map(|c| f(c) * c.support as f64).sum::<f64>() / total as f64
        }
    };
    let weighted = Averages { precision: w(|c| c.precision), recall: w(|c| c.recall), f1: w(|c| c.f1) };

    ClassMetrics { per_class, micro, macro_avg, weighted, total }
}

/// `class,precision,recall,f1,support` with trailing micro/macro/weighted rows.
pub fn write_metrics_csv<W: Write>(m: &ClassMetrics, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["class", "precision", "recall", "f1", "support"]).map_err(Error::from_csv)?;
    for c in &m.per_class {
        w.write_record([
            c.label.clone(),
            format!("{:.6}", c.precision),
            format!("{:.6}", c.recall),
            format!("{:.6}", c.f1),
            c.support.to_string(),
        ])
        .map_err(Error::from_csv)?;
    }
    for (name, a) in [("micro", m.micro), ("macro", m.macro_avg), ("weighted", m.weighted)] {
        w.write_record([
            name.to_string(),
            format!("{:.6}", a.precision),
            format!("{:.6}", a.recall),
            format!("{:.6}", a.f1),
            m.total.to_string(),
        ])
        .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_confusion_csv<W: Write>(cm: &ConfusionMatrix, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["true\\predicted".to_string()];
    header.extend(cm.labels.iter().cloned());
    w.write_record(&header).map_err(Error::from_csv)?;
    for (label, row) in cm.labels.iter().zip(&cm.counts) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(u64::to_string));
        w.write_record(&rec).map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

fn display_label(code: &str) -> String {
    code.parse::<RoofClass>().map(|c| c.display_name().to_string()).unwrap_or_else(|_| code.to_string())
}

/// Plain-text table: roof type, precision, recall, F1 score, support.
pub fn render_table(m: &ClassMetrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<22}{:>10}{:>8}{:>10}{:>9}", "Roof type", "Precision", "Recall", "F1 score", "Support");
    for c in &m.per_class {
        let _ = writeln!(
            out,
            "{:<22}{:>10.2}{:>8.2}{:>10.2}{:>9}",
            display_label(&c.label),
            c.precision,
            c.recall,
            c.f1,
            c.support
        );
    }
    for (name, a) in [("Overall", m.micro), ("Macro avg", m.macro_avg)] {
        let _ = writeln!(out, "{:<22}{:>10.2}{:>8.2}{:>10.2}{:>9}", name, a.precision, a.recall, a.f1, m.total);
    }
    out
}
