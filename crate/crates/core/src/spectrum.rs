use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to merge numerically equal eigenvalues.
pub const MERGE_TOL: f64 = 1e-9;

/// Sorted distinct eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumReport {
    pub operator_label: String,
    pub truncation: usize,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Extra numeric diagnostics (gap statistics, discarded counts, ...).
    #[serde(default)]
    pub diagnostics: BTreeMap<String, f64>,
}

impl SpectrumReport {
    /// Groups `values` into clusters whose consecutive members differ by at
    /// most `merge_tol * max(1, |λ|)`; each cluster is reported at its mean.
    pub fn from_values(label: impl Into<String>, truncation: usize, mut values: Vec<f64>, merge_tol: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        let mut sums: Vec<f64> = Vec::new();
        let mut last = f64::NAN;
        for v in values {
            let joins = !eigenvalues.is_empty() && (v - last).abs() <= merge_tol * v.abs().max(1.0);
            if joins {
                *multiplicities.last_mut().unwrap() += 1;
                *sums.last_mut().unwrap() += v;
            } else {
                eigenvalues.push(v);
                multiplicities.push(1);
                sums.push(v);
            }
            last = v;
        }
        for ((e, m), s) in eigenvalues.iter_mut().zip(&multiplicities).zip(&sums) {
            *e = s / *m as f64;
        }
        SpectrumReport {
            operator_label: label.into(),
            truncation,
            eigenvalues,
            multiplicities,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn total_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Every eigenvalue repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&e, &m)| std::iter::repeat_n(e, m))
            .collect()
    }

    /// Smallest gap between consecutive distinct eigenvalues, if there are two.
    pub fn min_gap(&self) -> Option<f64> {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp)
    }

    pub fn multiplicity_of(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .filter(|(&e, _)| (e - value).abs() <= tol)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    /// `eigenvalue,multiplicity` rows, eigenvalues with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eigenvalue,multiplicity\n");
        for (e, m) in self.eigenvalues.iter().zip(&self.multiplicities) {
            let _ = writeln!(out, "{},{}", format_f64(*e), m);
        }
        out
    }

    pub fn from_csv(label: &str, truncation: usize, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("eigenvalue,multiplicity") {
            return Err(Error::InvalidArgument("missing CSV header".into()));
        }
        let mut eigenvalues = Vec::new();
        let mut multiplicities = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let (e, m) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidArgument(format!("bad CSV row {line:?}")))?;
            eigenvalues.push(e.parse().map_err(|_| Error::InvalidArgument(format!("bad eigenvalue {e:?}")))?);
            multiplicities.push(m.parse().map_err(|_| Error::InvalidArgument(format!("bad multiplicity {m:?}")))?);
        }
        Ok(SpectrumReport {
            operator_label: label.to_string(),
            truncation,
            eigenvalues,
            multiplicities,
            diagnostics: BTreeMap::new(),
        })
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.eigenvalues.len() != self.multiplicities.len() {
            return Err(Error::invariant("eigenvalue/multiplicity length", 1.0));
        }
        if self.eigenvalues.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invariant("eigenvalues strictly increasing", 1.0));
        }
        if self.multiplicities.contains(&0) {
            return Err(Error::invariant("multiplicities positive", 1.0));
        }
        Ok(())
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_f64(x: f64) -> String {
    // -0 prints as 0 so identical spectra give identical bytes.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_close_values() {
        let r = SpectrumReport::from_values("t", 1, vec![1.0, -1.0, 1.0 + 1e-12, 0.0, 0.0], MERGE_TOL);
        assert_eq!(r.eigenvalues.len(), 3);
        assert_eq!(r.multiplicities, vec![1, 2, 2]);
        assert_eq!(r.total_count(), 5);
        r.check_invariants().unwrap();
        assert_eq!(r.min_gap(), Some(1.0));
    }

    #[test]
    fn csv_round_trip() {
        let r = SpectrumReport::from_values("t", 3, vec![-2.5, 0.1, 0.1, 7.0], MERGE_TOL);
        let text = r.to_csv();
        assert!(text.starts_with("eigenvalue,multiplicity\n-2.5000000000000000e0,1\n"));
        let back = SpectrumReport::from_csv("t", 3, &text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn negative_zero_formats_as_zero() {
        assert_eq!(format_f64(-0.0), format_f64(0.0));
    }
}
