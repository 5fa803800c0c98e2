//! Partition similarity: normalized and chance-adjusted mutual information,
//! both normalized by the larger of the two entropies.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Labels;

/// Cross-tabulation of two labelings of the same nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    r1: usize,
    r2: usize,
    counts: Vec<u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    n: u64,
}

fn densify(labels: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let out: Vec<usize> = labels
        .map(|l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

impl Contingency {
    pub fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Invalid(format!(
                "labelings cover {} and {} nodes",
                a.len(),
                b.len()
            )));
        }
        Self::from_pairs(a.iter().copied().zip(b.iter().copied()))
    }

    /// Builds the table from `(a_i, b_i)` pairs; labels need not be dense.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let (a, b): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        if a.is_empty() {
            return Err(Error::Invalid("no nodes to compare".into()));
        }
        let (a, r1) = densify(a.into_iter());
        let (b, r2) = densify(b.into_iter());
        let mut counts = vec![0u64; r1 * r2];
        let mut rows = vec![0u64; r1];
        let mut cols = vec![0u64; r2];
        for (&u, &v) in a.iter().zip(&b) {
            counts[u * r2 + v] += 1;
            rows[u] += 1;
            cols[v] += 1;
        }
        Ok(Contingency {
            r1,
            r2,
            counts,
            rows,
            cols,
            n: a.len() as u64,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    pub fn count(&self, u: usize, v: usize) -> u64 {
        self.counts[u * self.r2 + v]
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.cols
    }

    fn entropy(marginal: &[u64], n: u64) -> f64 {
        let n = n as f64;
        -marginal
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    }

    pub fn entropies(&self) -> (f64, f64) {
        (Self::entropy(&self.rows, self.n), Self::entropy(&self.cols, self.n))
    }

    pub fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        let mut mi = 0.0;
        for u in 0..self.r1 {
            for v in 0..self.r2 {
                let c = self.count(u, v);
                if c > 0 {
                    let c = c as f64;
                    mi += c / n * (n * c / (self.rows[u] as f64 * self.cols[v] as f64)).ln();
                }
            }
        }
        mi.max(0.0)
    }

    /// Expected mutual information when the second labeling is permuted
    /// uniformly at random with both marginals held fixed (hypergeometric
    /// model), by exact summation.
    pub fn expected_mutual_information(&self) -> f64 {
        let n = self.n as usize;
        let mut lnfact = vec![0.0f64; n + 1];
        for k in 1..=n {
            lnfact[k] = lnfact[k - 1] + (k as f64).ln();
        }
        let nf = n as f64;
        let mut emi = 0.0;
        for &a in &self.rows {
            let a = a as usize;
            for &b in &self.cols {
                let b = b as usize;
                let lo = (a + b).saturating_sub(n).max(1);
                let hi = a.min(b);
                let fixed = lnfact[a] + lnfact[b] + lnfact[n - a] + lnfact[n - b] - lnfact[n];
                for nij in lo..=hi {
                    let x = nij as f64;
                    let term = x / nf * (nf * x / (a as f64 * b as f64)).ln();
                    let lnp = fixed
                        - lnfact[nij]
                        - lnfact[a - nij]
                        - lnfact[b - nij]
                        - lnfact[n + nij - a - b];
                    emi += term * lnp.exp();
                }
            }
        }
        emi
    }

    /// True when the two labelings are the same up to renaming.
    pub fn is_matching(&self) -> bool {
        self.r1 == self.r2
            && (0..self.r1).all(|u| (0..self.r2).filter(|&v| self.count(u, v) > 0).count() == 1)
    }

    pub fn nmi(&self) -> f64 {
        let (ha, hb) = self.entropies();
        let h = ha.max(hb);
        if ha == 0.0 && hb == 0.0 {
            return 1.0;
        }
        if ha == 0.0 || hb == 0.0 {
            return 0.0;
        }
        (self.mutual_information() / h).min(1.0)
    }

    pub fn ami_max(&self) -> f64 {
        let (ha, hb) = self.entropies();
        let mi = self.mutual_information();
        let emi = self.expected_mutual_information();
        let denom = ha.max(hb) - emi;
        let scale = 1e-12 * (1.0 + ha.max(hb));
        if denom.abs() <= scale {
            return if (mi - emi).abs() <= scale && self.is_matching() {
                1.0
            } else {
                0.0
            };
        }
        ((mi - emi) / denom).min(1.0)
    }
}

pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(Contingency::new(a, b)?.nmi())
}

pub fn ami_max(a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(Contingency::new(a, b)?.ami_max())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub nmi: f64,
    pub ami: f64,
    /// Nodes that carried a ground-truth label.
    pub compared: usize,
}

/// Scores a predicted assignment against possibly incomplete ground truth;
/// unlabeled nodes are left out.
pub fn score(pred: &[usize], truth: &Labels) -> Result<Scores> {
    if pred.len() != truth.assignment.len() {
        return Err(Error::Invalid(format!(
            "prediction covers {} nodes, labels cover {}",
            pred.len(),
            truth.assignment.len()
        )));
    }
    let table = Contingency::from_pairs(
        pred.iter()
            .zip(&truth.assignment)
            .filter_map(|(&p, t)| t.map(|t| (p, t))),
    )?;
    Ok(Scores {
        nmi: table.nmi(),
        ami: table.ami_max(),
        compared: table.n() as usize,
    })
}

/// Scores two partial labelings; only nodes labeled in both are compared.
pub fn score_labels(pred: &Labels, truth: &Labels) -> Result<Scores> {
    if pred.assignment.len() != truth.assignment.len() {
        return Err(Error::Invalid("labelings cover different node sets".into()));
    }
    let table = Contingency::from_pairs(
        pred.assignment
            .iter()
            .zip(&truth.assignment)
            .filter_map(|(p, t)| p.zip(*t)),
    )?;
    Ok(Scores {
        nmi: table.nmi(),
        ami: table.ami_max(),
        compared: table.n() as usize,
    })
}
