//! Factor representation for `A ~ Z theta Z^T`.
//!
//! `Z` has at most one nonzero per row, so it is stored as a community index
//! `v(i)` and a weight `w(i) = Z(i, v(i))` per node. A zero weight means the
//! node belongs to no community.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledAssignment {
    pub v: Vec<usize>,
    pub w: Vec<f64>,
    pub r: usize,
}

impl ScaledAssignment {
    pub fn new(v: Vec<usize>, w: Vec<f64>, r: usize) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::Invalid("v and w differ in length".into()));
        }
        if let Some(&k) = v.iter().find(|&&k| k >= r) {
            return Err(Error::Invalid(format!("community {k} out of range for r={r}")));
        }
        if w.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        Ok(ScaledAssignment { v, w, r })
    }

    /// Unit weights on a hard partition, then column-normalized.
    pub fn from_partition(p: &Partition) -> Self {
        let mut z = ScaledAssignment {
            v: p.assignment.clone(),
            w: vec![1.0; p.assignment.len()],
            r: p.r,
        };
        z.normalize_columns();
        z
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// `Z(i, k)`.
    pub fn get(&self, i: usize, k: usize) -> f64 {
        if self.v[i] == k {
            self.w[i]
        } else {
            0.0
        }
    }

    /// Per-community `sum w(i)^2`, the diagonal of `Z^T Z`.
    pub fn column_sq_norms(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.r];
        for (&k, &w) in self.v.iter().zip(&self.w) {
            s[k] += w * w;
        }
        s
    }

    /// Scales every nonempty column to unit l2 norm; zero rows and empty
    /// columns are left alone.
    pub fn normalize_columns(&mut self) {
        let norms: Vec<f64> = self.column_sq_norms().into_iter().map(f64::sqrt).collect();
        for (&k, w) in self.v.iter().zip(self.w.iter_mut()) {
            if norms[k] > 0.0 {
                *w /= norms[k];
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize_columns();
        self
    }

    /// Max deviation of a nonempty column's squared norm from 1.
    pub fn normalization_defect(&self) -> f64 {
        self.column_sq_norms()
            .into_iter()
            .filter(|&s| s > 0.0)
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.w[i] == 0.0).collect()
    }

    pub fn to_partition(&self, policy: ZeroRowPolicy) -> Result<Partition> {
        let zeros = self.zero_rows();
        let mut assignment = self.v.clone();
        let mut r = self.r;
        match policy {
            _ if zeros.is_empty() => {}
            ZeroRowPolicy::Error => return Err(Error::ZeroRows(zeros)),
            ZeroRowPolicy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for i in zeros {
                    assignment[i] = rng.random_range(0..r);
                }
            }
            ZeroRowPolicy::Singleton => {
                for i in zeros {
                    assignment[i] = r;
                    r += 1;
                }
            }
        }
        Ok(Partition { assignment, r })
    }
}

/// How nodes with a zero row in `Z` get a hard label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroRowPolicy {
    /// Uniform community drawn from a generator seeded with the value.
    Random(u64),
    Error,
    /// Each such node gets a fresh community of its own.
    Singleton,
}

/// Symmetric nonnegative `r x r` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    r: usize,
    data: Vec<f64>,
}

impl MixingMatrix {
    pub fn zeros(r: usize) -> Self {
        MixingMatrix {
            r,
            data: vec![0.0; r * r],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid("theta is not square".into()));
        }
        let data: Vec<f64> = rows.concat();
        if data.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Invalid("theta must be nonnegative".into()));
        }
        let m = MixingMatrix { r, data };
        if m.asymmetry() > 0.0 {
            return Err(Error::Invalid("theta must be symmetric".into()));
        }
        Ok(m)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.data[k * self.r + l]
    }

    #[inline]
    pub(crate) fn get_mut(&mut self, k: usize, l: usize) -> &mut f64 {
        &mut self.data[k * self.r + l]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.r..(k + 1) * self.r]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.r.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// `max |theta(k,l) - theta(l,k)|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.r {
            for l in 0..k {
                worst = worst.max((self.get(k, l) - self.get(l, k)).abs());
            }
        }
        worst
    }

    pub fn squared_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }
}

/// Hard assignment of each node to one of `r` communities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub r: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be at least 1".into()));
        }
        if let Some(&k) = assignment.iter().find(|&&k| k >= r) {
            return Err(Error::Invalid(format!("community {k} out of range for r={r}")));
        }
        Ok(Partition { assignment, r })
    }

    /// Uniform i.i.d. labels in `0..r`.
    pub fn random(n: usize, r: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Partition {
            assignment: (0..n).map(|_| rng.random_range(0..r)).collect(),
            r,
        }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.r];
        for &k in &self.assignment {
            s[k] += 1;
        }
        s
    }
}

/// `(Z theta Z^T)(i, j)`.
pub fn reconstruct_entry(z: &ScaledAssignment, theta: &MixingMatrix, i: usize, j: usize) -> f64 {
    z.w[i] * theta.get(z.v[i], z.v[j]) * z.w[j]
}

/// `||A - Z theta Z^T||_F^2` in `O(nnz + r^2)`.
///
/// Columns of `Z` have disjoint supports, so `Z^T Z = diag(s)` with
/// `s(k) = sum_{v(i)=k} w(i)^2` and `||Z theta Z^T||_F^2 = sum_kl s_k s_l theta_kl^2`
/// holds whether or not the columns are normalized.
pub fn frobenius_error(g: &Graph, z: &ScaledAssignment, theta: &MixingMatrix) -> f64 {
    let mut cross = 0.0;
    for i in 0..g.n() {
        let wi = z.w[i];
        if wi == 0.0 {
            continue;
        }
        let trow = theta.row(z.v[i]);
        let mut acc = 0.0;
        for (j, a) in g.row(i) {
            acc += a as f64 * trow[z.v[j]] * z.w[j];
        }
        cross += wi * acc;
    }
    let s = z.column_sq_norms();
    let mut recon = 0.0;
    for k in 0..z.r {
        for l in 0..z.r {
            let t = theta.get(k, l);
            recon += s[k] * s[l] * t * t;
        }
    }
    (g.squared_norm() - 2.0 * cross + recon).max(0.0)
}

/// JSON dump of a factorization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FactorDump {
    pub v: Vec<usize>,
    pub w: Vec<f64>,
    pub r: usize,
    /// Row-major `r x r`.
    pub theta: Vec<f64>,
}

impl FactorDump {
    pub fn new(z: &ScaledAssignment, theta: &MixingMatrix) -> Self {
        FactorDump {
            v: z.v.clone(),
            w: z.w.clone(),
            r: z.r,
            theta: theta.as_slice().to_vec(),
        }
    }

    pub fn into_factors(self) -> Result<(ScaledAssignment, MixingMatrix)> {
        let r = self.r;
        if self.theta.len() != r * r {
            return Err(Error::Invalid("theta has the wrong size".into()));
        }
        let rows: Vec<Vec<f64>> = self.theta.chunks(r.max(1)).map(<[f64]>::to_vec).collect();
        Ok((
            ScaledAssignment::new(self.v, self.w, r)?,
            MixingMatrix::from_rows(&rows)?,
        ))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// `node community` lines with dense node indices.
pub fn partition_to_string(p: &Partition) -> String {
    let mut out = String::new();
    for (i, k) in p.assignment.iter().enumerate() {
        let _ = writeln!(out, "{i} {k}");
    }
    out
}
