//! Alternating solver for `min ||A - Z theta Z^T||_F^2` subject to
//! `Z >= 0`, `Z^T Z = I`, `theta` symmetric nonnegative.
//!
//! Each outer iteration sweeps the nodes once. For node `i` and every
//! community `k`, the best weight `Z(i, k)` with all other rows fixed is the
//! minimizer of a quartic `a z^4 + b z^2 + c z` with
//!
//! * `a = theta(k,k)^2`
//! * `b = 2 (sum_{j != i} (Z(j,:) theta(:,k))^2 - theta(k,k) A(i,i))`
//! * `c = -4 sum_{j != i} A(i,j) Z(j,:) theta(:,k)`
//!
//! and the row moves to the community with the lowest quartic value. After
//! the sweep the columns of `Z` are renormalized and `theta = Z^T A Z`.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{frobenius_error, MixingMatrix, ScaledAssignment};
pub use crate::quartic::{minimize_quartic, QuarticCoeffs, QuarticMin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NodeOrder {
    #[default]
    Fixed,
    /// A fresh seeded permutation for every sweep.
    Shuffled,
}

#[derive(Debug, Clone)]
pub struct FrostConfig {
    pub max_outer_iterations: usize,
    /// Stop when the error changes by less than `rel_tol` times its previous value.
    pub rel_tol: f64,
    /// Stop when the error drops to `abs_tol` or below.
    pub abs_tol: f64,
    pub seed: u64,
    pub node_order: NodeOrder,
    /// Weight used when a row subproblem has no stationary minimizer.
    /// `None` means `sqrt(r / n)`.
    pub default_value: Option<f64>,
    pub deadline: Option<Instant>,
}

impl Default for FrostConfig {
    fn default() -> Self {
        FrostConfig {
            max_outer_iterations: 500,
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            seed: 0,
            node_order: NodeOrder::Fixed,
            default_value: None,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub frobenius_error: f64,
    pub defaults_fired: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    AbsTol,
    RelTol,
    MaxIterations,
    Deadline,
}

#[derive(Debug, Clone)]
pub struct FrostResult {
    pub z: ScaledAssignment,
    pub theta: MixingMatrix,
    /// Row 0 holds the error of the initial factors.
    pub trace: Vec<TraceRow>,
    pub stop: StopReason,
}

impl FrostResult {
    pub fn error(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.frobenius_error)
    }

    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }
}

/// `theta = Z^T A Z`, one pass over the stored entries.
pub fn update_theta(g: &Graph, z: &ScaledAssignment) -> MixingMatrix {
    let mut theta = MixingMatrix::zeros(z.r);
    for (i, j, a) in g.upper_entries() {
        let x = z.w[i] * a as f64 * z.w[j];
        if x == 0.0 {
            continue;
        }
        let (k, l) = (z.v[i], z.v[j]);
        *theta.get_mut(k, l) += x;
        if i != j {
            *theta.get_mut(l, k) += x;
        }
    }
    theta
}

/// Quartic coefficients for placing node `i` in community `k`, evaluated
/// directly from the factors in `O(n + d(i))`.
pub fn quartic_coeffs(
    g: &Graph,
    z: &ScaledAssignment,
    theta: &MixingMatrix,
    i: usize,
    k: usize,
) -> QuarticCoeffs {
    let tkk = theta.get(k, k);
    let mut sq = 0.0;
    for j in (0..z.n()).filter(|&j| j != i) {
        let y = z.w[j] * theta.get(z.v[j], k);
        sq += y * y;
    }
    let mut lin = 0.0;
    for (j, a) in g.row(i).filter(|&(j, _)| j != i) {
        lin += a as f64 * z.w[j] * theta.get(z.v[j], k);
    }
    QuarticCoeffs {
        a: tkk * tkk,
        b: 2.0 * (sq - tkk * g.diagonal(i) as f64),
        c: -4.0 * lin,
    }
}

/// Result of one row update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowUpdate {
    pub community: usize,
    pub weight: f64,
    /// Change in `||A - Z theta Z^T||_F^2` caused by the update.
    pub error_change: f64,
    pub used_default: bool,
}

/// Row-update state: the running totals `S(k) = sum_j (w(j) theta(v(j),k))^2`
/// and scratch space for neighbour sums.
#[derive(Debug, Clone)]
pub struct RowUpdater {
    totals: Vec<f64>,
    neigh: Vec<f64>,
    touched: Vec<usize>,
    lin: Vec<f64>,
    default_value: f64,
}

impl RowUpdater {
    pub fn new(z: &ScaledAssignment, theta: &MixingMatrix, default_value: f64) -> Self {
        let mut u = RowUpdater {
            totals: vec![0.0; z.r],
            neigh: vec![0.0; z.r],
            touched: Vec::with_capacity(z.r),
            lin: vec![0.0; z.r],
            default_value,
        };
        u.recompute(z, theta);
        u
    }

    /// Recomputes the running totals from scratch.
    pub fn recompute(&mut self, z: &ScaledAssignment, theta: &MixingMatrix) {
        self.totals.iter_mut().for_each(|s| *s = 0.0);
        for (&v, &w) in z.v.iter().zip(&z.w) {
            if w == 0.0 {
                continue;
            }
            for (s, t) in self.totals.iter_mut().zip(theta.row(v)) {
                let y = w * t;
                *s += y * y;
            }
        }
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    /// Moves row `i` to the community and weight with the lowest error and
    /// writes it into `z`. Ties go to the smallest community index.
    pub fn update_row(
        &mut self,
        g: &Graph,
        z: &mut ScaledAssignment,
        theta: &MixingMatrix,
        i: usize,
    ) -> RowUpdate {
        let r = z.r;
        let (old_v, old_w) = (z.v[i], z.w[i]);

        for (j, a) in g.row(i) {
            if j == i || z.w[j] == 0.0 {
                continue;
            }
            let l = z.v[j];
            if self.neigh[l] == 0.0 {
                self.touched.push(l);
            }
            self.neigh[l] += a as f64 * z.w[j];
        }
        self.lin.iter_mut().for_each(|x| *x = 0.0);
        for &l in &self.touched {
            let t = self.neigh[l];
            for (x, th) in self.lin.iter_mut().zip(theta.row(l)) {
                *x += t * th;
            }
            self.neigh[l] = 0.0;
        }
        self.touched.clear();

        let own = theta.row(old_v);
        let aii = g.diagonal(i) as f64;
        let coeffs = |k: usize| {
            let tkk = theta.get(k, k);
            let y = old_w * own[k];
            QuarticCoeffs {
                a: tkk * tkk,
                b: 2.0 * (self.totals[k] - y * y - tkk * aii),
                c: -4.0 * self.lin[k],
            }
        };

        let current = coeffs(old_v).eval(old_w);
        let mut best: Option<(usize, QuarticMin)> = None;
        for k in 0..r {
            let m = minimize_quartic(coeffs(k), self.default_value);
            if best.is_none_or(|(_, b)| m.value < b.value) {
                best = Some((k, m));
            }
        }
        let (k, m) = best.expect("r >= 1");

        if k != old_v || m.z != old_w {
            let new_row = theta.row(k);
            for ((s, to), tn) in self.totals.iter_mut().zip(own).zip(new_row) {
                let yo = old_w * to;
                let yn = m.z * tn;
                *s += yn * yn - yo * yo;
            }
            z.v[i] = k;
            z.w[i] = m.z;
        }
        RowUpdate {
            community: k,
            weight: m.z,
            error_change: m.value - current,
            used_default: m.used_default,
        }
    }
}

/// Runs the alternating solver from `(z, theta)`.
pub fn frost_solve(
    g: &Graph,
    z: ScaledAssignment,
    theta: MixingMatrix,
    cfg: &FrostConfig,
) -> Result<FrostResult> {
    let n = g.n();
    let r = z.r;
    if r == 0 {
        return Err(Error::Invalid("r must be at least 1".into()));
    }
    if r > n {
        return Err(Error::Invalid(format!("r={r} exceeds the node count {n}")));
    }
    if z.n() != n || theta.r() != r {
        return Err(Error::Invalid("initial factors do not match the graph".into()));
    }
    if cfg.max_outer_iterations == 0 || !(cfg.rel_tol >= 0.0) || !(cfg.abs_tol >= 0.0) {
        return Err(Error::Invalid("bad FROST configuration".into()));
    }

    let default_value = cfg
        .default_value
        .unwrap_or_else(|| (r as f64 / n as f64).sqrt());
    let mut z = z;
    let mut theta = theta;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut updater = RowUpdater::new(&z, &theta, default_value);

    let mut error = frobenius_error(g, &z, &theta);
    let mut trace = vec![TraceRow {
        iteration: 0,
        frobenius_error: error,
        defaults_fired: 0,
    }];
    let stop = loop {
        if error <= cfg.abs_tol {
            break StopReason::AbsTol;
        }
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            break StopReason::Deadline;
        }
        if cfg.node_order == NodeOrder::Shuffled {
            order.shuffle(&mut rng);
        }
        let mut defaults = 0;
        for &i in &order {
            if updater.update_row(g, &mut z, &theta, i).used_default {
                defaults += 1;
            }
        }
        z.normalize_columns();
        theta = update_theta(g, &z);
        updater.recompute(&z, &theta);

        let previous = error;
        error = frobenius_error(g, &z, &theta);
        let iteration = trace.len();
        trace.push(TraceRow {
            iteration,
            frobenius_error: error,
            defaults_fired: defaults,
        });
        if error <= cfg.abs_tol {
            break StopReason::AbsTol;
        }
        if (previous - error).abs() <= cfg.rel_tol * previous {
            break StopReason::RelTol;
        }
        if iteration >= cfg.max_outer_iterations {
            break StopReason::MaxIterations;
        }
    };
    Ok(FrostResult {
        z,
        theta,
        trace,
        stop,
    })
}

/// CSV with columns `iteration,frobenius_error,defaults_fired`.
pub fn trace_to_csv(trace: &[TraceRow]) -> String {
    let mut out = String::from("iteration,frobenius_error,defaults_fired\n");
    for t in trace {
        let _ = writeln!(out, "{},{:.17e},{}", t.iteration, t.frobenius_error, t.defaults_fired);
    }
    out
}

pub fn save_trace(path: impl AsRef<Path>, trace: &[TraceRow]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_to_csv(trace)).map_err(|e| Error::io(path, e))
}
