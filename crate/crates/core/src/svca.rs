//! Separable-NMF initialization.
//!
//! In the noiseless model `A = W Z^T` with `W = Z theta`, every column of `W`
//! is a scaled column of `A`. SVCA estimates each column of `W` by averaging
//! the `p` columns of `A` with the largest projection onto a random direction
//! drawn from the dominant subspace of `A` and made orthogonal to the columns
//! already chosen. Nodes are then assigned to the column of `W` they make the
//! smallest angle with.

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::{self, dot, norm, Basis};
use crate::error::{Error, Result};
use crate::frost::update_theta;
use crate::graph::Graph;
use crate::model::{MixingMatrix, Partition, ScaledAssignment, ZeroRowPolicy};

const DIRECTION_RETRIES: usize = 32;

#[derive(Debug, Clone)]
pub struct SvcaConfig {
    /// Columns averaged per component; `None` means `max(2, floor(0.1 n / r))`.
    pub p: Option<usize>,
    pub seed: u64,
    pub eigensolver_tol: f64,
    pub eigensolver_max_iter: usize,
}

impl Default for SvcaConfig {
    fn default() -> Self {
        SvcaConfig {
            p: None,
            seed: 0,
            eigensolver_tol: 1e-8,
            eigensolver_max_iter: 1000,
        }
    }
}

impl SvcaConfig {
    pub fn with_seed(seed: u64) -> Self {
        SvcaConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn p_for(&self, n: usize, r: usize) -> usize {
        self.p.unwrap_or_else(|| default_p(n, r)).clamp(1, n.max(1))
    }
}

pub fn default_p(n: usize, r: usize) -> usize {
    (n / (10 * r.max(1))).max(2)
}

pub fn dominant_subspace(g: &Graph, r: usize, cfg: &SvcaConfig) -> Result<Basis> {
    eigen::dominant_subspace(g, r, cfg.eigensolver_tol, cfg.eigensolver_max_iter, cfg.seed)
}

/// Dense `n x r` nonnegative matrix, stored column by column.
pub type Centroids = Vec<Vec<f64>>;

/// Selects the `r` columns of `W`. Computes the dominant subspace first.
pub fn svca_select(g: &Graph, r: usize, cfg: &SvcaConfig) -> Result<Centroids> {
    let basis = dominant_subspace(g, r, cfg)?;
    svca_select_with_basis(g, &basis, r, cfg)
}

pub fn svca_select_with_basis(
    g: &Graph,
    basis: &Basis,
    r: usize,
    cfg: &SvcaConfig,
) -> Result<Centroids> {
    let n = g.n();
    let p = cfg.p_for(n, r);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);

    let mut chosen_dirs: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut w: Centroids = Vec::with_capacity(r);
    let mut scores = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();

    for _k in 0..r {
        let mut picked = None;
        for _attempt in 0..DIRECTION_RETRIES {
            let mut u = vec![0.0; n];
            for v in &basis.vectors {
                let coef: f64 = StandardNormal.sample(&mut rng);
                for (x, y) in u.iter_mut().zip(v) {
                    *x += coef * y;
                }
            }
            // Orthogonal to the selected columns (kept as an orthonormal set).
            for _pass in 0..2 {
                for q in &chosen_dirs {
                    let proj = dot(q, &u);
                    for (x, y) in u.iter_mut().zip(q) {
                        *x -= proj * y;
                    }
                }
            }
            let nrm = norm(&u);
            if nrm <= 1e-12 {
                continue;
            }
            u.iter_mut().for_each(|x| *x /= nrm);
            g.mul_vec(&u, &mut scores);
            if scores.iter().all(|s| s.abs() <= 1e-12) {
                continue;
            }
            let top = |sign: f64, order: &mut Vec<usize>| -> (f64, Vec<usize>) {
                order.sort_by(|&a, &b| (sign * scores[b]).total_cmp(&(sign * scores[a])).then(a.cmp(&b)));
                let sel = order[..p].to_vec();
                let sum = sel.iter().map(|&j| sign * scores[j]).sum();
                (sum, sel)
            };
            let (plus, sel_plus) = top(1.0, &mut order);
            let (minus, sel_minus) = top(-1.0, &mut order);
            picked = Some(if minus > plus { sel_minus } else { sel_plus });
            break;
        }
        let sel = picked.ok_or(Error::DegenerateDirection(DIRECTION_RETRIES))?;

        let mut col = vec![0.0; n];
        for &j in &sel {
            for (i, a) in g.row(j) {
                col[i] += a as f64;
            }
        }
        col.iter_mut().for_each(|x| *x /= sel.len() as f64);

        let mut q = col.clone();
        for _pass in 0..2 {
            for prev in &chosen_dirs {
                let proj = dot(prev, &q);
                for (x, y) in q.iter_mut().zip(prev) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = norm(&q);
        if nrm > 1e-12 * norm(&col) {
            q.iter_mut().for_each(|x| *x /= nrm);
            chosen_dirs.push(q);
        }
        w.push(col);
    }
    Ok(w)
}

/// Assigns every node to the column of `W` closest in angle to its adjacency
/// column, with weight `<A(:,j), W(:,k)> / ||W(:,k)||^2`, then normalizes
/// `Z` and sets `theta = Z^T A Z`. Zero columns of `W` are dropped, so the
/// returned `r` may be smaller than `W.len()`. Ties go to the smallest index.
pub fn onmf_assign(g: &Graph, w: &[Vec<f64>]) -> (ScaledAssignment, MixingMatrix) {
    let n = g.n();
    let kept: Vec<&Vec<f64>> = w.iter().filter(|c| c.iter().any(|&x| x != 0.0)).collect();
    if kept.len() < w.len() {
        warn!("dropping {} all-zero centroid column(s)", w.len() - kept.len());
    }
    let r = kept.len().max(1);
    let sq: Vec<f64> = kept.iter().map(|c| dot(c, c)).collect();
    // Row-major copy for locality when scanning a node's neighbours.
    let mut wr = vec![0.0; n * r];
    for (k, c) in kept.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            wr[i * r + k] = x;
        }
    }

    let mut v = vec![0; n];
    let mut wt = vec![0.0; n];
    let mut dots = vec![0.0; r];
    for j in 0..n {
        dots.iter_mut().for_each(|d| *d = 0.0);
        for (i, a) in g.row(j) {
            let a = a as f64;
            for (d, x) in dots.iter_mut().zip(&wr[i * r..(i + 1) * r]) {
                *d += a * x;
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for k in 0..kept.len() {
            if dots[k] <= 0.0 {
                continue;
            }
            // ||A(:,j)|| is common to all k and does not affect the argmax.
            let cos = dots[k] / sq[k].sqrt();
            if best.is_none_or(|(_, c)| cos > c) {
                best = Some((k, cos));
            }
        }
        if let Some((k, _)) = best {
            v[j] = k;
            wt[j] = dots[k] / sq[k];
        }
    }
    let z = ScaledAssignment { v, w: wt, r }.normalized();
    let theta = update_theta(g, &z);
    (z, theta)
}

#[derive(Debug, Clone)]
pub struct SvcaInit {
    pub z: ScaledAssignment,
    pub theta: MixingMatrix,
    /// Hard labels; zero rows of `Z` get a seeded random community.
    pub partition: Partition,
}

/// Dominant subspace, column selection and angular assignment in one call.
pub fn svca_init(g: &Graph, r: usize, cfg: &SvcaConfig) -> Result<SvcaInit> {
    if r == 0 || r > g.n() {
        return Err(Error::Invalid(format!("r={r} for {} nodes", g.n())));
    }
    let basis = dominant_subspace(g, r, cfg)?;
    svca_init_with_basis(g, &basis, r, cfg)
}

/// As [`svca_init`], reusing a precomputed dominant subspace. Restarts on the
/// same graph only differ in the random directions, so the eigensolve can be
/// shared between them.
pub fn svca_init_with_basis(
    g: &Graph,
    basis: &Basis,
    r: usize,
    cfg: &SvcaConfig,
) -> Result<SvcaInit> {
    if r == 0 || r > g.n() || basis.dim() != r {
        return Err(Error::Invalid(format!(
            "r={r} with a {}-dimensional basis for {} nodes",
            basis.dim(),
            g.n()
        )));
    }
    let w = svca_select_with_basis(g, basis, r, cfg)?;
    let (mut z, theta) = onmf_assign(g, &w);
    let theta = if z.r < r {
        // Keep the requested community count; the dropped ones stay empty.
        let mut padded = MixingMatrix::zeros(r);
        for k in 0..z.r {
            for l in 0..z.r {
                *padded.get_mut(k, l) = theta.get(k, l);
            }
        }
        z.r = r;
        padded
    } else {
        theta
    };
    let partition = z.to_partition(ZeroRowPolicy::Random(cfg.seed))?;
    Ok(SvcaInit { z, theta, partition })
}
