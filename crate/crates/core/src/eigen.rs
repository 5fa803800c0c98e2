//! Dominant invariant subspaces of sparse symmetric matrices by blocked
//! subspace iteration with Rayleigh-Ritz extraction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Orthonormal basis stored column by column.
#[derive(Debug, Clone)]
pub struct Basis {
    pub vectors: Vec<Vec<f64>>,
    /// Ritz values, sorted by decreasing magnitude (positive first on ties).
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl Basis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Largest `|<v_a, v_b> - delta_ab|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, va) in self.vectors.iter().enumerate() {
            for (b, vb) in self.vectors.iter().enumerate().take(a + 1) {
                let d = dot(va, vb) - if a == b { 1.0 } else { 0.0 };
                worst = worst.max(d.abs());
            }
        }
        worst
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigen-decomposition of a symmetric `m x m` row-major matrix by cyclic
/// Jacobi rotations. Returns eigenvalues and column eigenvectors
/// (`vecs[c][row]`), unsorted.
pub fn jacobi_eigen(mat: &[f64], m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut a = mat.to_vec();
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * m + q] * a[p * m + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let vals = (0..m).map(|i| a[i * m + i]).collect();
    let vecs = (0..m).map(|c| (0..m).map(|r| v[r * m + c]).collect()).collect();
    (vals, vecs)
}

/// Modified Gram-Schmidt, applied twice. Columns that collapse are replaced
/// by fresh random directions orthogonal to the others.
pub(crate) fn orthonormalize(cols: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    for c in 0..cols.len() {
        let original = norm(&cols[c]);
        let mut attempts = 0;
        loop {
            for _pass in 0..2 {
                for prev in 0..c {
                    let (head, tail) = cols.split_at_mut(c);
                    let proj = dot(&head[prev], &tail[0]);
                    for (x, y) in tail[0].iter_mut().zip(&head[prev]) {
                        *x -= proj * y;
                    }
                }
            }
            let nrm = norm(&cols[c]);
            if nrm > 1e-10 * original.max(f64::MIN_POSITIVE) && nrm > 1e-300 {
                cols[c].iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            attempts += 1;
            assert!(attempts < 16, "cannot complete an orthonormal basis");
            for x in cols[c].iter_mut() {
                *x = StandardNormal.sample(rng);
            }
        }
    }
}

/// Basis of the span of the `r` eigenvectors of `A` with largest
/// `|eigenvalue|`.
///
/// Runs subspace iteration on a block of `min(r + 2, n)` vectors and stops
/// when `||A V - V (V^T A V)||_F / ||A V||_F < tol` for the leading `r` Ritz
/// vectors.
pub fn dominant_subspace(
    g: &Graph,
    r: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<Basis> {
    let n = g.n();
    if r == 0 || r > n {
        return Err(Error::Invalid(format!("subspace dimension {r} for {n} nodes")));
    }
    let m = (r + 2).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    orthonormalize(&mut v, &mut rng);
    let mut y = vec![vec![0.0; n]; m];
    let mut h = vec![0.0; m * m];
    let mut residual = f64::INFINITY;

    for it in 1..=max_iter {
        for (vc, yc) in v.iter().zip(y.iter_mut()) {
            g.mul_vec(vc, yc);
        }
        for a in 0..m {
            for b in a..m {
                let x = 0.5 * (dot(&v[a], &y[b]) + dot(&v[b], &y[a]));
                h[a * m + b] = x;
                h[b * m + a] = x;
            }
        }
        let (vals, vecs) = jacobi_eigen(&h, m);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            vals[b]
                .abs()
                .total_cmp(&vals[a].abs())
                .then(vals[b].total_cmp(&vals[a]))
        });

        let combine = |src: &[Vec<f64>], coeffs: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (col, &c) in src.iter().zip(coeffs) {
                if c != 0.0 {
                    for (o, x) in out.iter_mut().zip(col) {
                        *o += c * x;
                    }
                }
            }
            out
        };
        let ritz_v: Vec<Vec<f64>> = order.iter().map(|&c| combine(&v, &vecs[c])).collect();
        let ritz_y: Vec<Vec<f64>> = order.iter().map(|&c| combine(&y, &vecs[c])).collect();
        let ritz_vals: Vec<f64> = order.iter().map(|&c| vals[c]).collect();

        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..r {
            for (yi, vi) in ritz_y[k].iter().zip(&ritz_v[k]) {
                let d = yi - ritz_vals[k] * vi;
                num += d * d;
                den += yi * yi;
            }
        }
        residual = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
        if residual < tol {
            let mut vectors: Vec<Vec<f64>> = ritz_v.into_iter().take(r).collect();
            // Re-orthonormalize to wash out rounding from the rotation.
            orthonormalize(&mut vectors, &mut rng);
            return Ok(Basis {
                vectors,
                eigenvalues: ritz_vals.into_iter().take(r).collect(),
                residual,
                iterations: it,
            });
        }
        v = ritz_y;
        orthonormalize(&mut v, &mut rng);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}
