//! Degree-corrected block model objective and local-search inference.
//!
//! For a partition with block edge totals `m_kl` (diagonal blocks counted
//! twice) and community degree sums `kappa_k = sum_l m_kl`, the unnormalized
//! log-likelihood is
//!
//! ```text
//! L = sum_kl m_kl ln(m_kl / (kappa_k kappa_l))
//!   = sum_kl m_kl ln m_kl - 2 sum_k kappa_k ln kappa_k
//! ```
//!
//! with `0 ln 0 = 0`. Moving one node only touches the rows and columns of
//! its old and new community, so a move is priced in
//! `O(#neighbour communities + degree)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::Partition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStats {
    r: usize,
    m: Vec<i64>,
    kappa: Vec<i64>,
}

impl BlockStats {
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn m(&self, k: usize, l: usize) -> i64 {
        self.m[k * self.r + l]
    }

    pub fn kappa(&self) -> &[i64] {
        &self.kappa
    }

    pub fn total(&self) -> i64 {
        self.m.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.m.chunks(self.r).map(<[i64]>::to_vec).collect()
    }

    #[inline]
    fn add(&mut self, k: usize, l: usize, x: i64) {
        self.m[k * self.r + l] += x;
    }
}

pub fn block_stats(g: &Graph, p: &Partition) -> BlockStats {
    let r = p.r;
    let mut stats = BlockStats {
        r,
        m: vec![0; r * r],
        kappa: vec![0; r],
    };
    for i in 0..g.n() {
        let k = p.assignment[i];
        for (j, a) in g.row(i) {
            stats.add(k, p.assignment[j], a as i64);
        }
        stats.kappa[k] += g.degree(i) as i64;
    }
    stats
}

#[inline]
fn xlnx(x: i64) -> f64 {
    if x <= 0 {
        0.0
    } else {
        let x = x as f64;
        x * x.ln()
    }
}

pub fn log_likelihood(stats: &BlockStats) -> f64 {
    let edges: f64 = stats.m.iter().map(|&x| xlnx(x)).sum();
    let degrees: f64 = stats.kappa.iter().map(|&x| xlnx(x)).sum();
    edges - 2.0 * degrees
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveDelta {
    pub node: usize,
    pub from: usize,
    pub to: usize,
    pub delta_ll: f64,
}

/// Per-node neighbourhood summary: edge counts `e(l)` from the node to each
/// community (self-loops excluded), its self-loop entry and degree.
#[derive(Debug, Clone)]
pub struct MoveScratch {
    counts: Vec<i64>,
    touched: Vec<usize>,
    node: usize,
    self_loop: i64,
    degree: i64,
}

impl MoveScratch {
    pub fn new(r: usize) -> Self {
        MoveScratch {
            counts: vec![0; r],
            touched: Vec::new(),
            node: usize::MAX,
            self_loop: 0,
            degree: 0,
        }
    }

    pub fn gather(&mut self, g: &Graph, p: &Partition, i: usize) {
        for &l in &self.touched {
            self.counts[l] = 0;
        }
        self.touched.clear();
        self.self_loop = 0;
        for (j, a) in g.row(i) {
            if j == i {
                self.self_loop = a as i64;
                continue;
            }
            let l = p.assignment[j];
            if self.counts[l] == 0 {
                self.touched.push(l);
            }
            self.counts[l] += a as i64;
        }
        self.node = i;
        self.degree = g.degree(i) as i64;
    }

    /// Change in the log-likelihood when the gathered node moves `from -> to`.
    pub fn delta(&self, stats: &BlockStats, from: usize, to: usize) -> f64 {
        if from == to {
            return 0.0;
        }
        let (f, t) = (from, to);
        let mut sum = 0.0;
        for &l in &self.touched {
            if l == f || l == t {
                continue;
            }
            let e = self.counts[l];
            let mfl = stats.m(f, l);
            let mtl = stats.m(t, l);
            sum += 2.0 * (xlnx(mfl - e) - xlnx(mfl) + xlnx(mtl + e) - xlnx(mtl));
        }
        let (ef, et, s) = (self.counts[f], self.counts[t], self.self_loop);
        let (mff, mtt, mft) = (stats.m(f, f), stats.m(t, t), stats.m(f, t));
        sum += xlnx(mff - 2 * ef - s) - xlnx(mff);
        sum += xlnx(mtt + 2 * et + s) - xlnx(mtt);
        sum += 2.0 * (xlnx(mft - et + ef) - xlnx(mft));
        let (kf, kt, d) = (stats.kappa[f], stats.kappa[t], self.degree);
        sum - 2.0 * (xlnx(kf - d) + xlnx(kt + d) - xlnx(kf) - xlnx(kt))
    }

    /// Best target other than `from`; ties go to the smallest index.
    pub fn best_move(&self, stats: &BlockStats, from: usize) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for t in (0..stats.r).filter(|&t| t != from) {
            let d = self.delta(stats, from, t);
            if best.is_none_or(|(_, b)| d > b) {
                best = Some((t, d));
            }
        }
        best
    }

    /// Applies the gathered node's move to `stats` and `p`.
    pub fn apply(&self, stats: &mut BlockStats, p: &mut Partition, to: usize) {
        let f = p.assignment[self.node];
        if f == to {
            return;
        }
        for &l in &self.touched {
            let e = self.counts[l];
            stats.add(f, l, -e);
            stats.add(l, f, -e);
            stats.add(to, l, e);
            stats.add(l, to, e);
        }
        stats.add(f, f, -self.self_loop);
        stats.add(to, to, self.self_loop);
        stats.kappa[f] -= self.degree;
        stats.kappa[to] += self.degree;
        p.assignment[self.node] = to;
    }
}

/// Log-likelihood change of moving node `i` to community `to`.
pub fn move_delta(g: &Graph, p: &Partition, stats: &BlockStats, i: usize, to: usize) -> MoveDelta {
    let mut scratch = MoveScratch::new(p.r);
    scratch.gather(g, p, i);
    let from = p.assignment[i];
    MoveDelta {
        node: i,
        from,
        to,
        delta_ll: scratch.delta(stats, from, to),
    }
}

/// Moves `node` to `to`, updating `stats` in place.
pub fn apply_move(g: &Graph, p: &mut Partition, stats: &mut BlockStats, node: usize, to: usize) {
    let mut scratch = MoveScratch::new(p.r);
    scratch.gather(g, p, node);
    scratch.apply(stats, p, to);
}

#[derive(Debug, Clone)]
pub struct InferConfig {
    /// Breaks ties between equal gains in the sequential heuristic.
    pub seed: u64,
    pub max_sweeps: usize,
    pub deadline: Option<Instant>,
}

impl Default for InferConfig {
    fn default() -> Self {
        InferConfig {
            seed: 0,
            max_sweeps: 10_000,
            deadline: None,
        }
    }
}

impl InferConfig {
    pub fn with_seed(seed: u64) -> Self {
        InferConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferResult {
    pub partition: Partition,
    pub log_likelihood: f64,
    pub sweeps: usize,
    pub timed_out: bool,
}

fn improvement_tol(ll: f64) -> f64 {
    1e-10 * (1.0 + ll.abs())
}

fn check_init(g: &Graph, init: &Partition) -> Result<()> {
    if init.n() != g.n() {
        return Err(Error::Invalid(format!(
            "partition covers {} nodes, graph has {}",
            init.n(),
            g.n()
        )));
    }
    if init.r == 0 {
        return Err(Error::Invalid("r must be at least 1".into()));
    }
    Ok(())
}

/// Heap entry for the greedy pass: a node's best move, valid while
/// `version` matches and fresh if priced after the last applied move.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    delta: f64,
    rank: usize,
    node: usize,
    to: usize,
    version: u32,
    stamp: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta
            .total_cmp(&other.delta)
            .then(other.rank.cmp(&self.rank))
    }
}

/// Kernighan-Lin passes. Within a pass every node is moved exactly once, to
/// its best other community even when that lowers the objective, and then
/// locked; at each step the unlocked node with the largest gain goes next.
/// The best state seen along the pass is restored at its end, and passes
/// repeat until one fails to improve on its start.
///
/// Gains are kept in a lazy max-heap: a node's entry is repriced when it
/// reaches the top, and its neighbours are repriced after each move. The
/// seed breaks ties between equal gains.
pub fn kn_infer(g: &Graph, init: &Partition, cfg: &InferConfig) -> Result<InferResult> {
    check_init(g, init)?;
    let n = g.n();
    let mut p = init.clone();
    let mut stats = block_stats(g, &p);
    let mut ll = log_likelihood(&stats);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rank: Vec<usize> = (0..n).collect();
    let mut scratch = MoveScratch::new(p.r);
    let mut moves: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut locked = vec![false; n];
    let mut version = vec![0u32; n];
    let mut heap = BinaryHeap::with_capacity(2 * n);
    let mut sweeps = 0;
    let mut timed_out = false;

    if p.r < 2 {
        return Ok(InferResult {
            partition: p,
            log_likelihood: ll,
            sweeps: 0,
            timed_out,
        });
    }
    while sweeps < cfg.max_sweeps {
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            timed_out = true;
            break;
        }
        sweeps += 1;
        rank.shuffle(&mut rng);
        moves.clear();
        locked.fill(false);
        heap.clear();

        let price = |scratch: &mut MoveScratch,
                     p: &Partition,
                     stats: &BlockStats,
                     i: usize,
                     version: u32,
                     stamp: usize| {
            scratch.gather(g, p, i);
            let (to, delta) = scratch.best_move(stats, p.assignment[i]).expect("r >= 2");
            Candidate {
                delta,
                rank: rank[i],
                node: i,
                to,
                version,
                stamp,
            }
        };
        for i in 0..n {
            heap.push(price(&mut scratch, &p, &stats, i, version[i], 0));
        }

        let start = ll;
        let mut running = ll;
        let mut best = ll;
        let mut best_len = 0;
        while let Some(c) = heap.pop() {
            if locked[c.node] || c.version != version[c.node] {
                continue;
            }
            let step = moves.len();
            if c.stamp != step {
                version[c.node] += 1;
                heap.push(price(&mut scratch, &p, &stats, c.node, version[c.node], step));
                continue;
            }
            let i = c.node;
            let from = p.assignment[i];
            scratch.gather(g, &p, i);
            scratch.apply(&mut stats, &mut p, c.to);
            locked[i] = true;
            moves.push((i, from));
            running += c.delta;
            if running > best {
                best = running;
                best_len = moves.len();
            }
            let step = moves.len();
            for (j, _) in g.row(i) {
                if !locked[j] {
                    version[j] += 1;
                    heap.push(price(&mut scratch, &p, &stats, j, version[j], step));
                }
            }
        }
        for &(i, from) in moves[best_len..].iter().rev() {
            scratch.gather(g, &p, i);
            scratch.apply(&mut stats, &mut p, from);
        }
        ll = log_likelihood(&stats);
        if best_len == 0 || ll <= start + improvement_tol(start) {
            break;
        }
    }
    Ok(InferResult {
        partition: p,
        log_likelihood: ll,
        sweeps,
        timed_out,
    })
}

/// Simultaneous-update variant. Every node's best move is priced against the
/// same frozen state and all improving moves are applied together; if that
/// lowers the objective, only the single best move is applied instead.
/// Stops when no move improves the objective.
///
/// The order of evaluation is fixed, so the seed has no effect.
pub fn klem_infer(g: &Graph, init: &Partition, cfg: &InferConfig) -> Result<InferResult> {
    check_init(g, init)?;
    let n = g.n();
    let mut p = init.clone();
    let mut stats = block_stats(g, &p);
    let mut ll = log_likelihood(&stats);
    let mut scratch = MoveScratch::new(p.r);
    let mut sweeps = 0;
    let mut timed_out = false;
    let mut proposals: Vec<MoveDelta> = Vec::new();

    while p.r >= 2 && sweeps < cfg.max_sweeps {
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            timed_out = true;
            break;
        }
        let tol = improvement_tol(ll);
        proposals.clear();
        for i in 0..n {
            scratch.gather(g, &p, i);
            let from = p.assignment[i];
            if let Some((to, d)) = scratch.best_move(&stats, from) {
                if d > tol {
                    proposals.push(MoveDelta {
                        node: i,
                        from,
                        to,
                        delta_ll: d,
                    });
                }
            }
        }
        if proposals.is_empty() {
            break;
        }
        sweeps += 1;

        let mut trial = p.clone();
        for mv in &proposals {
            trial.assignment[mv.node] = mv.to;
        }
        let trial_stats = block_stats(g, &trial);
        let trial_ll = log_likelihood(&trial_stats);
        if trial_ll > ll + tol {
            p = trial;
            stats = trial_stats;
            ll = trial_ll;
        } else {
            let best = proposals
                .iter()
                .fold(None::<&MoveDelta>, |acc, mv| match acc {
                    Some(b) if b.delta_ll >= mv.delta_ll => Some(b),
                    _ => Some(mv),
                })
                .expect("nonempty");
            scratch.gather(g, &p, best.node);
            scratch.apply(&mut stats, &mut p, best.to);
            ll = log_likelihood(&stats);
        }
    }
    Ok(InferResult {
        partition: p,
        log_likelihood: ll,
        sweeps,
        timed_out,
    })
}
