//! Planted-partition graphs sampled from the Poisson block model
//! `A(i, j) ~ Poisson((Z theta Z^T)(i, j))`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{MixingMatrix, Partition, ScaledAssignment};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sizes {
    /// Sizes differ by at most one.
    Balanced,
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propensity {
    Uniform,
    /// Continuous power law `p(d) ~ d^-gamma` on `[d_min, max_degree]`, with
    /// `d_min` chosen so the mean equals the target average degree.
    PowerLaw { gamma: f64, max_degree: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub r: usize,
    pub sizes: Sizes,
    pub propensity: Propensity,
    /// Expected fraction of edge mass between communities.
    pub mu: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

impl PlantedSpec {
    pub fn balanced(n: usize, r: usize, mu: f64, avg_degree: f64, seed: u64) -> Self {
        PlantedSpec {
            n,
            r,
            sizes: Sizes::Balanced,
            propensity: Propensity::Uniform,
            mu,
            avg_degree,
            seed,
        }
    }

    pub fn with_power_law(mut self, gamma: f64, max_degree: f64) -> Self {
        self.propensity = Propensity::PowerLaw { gamma, max_degree };
        self
    }

    pub fn community_sizes(&self) -> Result<Vec<usize>> {
        match &self.sizes {
            Sizes::Balanced => {
                if self.r == 0 || self.r > self.n {
                    return Err(Error::Invalid(format!("r={} for n={}", self.r, self.n)));
                }
                let (q, rem) = (self.n / self.r, self.n % self.r);
                Ok((0..self.r).map(|k| q + usize::from(k < rem)).collect())
            }
            Sizes::Explicit(s) => {
                if s.len() != self.r {
                    return Err(Error::Invalid(format!("{} sizes for r={}", s.len(), self.r)));
                }
                if s.iter().sum::<usize>() != self.n || s.contains(&0) {
                    return Err(Error::Invalid("sizes must be positive and sum to n".into()));
                }
                Ok(s.clone())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::Invalid(format!("mu={} outside [0, 1]", self.mu)));
        }
        if !(self.avg_degree > 0.0) || !self.avg_degree.is_finite() {
            return Err(Error::Invalid("average degree must be positive".into()));
        }
        if let Propensity::PowerLaw { gamma, max_degree } = self.propensity {
            if !(gamma > 0.0) || !(max_degree > self.avg_degree) {
                return Err(Error::Invalid(format!(
                    "power law needs gamma > 0 and max degree above {}",
                    self.avg_degree
                )));
            }
        }
        self.community_sizes().map(|_| ())
    }
}

/// `int_a^b x^e dx`.
fn integral_pow(a: f64, b: f64, e: f64) -> f64 {
    if (e + 1.0).abs() < 1e-12 {
        (b / a).ln()
    } else {
        (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
    }
}

fn power_law_mean(lo: f64, hi: f64, gamma: f64) -> f64 {
    integral_pow(lo, hi, 1.0 - gamma) / integral_pow(lo, hi, -gamma)
}

/// Lower cutoff giving the requested mean; the mean grows with the cutoff.
pub fn power_law_lower_cutoff(mean: f64, hi: f64, gamma: f64) -> Result<f64> {
    if !(mean < hi) {
        return Err(Error::Invalid(format!("mean {mean} not below cap {hi}")));
    }
    let (mut a, mut b) = (1e-9 * hi, hi);
    if power_law_mean(a, hi, gamma) > mean {
        return Err(Error::Invalid(format!(
            "mean {mean} unreachable with gamma={gamma}, cap {hi}"
        )));
    }
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        if power_law_mean(mid, hi, gamma) < mean {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

fn sample_power_law(rng: &mut impl Rng, lo: f64, hi: f64, gamma: f64) -> f64 {
    let u: f64 = rng.random();
    if (gamma - 1.0).abs() < 1e-12 {
        lo * (hi / lo).powf(u)
    } else {
        let e = 1.0 - gamma;
        let (a, b) = (lo.powf(e), hi.powf(e));
        (a + u * (b - a)).powf(1.0 / e)
    }
}

#[derive(Debug, Clone)]
pub struct PlantedFactors {
    pub z: ScaledAssignment,
    pub theta: MixingMatrix,
    pub partition: Partition,
    /// Expected degree of each node.
    pub expected_degrees: Vec<f64>,
}

/// Factors whose expected degree total is `n <d>` and whose expected share of
/// cross-community mass is `mu`.
///
/// Within community `k` the weights are the propensities scaled to unit norm.
/// Community `k` receives within-block mass `(1 - mu) D_k` and the cross mass
/// `mu n <d>` is split between ordered pairs `(k, l)` in proportion to
/// `D_k D_l`, where `D_k` is the community's expected degree.
pub fn build_planted_factors(spec: &PlantedSpec) -> Result<PlantedFactors> {
    spec.validate()?;
    let (n, r) = (spec.n, spec.r);
    let sizes = spec.community_sizes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut assignment: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
        .collect();
    assignment.shuffle(&mut rng);

    let phi: Vec<f64> = match spec.propensity {
        Propensity::Uniform => vec![1.0; n],
        Propensity::PowerLaw { gamma, max_degree } => {
            let lo = power_law_lower_cutoff(spec.avg_degree, max_degree, gamma)?;
            (0..n)
                .map(|_| sample_power_law(&mut rng, lo, max_degree, gamma))
                .collect()
        }
    };
    let scale = spec.avg_degree * n as f64 / phi.iter().sum::<f64>();
    let expected_degrees: Vec<f64> = phi.iter().map(|p| p * scale).collect();

    let mut norm2 = vec![0.0; r];
    let mut community_degree = vec![0.0; r];
    for (i, &k) in assignment.iter().enumerate() {
        norm2[k] += phi[i] * phi[i];
        community_degree[k] += expected_degrees[i];
    }
    let w: Vec<f64> = assignment
        .iter()
        .zip(&phi)
        .map(|(&k, p)| p / norm2[k].sqrt())
        .collect();
    let mut sigma = vec![0.0; r];
    for (&k, wi) in assignment.iter().zip(&w) {
        sigma[k] += wi;
    }

    let total = spec.avg_degree * n as f64;
    let cross_norm: f64 = (0..r)
        .flat_map(|k| (0..r).filter(move |&l| l != k).map(move |l| (k, l)))
        .map(|(k, l)| community_degree[k] * community_degree[l])
        .sum();
    let mut rows = vec![vec![0.0; r]; r];
    for k in 0..r {
        for l in k..r {
            let mass = if k == l {
                (1.0 - spec.mu) * community_degree[k]
            } else if cross_norm > 0.0 {
                spec.mu * total * community_degree[k] * community_degree[l] / cross_norm
            } else {
                0.0
            };
            rows[k][l] = mass / (sigma[k] * sigma[l]);
            rows[l][k] = rows[k][l];
        }
    }
    if r == 1 && spec.mu > 0.0 {
        log::warn!("mu={} has no effect with a single community", spec.mu);
        rows[0][0] = total / (sigma[0] * sigma[0]);
    }

    Ok(PlantedFactors {
        z: ScaledAssignment::new(assignment.clone(), w, r)?,
        theta: MixingMatrix::from_rows(&rows)?,
        partition: Partition::new(assignment, r)?,
        expected_degrees,
    })
}

fn poisson(rng: &mut impl Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda).map(|d| d.sample(rng) as u64).unwrap_or(0)
}

/// Draws `A(i, j) ~ Poisson(R(i, j))` for `i < j` and `A(i, i) = 2 s` with
/// `s ~ Poisson(R(i, i) / 2)`, where `R = Z theta Z^T`. Block pairs with
/// `theta = 0` are skipped.
pub fn sample_graph(z: &ScaledAssignment, theta: &MixingMatrix, seed: u64) -> Result<Graph> {
    if theta.r() != z.r {
        return Err(Error::Invalid(format!("theta is {0}x{0}, Z has r={1}", theta.r(), z.r)));
    }
    let n = z.n();
    let mut members = vec![Vec::new(); z.r];
    for i in 0..n {
        if z.w[i] > 0.0 {
            members[z.v[i]].push(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for k in 0..z.r {
        for l in k..z.r {
            let t = theta.get(k, l);
            if !(t > 0.0) {
                continue;
            }
            for &i in &members[k] {
                let wi = z.w[i] * t;
                for &j in &members[l] {
                    if k == l && j < i {
                        continue;
                    }
                    let rate = wi * z.w[j];
                    let count = if i == j {
                        poisson(&mut rng, 0.5 * rate)
                    } else {
                        poisson(&mut rng, rate)
                    };
                    if count > 0 {
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        edges.push((a, b, count));
                    }
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: Graph,
    pub factors: PlantedFactors,
}

/// Builds the factors from `spec.seed` and samples with a derived seed.
pub fn generate(spec: &PlantedSpec) -> Result<Planted> {
    let factors = build_planted_factors(spec)?;
    let graph = sample_graph(&factors.z, &factors.theta, sample_seed(spec.seed))?;
    Ok(Planted { graph, factors })
}

pub fn sample_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Fraction of adjacency mass between different communities.
pub fn cross_fraction(g: &Graph, p: &Partition) -> f64 {
    let mut cross = 0u64;
    for i in 0..g.n() {
        for (j, a) in g.row(i) {
            if p.assignment[i] != p.assignment[j] {
                cross += a;
            }
        }
    }
    if g.total() == 0 {
        0.0
    } else {
        cross as f64 / g.total() as f64
    }
}
