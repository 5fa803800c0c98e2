//! Acceptance criteria. Runs without the test harness so every criterion
//! prints its `ACCEPTANCE <k> PASS|FAIL|SKIP` line; exits nonzero on any FAIL.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use otrisym::dcbm::{self, block_stats, log_likelihood, move_delta, InferConfig};
use otrisym::frost::{self, minimize_quartic, FrostConfig, QuarticCoeffs};
use otrisym::generator::{self, PlantedSpec};
use otrisym::graph::{
    largest_connected_component, load_edge_list, load_labels, IndexMode, Listing, LoadOptions,
};
use otrisym::metrics::{self, Contingency};
use otrisym::model::{frobenius_error, reconstruct_entry, MixingMatrix, ScaledAssignment};
use otrisym::runner::{self, BenchConfig, DetectConfig, Init, Method, Objective};
use otrisym::{Graph, Labels, Partition};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn report(k: u32, pass: bool, detail: &str) {
    println!("ACCEPTANCE {k} {}: {detail}", if pass { "PASS" } else { "FAIL" });
}

/// Log-likelihood straight from the dense adjacency matrix.
fn dense_ll(a: &[Vec<u64>], labels: &[usize], r: usize) -> f64 {
    let mut m = vec![vec![0f64; r]; r];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[labels[i]][labels[j]] += x as f64;
        }
    }
    let mut ll = 0.0;
    for k in 0..r {
        let kk: f64 = m[k].iter().sum();
        for l in 0..r {
            let kl: f64 = m[l].iter().sum();
            if m[k][l] > 0.0 {
                ll += m[k][l] * (m[k][l] / (kk * kl)).ln();
            }
        }
    }
    ll
}

fn random_multigraph(rng: &mut ChaCha8Rng, n: usize, p: f64, loops: bool) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i == j && !loops {
                continue;
            }
            if rng.random::<f64>() < p {
                edges.push((i, j, rng.random_range(1..=2u64)));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn criterion_1_example_exactness() -> bool {
    let start = Instant::now();
    let opts = LoadOptions {
        listing: Listing::Entries,
        ..LoadOptions::default()
    };
    let g = load_edge_list(data("example1.entries"), opts).unwrap();
    let cfg = DetectConfig::new(2, Method::Frost, Init::Svca).runs(10);
    let out = runner::detect(&g, None, &cfg).unwrap();
    let (z, theta) = out.best().factors.clone().unwrap();
    let want = |i: usize, j: usize| if i < 4 && j < 4 && i / 2 == j / 2 { 1.0 } else { 0.0 };
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            worst = worst.max((reconstruct_entry(&z, &theta, i, j) - want(i, j)).abs());
        }
    }
    let w4 = z.w[4];

    // All 15 splits into two nonempty groups, scored from the dense matrix.
    let a = g.to_dense();
    let mut scored = Vec::new();
    for mask in 1u32..(1 << 4) {
        // Node 0 always in group 0 removes the label swap.
        let labels: Vec<usize> = (0..5).map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as usize }).collect();
        if labels.iter().all(|&l| l == 0) {
            continue;
        }
        scored.push((dense_ll(&a, &labels, 2), labels));
    }
    let best = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<&Vec<usize>> = scored.iter().filter(|s| s.0 >= best - 1e-12).map(|s| &s.1).collect();
    let joined = winners.iter().all(|l| {
        l[0] == l[1] && l[2] == l[3] && l[0] != l[2] && (l[4] == l[0] || l[4] == l[2])
    });
    let elapsed = start.elapsed();
    let pass = worst < 1e-6 && w4 < 1e-6 && scored.len() == 15 && joined && elapsed < Duration::from_secs(1);
    report(
        1,
        pass,
        &format!(
            "max |recon - target| = {worst:.2e}, w(4) = {w4:.2e}, {} likelihood maximizers all join node 4 to a clique, {:.3}s",
            winners.len(),
            elapsed.as_secs_f64()
        ),
    );
    pass
}

/// `sum_kl (z_k^T A z_l)^2` for dense `a` and unit columns.
fn frob_gain(a: &[Vec<f64>], z: &[Vec<f64>]) -> f64 {
    let az: Vec<Vec<f64>> = z
        .iter()
        .map(|col| a.iter().map(|row| row.iter().zip(col).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let mut f = 0.0;
    for zk in z {
        for azl in &az {
            let q: f64 = zk.iter().zip(azl).map(|(x, y)| x * y).sum();
            f += q * q;
        }
    }
    f
}

fn normalize_on(col: &mut [f64], support: &[bool]) -> bool {
    for (x, &s) in col.iter_mut().zip(support) {
        if !s || *x < 0.0 {
            *x = 0.0;
        }
    }
    let nrm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm <= 1e-300 {
        return false;
    }
    col.iter_mut().for_each(|x| *x /= nrm);
    true
}

/// Best Frobenius error over all two-community supports, each solved by
/// multistart projected gradient ascent on `sum_kl (z_k^T A z_l)^2`.
fn frobenius_oracle(g: &Graph, rng: &mut ChaCha8Rng) -> f64 {
    let n = g.n();
    let a: Vec<Vec<f64>> = g.to_dense().iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let norm_a: f64 = a.iter().flatten().map(|x| x * x).sum();
    let deg: Vec<f64> = a.iter().map(|r| r.iter().sum::<f64>() + 1e-3).collect();
    let mut best_gain = 0.0f64;
    for mask in 0u32..(1 << (n - 1)) {
        let labels: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as usize }).collect();
        let supports: Vec<Vec<bool>> = (0..2).map(|k| labels.iter().map(|&l| l == k).collect()).collect();
        let used: Vec<usize> = (0..2).filter(|&k| supports[k].iter().any(|&s| s)).collect();
        let mut starts: Vec<Vec<Vec<f64>>> = vec![
            used.iter().map(|_| vec![1.0; n]).collect(),
            used.iter().map(|_| deg.clone()).collect(),
        ];
        for _ in 0..3 {
            starts.push(used.iter().map(|_| (0..n).map(|_| rng.random::<f64>() + 0.05).collect()).collect());
        }
        for mut z in starts {
            for (col, &k) in z.iter_mut().zip(&used) {
                normalize_on(col, &supports[k]);
            }
            let mut f = frob_gain(&a, &z);
            let mut eta = 1.0;
            for _ in 0..500 {
                let az: Vec<Vec<f64>> = z
                    .iter()
                    .map(|col| a.iter().map(|row| row.iter().zip(col).map(|(x, y)| x * y).sum()).collect())
                    .collect();
                let grad: Vec<Vec<f64>> = (0..z.len())
                    .map(|k| {
                        let mut gk = vec![0.0; n];
                        for l in 0..z.len() {
                            let q: f64 = z[k].iter().zip(&az[l]).map(|(x, y)| x * y).sum();
                            for i in 0..n {
                                gk[i] += 4.0 * q * az[l][i];
                            }
                        }
                        gk
                    })
                    .collect();
                let mut improved = false;
                while eta > 1e-12 {
                    let mut cand = z.clone();
                    let ok = cand.iter_mut().zip(&grad).zip(&used).all(|((col, gk), &k)| {
                        col.iter_mut().zip(gk).for_each(|(x, d)| *x += eta * d);
                        normalize_on(col, &supports[k])
                    });
                    if ok {
                        let fc = frob_gain(&a, &cand);
                        if fc > f {
                            improved = fc - f > 1e-15 * f.max(1.0);
                            z = cand;
                            f = fc;
                            eta *= 2.0;
                            break;
                        }
                    }
                    eta *= 0.5;
                }
                if !improved {
                    break;
                }
            }
            best_gain = best_gain.max(f);
        }
    }
    norm_a - best_gain
}

fn criterion_2_small_instance_optimality() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut hits = [0usize; 3];
    let instances = 20;
    let mut misses = Vec::new();
    // How far any method lands below the Frobenius oracle; large means a weak oracle.
    let mut undershoot = 0.0f64;
    for inst in 0..instances {
        let n = rng.random_range(4..=8);
        let g = loop {
            let g = random_multigraph(&mut rng, n, 0.45, true);
            if g.total() > 0 {
                break g;
            }
        };
        let a = g.to_dense();

        // DCBM: every labeling in {0,1}^n.
        let ll_opt = (0u32..(1 << n))
            .map(|mask| {
                let labels: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
                dense_ll(&a, &labels, 2)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let frob_opt = frobenius_oracle(&g, &mut rng);

        for (mi, method) in [Method::Frost, Method::Kn, Method::Klem].into_iter().enumerate() {
            let cfg = DetectConfig {
                rel_tol: Some(1e-13),
                max_iter: Some(5000),
                ..DetectConfig::new(2, method, Init::Random).runs(50).seed(inst * 1000)
            };
            let best = runner::detect(&g, None, &cfg).unwrap().best().result.objective;
            if let Objective::FrobeniusError(e) = best {
                undershoot = undershoot.max(frob_opt - e);
            }
            let ok = match best {
                Objective::FrobeniusError(e) => e <= frob_opt + 1e-6 * frob_opt.max(1.0),
                Objective::LogLikelihood(l) => l >= ll_opt - 1e-9 * ll_opt.abs().max(1.0),
            };
            if ok {
                hits[mi] += 1;
            } else {
                misses.push(format!("{}#{inst}(n={n}): {:.6} vs {:.6}", method.name(), best.value(),
                    if mi == 0 { frob_opt } else { ll_opt }));
            }
        }
    }
    let elapsed = start.elapsed();
    let need = (0.95 * instances as f64).ceil() as usize;
    let pass = hits.iter().all(|&h| h >= need) && undershoot < 1e-6 && elapsed < Duration::from_secs(60);
    report(
        2,
        pass,
        &format!(
            "optimum attained frost {}/{instances}, kn {}/{instances}, klem {}/{instances} (need {need}); oracle undershoot {undershoot:.1e}; {:.1}s; misses {misses:?}",
            hits[0], hits[1], hits[2], elapsed.as_secs_f64()
        ),
    );
    pass
}

fn criterion_3_incremental_delta() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let trials = 10_000;
    let mut failures = 0;
    for _ in 0..trials {
        let n = rng.random_range(2..=25);
        let r = rng.random_range(2..=5);
        let (p_edge, loops) = (rng.random_range(0.05..0.6), rng.random_bool(0.5));
        let g = random_multigraph(&mut rng, n, p_edge, loops);
        let p = Partition::random(n, r, rng.random());
        let i = rng.random_range(0..n);
        let to = (p.assignment[i] + rng.random_range(1..r)) % r;
        let stats = block_stats(&g, &p);
        let d = move_delta(&g, &p, &stats, i, to).delta_ll;
        let a = g.to_dense();
        let before = dense_ll(&a, &p.assignment, r);
        let mut moved = p.assignment.clone();
        moved[i] = to;
        let after = dense_ll(&a, &moved, r);
        let rel = (d - (after - before)).abs() / before.abs().max(1.0);
        worst = worst.max(rel);
        if rel > 1e-9 {
            failures += 1;
        }
    }
    let pass = failures == 0;
    report(3, pass, &format!("{trials} random moves, worst relative deviation {worst:.2e}, {failures} above 1e-9"));
    pass
}

fn criterion_4_planted_recovery() -> bool {
    let start = Instant::now();
    let graphs = 10;
    let mus = [0.0, 0.2, 0.3, 0.4];
    let mut lines = Vec::new();
    let mut pass = true;
    for (mi, &mu) in mus.iter().enumerate() {
        let planted: Vec<_> = (0..graphs)
            .map(|k| {
                let spec = PlantedSpec::balanced(1000, 20, mu, 20.0, 100 * mi as u64 + k as u64)
                    .with_power_law(2.0, 50.0);
                generator::generate(&spec).unwrap()
            })
            .collect();
        for method in [Method::Frost, Method::Kn, Method::Klem] {
            let mean = |init: Init| {
                planted
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        let truth = Labels::complete(&p.factors.partition.assignment);
                        let cfg = DetectConfig::new(20, method, init).runs(10).seed(k as u64 * 10);
                        runner::detect(&p.graph, Some(&truth), &cfg).unwrap().best().result.ami.unwrap()
                    })
                    .sum::<f64>()
                    / graphs as f64
            };
            let svca = mean(Init::Svca);
            let mut ok = true;
            let mut line = format!("mu={mu} {}: svca {svca:.4}", method.name());
            if mu <= 0.3 {
                ok &= svca >= 0.95;
            }
            if mu != 0.3 {
                let random = mean(Init::Random);
                ok &= svca > random;
                line.push_str(&format!(" random {random:.4}"));
            }
            if !ok {
                line.push_str(" <- violated");
            }
            pass &= ok;
            lines.push(line);
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(15 * 60);
    report(4, pass, &format!("{}; {:.0}s", lines.join("; "), elapsed.as_secs_f64()));
    pass
}

fn criterion_5_karate() -> bool {
    let start = Instant::now();
    let g = load_edge_list(data("karate.edges"), LoadOptions::default()).unwrap();
    let truth = load_labels(data("karate.labels"), &g).unwrap();
    let factions: Vec<usize> = truth.assignment.iter().map(|l| l.unwrap()).collect();

    let frost = runner::detect(&g, Some(&truth), &DetectConfig::new(2, Method::Frost, Init::Svca).runs(10)).unwrap();
    let pred = &frost.best().partition.assignment;
    let agree = pred.iter().zip(&factions).filter(|(a, b)| a == b).count();
    let misclassified = agree.min(34 - agree);

    let faction_ll = log_likelihood(&block_stats(&g, &Partition::new(factions.clone(), 2).unwrap()));
    let mut lls = Vec::new();
    for method in [Method::Kn, Method::Klem] {
        let out = runner::detect(&g, Some(&truth), &DetectConfig::new(2, method, Init::Svca).runs(10)).unwrap();
        lls.push(out.best().result.objective.value());
    }
    let elapsed = start.elapsed();
    let pass = misclassified == 1
        && lls.iter().all(|&l| l >= faction_ll - 1e-9)
        && elapsed < Duration::from_secs(5);
    report(
        5,
        pass,
        &format!(
            "FROST misclassifies {misclassified} node(s); best log-likelihood kn {:.4}, klem {:.4} vs factions {faction_ll:.4}; {:.2}s",
            lls[0], lls[1], elapsed.as_secs_f64()
        ),
    );
    pass
}

fn criterion_6_scaling() -> bool {
    let start = Instant::now();
    let sizes = [1000usize, 2000, 4000];
    let specs: Vec<PlantedSpec> = sizes
        .iter()
        .map(|&n| PlantedSpec::balanced(n, (0.5 * (n as f64).sqrt()).round() as usize, 0.3, 20.0, 6).with_power_law(2.0, 50.0))
        .collect();
    let cfg = BenchConfig {
        methods: vec![Method::Frost],
        init: Init::Random,
        runs: 5,
        base_seed: 0,
        timeout: None,
        max_iter: Some(30),
    };
    // Warm up allocator and caches once before timing.
    runner::bench_scaling(&specs[..1], &cfg).unwrap();
    let rows = runner::bench_scaling(&specs, &cfg).unwrap();
    let per_iter: Vec<f64> = rows.iter().map(|r| r.mean_seconds_per_iteration).collect();
    let ratios: Vec<f64> = per_iter.windows(2).map(|w| w[1] / w[0]).collect();
    let elapsed = start.elapsed();
    let pass = ratios.iter().all(|q| (1.5..=3.5).contains(q)) && elapsed < Duration::from_secs(600);
    report(
        6,
        pass,
        &format!(
            "per-iteration seconds {:?} at n={sizes:?} (r={:?}); doubling ratios {:?}",
            per_iter.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>(),
            specs.iter().map(|s| s.r).collect::<Vec<_>>(),
            ratios.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>()
        ),
    );
    pass
}

fn quartic_value(q: &QuarticCoeffs, z: f64) -> f64 {
    q.a * z.powi(4) + q.b * z * z + q.c * z
}

fn criterion_7_invariants() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures: Vec<String> = Vec::new();

    // Quartic minimizer against a grid on [0, 10] with step 1e-4.
    let grid: Vec<f64> = (0..=100_000).map(|k| k as f64 * 1e-4).collect();
    let mut defaults = 0;
    for t in 0..1000 {
        let q = QuarticCoeffs {
            a: rng.random_range(0.1..10.0),
            b: rng.random_range(-10.0..10.0),
            c: rng.random_range(-10.0..10.0),
        };
        let (gz, gf) = grid
            .iter()
            .map(|&z| (z, quartic_value(&q, z)))
            .fold((0.0, f64::INFINITY), |acc, (z, f)| if f < acc.1 { (z, f) } else { acc });
        let m = minimize_quartic(q, 0.5);
        if m.used_default {
            // Only allowed when the minimum over z >= 0 sits on the boundary.
            defaults += 1;
            if gz > 1e-3 {
                failures.push(format!("quartic #{t}: default fired but grid minimum at {gz}"));
            }
        } else {
            let f = quartic_value(&q, m.z);
            if f > gf + 1e-9 * gf.abs().max(1.0) || ((m.z - gz).abs() > 1e-3 && (f - gf).abs() > 1e-6) {
                failures.push(format!("quartic #{t}: z={} f={f} vs grid z={gz} f={gf}", m.z));
            }
        }
    }

    // FROST output invariants and the theta update's optimality.
    for t in 0..20 {
        let n = rng.random_range(10..40);
        let r = rng.random_range(1..=4);
        let g = random_multigraph(&mut rng, n, 0.2, true);
        let p = Partition::random(n, r, t);
        let z = ScaledAssignment::from_partition(&p);
        let theta = frost::update_theta(&g, &z);
        let base = frobenius_error(&g, &z, &theta);
        for _ in 0..5 {
            let (k, l) = (rng.random_range(0..r), rng.random_range(0..r));
            let eps = rng.random_range(-0.1..0.1);
            let mut rows = theta.to_rows();
            rows[k][l] = (rows[k][l] + eps).max(0.0);
            rows[l][k] = rows[k][l];
            let bumped = frobenius_error(&g, &z, &MixingMatrix::from_rows(&rows).unwrap());
            if bumped < base - 1e-9 {
                failures.push(format!("theta perturbation lowered the error on graph {t}"));
            }
        }
        let res = frost::frost_solve(&g, z, theta, &FrostConfig { seed: t, ..FrostConfig::default() }).unwrap();
        if res.theta.asymmetry() > 1e-12 || res.z.normalization_defect() > 1e-12 || res.z.w.iter().any(|&w| w < 0.0) {
            failures.push(format!("FROST output invariants on graph {t}"));
        }
        for w in res.trace.windows(2) {
            if w[1].defaults_fired == 0 && w[1].frobenius_error > w[0].frobenius_error + 1e-9 * w[0].frobenius_error.max(1.0) {
                failures.push(format!("error increased without defaults on graph {t}"));
            }
        }

        // Block statistics after a move match a rebuild; heuristics are monotone.
        let mut q = Partition::random(n, r.max(2), t + 100);
        let mut stats = block_stats(&g, &q);
        let start_ll = log_likelihood(&stats);
        let i = rng.random_range(0..n);
        let to = (q.assignment[i] + 1) % q.r;
        dcbm::apply_move(&g, &mut q, &mut stats, i, to);
        if stats != block_stats(&g, &q) {
            failures.push(format!("incremental block statistics drifted on graph {t}"));
        }
        q.assignment[i] = (to + q.r - 1) % q.r;
        let kn = dcbm::kn_infer(&g, &q, &InferConfig::with_seed(t)).unwrap();
        let kl = dcbm::klem_infer(&g, &q, &InferConfig::with_seed(t)).unwrap();
        if kn.log_likelihood < start_ll - 1e-9 || kl.log_likelihood < start_ll - 1e-9 {
            failures.push(format!("inference lost ground on graph {t}"));
        }
    }

    // Metric symmetry, relabeling invariance and the E[MI] permutation oracle.
    for t in 0..200 {
        let n = rng.random_range(2..60);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..5)).collect();
        let relabel: Vec<usize> = a.iter().map(|&x| 7 - x).collect();
        let (ab, ba) = (Contingency::new(&a, &b).unwrap(), Contingency::new(&b, &a).unwrap());
        let rel = Contingency::new(&relabel, &b).unwrap();
        if (ab.nmi() - ba.nmi()).abs() > 1e-12
            || (ab.ami_max() - ba.ami_max()).abs() > 1e-12
            || (ab.nmi() - rel.nmi()).abs() > 1e-12
            || (ab.ami_max() - rel.ami_max()).abs() > 1e-12
        {
            failures.push(format!("metric symmetry/invariance, case {t}"));
        }
    }
    for n in 1..=7usize {
        for _ in 0..5 {
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let exact = Contingency::new(&a, &b).unwrap().expected_mutual_information();
            let (mut sum, mut count) = (0.0, 0usize);
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                let pb: Vec<usize> = perm.iter().map(|&i| b[i]).collect();
                sum += Contingency::new(&a, &pb).unwrap().mutual_information();
                count += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            if (exact - sum / count as f64).abs() > 1e-9 {
                failures.push(format!("E[MI] oracle mismatch at n={n}"));
            }
        }
    }
    let identical = metrics::ami_max(&[0, 0, 1, 1, 2], &[3, 3, 4, 4, 5]).unwrap();
    if (identical - 1.0).abs() > 1e-12 {
        failures.push("AMI of identical partitions".into());
    }

    let pass = failures.is_empty();
    report(
        7,
        pass,
        &format!("quartic/grid (1000 triples, {defaults} boundary cases), theta optimality, FROST output tolerances, block statistics, monotone inference, metric symmetry/invariance, E[MI] oracle; failures: {failures:?}"),
    );
    pass
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn criterion_8_political_blogs() -> bool {
    let edges = data("polblogs.edges");
    let labels = data("polblogs.labels");
    if !edges.exists() || !labels.exists() {
        println!("ACCEPTANCE 8 SKIP: {} not supplied", edges.display());
        return true;
    }
    let g = load_edge_list(&edges, LoadOptions { index: IndexMode::Dense, simple: true, ..LoadOptions::default() }).unwrap();
    let lcc = largest_connected_component(&g).unwrap();
    let truth = load_labels(&labels, &lcc.graph).unwrap();
    let cfg = DetectConfig::new(2, Method::Frost, Init::Svca).runs(100);
    let out = runner::detect(&lcc.graph, Some(&truth), &cfg).unwrap();
    let best = out.runs.iter().filter_map(|r| r.result.nmi).fold(0.0, f64::max);
    let pass = best >= 0.70;
    report(8, pass, &format!("{} nodes in the largest component, best NMI over 100 runs {best:.4}", lcc.graph.n()));
    pass
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        criterion_1_example_exactness,
        criterion_2_small_instance_optimality,
        criterion_3_incremental_delta,
        criterion_4_planted_recovery,
        criterion_5_karate,
        criterion_6_scaling,
        criterion_7_invariants,
        criterion_8_political_blogs,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("ACCEPTANCE SUMMARY: {} of {} criteria passed or skipped", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
