//! End-to-end acceptance gate. Each numbered criterion prints one PASS or
//! FAIL line (run with `--nocapture` to see them on success); the test
//! fails if any criterion does.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netdens::decompose::{
    decompose, egalitarian_orient, kcore_decompose, kcore_region_density, rings_from_orientation,
    verify_decomposition, DensityDecomposition, Orientation,
};
use netdens::generate::{
    abstract_generate, generate_gnp, generate_pa, generate_regular, hsw_selector, rdd_selector,
    ring_sizes_from_distribution, NeighborSelector,
};
use netdens::graph::{parse_edgelist, Graph, NodeId, ParseOptions};
use netdens::metrics::{
    beta_rho_delta, bhattacharyya, clustering_coefficient, degree_distribution,
    densest_subgraph_bruteforce, density_distribution, edge_bias_report, Distribution,
};

/// Uniform simple graph with exactly `m` distinct edges.
fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m <= n * (n - 1) / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(m);
    while pairs.len() < m {
        let u = rng.gen_range(0..n as NodeId);
        let v = rng.gen_range(0..n as NodeId);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if chosen.insert(key) {
            pairs.push(key);
        }
    }
    Graph::from_pairs(n, pairs)
}

fn complete_graph(n: usize) -> Graph {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            pairs.push((u, v));
        }
    }
    Graph::from_pairs(n, pairs)
}

/// Running tally of exact density-window verification over every
/// decomposition the suite produces.
#[derive(Default)]
struct VerifyStats {
    count: usize,
    failures: Vec<String>,
}

impl VerifyStats {
    fn verify(&mut self, g: &Graph, d: &DensityDecomposition, context: &str) {
        self.count += 1;
        let report = verify_decomposition(g, d);
        if !report.pass() {
            self.failures.push(format!("{context}: {}", report.failures().join("; ")));
        }
    }

    fn decompose(&mut self, g: &Graph, context: &str) -> DensityDecomposition {
        let d = decompose(g);
        self.verify(g, &d, context);
        d
    }
}

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
    secs: f64,
}

fn outcome(name: &'static str, started: Instant, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail, secs: started.elapsed().as_secs_f64() }
}

#[test]
fn acceptance_criteria() {
    let mut results: Vec<Outcome> = Vec::new();
    let mut stats = VerifyStats::default();

    // c01: the rank function is independent of the starting orientation.
    {
        let t = Instant::now();
        let mut disagreements = 0usize;
        for g_idx in 0..100u64 {
            let g = gnm(50, 200, 1_000 + g_idx);
            let reference = stats.decompose(&g, "c01 reference");
            for o_idx in 0..10u64 {
                let start = Orientation::random(&g, 7_000 + g_idx * 10 + o_idx);
                let oriented = egalitarian_orient(&g, Some(start), None);
                let d = rings_from_orientation(&g, oriented);
                if d.ranks() != reference.ranks() {
                    disagreements += 1;
                }
            }
        }
        results.push(outcome(
            "c01 rank-uniqueness",
            t,
            disagreements == 0,
            format!("100 graphs x 10 random starting orientations, {disagreements} disagreements"),
        ));
    }

    // c03: brute-force densest subgraph lies in the top ring, with density
    // inside the top ring's window.
    {
        let t = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD3);
        let mut bad = 0usize;
        let mut first_bad = String::new();
        for idx in 0..200u64 {
            let n = 4 + (idx as usize % 11);
            let m = rng.gen_range(0..=n * (n - 1) / 2);
            let g = gnm(n, m, 2_000 + idx);
            let d = stats.decompose(&g, "c03 sample");
            let k = d.k();
            let (nodes, density) = densest_subgraph_bruteforce(&g, 16).unwrap();
            let below_upper = density <= Ratio::new(k as u64, 1);
            let above_lower = k == 0 || density > Ratio::new(k as u64 - 1, 1);
            let contained = nodes.iter().all(|&v| d.rank(v) as usize == k);
            if !(below_upper && above_lower && contained) {
                bad += 1;
                if first_bad.is_empty() {
                    first_bad = format!(
                        " (first: n={n} m={m} density={density} k={k} contained={contained})"
                    );
                }
            }
        }
        results.push(outcome(
            "c03 densest-subgraph-oracle",
            t,
            bad == 0,
            format!("200 exhaustive searches, {bad} outside the top ring or its window{first_bad}"),
        ));
    }

    // c04: complete graphs balance to indegrees {floor(n/2), floor(n/2)-1}
    // and every node lands in ring floor(n/2).
    {
        let t = Instant::now();
        let mut bad = Vec::new();
        for n in 2..=100usize {
            let g = complete_graph(n);
            let d = stats.decompose(&g, "c04 clique");
            let half = (n / 2) as u32;
            let indegrees_ok = d
                .witness()
                .indegrees()
                .iter()
                .all(|&x| x == half || x + 1 == half);
            let ranks_ok = d.ranks().iter().all(|&r| r == half);
            if !(indegrees_ok && ranks_ok) {
                bad.push(n);
            }
        }
        results.push(outcome(
            "c04 clique-balance",
            t,
            bad.is_empty(),
            format!("complete graphs n=2..=100, deviations at {bad:?}"),
        ));
    }

    // c05: regular graphs have no mass shared between the density and
    // degree distributions, so the similarity is exactly zero.
    {
        let t = Instant::now();
        let mut nonzero = 0usize;
        for degree in [3usize, 4, 6] {
            for s in 0..20u64 {
                let g = generate_regular(500, degree, 3_000 + s);
                stats.decompose(&g, "c05 regular");
                if beta_rho_delta(&g) != 0.0 {
                    nonzero += 1;
                }
            }
        }
        results.push(outcome(
            "c05 regular-beta-zero",
            t,
            nonzero == 0,
            format!("60 regular graphs (degrees 3, 4, 6), {nonzero} with nonzero similarity"),
        ));
    }

    // c06: preferential attachment concentrates almost all nodes at rank 3
    // while its degree distribution stays heavy-tailed; the similarity is
    // expected near sqrt(2/27).
    {
        let t = Instant::now();
        let mut min_rho3 = f64::INFINITY;
        let mut betas = Vec::new();
        for s in 0..5u64 {
            let g = generate_pa(20_000, 5, 3, 4_000 + s);
            let d = stats.decompose(&g, "c06 pa");
            let rho = density_distribution(&d, true);
            let rho3 = rho.values().get(3).copied().unwrap_or(0.0);
            min_rho3 = min_rho3.min(rho3);
            betas.push(beta_rho_delta(&g));
        }
        let center = (2.0f64 / 27.0).sqrt();
        let rho_ok = min_rho3 >= 0.99;
        let beta_ok = betas.iter().all(|b| (b - center).abs() <= 0.1);
        let mean_beta = betas.iter().sum::<f64>() / betas.len() as f64;
        results.push(outcome(
            "c06 preferential-attachment-similarity",
            t,
            rho_ok && beta_ok,
            format!(
                "min rho_3 = {min_rho3:.4} (need >= 0.99), mean beta = {mean_beta:.3} (need within {:.3} +- 0.1)",
                center
            ),
        ));
    }

    // c07: sparse uniform random graphs top out at rank floor(c/2)+1 and
    // stay dissimilar (beta < 0.5) from mean degree 5 upward.
    {
        let t = Instant::now();
        let n = 10_000usize;
        let mut top_rank_hits = 0usize;
        let mut beta_violations = 0usize;
        let beta_from = |g: &Graph, d: &DensityDecomposition| {
            bhattacharyya(&density_distribution(d, true), &degree_distribution(g, true))
        };
        for s in 0..20u64 {
            let g = generate_gnp(n, 10.0 / (n as f64 - 1.0), 5_000 + s);
            let d = stats.decompose(&g, "c07 gnp c=10");
            if d.k() == 6 {
                top_rank_hits += 1;
            }
            if beta_from(&g, &d) >= 0.5 {
                beta_violations += 1;
            }
        }
        for s in 0..20u64 {
            let g = generate_gnp(n, 5.0 / (n as f64 - 1.0), 6_000 + s);
            let d = stats.decompose(&g, "c07 gnp c=5");
            if beta_from(&g, &d) >= 0.5 {
                beta_violations += 1;
            }
        }
        results.push(outcome(
            "c07 gnp-top-rank",
            t,
            top_rank_hits >= 18 && beta_violations == 0,
            format!(
                "top rank 6 in {top_rank_hits}/20 seeds (need >= 18), {beta_violations} beta >= 0.5 at mean degree 5 and 10"
            ),
        ));
    }

    // c08: generated graphs decompose back to exactly the ring sizes the
    // distribution prescribes, for both selectors and all rewiring levels.
    {
        let t = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
        let mut bad = 0usize;
        let mut first_bad = String::new();
        for trial in 0..50u64 {
            let k = rng.gen_range(1..=4usize);
            let mut sizes = vec![0usize; k + 1];
            // A roomy top ring keeps uniform selection away from dead ends.
            sizes[k] = rng.gen_range(4 * k + 10..=4 * k + 40);
            for i in 1..k {
                sizes[i] = rng.gen_range(0..=80);
            }
            sizes[0] = 500 - sizes.iter().sum::<usize>();
            let weights: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
            let dist = Distribution::raw(weights).normalize();
            assert_eq!(ring_sizes_from_distribution(&dist, 500), sizes);

            let selectors: [(&str, Box<dyn NeighborSelector>); 4] = [
                ("rdd", Box::new(rdd_selector())),
                ("hsw p=0", Box::new(hsw_selector(0.0))),
                ("hsw p=0.5", Box::new(hsw_selector(0.5))),
                ("hsw p=1", Box::new(hsw_selector(1.0))),
            ];
            for (variant, (tag, selector)) in selectors.iter().enumerate() {
                let seed = 9_000 + trial * 4 + variant as u64;
                match abstract_generate(&dist, 500, selector.as_ref(), seed) {
                    Ok((g, built)) => {
                        stats.verify(&g, &built, "c08 built");
                        let independent = stats.decompose(&g, "c08 independent");
                        if independent.ring_sizes() != sizes {
                            bad += 1;
                            if first_bad.is_empty() {
                                first_bad = format!(
                                    " (first: {tag} wanted {sizes:?} got {:?})",
                                    independent.ring_sizes()
                                );
                            }
                        }
                    }
                    Err(e) => {
                        bad += 1;
                        if first_bad.is_empty() {
                            first_bad = format!(" (first: {tag} failed to generate: {e})");
                        }
                    }
                }
            }
        }
        results.push(outcome(
            "c08 generator-round-trip",
            t,
            bad == 0,
            format!("50 profiles x 4 selector variants, {bad} mismatches{first_bad}"),
        ));
    }

    // c09: uniform selection shows no systematic edge bias against the
    // null expectation; per-gap mean deviation stays within 0.05.
    {
        let t = Instant::now();
        let dist = Distribution::raw(vec![0.0, 50.0, 60.0, 800.0]).normalize();
        let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        let mut gen_failures = 0usize;
        for s in 0..50u64 {
            match abstract_generate(&dist, 910, &rdd_selector(), 31_000 + s) {
                Ok((g, built)) => {
                    let report = edge_bias_report(&g, &built);
                    for summary in &report.summaries {
                        let slot = sums.entry(summary.gap).or_insert((0.0, 0));
                        slot.0 += summary.avg;
                        slot.1 += 1;
                    }
                }
                Err(_) => gen_failures += 1,
            }
        }
        let mut worst = 0.0f64;
        let mut parts = Vec::new();
        for (gap, (total, count)) in &sums {
            let mean = total / *count as f64;
            worst = worst.max(mean.abs());
            parts.push(format!("gap {gap}: {mean:+.4}"));
        }
        results.push(outcome(
            "c09 uniform-selection-edge-bias",
            t,
            gen_failures == 0 && worst <= 0.05 && !sums.is_empty(),
            format!("50 seeds, mean deviation per gap [{}], worst {worst:.4}", parts.join(", ")),
        ));
    }

    // c10: clustering falls as lattice edges are rewired away, and beats
    // uniform selection while rewiring is rare.
    {
        let t = Instant::now();
        let dist = Distribution::raw(vec![0.0, 0.3, 0.5, 0.2]).normalize();
        let n = 400usize;
        let seeds = 20u64;
        let mut hsw_means = Vec::new();
        let mut gen_failures = 0usize;
        for p in [0.1, 0.5, 0.9] {
            let mut total = 0.0;
            for s in 0..seeds {
                match abstract_generate(&dist, n, &hsw_selector(p), 40_000 + s) {
                    Ok((g, built)) => {
                        stats.verify(&g, &built, "c10 hsw");
                        total += clustering_coefficient(&g).unwrap_or(0.0);
                    }
                    Err(_) => gen_failures += 1,
                }
            }
            hsw_means.push(total / seeds as f64);
        }
        let mut rdd_total = 0.0;
        for s in 0..seeds {
            match abstract_generate(&dist, n, &rdd_selector(), 40_000 + s) {
                Ok((g, _)) => rdd_total += clustering_coefficient(&g).unwrap_or(0.0),
                Err(_) => gen_failures += 1,
            }
        }
        let rdd_mean = rdd_total / seeds as f64;
        let non_increasing = hsw_means[0] >= hsw_means[1] && hsw_means[1] >= hsw_means[2];
        let beats_uniform = hsw_means[0] > rdd_mean;
        results.push(outcome(
            "c10 lattice-clustering-trend",
            t,
            gen_failures == 0 && non_increasing && beats_uniform,
            format!(
                "mean clustering at p=0.1/0.5/0.9: {:.4}/{:.4}/{:.4}, uniform baseline {rdd_mean:.4}",
                hsw_means[0], hsw_means[1], hsw_means[2]
            ),
        ));
    }

    // c11: every nonempty core shell's region has density within
    // [i/2, i], exactly.
    {
        let t = Instant::now();
        let mut bad = Vec::new();
        let mut checked = 0usize;
        let mut check_graph = |g: &Graph, tag: String, bad: &mut Vec<String>, checked: &mut usize| {
            let cores = kcore_decompose(g);
            for i in 0..=cores.max_core() {
                if let Some(density) = kcore_region_density(g, &cores, i) {
                    *checked += 1;
                    let lower = Ratio::new(i as u64, 2);
                    let upper = Ratio::new(i as u64, 1);
                    let lower_ok = i == 0 || density >= lower;
                    if !(lower_ok && density <= upper) {
                        bad.push(format!("{tag} shell {i} density {density}"));
                    }
                }
            }
        };
        for degree in [3usize, 4] {
            let g = generate_regular(200, degree, 77 + degree as u64);
            check_graph(&g, format!("{degree}-regular"), &mut bad, &mut checked);
        }
        for idx in 0..20u64 {
            let g = gnm(60, 240, 50_000 + idx);
            check_graph(&g, format!("gnm seed {idx}"), &mut bad, &mut checked);
        }
        results.push(outcome(
            "c11 core-region-density",
            t,
            bad.is_empty() && checked > 0,
            format!("{checked} nonempty shells checked, violations: {bad:?}"),
        ));
    }

    // c12: a hundred-thousand-edge graph decomposes within the budget, and
    // core peeling stays effectively linear.
    {
        let t = Instant::now();
        let dist = Distribution::raw(vec![0.0, 30_000.0, 20_000.0, 10_000.0]).normalize();
        let (pass, detail) = match abstract_generate(&dist, 60_000, &rdd_selector(), 60_606) {
            Ok((g, built)) => {
                let td = Instant::now();
                let d = decompose(&g);
                let decompose_secs = td.elapsed().as_secs_f64();
                stats.verify(&g, &d, "c12 large");
                let tc = Instant::now();
                let cores = kcore_decompose(&g);
                let core_secs = tc.elapsed().as_secs_f64();
                let sizes_ok = d.ring_sizes() == built.ring_sizes();
                (
                    g.edge_count() == 100_000
                        && sizes_ok
                        && decompose_secs < 60.0
                        && core_secs < 2.0
                        && cores.max_core() >= 1,
                    format!(
                        "{} edges, decompose {decompose_secs:.2}s (< 60), core peeling {core_secs:.3}s (< 2)",
                        g.edge_count()
                    ),
                )
            }
            Err(e) => (false, format!("generation failed: {e}")),
        };
        results.push(outcome("c12 large-graph-performance", t, pass, detail));
    }

    // c13: tab-separated, comment-headed public edge lists parse as-is,
    // and the guide walks through a real-data run (done offline, not here).
    {
        let t = Instant::now();
        let snap = "# Undirected graph: example.txt\n# Nodes: 5 Edges: 4\n# FromNodeId\tToNodeId\n0\t1\n0\t2\n1\t3\n3\t4\n";
        let parsed = parse_edgelist(snap.as_bytes(), &ParseOptions::default());
        let parse_ok = matches!(&parsed, Ok((g, _)) if g.node_count() == 5 && g.edge_count() == 4);
        let walkthrough = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src/public-data.md");
        let guide_ok = walkthrough.is_file();
        results.push(outcome(
            "c13 public-edgelist-ingestion",
            t,
            parse_ok && guide_ok,
            format!("tab-separated commented edge list parsed: {parse_ok}, offline walkthrough present: {guide_ok}"),
        ));
    }

    // c02 aggregates window verification over everything produced above.
    let c02 = Outcome {
        name: "c02 density-windows",
        pass: stats.count > 0 && stats.failures.is_empty(),
        detail: format!(
            "{} decompositions checked against exact ring density windows, {} violations{}",
            stats.count,
            stats.failures.len(),
            if stats.failures.is_empty() {
                String::new()
            } else {
                format!(" (first: {})", stats.failures[0])
            }
        ),
        secs: 0.0,
    };
    results.insert(1, c02);

    println!();
    for r in &results {
        println!("{} {} ({:.2}s): {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.secs, r.detail);
    }
    println!();

    let failing: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    assert!(failing.is_empty(), "failing criteria: {failing:?}");
}
