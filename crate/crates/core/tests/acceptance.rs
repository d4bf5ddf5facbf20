//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Everything is seeded; reruns are byte-stable.
//!
//! Criterion 8 deserves a note. Its original formulation asked the
//! Commute-LC gate word to map the stabilizer state of H+L onto G+L. That
//! mapping does not exist: the two states are provably not LC-equivalent
//! (see `criterion_08_literal_full_graph_mapping_is_impossible`, which
//! re-derives the disproof by exhaustive orbit closure). The verified form
//! of the criterion asserts the exact content of the protocol instead: the
//! word maps the central H state onto the central G state while both full
//! graphs share the identical leaf attachment.

use gsmin::generate::{bounded_degree, erdos_renyi, rng_from_seed};
use gsmin::graph::Graph;
use gsmin::grgs::{build_grgs, build_rgs, commute_lc_plan, compare_protocols, comparison_csv};
use gsmin::ilp::{
    build_edm_ilp, decode_edm_solution, edm_identity_assignment, is_vertex_minor_ilp,
    solve_with_options, SolveOptions, SolveStatus,
};
use gsmin::orbit::{enumerate_orbit, exact_mer, is_vertex_minor};
use gsmin::sa::{edm_sa, SaConfig, VertexSelection};
use gsmin::symplectic::{
    apply_witness, lc_equivalent, same_stabilizer_state, StabilizerTableau,
};

use rand::Rng;

fn pass(criterion: u32, detail: &str) {
    println!("[acceptance] criterion {criterion}: PASS - {detail}");
}

/// All labelled graphs on n vertices, by upper-triangle edge mask.
fn graphs_on(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    (0..(1u64 << pairs.len())).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 != 0)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n, &edges).expect("valid edges")
    })
}

/// Exact ILP optimum; dense inputs are annealed first (the hybrid pipeline)
/// which leaves the optimum unchanged but keeps the proof search small.
fn ilp_optimum(g: &Graph, precondition: bool) -> (usize, Graph) {
    let base = if precondition {
        edm_sa(g, &SaConfig::new(100, 100.0, 17)).best_graph
    } else {
        g.clone()
    };
    let model = build_edm_ilp(&base, None);
    let warm = edm_identity_assignment(&base);
    let sol = solve_with_options(
        &model,
        SolveOptions { node_budget: u64::MAX, warm_start: Some(warm), cancel: None },
    );
    assert_eq!(sol.status, SolveStatus::Optimal);
    let (h, w) = decode_edm_solution(base.n(), &sol);
    assert!(w.satisfies_linear_system(&base, &h), "solution witness violates the linear system");
    (sol.objective_value as usize, h)
}

#[test]
fn criterion_01_ilp_matches_orbit_oracle() {
    // every connected graph with n <= 6, raw EDM-ILP
    let mut checked = 0u64;
    for n in 1..=6usize {
        for g in graphs_on(n).filter(Graph::is_connected) {
            let (opt, _) = ilp_optimum(&g, false);
            let (mer, _) = exact_mer(&g, 2_000_000).expect("small orbits close");
            assert_eq!(opt, mer.edge_count(), "ILP vs orbit mismatch on {g:?}");
            checked += 1;
        }
    }
    // 100 seeded random graphs with n in {7, 8}
    let mut random_checked = 0u64;
    for i in 0..100u64 {
        let n = if i % 2 == 0 { 7 } else { 8 };
        let p = [0.3, 0.5, 0.7][(i % 3) as usize];
        let g = erdos_renyi(n, p, 31_000 + i).unwrap();
        let (opt, _) = ilp_optimum(&g, true);
        let (mer, _) = exact_mer(&g, 10_000_000).expect("n<=8 orbits close");
        assert_eq!(opt, mer.edge_count(), "mismatch at n={n} i={i}");
        random_checked += 1;
    }
    pass(1, &format!("{checked} connected graphs (n<=6) + {random_checked} random (n in 7,8), zero mismatches"));
}

#[test]
fn criterion_02_lc_equivalence_agrees_with_orbits() {
    // exhaustive agreement on every pair of labelled graphs up to n = 4,
    // in both argument orders
    let mut exhaustive = 0u64;
    for n in 2..=4usize {
        let graphs: Vec<Graph> = graphs_on(n).collect();
        let orbits: Vec<_> = graphs.iter().map(|g| enumerate_orbit(g, 1_000_000)).collect();
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs {
                let same = orbits[i].contains(b);
                assert_eq!(lc_equivalent(a, b).unwrap().is_some(), same);
                assert_eq!(lc_equivalent(b, a).unwrap().is_some(), same);
                exhaustive += 1;
            }
        }
    }

    // corpus orbits for n <= 7: all pairs inside each orbit (capped member
    // list for the largest orbits), plus cross-orbit negatives
    let mut positives = 0u64;
    let mut negatives = 0u64;
    for n in 2..=7usize {
        let mut corpus: Vec<Graph> = vec![Graph::complete(n), Graph::path(n), Graph::star(n)];
        if n >= 3 {
            corpus.push(Graph::cycle(n));
        }
        for (i, p) in [0.3f64, 0.5, 0.7].iter().enumerate() {
            corpus.push(erdos_renyi(n, *p, 41_000 + (n * 10 + i) as u64).unwrap());
        }
        let orbits: Vec<_> = corpus.iter().map(|g| enumerate_orbit(g, 100_000)).collect();
        for orbit in &orbits {
            assert!(!orbit.truncated(), "corpus orbit unexpectedly large");
            let members: Vec<Graph> = orbit.iter().take(120).collect();
            for (ai, a) in members.iter().enumerate() {
                for b in &members[ai..] {
                    let w = lc_equivalent(a, b).unwrap().unwrap_or_else(|| {
                        panic!("in-orbit pair reported inequivalent: {a:?} vs {b:?}")
                    });
                    assert!(w.satisfies_linear_system(a, b));
                    positives += 1;
                }
            }
        }
        // cross-orbit pairs: seeds of provably different orbits
        for (i, oa) in orbits.iter().enumerate() {
            for (j, _) in orbits.iter().enumerate().skip(i + 1) {
                if !oa.contains(&corpus[j]) {
                    assert!(
                        lc_equivalent(&corpus[i], &corpus[j]).unwrap().is_none(),
                        "cross-orbit pair reported equivalent at n={n} ({i},{j})"
                    );
                    negatives += 1;
                }
            }
        }
    }
    // 200 random cross-orbit pairs at n = 8
    let mut crossed = 0u64;
    let mut k = 0u64;
    while crossed < 200 {
        let a = erdos_renyi(8, 0.4, 42_000 + k).unwrap();
        let b = erdos_renyi(8, 0.6, 43_000 + k).unwrap();
        k += 1;
        let orbit = enumerate_orbit(&a, 5_000_000);
        assert!(!orbit.truncated());
        let same = orbit.contains(&b);
        let witness = lc_equivalent(&a, &b).unwrap();
        assert_eq!(witness.is_some(), same, "disagreement at n=8 pair {k}");
        if !same {
            crossed += 1;
        }
    }
    pass(2, &format!("{exhaustive} exhaustive pairs (n<=4, both orders), {positives} in-orbit pairs, {negatives} corpus negatives (n<=7), {crossed} cross-orbit pairs at n=8, zero mismatches"));
}

#[test]
fn criterion_03_constraint_soundness_of_solves() {
    let mut solves = 0u64;
    let mut run = |g: &Graph, precondition: bool| {
        let base = if precondition {
            edm_sa(g, &SaConfig::new(100, 100.0, 23)).best_graph
        } else {
            g.clone()
        };
        let model = build_edm_ilp(&base, None);
        let warm = edm_identity_assignment(&base);
        let sol = solve_with_options(
            &model,
            SolveOptions { node_budget: u64::MAX, warm_start: Some(warm), cancel: None },
        );
        assert_eq!(sol.status, SolveStatus::Optimal);
        let (h, w) = decode_edm_solution(base.n(), &sol);
        // zero residual in the linear system against (A_G, A_H); the
        // per-qubit constraint is enforced by the witness constructor and
        // re-checked here
        assert!(w.satisfies_linear_system(&base, &h));
        for i in 0..base.n() {
            let (p, q, r, s) = w.bits(i);
            assert!((p & s) ^ (r & q), "per-qubit constraint fails at {i}");
        }
        // and the witness really transforms the solution state to the input
        assert!(same_stabilizer_state(
            &apply_witness(&h, &w),
            &StabilizerTableau::graph(&base)
        ));
        solves += 1;
    };
    for n in 2..=4usize {
        for g in graphs_on(n) {
            run(&g, false);
        }
    }
    for i in 0..100u64 {
        let n = 5 + (i % 4) as usize; // 5..=8
        let p = [0.3, 0.5, 0.8][(i % 3) as usize];
        let g = erdos_renyi(n, p, 51_000 + i).unwrap();
        run(&g, n >= 7);
    }
    pass(3, &format!("{solves} solves, 100% satisfied the linear system and the per-qubit constraint and mapped back to the input state"));
}

#[test]
fn criterion_04_sa_quality_desk_scale() {
    // ER n = 13, p in 0.1..=0.9, 30 graphs per point, k_max = t1 = 100
    let mut global_sa = 0.0f64;
    let mut global_mer = 0.0f64;
    let mut bucket_lines = Vec::new();
    for pi in 1..=9u64 {
        let p = pi as f64 / 10.0;
        let (mut sa_sum, mut mer_sum) = (0.0f64, 0.0f64);
        for rep in 0..30u64 {
            let seed = 1000 + pi * 100 + rep;
            let g = erdos_renyi(13, p, seed).unwrap();
            let res = edm_sa(&g, &SaConfig::new(100, 100.0, seed));
            let (mer, _) = exact_mer(&g, 30_000_000).expect("n=13 orbit closes under the limit");
            sa_sum += res.best_energy;
            mer_sum += mer.edge_count() as f64;
        }
        let ratio = sa_sum / mer_sum;
        assert!(ratio <= 1.15, "ER bucket p={p} ratio {ratio:.4} above 1.15");
        bucket_lines.push(format!("p={p}:{ratio:.3}"));
        global_sa += sa_sum;
        global_mer += mer_sum;
    }
    let er_ratio = global_sa / global_mer;
    assert!(er_ratio <= 1.15, "ER global ratio {er_ratio:.4} above 1.15");

    // bounded degree d_lim = 5, n in {6,7,8}
    let (mut b_sa, mut b_mer) = (0.0f64, 0.0f64);
    for n in [6usize, 7, 8] {
        for rep in 0..30u64 {
            let seed = 5000 + n as u64 * 100 + rep;
            let g = bounded_degree(n, 5, seed).unwrap();
            let res = edm_sa(&g, &SaConfig::new(100, 100.0, seed));
            let (mer, _) = exact_mer(&g, 5_000_000).unwrap();
            b_sa += res.best_energy;
            b_mer += mer.edge_count() as f64;
        }
    }
    let bounded_ratio = b_sa / b_mer;
    assert!(bounded_ratio <= 1.10, "bounded ratio {bounded_ratio:.4} above 1.10");
    pass(4, &format!("ER ratio {er_ratio:.4} <= 1.15 ({}), bounded ratio {bounded_ratio:.4} <= 1.10", bucket_lines.join(" ")));
}

#[test]
fn criterion_05_sa_scaling_n100() {
    let p = 2971.2 / 4950.0;
    let mut edge_sum = 0usize;
    let (mut t50, mut t1050) = (std::time::Duration::ZERO, std::time::Duration::ZERO);
    let (mut e50, mut e1050) = (0.0f64, 0.0f64);
    for seed in 0..10u64 {
        let g = erdos_renyi(100, p, 7000 + seed).unwrap();
        edge_sum += g.edge_count();
        let t = std::time::Instant::now();
        let r = edm_sa(&g, &SaConfig::new(50, 50.0, seed));
        t50 += t.elapsed();
        e50 += r.best_energy;
        let t = std::time::Instant::now();
        let r = edm_sa(&g, &SaConfig::new(1050, 50.0, seed));
        t1050 += t.elapsed();
        e1050 += r.best_energy;
    }
    let mean_edges = edge_sum as f64 / 10.0;
    assert!((mean_edges - 2971.2).abs() < 120.0, "mean input edges {mean_edges} far from 2971");
    let ratio = t1050.as_secs_f64() / t50.as_secs_f64();
    assert!(
        (5.0..=40.0).contains(&ratio),
        "runtime ratio {ratio:.2} outside [5, 40] (t50 {t50:?}, t1050 {t1050:?})"
    );
    assert!(e1050 <= e50, "more iterations should not end sparser: {e1050} vs {e50}");
    pass(5, &format!("mean input edges {mean_edges:.1}, runtime ratio {ratio:.1} in [5, 40], mean edges {:.1} (k=1050) <= {:.1} (k=50)", e1050 / 10.0, e50 / 10.0));
}

#[test]
fn criterion_06_guided_beats_uniform() {
    let mut lines = Vec::new();
    for pi in [2u64, 5, 8] {
        let p = pi as f64 / 10.0;
        let (mut guided, mut uniform) = (0.0f64, 0.0f64);
        for rep in 0..30u64 {
            let seed = 9000 + pi * 100 + rep;
            let g = erdos_renyi(15, p, seed).unwrap();
            guided += edm_sa(&g, &SaConfig::new(100, 100.0, seed)).best_energy;
            uniform += edm_sa(
                &g,
                &SaConfig::new(100, 100.0, seed).with_selection(VertexSelection::Uniform),
            )
            .best_energy;
        }
        assert!(
            guided <= uniform,
            "guided selection lost at p={p}: {guided} vs {uniform}"
        );
        lines.push(format!("p={p}: {:.2} vs {:.2}", guided / 30.0, uniform / 30.0));
    }
    pass(6, &format!("mean best energy guided <= uniform at every p ({})", lines.join("; ")));
}

#[test]
fn criterion_07_vertex_minor_reduction() {
    let mut rng = rng_from_seed(61_000);
    let mut cases = 0u64;
    let mut truths = 0u64;
    while cases < 200 {
        let n = 3 + rng.random_range(0..3); // 3..=5
        let g = erdos_renyi(n, [0.3, 0.5, 0.7][rng.random_range(0..3)], rng.random::<u64>()).unwrap();
        let size = 2 + rng.random_range(0..3.min(n - 1)); // 2..=min(4, n)
        let mut subset: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = i + rng.random_range(0..n - i);
            subset.swap(i, j);
        }
        subset.truncate(size);
        subset.sort_unstable();
        // a minor without isolated vertices on the subset
        let mut edges = Vec::new();
        for (ai, &i) in subset.iter().enumerate() {
            for &j in &subset[ai + 1..] {
                if rng.random_bool(0.6) {
                    edges.push((i, j));
                }
            }
        }
        let h = Graph::from_edges(n, &edges).unwrap();
        if subset.iter().any(|&v| h.degree(v) == 0) {
            continue;
        }
        let oracle = is_vertex_minor(&g, &h, &subset, 5_000_000).expect("small orbit closes");
        let ilp = is_vertex_minor_ilp(&g, &h, &subset, u64::MAX).expect("solver finishes");
        assert_eq!(ilp, oracle, "vertex-minor disagreement: g={g:?} h={h:?} subset={subset:?}");
        cases += 1;
        truths += u64::from(oracle);
    }
    pass(7, &format!("200 cases, {truths} positive, weighted-EDM decision matched the orbit oracle exactly"));
}

fn dense_central_corpus() -> Vec<Graph> {
    (0..20u64)
        .map(|i| {
            let n = 6 + (i % 5) as usize; // 6..=10
            erdos_renyi(n, 0.7, 71_000 + i).unwrap()
        })
        .filter(|g| g.n() >= 2)
        .collect()
}

#[test]
fn criterion_08_commute_lc_verification() {
    let mut verified = 0u64;
    let mut instances: Vec<gsmin::grgs::Grgs> = (2..=4).map(build_rgs).collect();
    for central in dense_central_corpus() {
        let n = central.n();
        instances.push(build_grgs(central, vec![1; n]).unwrap());
    }
    for (i, grgs) in instances.iter().enumerate() {
        let cfg = SaConfig::new(100, 100.0, 80_000 + i as u64);
        let plan = commute_lc_plan(grgs, &cfg).expect("gate bookkeeping verifies");
        // the word maps the central H state exactly onto the central G state
        let n = grgs.central().n();
        let transformed =
            StabilizerTableau::graph(&plan.h).apply_locals(&plan.word.gates()[..n]);
        assert!(same_stabilizer_state(
            &transformed,
            &StabilizerTableau::graph(grgs.central())
        ));
        // leaves carry no gates and attach identically in H+L and G+L
        let hl = grgs.with_central(plan.h.clone()).unwrap();
        for leaf in n..grgs.full().n() {
            assert_eq!(grgs.full().degree(leaf), 1);
            assert_eq!(hl.full().degree(leaf), 1);
            assert_eq!(
                grgs.full().neighbors(leaf).next(),
                hl.full().neighbors(leaf).next()
            );
        }
        // replaying the sequence on H reproduces G
        let mut replay = plan.h.clone();
        for &v in &plan.lc_sequence {
            replay = replay.local_complement(v);
        }
        assert_eq!(&replay, grgs.central());
        verified += 1;
    }
    pass(8, &format!("{verified}/{verified} Clifford words verified (central H -> G mapping exact, leaf attachment preserved)"));
}

/// The disproof that motivates the corrected criterion 8: for build_rgs(2),
/// H+L (star core) and G+L (complete core) are not LC-equivalent, so no
/// per-qubit word can map one stabilizer state to the other. The orbit of
/// star4+leaves is closed and K4+leaves is not in it; the algebraic test
/// agrees.
#[test]
fn criterion_08_literal_full_graph_mapping_is_impossible() {
    let rgs = build_rgs(2);
    let plan = commute_lc_plan(&rgs, &SaConfig::new(100, 100.0, 1)).unwrap();
    assert!(plan.h.edge_count() < rgs.central().edge_count(), "SA must improve K4");
    let hl = rgs.with_central(plan.h.clone()).unwrap();
    let orbit = enumerate_orbit(hl.full(), 10_000_000);
    assert!(!orbit.truncated(), "orbit of star4+leaves closes");
    assert!(
        !orbit.contains(rgs.full()),
        "G+L unexpectedly in the orbit of H+L: the literal criterion would be satisfiable"
    );
    assert!(lc_equivalent(rgs.full(), hl.full()).unwrap().is_none());
    // consequently the literal formula fails even for the verified word
    let t = StabilizerTableau::graph(hl.full()).apply_locals(plan.word.gates());
    assert!(!same_stabilizer_state(&t, &StabilizerTableau::graph(rgs.full())));
    println!(
        "[acceptance] criterion 8 (addendum): literal H+L -> G+L mapping disproved by orbit closure ({} members, closed, target absent)",
        orbit.len()
    );
}

#[test]
fn criterion_09_grgs_resource_comparison() {
    let p_grid = [0.25f64, 0.5, 0.75, 1.0];
    let mut instances: Vec<gsmin::grgs::Grgs> = (2..=4).map(build_rgs).collect();
    for central in dense_central_corpus() {
        let n = central.n();
        instances.push(build_grgs(central, vec![1; n]).unwrap());
    }
    let mut checked = 0u64;
    let mut strict = 0u64;
    for (i, grgs) in instances.iter().enumerate() {
        let cfg = SaConfig::new(100, 100.0, 90_000 + i as u64);
        let cmp = compare_protocols(grgs, &p_grid, &cfg).unwrap();
        for row in &cmp.rows {
            assert!(
                cmp.plan.h.edge_count() > grgs.central().edge_count()
                    || row.commute_resources <= row.naive_resources + 1e-9,
                "commute dearer than naive at p={} (instance {i})",
                row.p
            );
        }
        if cmp.plan.h.edge_count() < grgs.central().edge_count() {
            strict += 1;
            assert!(
                cmp.rows[0].ratio >= cmp.rows[2].ratio - 1e-9,
                "ratio not amplified at low p (instance {i}: {} vs {})",
                cmp.rows[0].ratio,
                cmp.rows[2].ratio
            );
        }
        checked += 1;
    }
    pass(9, &format!("{checked} instances: commute resources <= naive at every p; low-p amplification on the {strict} strictly sparser ones"));
}

#[test]
fn criterion_10_determinism() {
    // SA: identical inputs give identical results, twice
    let g = erdos_renyi(20, 0.5, 12_345).unwrap();
    let cfg = SaConfig::new(200, 100.0, 6);
    let (a, b) = (edm_sa(&g, &cfg), edm_sa(&g, &cfg));
    assert_eq!(a.best_graph, b.best_graph);
    assert_eq!(a.lc_sequence, b.lc_sequence);
    assert_eq!(a.energy_trace, b.energy_trace);

    // ILP: identical assignment bytes
    let h = erdos_renyi(6, 0.5, 99).unwrap();
    let model = build_edm_ilp(&h, None);
    let solve = || {
        solve_with_options(
            &model,
            SolveOptions {
                node_budget: u64::MAX,
                warm_start: Some(edm_identity_assignment(&h)),
                cancel: None,
            },
        )
    };
    let (s1, s2) = (solve(), solve());
    assert_eq!(s1.assignment, s2.assignment);
    assert_eq!(s1.objective_value, s2.objective_value);

    // LP export and orbit dump: identical bytes
    assert_eq!(gsmin::ilp::export_lp(&model), gsmin::ilp::export_lp(&model));
    let dump = |g: &Graph| {
        let mut buf = Vec::new();
        enumerate_orbit(g, 100_000).write_jsonl(&mut buf).unwrap();
        buf
    };
    assert_eq!(dump(&h), dump(&h));

    // gRGS comparison CSV: identical bytes
    let rgs = build_rgs(3);
    let sa_cfg = SaConfig::new(100, 100.0, 4);
    let c1 = comparison_csv(&compare_protocols(&rgs, &[0.25, 0.5, 1.0], &sa_cfg).unwrap().rows);
    let c2 = comparison_csv(&compare_protocols(&rgs, &[0.25, 0.5, 1.0], &sa_cfg).unwrap().rows);
    assert_eq!(c1, c2);

    // witness JSON: identical bytes
    let k3 = Graph::complete(3);
    let path = Graph::path(3);
    let w1 = serde_json::to_string(&lc_equivalent(&k3, &path).unwrap().unwrap()).unwrap();
    let w2 = serde_json::to_string(&lc_equivalent(&k3, &path).unwrap().unwrap()).unwrap();
    assert_eq!(w1, w2);

    pass(10, "SA, ILP, LP export, orbit dump, gRGS CSV and witness JSON byte-identical across reruns");
}
