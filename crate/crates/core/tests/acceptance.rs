//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p blockpart --test acceptance -- --nocapture` to see
//! the lines.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use blockpart::blocking::{
    is_clean, verify_ell_blocking, verify_z_property, SearchOptions, Verdict,
};
use blockpart::chordal::{build_chordal_partition, ChordalOptions, ChordalPartitionResult};
use blockpart::embedding::RotationSystem;
use blockpart::generators::{
    bfs_ball_partition, complete_kary_tree, forest_decomposition, grid, layered_genus_instance,
    partial_k_tree, regular_high_girth, stacked_triangulation, Seeded,
};
use blockpart::graph::{is_connected_partition, quotient, Graph, Partition, Vertex};
use blockpart::refinement::{
    assemble_refined_partition, build_cut_family, refined_width_bound, RefinementParams,
};
use blockpart::report::measure_blocking;
use blockpart::shallow::{
    model_power_in_product, power_graph_degree_bounded, random_shallow_model, shallow_minors_step,
    tw_bound, validate_shallow_model, ShallowParams, TwoBlockingProvider,
};
use blockpart::surface::{
    blocking_genus_combine, genus_z_partition, genus_z_width_bound, planar_rest_partition,
};
use blockpart::treepart::{
    improved_tree_partition, two_blocking_partition, RootedTreePartition, TreeDecomposition,
};

type Outcome = Result<String, String>;

fn criterion(id: u32, title: &str, body: impl FnOnce() -> Outcome) {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    match outcome {
        Ok(summary) => println!("criterion {id:>2} PASS  {title}: {summary}"),
        Err(why) => {
            println!("criterion {id:>2} FAIL  {title}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

struct ChordalRun {
    seed: u64,
    tau: usize,
    embedding: RotationSystem,
    result: ChordalPartitionResult,
}

/// Stacked triangulations with n = 40·seed for seeds 1..=50, each with
/// τ ∈ {1, 2, 3}.
fn chordal_corpus() -> &'static Result<Vec<ChordalRun>, String> {
    static CORPUS: OnceLock<Result<Vec<ChordalRun>, String>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut runs = Vec::new();
        for seed in 1..=50u64 {
            let embedding = stacked_triangulation(40 * seed as usize, seed)
                .map_err(|e| e.to_string())?
                .embedding;
            for tau in 1..=3 {
                let result = build_chordal_partition(&embedding, &ChordalOptions::new(tau))
                    .map_err(|e| format!("seed {seed} tau {tau}: {e}"))?;
                runs.push(ChordalRun {
                    seed,
                    tau,
                    embedding: embedding.clone(),
                    result,
                });
            }
        }
        Ok(runs)
    })
}

#[test]
fn criterion_01_chordal_six_blocking() {
    criterion(1, "chordal partitions are 6-blocking", || {
        let runs = chordal_corpus().as_ref().map_err(Clone::clone)?;
        let mut checks = 0;
        let mut widest = 0;
        for r in runs {
            let g = r.embedding.graph();
            let p = &r.result.partition;
            let tag = format!("seed {} tau {}", r.seed, r.tau);
            ensure(r.result.claims.all_passed(), || {
                format!("{tag}: failed claims")
            })?;
            ensure(is_connected_partition(g, p), || {
                format!("{tag}: disconnected part")
            })?;
            let v = verify_ell_blocking(g, p, 6, &opts()).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("{tag}: {:?}", v.verdict))?;
            checks += r
                .result
                .claims
                .claims
                .values()
                .map(|c| c.passed)
                .sum::<u64>();
            widest = widest.max(p.width());
        }
        Ok(format!(
            "{} runs, {checks} claim checks, widest part {widest}",
            runs.len()
        ))
    });
}

#[test]
fn criterion_02_quotient_structure() {
    criterion(
        2,
        "each tree sees at most two earlier trees, which are adjacent",
        || {
            let runs = chordal_corpus().as_ref().map_err(Clone::clone)?;
            let mut twos = 0;
            for r in runs {
                let g = r.embedding.graph();
                let owner = r.result.owner();
                let t = r.result.trees.len();
                let mut adj = vec![BTreeSet::new(); t];
                for (u, v) in g.edges() {
                    if owner[u] != owner[v] {
                        adj[owner[u]].insert(owner[v]);
                        adj[owner[v]].insert(owner[u]);
                    }
                }
                for (j, nb) in adj.iter().enumerate() {
                    let earlier: Vec<usize> = nb.iter().copied().filter(|&i| i < j).collect();
                    let tag = format!("seed {} tau {} tree {j}", r.seed, r.tau);
                    ensure(earlier.len() <= 2, || {
                        format!("{tag}: earlier neighbours {earlier:?}")
                    })?;
                    if let [a, b] = earlier[..] {
                        ensure(adj[a].contains(&b), || {
                            format!("{tag}: {a} and {b} not adjacent")
                        })?;
                        twos += 1;
                    }
                }
                let q = quotient(g, &r.result.partition);
                let td = &r.result.quotient_decomposition;
                td.validate(&q)
                    .map_err(|e| format!("seed {} tau {}: {e}", r.seed, r.tau))?;
                ensure(td.width() <= 2, || {
                    format!(
                        "seed {} tau {}: quotient width {}",
                        r.seed,
                        r.tau,
                        td.width()
                    )
                })?;
            }
            Ok(format!(
                "{} runs, {twos} trees with two earlier neighbours",
                runs.len()
            ))
        },
    );
}

/// Grids k×n for k in 2..=6 and partial k-trees with Δ ≤ 8.
fn tree_corpus() -> Vec<(String, Graph, TreeDecomposition)> {
    let mut out = Vec::new();
    for k in 2..=6 {
        for n in [25, 80, 200] {
            let gi = grid(k, n).unwrap();
            out.push((format!("grid {k}x{n}"), gi.graph, gi.decomposition));
        }
    }
    for seed in 0..30u64 {
        let k = 2 + (seed % 3) as usize;
        let kt = partial_k_tree(60 + 10 * seed as usize, k, 8, seed).unwrap();
        out.push((
            format!("partial {k}-tree seed {seed}"),
            kt.graph,
            kt.decomposition,
        ));
    }
    out
}

/// Every vertex in one bag, every edge inside a bag or along a tree edge,
/// and each vertex's neighbours in the parent bag inside one component of it.
fn scan_tree_partition(g: &Graph, t: &RootedTreePartition) -> Result<(), String> {
    let mut node = vec![usize::MAX; g.n()];
    for (x, bag) in t.bags.iter().enumerate() {
        for &v in bag {
            ensure(node[v] == usize::MAX, || format!("vertex {v} in two bags"))?;
            node[v] = x;
        }
    }
    ensure(node.iter().all(|&x| x != usize::MAX), || {
        "uncovered vertex".into()
    })?;
    for (u, v) in g.edges() {
        let (a, b) = (node[u], node[v]);
        ensure(
            a == b || t.parent[a] == Some(b) || t.parent[b] == Some(a),
            || format!("edge {u}-{v} spans non-adjacent nodes"),
        )?;
    }
    for (y, p) in t.parent.iter().enumerate() {
        let Some(x) = *p else { continue };
        for &v in &t.bags[y] {
            let up: Vec<Vertex> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| node[w] == x)
                .collect();
            let Some(&s) = up.first() else { continue };
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for &b in g.neighbors(a) {
                    if node[b] == x && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
            ensure(up.iter().all(|w| seen.contains(w)), || {
                format!("vertex {v} sees two components of bag {x}")
            })?;
        }
    }
    Ok(())
}

#[test]
fn criterion_03_detached_tree_partitions() {
    criterion(
        3,
        "detached tree-partitions within width and degree bounds",
        || {
            let corpus = tree_corpus();
            let mut heart_nodes = 0;
            for (name, g, td) in &corpus {
                let k = td.width() + 1;
                let d = g.max_degree().max(1);
                let (t, stats) =
                    improved_tree_partition(g, td).map_err(|e| format!("{name}: {e}"))?;
                ensure(t.width() <= 90 * k * d, || {
                    format!("{name}: width {} > {}", t.width(), 90 * k * d)
                })?;
                ensure(t.max_degree() <= 15 * d, || {
                    format!("{name}: tree degree {} > {}", t.max_degree(), 15 * d)
                })?;
                scan_tree_partition(g, &t).map_err(|e| format!("{name}: {e}"))?;
                ensure(g.n() < 5 * k || stats.nodes_checked > 0, || {
                    format!("{name}: recursion checked no nodes")
                })?;
                heart_nodes += stats.nodes_checked;
            }
            Ok(format!(
                "{} instances, {heart_nodes} recursion nodes checked",
                corpus.len()
            ))
        },
    );
}

#[test]
fn criterion_04_exact_two_blocking() {
    criterion(4, "2-blocking partitions verified exhaustively", || {
        let corpus = tree_corpus();
        let mut widest = 0;
        for (name, g, td) in &corpus {
            let d = g.max_degree().max(1);
            let bound = 1350 * (td.width() + 1) * d * d;
            let res = two_blocking_partition(g, td).map_err(|e| format!("{name}: {e}"))?;
            let p = &res.partition;
            ensure(is_connected_partition(g, p), || {
                format!("{name}: disconnected part")
            })?;
            ensure(p.width() <= bound, || {
                format!("{name}: width {} > {bound}", p.width())
            })?;
            let v = verify_ell_blocking(g, p, 2, &opts()).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("{name}: {:?}", v.verdict))?;
            widest = widest.max(p.width());
        }
        Ok(format!("{} instances, widest part {widest}", corpus.len()))
    });
}

/// Whether some path with three edges meets four distinct parts; paths in a
/// tree are enumerated directly.
fn tree_has_clean_3_path(g: &Graph, part: &[usize]) -> bool {
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            for &c in g.neighbors(b) {
                if c == a {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d == b {
                        continue;
                    }
                    let ps = [part[a], part[b], part[c], part[d]];
                    if ps.iter().collect::<BTreeSet<_>>().len() == 4 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn criterion_05_lower_bound_on_trees() {
    criterion(
        5,
        "no 2-blocking partition of width 2 on the binary tree of height 3",
        || {
            let g = complete_kary_tree(2, 3).unwrap();
            let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
            ensure(g.n() == 15 && edges.len() == 14, || {
                "unexpected tree".into()
            })?;
            let mut narrow_blocking = 0;
            let mut cross_checked = 0;
            for mask in 0u32..1 << 14 {
                // parts are the components of the kept edges
                let mut part: Vec<usize> = (0..15).collect();
                for (i, &(u, v)) in edges.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        // edges go parent → child in BFS order, so the parent is labelled already
                        part[v] = part[u];
                    }
                }
                let mut size = [0usize; 15];
                for &p in &part {
                    size[p] += 1;
                }
                let width = *size.iter().max().unwrap();
                let clean = tree_has_clean_3_path(&g, &part);
                if width <= 2 && !clean {
                    narrow_blocking += 1;
                }
                if mask % 97 == 0 {
                    let labels: BTreeSet<usize> = part.iter().copied().collect();
                    let ids: Vec<usize> = part.iter().map(|p| labels.range(..p).count()).collect();
                    let r = Partition::from_part_of(ids).unwrap();
                    let v = verify_ell_blocking(&g, &r, 2, &opts()).unwrap();
                    ensure(v.holds() == !clean, || {
                        format!("oracle disagrees with the verifier on mask {mask}")
                    })?;
                    cross_checked += 1;
                }
            }
            ensure(narrow_blocking == 0, || {
                format!("{narrow_blocking} 2-blocking partitions of width <= 2")
            })?;
            let mut widths = Vec::new();
            for (branching, height) in [(2, 6), (3, 4)] {
                let t = complete_kary_tree(branching, height).unwrap();
                let delta = branching + 1;
                let res = two_blocking_partition(&t, &forest_decomposition(&t).unwrap())
                    .map_err(|e| e.to_string())?;
                ensure(res.partition.width() >= delta, || {
                    format!("width {} below {delta}", res.partition.width())
                })?;
                widths.push(res.partition.width());
            }
            Ok(format!("16384 subsets, {cross_checked} cross-checked, 2-blocking widths on 2-ary/3-ary trees {widths:?}"))
        },
    );
}

#[test]
fn criterion_06_four_regular_clean_paths() {
    criterion(
        6,
        "clean paths of length 5 in 4-regular graphs of girth 9",
        || {
            let (c, ell) = (3, 4);
            for seed in 0..10u64 {
                let n = 400;
                let g =
                    regular_high_girth(n, c + ell + 2, seed, 100_000).map_err(|e| e.to_string())?;
                let r = bfs_ball_partition(&g, c).map_err(|e| e.to_string())?;
                ensure(r.width() <= c, || {
                    format!("seed {seed}: width {}", r.width())
                })?;
                let path = blockpart::blocking::find_long_clean_path_high_girth(&g, &r, c, ell)
                    .map_err(|e| format!("seed {seed}: {e}"))?;
                ensure(path.len() == ell + 2, || {
                    format!("seed {seed}: path {path:?}")
                })?;
                ensure(path.windows(2).all(|w| g.has_edge(w[0], w[1])), || {
                    format!("seed {seed}: not a walk")
                })?;
                let parts: BTreeSet<usize> = path.iter().map(|&v| r.part_of(v)).collect();
                ensure(parts.len() == path.len(), || {
                    format!("seed {seed}: path reuses a part")
                })?;
                ensure(is_clean(&g, &r, &path).unwrap_or(false), || {
                    format!("seed {seed}: not clean")
                })?;
            }
            Ok("10 graphs, each with a verified clean path of length 5".into())
        },
    );
}

enum Plane {
    Grid(usize),
    Triangulation(usize, u64),
}

/// (instance, refined width, cut edges, blocking number), frozen.
const REFINEMENT_FROZEN: [(Plane, usize, usize, usize); 12] = [
    (Plane::Grid(10), 28, 0, 1),
    (Plane::Grid(20), 57, 0, 1),
    (Plane::Grid(30), 87, 0, 1),
    (Plane::Grid(40), 118, 0, 1),
    (Plane::Grid(50), 129, 13, 3),
    (Plane::Grid(60), 129, 34, 3),
    (Plane::Triangulation(300, 1), 216, 0, 2),
    (Plane::Triangulation(300, 2), 206, 0, 2),
    (Plane::Triangulation(600, 3), 181, 0, 2),
    (Plane::Triangulation(600, 4), 243, 0, 2),
    (Plane::Triangulation(1000, 5), 532, 0, 2),
    (Plane::Triangulation(1500, 6), 604, 0, 2),
];

#[test]
fn criterion_07_refinement_clauses() {
    criterion(
        7,
        "refinement clauses at (tau 2, c 2, d_indep 8, n0 16)",
        || {
            let params = RefinementParams::new(2, 2, 8, 16).map_err(|e| e.to_string())?;
            let clauses = [
                "cuts_independent",
                "cuts_far_from_terminals",
                "cuts_mixed_distance",
                "core_piece_size",
                "geodesic_across_cuts",
            ];
            let mut seen = Vec::new();
            for (inst, width, cuts, bn) in &REFINEMENT_FROZEN {
                let (name, rs) = match *inst {
                    Plane::Grid(s) => (format!("grid {s}x{s}"), grid(s, s).unwrap().embedding),
                    Plane::Triangulation(n, seed) => (
                        format!("triangulation n {n} seed {seed}"),
                        stacked_triangulation(n, seed).unwrap().embedding,
                    ),
                };
                let g = rs.graph();
                let chordal = build_chordal_partition(&rs, &ChordalOptions::new(2))
                    .map_err(|e| format!("{name}: {e}"))?;
                let run =
                    build_cut_family(g, &chordal, &params).map_err(|e| format!("{name}: {e}"))?;
                let r = assemble_refined_partition(g, &chordal, &run.family)
                    .map_err(|e| format!("{name}: {e}"))?;
                ensure(run.claims.all_passed(), || format!("{name}: failed claims"))?;
                if run.family.total() > 0 {
                    for c in clauses {
                        ensure(run.claims.passed(c) > 0, || {
                            format!("{name}: clause {c} never checked")
                        })?;
                    }
                }
                ensure(is_connected_partition(g, &r), || {
                    format!("{name}: disconnected part")
                })?;
                let bound = refined_width_bound(g.max_degree(), &params);
                ensure(r.width() as u128 <= bound, || {
                    format!("{name}: width {} > {bound}", r.width())
                })?;
                let m = measure_blocking(g, &r, &opts()).map_err(|e| e.to_string())?;
                ensure(m.exact, || format!("{name}: blocking number not settled"))?;
                ensure(
                    (r.width(), run.family.total(), m.value) == (*width, *cuts, *bn),
                    || {
                        format!(
                            "{name}: (width, cuts, blocking) = {:?}, frozen {:?}",
                            (r.width(), run.family.total(), m.value),
                            (width, cuts, bn)
                        )
                    },
                )?;
                seen.push(m.value);
            }
            Ok(format!(
                "{} instances, exact blocking numbers {seen:?}",
                seen.len()
            ))
        },
    );
}

/// Edges of `G^k_d` by enumerating every path of length at most `k`.
fn naive_power(g: &Graph, k: usize, d: usize) -> BTreeSet<(Vertex, Vertex)> {
    fn walk(
        g: &Graph,
        k: usize,
        d: usize,
        path: &mut Vec<Vertex>,
        out: &mut BTreeSet<(Vertex, Vertex)>,
    ) {
        let (s, v) = (path[0], *path.last().unwrap());
        if path.len() > 1 {
            out.insert((s.min(v), s.max(v)));
        }
        if path.len() > k || (path.len() > 1 && g.degree(v) > d) {
            return;
        }
        for &w in g.neighbors(v) {
            if !path.contains(&w) {
                path.push(w);
                walk(g, k, d, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in 0..g.n() {
        walk(g, k, d, &mut vec![v], &mut out);
    }
    out
}

#[test]
fn criterion_08_shallow_minor_oracles() {
    criterion(
        8,
        "power graphs match the path oracle and models stay shallow",
        || {
            let mut rng = Seeded::new(8);
            for i in 0..100 {
                let n = 2 + rng.index(119);
                let m = n + rng.index(n);
                let edges: Vec<(Vertex, Vertex)> = (0..m)
                    .map(|_| (rng.index(n), rng.index(n)))
                    .filter(|(a, b)| a != b)
                    .collect();
                let g = Graph::from_edges_dedup(n, edges).unwrap();
                let k = 1 + rng.index(4);
                let d = 1 + rng.index(6);
                let fast: BTreeSet<(Vertex, Vertex)> =
                    power_graph_degree_bounded(&g, k, d).edges().collect();
                ensure(fast == naive_power(&g, k, d), || {
                    format!("graph {i}: power graph differs at k {k} d {d}")
                })?;
                let model =
                    model_power_in_product(&g, k, d).map_err(|e| format!("graph {i}: {e}"))?;
                let rep = validate_shallow_model(&model, ShallowParams { r: k / 2, s: d })
                    .map_err(|e| e.to_string())?;
                ensure(rep.valid, || {
                    format!("graph {i}: model invalid {:?}", rep.violations.first())
                })?;
            }
            let base = grid(8, 8).unwrap().graph;
            for seed in 1..=20u64 {
                let p = ShallowParams {
                    r: 5 + (seed % 3) as usize,
                    s: 3,
                };
                let model = random_shallow_model(&base, 2, p, 6, 4, seed)
                    .map_err(|e| format!("model {seed}: {e}"))?;
                ensure(validate_shallow_model(&model, p).unwrap().valid, || {
                    format!("model {seed}: input invalid")
                })?;
                let st = shallow_minors_step(&model, p, &TwoBlockingProvider, &opts())
                    .map_err(|e| format!("model {seed}: {e}"))?;
                let out = ShallowParams {
                    r: p.r - 1,
                    s: usize::try_from(st.s_bound).unwrap_or(usize::MAX),
                };
                ensure(st.params == out, || {
                    format!("model {seed}: step reports {:?}", st.params)
                })?;
                let rep = validate_shallow_model(&st.model, out).unwrap();
                ensure(rep.valid, || {
                    format!("model {seed}: output invalid {:?}", rep.violations.first())
                })?;
                ensure(st.model.pattern == model.pattern, || {
                    format!("model {seed}: pattern changed")
                })?;
            }
            Ok("100 random graphs, 20 seeded models".into())
        },
    );
}

#[test]
fn criterion_09_treewidth_formula() {
    criterion(9, "treewidth bound formula", || {
        let a = tw_bound(222, 3).to_string();
        let b = tw_bound(894, 3).to_string();
        ensure(a == "15288899" && b == "963922179", || {
            format!("got {a} and {b}")
        })?;
        Ok(format!("tw_bound(222, 3) = {a}, tw_bound(894, 3) = {b}"))
    });
}

#[test]
fn criterion_10_genus_sub_partitions() {
    criterion(
        10,
        "sub-partitions around vertical paths and the combined partition",
        || {
            let mut widths = Vec::new();
            for i in 0..10u64 {
                let genus = 1 + (i % 2) as usize;
                let ell = 1 + (i % 5) as usize;
                let inst =
                    layered_genus_instance(genus, 40, 14, i + 1).map_err(|e| e.to_string())?;
                let res =
                    genus_z_partition(&inst.graph, &inst.layering, &inst.tree, genus, ell, &opts())
                        .map_err(|e| format!("instance {i}: {e}"))?;
                ensure(res.claims.all_passed(), || {
                    format!("instance {i}: failed claims")
                })?;
                for c in [
                    "slab_end_window",
                    "short_paths_meet_one_part",
                    "clean_paths_meet_three_parts",
                    "slab_part_width",
                ] {
                    ensure(res.claims.passed(c) > 0, || {
                        format!("instance {i}: property {c} never checked")
                    })?;
                }
                let bound = genus_z_width_bound(genus, ell);
                ensure(res.partition.width() <= bound, || {
                    format!("instance {i}: width {} > {bound}", res.partition.width())
                })?;
                let v = verify_z_property(&inst.graph, &res.partition, ell, 3, &opts())
                    .map_err(|e| e.to_string())?;
                ensure(v.holds(), || format!("instance {i}: {:?}", v.verdict))?;
                widths.push(res.partition.width());
            }
            let mut bounds = Vec::new();
            for seed in 1..=3u64 {
                let inst = layered_genus_instance(1, 30, 12, seed).map_err(|e| e.to_string())?;
                // the remainder's blocking number fixes the window needed for Z
                let mut ell_p = 1;
                let combined = loop {
                    let ell_z = 4 * ell_p + 7;
                    let z = genus_z_partition(
                        &inst.graph,
                        &inst.layering,
                        &inst.tree,
                        1,
                        ell_z,
                        &opts(),
                    )
                    .map_err(|e| e.to_string())?;
                    let pr = planar_rest_partition(
                        &inst.graph,
                        &inst.planar_part,
                        &z.partition,
                        2,
                        &opts(),
                    )
                    .map_err(|e| e.to_string())?;
                    ensure(pr.exact, || "planar blocking number not settled".into())?;
                    if pr.ell_p <= ell_p {
                        break blocking_genus_combine(
                            &inst.graph,
                            &z.partition,
                            &pr.rest,
                            ell_p,
                            ell_z,
                            &opts(),
                        )
                        .map_err(|e| format!("seed {seed}: {e}"))?;
                    }
                    ell_p = pr.ell_p;
                };
                ensure(combined.bound == 4 * ell_p + 6, || "bound mismatch".into())?;
                ensure(
                    is_connected_partition(&inst.graph, &combined.partition),
                    || format!("seed {seed}: disconnected part"),
                )?;
                let v =
                    verify_ell_blocking(&inst.graph, &combined.partition, combined.bound, &opts())
                        .unwrap();
                ensure(v.verdict == Verdict::Holds, || {
                    format!("seed {seed}: {:?}", v.verdict)
                })?;
                bounds.push(combined.bound);
            }
            Ok(format!(
                "10 instances, widths {widths:?}; combined bounds {bounds:?} verified"
            ))
        },
    );
}

fn cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_blockpart"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

#[test]
fn criterion_11_determinism() {
    criterion(11, "reruns produce byte-identical reports", || {
        let base =
            std::env::temp_dir().join(format!("blockpart-acceptance-{}", std::process::id()));
        let dirs = [base.join("a"), base.join("b")];
        let mut reports: [Vec<Vec<u8>>; 2] = [Vec::new(), Vec::new()];
        for (slot, dir) in dirs.iter().enumerate() {
            let _ = std::fs::remove_dir_all(dir);
            let d = |s: &str| dir.join(s).to_str().unwrap().to_string();
            let f = |s: &str, name: &str| Path::new(&d(s)).join(name).to_str().unwrap().to_string();
            let runs: Vec<Vec<String>> = vec![
                vec![
                    "gen".into(),
                    "--kind".into(),
                    "ktree".into(),
                    "--n".into(),
                    "120".into(),
                    "--k".into(),
                    "3".into(),
                    "--seed".into(),
                    "11".into(),
                    "--out-dir".into(),
                    d("kt"),
                ],
                vec![
                    "chordal".into(),
                    "--n".into(),
                    "600".into(),
                    "--seed".into(),
                    "7".into(),
                    "--tau".into(),
                    "2".into(),
                    "--measure".into(),
                    "--out-dir".into(),
                    d("ch"),
                ],
                vec![
                    "refine".into(),
                    "--grid-rows".into(),
                    "50".into(),
                    "--grid-cols".into(),
                    "50".into(),
                    "--measure".into(),
                    "--out-dir".into(),
                    d("rf"),
                ],
                vec![
                    "treepart".into(),
                    "--graph".into(),
                    f("kt", "graph.json"),
                    "--decomposition".into(),
                    f("kt", "decomposition.json"),
                ],
                vec![
                    "block2".into(),
                    "--graph".into(),
                    f("kt", "graph.json"),
                    "--decomposition".into(),
                    f("kt", "decomposition.json"),
                    "--measure".into(),
                    "--out-dir".into(),
                    d("b2"),
                ],
                vec![
                    "verify".into(),
                    "--graph".into(),
                    f("ch", "graph.json"),
                    "--partition".into(),
                    f("ch", "partition.json"),
                    "--ell".into(),
                    "6".into(),
                ],
                vec![
                    "power".into(),
                    "--graph".into(),
                    f("kt", "graph.json"),
                    "--k".into(),
                    "3".into(),
                    "--d".into(),
                    "4".into(),
                ],
                vec![
                    "step".into(),
                    "--r".into(),
                    "7".into(),
                    "--s".into(),
                    "3".into(),
                    "--iterate".into(),
                    "--seed".into(),
                    "5".into(),
                ],
                vec![
                    "genusz".into(),
                    "--genus".into(),
                    "2".into(),
                    "--ell".into(),
                    "11".into(),
                    "--seed".into(),
                    "3".into(),
                    "--combine".into(),
                ],
                vec![
                    "bounds".into(),
                    "--ell".into(),
                    "894".into(),
                    "--t".into(),
                    "3".into(),
                ],
            ];
            for args in &runs {
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                let (code, stdout) = cli(&args);
                ensure(code == Some(0), || {
                    format!("{} exited with {code:?}", args[0])
                })?;
                reports[slot].push(stdout);
            }
        }
        let [a, b] = &reports;
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            ensure(x == y, || format!("report {i} differs between reruns"))?;
        }
        let _ = std::fs::remove_dir_all(&base);
        Ok(format!(
            "{} pipeline reports identical across two runs",
            a.len()
        ))
    });
}
