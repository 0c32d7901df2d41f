//! Cutting the chordal trees into bounded pieces.
//!
//! For each tree `T_j` the core `T0_j` is split into branch paths at the
//! terminals `D_j` and at branching vertices. Long paths get one cut edge per
//! window; windows are placed leftmost-greedy with gaps of `n0`. The parts of
//! the refined partition are the components of the trees minus their cuts.
//!
//! All of `(τ, c, d_indep, n0)` are free. A cut edge must stay far, in mixed
//! distance, from the cuts of the earlier trees this tree touches. It must also
//! keep the cuts of its own tree `(d_indep + 2c)`-independent, and it must not
//! separate two close core vertices whose core distance exceeds their bridge
//! distance.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::{ChordalPartitionResult, ChordalState};
use crate::claims::ClaimLedger;
use crate::graph::{is_connected_partition, Distance, Edge, Graph, GraphError, Partition, Vertex};
use crate::steiner::SubTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefinementError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("tree {tree}: no qualifying edge in window starting at offset {window_start} of path {ends:?} (rejected: {rejected_mixed} mixed distance, {rejected_independence} independence, {rejected_geodesic} geodesic)")]
    NoQualifyingEdge {
        tree: usize,
        ends: (Vertex, Vertex),
        window_start: usize,
        rejected_mixed: usize,
        rejected_independence: usize,
        rejected_geodesic: usize,
    },
    #[error("claim {claim} failed for tree {tree}: {witness}")]
    ClaimFailed {
        claim: String,
        tree: usize,
        witness: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementParams {
    pub c: usize,
    pub d_indep: usize,
    pub n0: usize,
    pub tau: usize,
}

impl RefinementParams {
    pub fn new(tau: usize, c: usize, d_indep: usize, n0: usize) -> Result<Self, RefinementError> {
        let p = RefinementParams {
            c,
            d_indep,
            n0,
            tau,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<(), RefinementError> {
        if self.c == 0 || self.d_indep == 0 || self.n0 == 0 || self.tau == 0 {
            return Err(RefinementError::Params(
                "all parameters must be positive".into(),
            ));
        }
        if self.n0 < self.spread() {
            return Err(RefinementError::Params(format!(
                "n0 = {} is below d_indep + 2c = {}",
                self.n0,
                self.spread()
            )));
        }
        Ok(())
    }

    /// `d_indep + 2c`, the independence radius of the cuts.
    pub fn spread(&self) -> usize {
        self.d_indep + 2 * self.c
    }
}

/// Worst-case refinement constants for a given maximum degree. They are far
/// too large to run with and exist for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCaseConstants {
    pub ell: BigUint,
    pub c: BigUint,
    pub d_indep: BigUint,
    pub n0: BigUint,
    pub width: BigUint,
}

pub fn worst_case_constants(max_degree: u32) -> WorstCaseConstants {
    let delta = BigUint::from(max_degree);
    let ell = BigUint::from(222u32);
    let c = BigUint::from(450u32);
    let d_indep = (BigUint::from(8u32) * &c + 12u32) * delta.pow(450 + 2);
    let spread = &d_indep + BigUint::from(2u32) * &c;
    let n0 = delta.pow(40) * &spread;
    let width = (&delta + 1u32) * BigUint::from(10u32) * delta.pow(80) * &spread;
    WorstCaseConstants {
        ell,
        c,
        d_indep,
        n0,
        width,
    }
}

/// `4·(Δ^0 + … + Δ^τ)`, the bound on `|D_j|`, saturating.
pub fn terminal_bound(max_degree: usize, tau: usize) -> u128 {
    let d = max_degree as u128;
    let s = (0..=tau as u32).fold(0u128, |s, i| s.saturating_add(d.saturating_pow(i)));
    s.saturating_mul(4)
}

/// Cut edges of each tree, indexed like the chordal trees.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCutFamily {
    pub cuts: Vec<Vec<Edge>>,
}

impl EdgeCutFamily {
    pub fn empty(trees: usize) -> Self {
        EdgeCutFamily {
            cuts: vec![Vec::new(); trees],
        }
    }

    pub fn total(&self) -> usize {
        self.cuts.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementStats {
    pub paths: usize,
    pub long_paths: usize,
    pub windows: usize,
    pub cut_edges: usize,
    pub rejected_mixed: usize,
    pub rejected_independence: usize,
    pub rejected_geodesic: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementRun {
    pub params: RefinementParams,
    pub family: EdgeCutFamily,
    pub stats: RefinementStats,
    pub claims: ClaimLedger,
}

fn norm(u: Vertex, v: Vertex) -> Edge {
    (u.min(v), u.max(v))
}

fn mask_of(n: usize, vs: impl IntoIterator<Item = Vertex>) -> Vec<bool> {
    let mut m = vec![false; n];
    for v in vs {
        m[v] = true;
    }
    m
}

fn bfs_radius(g: &Graph, sources: &[Vertex], mask: &[bool], radius: usize) -> Vec<(Vertex, usize)> {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut q = VecDeque::new();
    for &s in sources {
        if mask[s] && !dist.contains_key(&s) {
            dist.insert(s, 0);
            q.push_back(s);
        }
    }
    while let Some(v) = q.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for &w in g.neighbors(v) {
            if mask[w] && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                q.push_back(w);
            }
        }
    }
    dist.into_iter().collect()
}

/// Splits the core at `terminals` and branching vertices.
pub fn steiner_path_decomposition(
    core: &SubTree,
    terminals: &[Vertex],
    n: usize,
) -> Vec<Vec<Vertex>> {
    let keys = mask_of(n, terminals.iter().copied());
    core.branch_paths(n, &keys)
}

/// Offsets of the windows on a path with `len` edges: each window spans
/// `d_indep` edges, leaves `n0` to either end and `n0` to its neighbours.
pub fn window_starts(len: usize, params: &RefinementParams) -> Vec<usize> {
    let (d, n0) = (params.d_indep, params.n0);
    if len < 5 * n0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut s = n0;
    while s + d + n0 <= len {
        out.push(s);
        s += d + n0;
    }
    out
}

/// Mixed distance from the cuts of tree `i` to every vertex:
/// `min_v dist_{B_i − A_i}(M_i, v) + dist_{B_i − V(T0_i)}(v, ·)` over leaves
/// `v ∈ V(T_i) ∖ V(T0_i)`. Vertices outside `B_i − V(T0_i)` stay infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedField {
    dist: Vec<Option<usize>>,
}

impl MixedField {
    pub fn new(g: &Graph, state: &ChordalState, cuts: &[Edge]) -> Self {
        let n = g.n();
        let interior = state.interior_mask(n);
        let ends: Vec<Vertex> = cuts.iter().flat_map(|&(a, b)| [a, b]).collect();
        let leg1 = if ends.is_empty() {
            vec![None; n]
        } else {
            g.bfs_from(&ends, Some(&interior))
        };
        let core = mask_of(n, state.core.vertices.iter().copied());
        let mut outside_core = mask_of(n, state.bridge.vertices.iter().copied());
        for v in 0..n {
            if core[v] {
                outside_core[v] = false;
            }
        }
        let mut dist = vec![None; n];
        let mut heap = BinaryHeap::new();
        for &v in &state.tree.vertices {
            if core[v] {
                continue;
            }
            if let Some(d) = leg1[v] {
                heap.push(Reverse((d, v)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some() {
                continue;
            }
            dist[v] = Some(d);
            for &w in g.neighbors(v) {
                if outside_core[w] && dist[w].is_none() {
                    heap.push(Reverse((d + 1, w)));
                }
            }
        }
        MixedField { dist }
    }

    pub fn at(&self, v: Vertex) -> Distance {
        self.dist[v].into()
    }

    pub fn to_set(&self, targets: &[Vertex]) -> Distance {
        targets.iter().filter_map(|&v| self.dist[v]).min().into()
    }
}

pub fn mixed_distance(
    g: &Graph,
    state: &ChordalState,
    cuts: &[Edge],
    targets: &[Vertex],
) -> Distance {
    MixedField::new(g, state, cuts).to_set(targets)
}

/// Rooted copy of a core with ancestor jumps for distance queries.
struct CoreIndex {
    depth: Vec<usize>,
    parent: Vec<Vertex>,
    up: Vec<Vec<Vertex>>,
    order: Vec<Vertex>,
}

impl CoreIndex {
    fn new(core: &SubTree, n: usize) -> Self {
        let adj = core.adjacency(n);
        let mut depth = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut order = vec![core.root];
        depth[core.root] = 0;
        parent[core.root] = core.root;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    order.push(w);
                }
            }
        }
        let levels = usize::BITS as usize - order.len().leading_zeros() as usize;
        let mut up = vec![parent.clone()];
        for k in 1..levels.max(1) {
            let prev = &up[k - 1];
            let mut next = vec![usize::MAX; n];
            for &v in &order {
                next[v] = prev[prev[v]];
            }
            up.push(next);
        }
        CoreIndex {
            depth,
            parent,
            up,
            order,
        }
    }

    fn lca(&self, mut a: Vertex, mut b: Vertex) -> Vertex {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.parent[a]
    }

    fn dist(&self, a: Vertex, b: Vertex) -> usize {
        let l = self.lca(a, b);
        self.depth[a] + self.depth[b] - 2 * self.depth[l]
    }
}

/// A pair of core vertices within `spread` of each other in `B_j − A_j`.
struct ClosePair {
    x: Vertex,
    y: Vertex,
    bridge_dist: usize,
    core_dist: usize,
}

fn close_pairs(
    g: &Graph,
    state: &ChordalState,
    index: &CoreIndex,
    interior: &[bool],
    spread: usize,
) -> Vec<ClosePair> {
    let n = g.n();
    let core = mask_of(n, state.core.vertices.iter().copied());
    let mut out = Vec::new();
    for &x in &state.core.vertices {
        for (y, d) in bfs_radius(g, &[x], interior, spread) {
            if y > x && core[y] {
                out.push(ClosePair {
                    x,
                    y,
                    bridge_dist: d,
                    core_dist: index.dist(x, y),
                });
            }
        }
    }
    out
}

/// Core edges lying on the core path of some close pair whose core distance
/// exceeds its bridge distance. Cutting one of them would break geodesicity.
fn distorted_edges(index: &CoreIndex, pairs: &[ClosePair], n: usize) -> Vec<bool> {
    let mut acc = vec![0i64; n];
    for p in pairs.iter().filter(|p| p.core_dist != p.bridge_dist) {
        let l = index.lca(p.x, p.y);
        acc[p.x] += 1;
        acc[p.y] += 1;
        acc[l] -= 2;
    }
    // bottom-up sums; entry v then counts pairs using the edge (v, parent v)
    for &v in index.order.iter().rev() {
        let p = index.parent[v];
        if p != v {
            acc[p] += acc[v];
        }
    }
    let mut blocked = vec![false; n];
    for &v in &index.order {
        if index.parent[v] != v && acc[v] > 0 {
            blocked[v] = true;
        }
    }
    blocked
}

/// Per-tree inputs for [`select_cut_edges`].
pub struct CutContext<'a> {
    pub tree: usize,
    pub params: RefinementParams,
    /// Mixed-distance fields of the earlier trees this tree touches.
    pub fields: Vec<&'a MixedField>,
    /// `interior[v]`: `v ∈ V(B_j − A_j)`.
    pub interior: Vec<bool>,
    /// Distance in `B_j − A_j` to the nearest cut chosen so far.
    pub near_cut: Vec<usize>,
    core_parent: Vec<Vertex>,
    blocked_child: Vec<bool>,
}

impl CutContext<'_> {
    fn blocked(&self, u: Vertex, v: Vertex) -> bool {
        let child = if self.core_parent[u] == v { u } else { v };
        self.blocked_child[child]
    }

    fn record_cut(&mut self, g: &Graph, e: Edge) {
        let r = self.params.spread();
        for (v, d) in bfs_radius(g, &[e.0, e.1], &self.interior, r) {
            if d < self.near_cut[v] {
                self.near_cut[v] = d;
            }
        }
    }
}

/// Cut edges for one branch path, in path order.
pub fn select_cut_edges(
    g: &Graph,
    path: &[Vertex],
    ctx: &mut CutContext<'_>,
    stats: &mut RefinementStats,
) -> Result<Vec<Edge>, RefinementError> {
    let p = ctx.params;
    let len = path.len() - 1;
    let mut cuts = Vec::new();
    let mut positions = Vec::new();
    for s in window_starts(len, &p) {
        stats.windows += 1;
        let (mut rm, mut ri, mut rg) = (0, 0, 0);
        let mut pick = None;
        for k in s..s + p.d_indep {
            let (a, b) = (path[k], path[k + 1]);
            if ctx
                .fields
                .iter()
                .any(|f| f.to_set(&[a, b]).finite().is_some_and(|d| d <= p.c))
            {
                rm += 1;
                continue;
            }
            if ctx.near_cut[a].min(ctx.near_cut[b]) <= p.spread() {
                ri += 1;
                continue;
            }
            if ctx.blocked(a, b) {
                rg += 1;
                continue;
            }
            pick = Some(k);
            break;
        }
        stats.rejected_mixed += rm;
        stats.rejected_independence += ri;
        stats.rejected_geodesic += rg;
        let Some(k) = pick else {
            return Err(RefinementError::NoQualifyingEdge {
                tree: ctx.tree,
                ends: (path[0], path[len]),
                window_start: s,
                rejected_mixed: rm,
                rejected_independence: ri,
                rejected_geodesic: rg,
            });
        };
        let e = norm(path[k], path[k + 1]);
        ctx.record_cut(g, e);
        cuts.push(e);
        positions.push(k);
    }
    if !positions.is_empty() {
        let mut pieces = Vec::new();
        let mut start = 0;
        for &k in &positions {
            pieces.push(k - start);
            start = k + 1;
        }
        pieces.push(len - start);
        let lo = p.n0.min(len);
        if let Some(bad) = pieces.iter().find(|&&x| x < lo || x >= 5 * p.n0) {
            return Err(RefinementError::ClaimFailed {
                claim: "cut_piece_lengths".into(),
                tree: ctx.tree,
                witness: format!("piece of length {bad} in {pieces:?}"),
            });
        }
    }
    Ok(cuts)
}

struct Checker<'a> {
    claims: &'a mut ClaimLedger,
    tree: usize,
}

impl Checker<'_> {
    fn check(
        &mut self,
        claim: &str,
        ok: bool,
        witness: impl FnOnce() -> String,
    ) -> Result<(), RefinementError> {
        if self.claims.record(claim, ok) {
            Ok(())
        } else {
            Err(RefinementError::ClaimFailed {
                claim: claim.into(),
                tree: self.tree,
                witness: witness(),
            })
        }
    }
}

/// Builds the cut sets tree by tree and checks every clause on each.
pub fn build_cut_family(
    g: &Graph,
    chordal: &ChordalPartitionResult,
    params: &RefinementParams,
) -> Result<RefinementRun, RefinementError> {
    params.check()?;
    let n = g.n();
    let b = terminal_bound(g.max_degree(), params.tau);
    let spread = params.spread();
    let mut family = EdgeCutFamily::empty(chordal.trees.len());
    let mut fields: Vec<Option<MixedField>> = vec![None; chordal.trees.len()];
    let mut stats = RefinementStats::default();
    let mut claims = ClaimLedger::default();

    for (j, state) in chordal.states.iter().enumerate() {
        let mut ck = Checker {
            claims: &mut claims,
            tree: j,
        };
        let core = &state.core;
        let terminals = &state.core_terminals;
        let interior = state.interior_mask(n);

        let paths = steiner_path_decomposition(core, terminals, n);
        stats.paths += paths.len();
        ck.check(
            "path_count_bound",
            paths.len() <= 2 * terminals.len(),
            || format!("{} paths for {} terminals", paths.len(), terminals.len()),
        )?;
        for path in &paths {
            let d = g.bfs_from(&[path[0]], Some(&interior))[path[path.len() - 1]];
            ck.check("paths_geodesic", d == Some(path.len() - 1), || {
                format!("path {path:?} has bridge distance {d:?}")
            })?;
        }

        let index = CoreIndex::new(core, n);
        let pairs = close_pairs(g, state, &index, &interior, spread);
        let blocked_child = distorted_edges(&index, &pairs, n);

        for &i in &state.earlier_trees {
            if fields[i].is_none() {
                fields[i] = Some(MixedField::new(g, &chordal.states[i], &family.cuts[i]));
            }
        }
        let mut ctx = CutContext {
            tree: j,
            params: *params,
            fields: state
                .earlier_trees
                .iter()
                .map(|&i| fields[i].as_ref().expect("field"))
                .collect(),
            interior: interior.clone(),
            near_cut: vec![usize::MAX; n],
            core_parent: index.parent.clone(),
            blocked_child,
        };
        let mut cuts = Vec::new();
        for path in &paths {
            if path.len() > 5 * params.n0 {
                stats.long_paths += 1;
            }
            cuts.extend(select_cut_edges(g, path, &mut ctx, &mut stats)?);
        }
        cuts.sort_unstable();
        stats.cut_edges += cuts.len();

        check_clauses(
            g,
            state,
            &cuts,
            &ctx.fields,
            &index,
            &pairs,
            &interior,
            params,
            b,
            paths.len(),
            &mut ck,
        )?;
        family.cuts[j] = cuts;
    }
    Ok(RefinementRun {
        params: *params,
        family,
        stats,
        claims,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_clauses(
    g: &Graph,
    state: &ChordalState,
    cuts: &[Edge],
    fields: &[&MixedField],
    index: &CoreIndex,
    pairs: &[ClosePair],
    interior: &[bool],
    params: &RefinementParams,
    b: u128,
    path_count: usize,
    ck: &mut Checker<'_>,
) -> Result<(), RefinementError> {
    let n = g.n();
    let spread = params.spread();
    let core = &state.core;

    ck.check(
        "cuts_in_core",
        cuts.iter().all(|&(u, v)| core.has_edge(u, v)),
        || format!("{cuts:?}"),
    )?;

    // (a) pairwise distance in B_j − A_j above d_indep + 2c
    for (k, &(u, v)) in cuts.iter().enumerate() {
        let ball: BTreeMap<Vertex, usize> = bfs_radius(g, &[u, v], interior, spread)
            .into_iter()
            .collect();
        let clash = cuts
            .iter()
            .enumerate()
            .find(|&(l, &(x, y))| l != k && (ball.contains_key(&x) || ball.contains_key(&y)));
        ck.check("cuts_independent", clash.is_none(), || {
            format!("{:?} and {:?}", (u, v), clash.map(|c| *c.1))
        })?;
    }

    // (b) far from the terminals along the core
    if !cuts.is_empty() {
        let core_mask = mask_of(n, core.vertices.iter().copied());
        let tree_graph = Graph::from_edges(n, core.edges.iter().copied())?;
        let dist = tree_graph.bfs_from(&state.core_terminals, Some(&core_mask));
        let closest = cuts.iter().filter_map(|&(u, v)| dist[u].min(dist[v])).min();
        ck.check(
            "cuts_far_from_terminals",
            closest.is_some_and(|d| d >= params.n0),
            || format!("core distance {closest:?} below n0 = {}", params.n0),
        )?;
    }

    // (c) mixed distance from every touched earlier tree
    for f in fields {
        let ends: Vec<Vertex> = cuts.iter().flat_map(|&(u, v)| [u, v]).collect();
        let d = f.to_set(&ends);
        ck.check(
            "cuts_mixed_distance",
            d.finite().is_none_or(|x| x > params.c),
            || format!("mixed distance {d}"),
        )?;
    }

    // (d) piece sizes
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    {
        let adj = core.adjacency(n);
        for &s in &core.vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            comp[s] = id;
            let mut stack = vec![s];
            let mut size = 0usize;
            while let Some(v) = stack.pop() {
                size += 1;
                for &w in &adj[v] {
                    if comp[w] == usize::MAX && cuts.binary_search(&norm(v, w)).is_err() {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
    }
    let largest = sizes.iter().copied().max().unwrap_or(0);
    let piece_bound = (path_count * 5 * params.n0).max(1);
    ck.check("core_piece_size", largest <= piece_bound, || {
        format!("piece of {largest} against {piece_bound}")
    })?;
    let generic = b
        .saturating_mul(b)
        .saturating_mul(10)
        .saturating_mul(spread as u128);
    ck.check(
        "core_piece_size_generic",
        largest as u128 <= generic,
        || format!("piece of {largest} against {generic}"),
    )?;

    // (e) close pairs separated by a cut are joined geodesically by the core
    let bad = pairs
        .iter()
        .find(|p| comp[p.x] != comp[p.y] && p.core_dist != p.bridge_dist);
    ck.check("geodesic_across_cuts", bad.is_none(), || {
        let p = bad.expect("witness");
        format!(
            "{} and {}: core {} bridge {}",
            p.x, p.y, p.core_dist, p.bridge_dist
        )
    })?;

    // core distance against bridge distance: all close pairs, then full
    // rows from evenly spaced sources
    let worst = pairs
        .iter()
        .find(|p| p.core_dist as u128 >= b.saturating_mul(p.bridge_dist as u128));
    ck.check("core_distortion", worst.is_none(), || {
        let p = worst.expect("witness");
        format!(
            "{} and {}: core {} bridge {}",
            p.x, p.y, p.core_dist, p.bridge_dist
        )
    })?;
    let verts = &core.vertices;
    let samples = verts.len().min(16);
    for s in 0..samples {
        let x = verts[s * verts.len() / samples];
        let row = g.bfs_from(&[x], Some(interior));
        let worst = verts.iter().find(|&&y| {
            y != x && row[y].is_none_or(|d| index.dist(x, y) as u128 >= b.saturating_mul(d as u128))
        });
        ck.check("core_distortion", worst.is_none(), || {
            format!("from {x} to {worst:?}")
        })?;
    }
    Ok(())
}

/// Parts are the components of the trees with their cut edges removed.
pub fn assemble_refined_partition(
    g: &Graph,
    chordal: &ChordalPartitionResult,
    family: &EdgeCutFamily,
) -> Result<Partition, RefinementError> {
    let n = g.n();
    let mut parts = Vec::new();
    for (j, tree) in chordal.trees.iter().enumerate() {
        let cuts = &family.cuts[j];
        if let Some(e) = cuts
            .iter()
            .find(|&&(u, v)| !chordal.states[j].core.has_edge(u, v))
        {
            return Err(RefinementError::ClaimFailed {
                claim: "cuts_in_core".into(),
                tree: j,
                witness: format!("{e:?}"),
            });
        }
        let kept = tree
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| !cuts.contains(&norm(u, v)));
        let h = Graph::from_edges(n, kept)?;
        let mask = mask_of(n, tree.vertices.iter().copied());
        parts.extend(h.components(Some(&mask)));
    }
    let r = Partition::from_parts(n, parts)?;
    if !is_connected_partition(g, &r) {
        return Err(RefinementError::ClaimFailed {
            claim: "refined_parts_connected".into(),
            tree: 0,
            witness: "disconnected part".into(),
        });
    }
    Ok(r)
}

/// `(Δ+1)·B²·10·(d_indep + 2c)`, saturating.
pub fn refined_width_bound(max_degree: usize, params: &RefinementParams) -> u128 {
    let b = terminal_bound(max_degree, params.tau);
    (max_degree as u128 + 1)
        .saturating_mul(b)
        .saturating_mul(b)
        .saturating_mul(10)
        .saturating_mul(params.spread() as u128)
}
