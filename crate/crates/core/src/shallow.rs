//! Degree-bounded powers, rooted shallow models in `G ⊠ K_q`, and the step
//! that trades one unit of model radius for a blocking-partition quotient.
//!
//! Hosts are never materialised: a host vertex is a pair `(v, copy)` with
//! `copy < q`, adjacent to `(w, copy')` iff `v = w` (distinct copies) or
//! `vw ∈ E(G)`. Branch sets carry their own edge lists because the step
//! builds non-induced branch sets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{verify_ell_blocking, BlockingError, SearchOptions, Verdict};
use crate::generators::Seeded;
use crate::graph::{is_connected_partition, quotient, Graph, GraphError, Partition, Vertex};
use crate::treepart::{min_fill_decomposition, two_blocking_partition, TreePartError};

pub type HostVertex = (Vertex, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShallowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
    #[error(transparent)]
    TreePartition(#[from] TreePartError),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("base vertex {vertex} lies in {needed} branch sets but only {copies} copies exist")]
    CopyBudget {
        vertex: Vertex,
        needed: usize,
        copies: usize,
    },
    #[error("blocking partition of width {width} exceeds the claimed {claimed}")]
    WidthRefused { width: usize, claimed: u128 },
    #[error("step check {claim} failed: {detail}")]
    Assertion { claim: String, detail: String },
}

/// `G^k_d`: `vw` is an edge iff some `vw`-path of length at most `k` has all
/// inner vertices of degree at most `d` in `G`.
pub fn power_graph_degree_bounded(g: &Graph, k: usize, d: usize) -> Graph {
    let n = g.n();
    let mut edges = Vec::new();
    let mut dist = vec![usize::MAX; n];
    let mut seen = Vec::new();
    for v in 0..n {
        let mut q = VecDeque::from([v]);
        dist[v] = 0;
        seen.push(v);
        while let Some(u) = q.pop_front() {
            if dist[u] == k || (u != v && g.degree(u) > d) {
                continue;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    seen.push(w);
                    q.push_back(w);
                    if w > v {
                        edges.push((v, w));
                    }
                }
            }
        }
        for u in seen.drain(..) {
            dist[u] = usize::MAX;
        }
    }
    Graph::from_edges(n, edges).expect("power edges are simple")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSet {
    pub root: HostVertex,
    pub set: Vec<HostVertex>,
    pub edges: Vec<(HostVertex, HostVertex)>,
}

/// Model of `pattern` in `base ⊠ K_copies`, one branch set per pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct RootedModel {
    pub base: Graph,
    pub copies: usize,
    pub pattern: Graph,
    pub branch_sets: Vec<BranchSet>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    base: Graph,
    copies: usize,
    pattern: Graph,
    /// keyed by pattern vertex
    branch_sets: BTreeMap<usize, BranchSet>,
}

impl TryFrom<ModelJson> for RootedModel {
    type Error = ShallowError;
    fn try_from(j: ModelJson) -> Result<Self, Self::Error> {
        if j.branch_sets.keys().copied().ne(0..j.branch_sets.len()) {
            return Err(ShallowError::InvalidModel(
                "branch sets must be keyed 0..n-1".into(),
            ));
        }
        Ok(RootedModel {
            base: j.base,
            copies: j.copies,
            pattern: j.pattern,
            branch_sets: j.branch_sets.into_values().collect(),
        })
    }
}

impl From<RootedModel> for ModelJson {
    fn from(m: RootedModel) -> Self {
        ModelJson {
            base: m.base,
            copies: m.copies,
            pattern: m.pattern,
            branch_sets: m.branch_sets.into_iter().enumerate().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShallowParams {
    pub r: usize,
    pub s: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelViolation {
    Radius {
        pattern_vertex: usize,
        vertex: HostVertex,
        distance: usize,
    },
    Degree {
        pattern_vertex: usize,
        vertex: HostVertex,
        degree: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub valid: bool,
    pub max_radius: usize,
    pub max_degree: usize,
    pub violations: Vec<ModelViolation>,
}

fn host_adjacent(base: &Graph, a: HostVertex, b: HostVertex) -> bool {
    if a.0 == b.0 {
        a.1 != b.1
    } else {
        base.has_edge(a.0, b.0)
    }
}

fn norm_pair(a: HostVertex, b: HostVertex) -> (HostVertex, HostVertex) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl BranchSet {
    fn adjacency(&self) -> BTreeMap<HostVertex, Vec<HostVertex>> {
        let mut adj: BTreeMap<HostVertex, Vec<HostVertex>> =
            self.set.iter().map(|&v| (v, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    /// Distances from the root along the set's own edges.
    pub fn root_distances(&self) -> BTreeMap<HostVertex, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::from([(self.root, 0usize)]);
        let mut q = VecDeque::from([self.root]);
        while let Some(v) = q.pop_front() {
            let d = dist[&v];
            for &w in &adj[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }
}

impl RootedModel {
    /// Checks ranges, disjointness, host edges, connectivity and that every
    /// pattern edge is realised.
    pub fn check_structure(&self) -> Result<(), ShallowError> {
        let bad = |m: String| Err(ShallowError::InvalidModel(m));
        if self.branch_sets.len() != self.pattern.n() {
            return bad(format!(
                "{} branch sets for {} pattern vertices",
                self.branch_sets.len(),
                self.pattern.n()
            ));
        }
        let mut owner: BTreeMap<HostVertex, usize> = BTreeMap::new();
        for (x, b) in self.branch_sets.iter().enumerate() {
            for &v in &b.set {
                if v.0 >= self.base.n() || v.1 >= self.copies {
                    return bad(format!("host vertex {v:?} out of range"));
                }
                if owner.insert(v, x).is_some() {
                    return bad(format!("host vertex {v:?} in two branch sets"));
                }
            }
            if owner.get(&b.root) != Some(&x) {
                return bad(format!("root of branch set {x} is outside it"));
            }
            for &(a, c) in &b.edges {
                if owner.get(&a) != Some(&x)
                    || owner.get(&c) != Some(&x)
                    || !host_adjacent(&self.base, a, c)
                {
                    return bad(format!(
                        "edge {a:?}-{c:?} of branch set {x} is not a host edge inside the set"
                    ));
                }
            }
            if b.root_distances().len() != b.set.len() {
                return bad(format!("branch set {x} is disconnected"));
            }
        }
        // base vertex -> branch sets with a copy there
        let mut at: BTreeMap<Vertex, BTreeSet<usize>> = BTreeMap::new();
        for (&(v, _), &x) in &owner {
            at.entry(v).or_default().insert(x);
        }
        for (x, y) in self.pattern.edges() {
            // a copy of y at the same base vertex is a different host vertex
            let holds_y = |v: &Vertex| at.get(v).is_some_and(|s| s.contains(&y));
            let touches = self.branch_sets[x]
                .set
                .iter()
                .any(|&(v, _)| holds_y(&v) || self.base.neighbors(v).iter().any(holds_y));
            if !touches {
                return bad(format!("pattern edge {x}-{y} is not realised"));
            }
        }
        Ok(())
    }
}

/// Radius and non-root degree check of every branch set.
pub fn validate_shallow_model(
    model: &RootedModel,
    p: ShallowParams,
) -> Result<ModelReport, ShallowError> {
    model.check_structure()?;
    let mut violations = Vec::new();
    let (mut max_radius, mut max_degree) = (0, 0);
    for (x, b) in model.branch_sets.iter().enumerate() {
        let dist = b.root_distances();
        let adj = b.adjacency();
        for &v in &b.set {
            let d = dist[&v];
            max_radius = max_radius.max(d);
            if d > p.r {
                violations.push(ModelViolation::Radius {
                    pattern_vertex: x,
                    vertex: v,
                    distance: d,
                });
            }
            if v != b.root {
                let deg = adj[&v].len();
                max_degree = max_degree.max(deg);
                if deg > p.s {
                    violations.push(ModelViolation::Degree {
                        pattern_vertex: x,
                        vertex: v,
                        degree: deg,
                    });
                }
            }
        }
    }
    Ok(ModelReport {
        valid: violations.is_empty(),
        max_radius,
        max_degree,
        violations,
    })
}

/// Model of `G^k_d` in `G ⊠ K_{d^{⌊k/2⌋+1}}` (two copies when `d = 1` and
/// `k ≥ 2`): the set of `v` is the ball of
/// radius `⌊k/2⌋` around `v` through vertices of degree at most `d`, and each
/// base vertex hands out copies to the sets containing it, lowest `v` first.
pub fn model_power_in_product(g: &Graph, k: usize, d: usize) -> Result<RootedModel, ShallowError> {
    if k == 0 || d == 0 {
        return Err(ShallowError::Params("k and d must be positive".into()));
    }
    let n = g.n();
    let h = k / 2;
    // a vertex of degree 1 sits in its own ball and its neighbour's, so
    // d = 1 needs two copies once h ≥ 1
    let copies = if d == 1 && h > 0 {
        2
    } else {
        (d as u64)
            .checked_pow(h as u32 + 1)
            .filter(|&c| c <= usize::MAX as u64)
            .ok_or_else(|| ShallowError::Params("copy count overflows".into()))? as usize
    };
    let low = |x: Vertex| g.degree(x) <= d;
    let mut balls = Vec::with_capacity(n);
    for v in 0..n {
        let mut dist = BTreeMap::from([(v, 0usize)]);
        let mut q = VecDeque::from([v]);
        while let Some(u) = q.pop_front() {
            if dist[&u] == h {
                continue;
            }
            for &w in g.neighbors(u) {
                if low(w) && !dist.contains_key(&w) {
                    dist.insert(w, dist[&u] + 1);
                    q.push_back(w);
                }
            }
        }
        balls.push(dist.into_keys().collect::<Vec<_>>());
    }
    let mut used = vec![0usize; n];
    let mut branch_sets = Vec::with_capacity(n);
    for (v, ball) in balls.iter().enumerate() {
        let mut copy_of = BTreeMap::new();
        for &x in ball {
            if used[x] >= copies {
                return Err(ShallowError::CopyBudget {
                    vertex: x,
                    needed: used[x] + 1,
                    copies,
                });
            }
            copy_of.insert(x, used[x]);
            used[x] += 1;
        }
        let set: Vec<HostVertex> = ball.iter().map(|&x| (x, copy_of[&x])).collect();
        let mut edges = Vec::new();
        for &x in ball {
            for &y in g.neighbors(x) {
                if x < y && copy_of.contains_key(&y) {
                    edges.push(((x, copy_of[&x]), (y, copy_of[&y])));
                }
            }
        }
        branch_sets.push(BranchSet {
            root: (v, copy_of[&v]),
            set,
            edges,
        });
    }
    Ok(RootedModel {
        base: g.clone(),
        copies,
        pattern: power_graph_degree_bounded(g, k, d),
        branch_sets,
    })
}

/// Source of blocking partitions for the step.
pub trait BlockingProvider {
    /// Every returned partition is `ell()`-blocking.
    fn ell(&self) -> usize;
    /// Partition of `g0` and the claimed width bound for graphs of maximum
    /// degree `degree_bound`.
    fn partition(&self, g0: &Graph, degree_bound: usize)
        -> Result<(Partition, u128), ShallowError>;
}

/// The 2-blocking construction over a min-fill decomposition; claims
/// `1350·(tw+1)·D²` for degree bound `D`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoBlockingProvider;

impl BlockingProvider for TwoBlockingProvider {
    fn ell(&self) -> usize {
        2
    }

    fn partition(
        &self,
        g0: &Graph,
        degree_bound: usize,
    ) -> Result<(Partition, u128), ShallowError> {
        let td = min_fill_decomposition(g0);
        let res = two_blocking_partition(g0, &td)?;
        let d = degree_bound.max(1) as u128;
        let claimed = 1350u128
            .saturating_mul(td.width() as u128 + 1)
            .saturating_mul(d)
            .saturating_mul(d);
        Ok((res.partition, claimed))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepResult {
    pub model: RootedModel,
    pub params: ShallowParams,
    /// `(ds)^r`, saturating.
    pub s_bound: u128,
    /// `d·f(ds)` with the provider's claimed `f`, saturating.
    pub d_bound: u128,
    pub partition: Partition,
    pub claimed_width: u128,
    pub report: ModelReport,
}

fn sat_pow(b: u128, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(b))
}

/// One radius-reducing step: project the model to `G`, partition the union
/// of the projected non-root parts, contract, and rebuild each branch set as
/// a BFS tree plus every edge from a vertex to one of its descendants.
pub fn shallow_minors_step(
    model: &RootedModel,
    p: ShallowParams,
    provider: &dyn BlockingProvider,
    opts: &SearchOptions,
) -> Result<StepResult, ShallowError> {
    let ell = provider.ell();
    if p.r <= ell + 2 {
        return Err(ShallowError::Params(format!(
            "r = {} must exceed ell + 2 = {}",
            p.r,
            ell + 2
        )));
    }
    let rep = validate_shallow_model(model, p)?;
    if !rep.valid {
        return Err(ShallowError::InvalidModel(format!(
            "input is not ({}, {})-shallow: {:?}",
            p.r, p.s, rep.violations[0]
        )));
    }
    let g = &model.base;
    let n = g.n();
    let d = model.copies;

    // projections
    let mut proj_sets: Vec<Vec<Vertex>> = Vec::new();
    let mut proj_edges: Vec<BTreeSet<(Vertex, Vertex)>> = Vec::new();
    let mut g0_edges = BTreeSet::new();
    for b in &model.branch_sets {
        let mut set: Vec<Vertex> = b.set.iter().map(|v| v.0).collect();
        set.sort_unstable();
        set.dedup();
        let mut es = BTreeSet::new();
        for &(a, c) in &b.edges {
            if a.0 != c.0 {
                let e = (a.0.min(c.0), a.0.max(c.0));
                es.insert(e);
                if a != b.root && c != b.root {
                    g0_edges.insert(e);
                }
            }
        }
        proj_sets.push(set);
        proj_edges.push(es);
    }
    let g0 = Graph::from_edges(n, g0_edges.iter().copied())?;
    let ds = d.saturating_mul(p.s);
    if g0.max_degree() > ds {
        return Err(ShallowError::Assertion {
            claim: "projected_degree".into(),
            detail: format!("{} above ds = {ds}", g0.max_degree()),
        });
    }

    let (r_part, claimed) = provider.partition(&g0, ds)?;
    if r_part.width() as u128 > claimed {
        return Err(ShallowError::WidthRefused {
            width: r_part.width(),
            claimed,
        });
    }
    if !is_connected_partition(&g0, &r_part) {
        return Err(ShallowError::Assertion {
            claim: "provider_connected".into(),
            detail: "disconnected part".into(),
        });
    }
    match verify_ell_blocking(&g0, &r_part, ell, opts)?.verdict {
        Verdict::Holds => {}
        Verdict::Counterexample(path) => {
            return Err(ShallowError::Assertion {
                claim: "provider_blocking".into(),
                detail: format!("clean path {path:?}"),
            })
        }
        Verdict::BudgetExhausted => {
            return Err(ShallowError::Assertion {
                claim: "provider_blocking".into(),
                detail: "search budget exhausted".into(),
            })
        }
    }
    // vertices outside G0 are isolated there, so they are already singletons
    let quotient_graph = quotient(g, &r_part);
    let width = r_part.width();
    let index_in_part: Vec<usize> = {
        let mut idx = vec![0; n];
        for part in r_part.parts() {
            for (i, &v) in part.iter().enumerate() {
                idx[v] = i;
            }
        }
        idx
    };
    let part = |v: Vertex| r_part.part_of(v);
    // adjacency in G' ⊠ K_width, on base vertices of G
    let near =
        |u: Vertex, w: Vertex| part(u) == part(w) || quotient_graph.has_edge(part(u), part(w));

    // copy of each (base vertex, branch set) in the new host
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, set) in proj_sets.iter().enumerate() {
        for &v in set {
            holders[v].push(x);
        }
    }
    let new_copies = width * d;
    let lift = |v: Vertex, x: usize| -> HostVertex {
        let b = holders[v].iter().position(|&y| y == x).expect("holder");
        (part(v), index_in_part[v] * d + b)
    };
    for (v, h) in holders.iter().enumerate() {
        if h.len() > d {
            return Err(ShallowError::CopyBudget {
                vertex: v,
                needed: h.len(),
                copies: d,
            });
        }
    }

    let mut branch_sets = Vec::with_capacity(model.branch_sets.len());
    for (x, b) in model.branch_sets.iter().enumerate() {
        let root = b.root.0;
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> =
            proj_sets[x].iter().map(|&v| (v, Vec::new())).collect();
        for &(u, w) in &proj_edges[x] {
            adj.get_mut(&u).expect("in set").push(w);
            adj.get_mut(&w).expect("in set").push(u);
        }
        for l in adj.values_mut() {
            l.sort_unstable();
        }
        // BFS tree, lowest-id parent
        let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::from([(root, root)]);
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &adj[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(v);
                    order.push(w);
                }
            }
        }
        let mut edges = BTreeSet::new();
        for &v in &order[1..] {
            let mut a = parent[&v];
            edges.insert(norm_pair(lift(a, x), lift(v, x)));
            // shortcuts to strict ancestors
            while a != root {
                a = parent[&a];
                if near(a, v) {
                    edges.insert(norm_pair(lift(a, x), lift(v, x)));
                }
            }
        }
        let mut set: Vec<HostVertex> = order.iter().map(|&v| lift(v, x)).collect();
        set.sort_unstable();
        branch_sets.push(BranchSet {
            root: lift(root, x),
            set,
            edges: edges.into_iter().collect(),
        });
    }
    let out = RootedModel {
        base: quotient_graph,
        copies: new_copies.max(1),
        pattern: model.pattern.clone(),
        branch_sets,
    };
    let s_bound = sat_pow(ds as u128, p.r);
    let next = ShallowParams {
        r: p.r - 1,
        s: s_bound.min(usize::MAX as u128) as usize,
    };
    let report = validate_shallow_model(&out, next)?;
    if !report.valid {
        return Err(ShallowError::Assertion {
            claim: "step_model_shallow".into(),
            detail: format!("{:?}", report.violations[0]),
        });
    }
    Ok(StepResult {
        model: out,
        params: next,
        s_bound,
        d_bound: (d as u128).saturating_mul(claimed),
        partition: r_part,
        claimed_width: claimed,
        report,
    })
}

/// Applies the step until the radius is `ell + 2`.
pub fn shallow_minors_iterate(
    model: &RootedModel,
    p: ShallowParams,
    provider: &dyn BlockingProvider,
    opts: &SearchOptions,
) -> Result<Vec<StepResult>, ShallowError> {
    let mut steps: Vec<StepResult> = Vec::new();
    let mut cur = p;
    while cur.r > provider.ell() + 2 {
        let m = steps.last().map_or(model, |s| &s.model);
        let st = shallow_minors_step(m, cur, provider, opts)?;
        cur = st.params;
        steps.push(st);
    }
    Ok(steps)
}

/// Random `(r, s)`-shallow model in `base ⊠ K_copies`: disjoint trees grown
/// from random roots, with pattern edges wherever two trees touch.
pub fn random_shallow_model(
    base: &Graph,
    copies: usize,
    p: ShallowParams,
    sets: usize,
    growth: usize,
    seed: u64,
) -> Result<RootedModel, ShallowError> {
    if copies == 0 || base.n() == 0 {
        return Err(ShallowError::Params("empty host".into()));
    }
    let mut rng = Seeded::new(seed);
    let mut used: BTreeSet<HostVertex> = BTreeSet::new();
    let mut branch_sets = Vec::new();
    let total = base.n() * copies;
    for _ in 0..sets {
        if used.len() == total {
            break;
        }
        let root = loop {
            let v = (rng.index(base.n()), rng.index(copies));
            if !used.contains(&v) {
                break v;
            }
        };
        used.insert(root);
        let mut tree = vec![(root, 0usize, 0usize)]; // vertex, depth, degree
        let mut edges = Vec::new();
        for _ in 0..growth {
            // favour the newest vertex so trees get deep
            let i = if rng.below(2) == 0 {
                tree.len() - 1
            } else {
                rng.index(tree.len())
            };
            let (u, depth, deg) = tree[i];
            let cap = if u == root { usize::MAX } else { p.s };
            if depth >= p.r || deg + 1 > cap {
                continue;
            }
            let mut cands: Vec<HostVertex> = (0..copies)
                .filter(|&c| c != u.1)
                .map(|c| (u.0, c))
                .collect();
            for &w in base.neighbors(u.0) {
                cands.extend((0..copies).map(|c| (w, c)));
            }
            cands.retain(|v| !used.contains(v));
            if cands.is_empty() {
                continue;
            }
            let w = cands[rng.index(cands.len())];
            used.insert(w);
            tree[i].2 += 1;
            tree.push((w, depth + 1, 1));
            edges.push((u, w));
        }
        let mut set: Vec<HostVertex> = tree.iter().map(|t| t.0).collect();
        set.sort_unstable();
        branch_sets.push(BranchSet { root, set, edges });
    }
    let mut owner: BTreeMap<HostVertex, usize> = BTreeMap::new();
    for (x, b) in branch_sets.iter().enumerate() {
        for &v in &b.set {
            owner.insert(v, x);
        }
    }
    let mut at: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (&(v, _), &x) in &owner {
        at.entry(v).or_default().push(x);
    }
    let mut pattern_edges = BTreeSet::new();
    for (&v, xs) in &at {
        let mut touching: Vec<usize> = xs.clone();
        for w in base.neighbors(v) {
            touching.extend(at.get(w).into_iter().flatten());
        }
        for &x in xs {
            for &y in &touching {
                if x != y {
                    pattern_edges.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    let pattern = Graph::from_edges(branch_sets.len(), pattern_edges)?;
    Ok(RootedModel {
        base: base.clone(),
        copies,
        pattern,
        branch_sets,
    })
}

/// `binom(2ℓ+5+t, t) − 1`.
pub fn tw_bound(ell: u64, t: u64) -> BigUint {
    binomial(2 * ell + 5 + t, t) - 1u32
}

/// `ℓ(p+1)·binom(p+t, t)`.
pub fn centred_colouring_bound(ell: u64, p: u64, t: u64) -> BigUint {
    BigUint::from(ell) * (p + 1) * binomial(p + t, t)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
