//! Seeded instance factories. Every instance carries its certificates
//! (embedding, decomposition, girth) and re-checks them before returning.
//!
//! Randomness comes from SplitMix64. From seed 1234567 the first outputs are
//! 6457827717110365317, 3203168211198807973, 9817491932198370423,
//! 4593380528125082431 and 16408922859458223821. Bounded draws use
//! rejection: `x` is redrawn while `x < 2^64 mod n`, then `x mod n` is
//! returned. Shuffles are Fisher-Yates from the top index down.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::blocking::girth;
use crate::embedding::{EmbeddingError, RotationSystem};
use crate::graph::{bfs_layering, Graph, GraphError, Layering, Partition, Vertex};
use crate::surface::VerticalPathTree;
use crate::treepart::{TreeDecomposition, TreePartError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Decomposition(#[from] TreePartError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no instance found within {tries} tries")]
    RetryBudget { tries: u64 },
}

/// Seeded SplitMix64 stream with the bounded draws used by all generators.
#[derive(Debug, Clone)]
pub struct Seeded {
    rng: SplitMix64,
}

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridInstance {
    pub graph: Graph,
    pub embedding: RotationSystem,
    pub decomposition: TreeDecomposition,
}

/// `rows × cols` grid; vertex `r * cols + c`. Rotations are counterclockwise
/// (east, north, west, south) with the bottom row on the outer face.
pub fn grid(rows: usize, cols: usize) -> Result<GridInstance, GenError> {
    if rows == 0 || cols == 0 {
        return Err(GenError::Params(
            "grid needs at least one row and column".into(),
        ));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut rotation = vec![Vec::new(); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let rot = &mut rotation[id(r, c)];
            if c + 1 < cols {
                rot.push(id(r, c + 1));
            }
            if r + 1 < rows {
                rot.push(id(r + 1, c));
            }
            if c > 0 {
                rot.push(id(r, c - 1));
            }
            if r > 0 {
                rot.push(id(r - 1, c));
            }
        }
    }
    let outer = (rows * cols > 1).then_some((0, 1));
    let embedding = RotationSystem::new(rotation, outer)?;
    let graph = embedding.graph().clone();
    // sliding window of width+1 consecutive vertices along the longer side
    let n = rows * cols;
    let (short, order): (usize, Vec<Vertex>) = if cols <= rows {
        (cols, (0..n).collect())
    } else {
        (
            rows,
            (0..cols)
                .flat_map(|c| (0..rows).map(move |r| id(r, c)))
                .collect(),
        )
    };
    let decomposition = if n <= short + 1 {
        TreeDecomposition::new(vec![order], Vec::new(), 0)?
    } else {
        let bags: Vec<Vec<Vertex>> = (0..n - short)
            .map(|i| order[i..=i + short].to_vec())
            .collect();
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags, edges, 0)?
    };
    decomposition.validate(&graph)?;
    Ok(GridInstance {
        graph,
        embedding,
        decomposition,
    })
}

/// Complete `branching`-ary tree of the given height, in BFS order (the
/// children of `v` are `b·v + 1 ..= b·v + b`).
pub fn complete_kary_tree(branching: usize, height: usize) -> Result<Graph, GenError> {
    if branching == 0 {
        return Err(GenError::Params("branching must be positive".into()));
    }
    let mut n: usize = 0;
    let mut level: usize = 1;
    for _ in 0..=height {
        n = n
            .checked_add(level)
            .ok_or_else(|| GenError::Params("tree too large".into()))?;
        level = level.saturating_mul(branching);
    }
    Ok(Graph::from_edges(
        n,
        (1..n).map(|v| ((v - 1) / branching, v)),
    )?)
}

/// Width-1 decomposition of a forest: one bag per edge, hung below the bag of
/// the edge to the parent. Isolated vertices get their own bags.
pub fn forest_decomposition(g: &Graph) -> Result<TreeDecomposition, GenError> {
    let mut parent = vec![usize::MAX; g.n()];
    let mut parent_bag = vec![usize::MAX; g.n()];
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for s in 0..g.n() {
        if parent[s] != usize::MAX {
            continue;
        }
        parent[s] = s;
        let first = bags.len();
        roots.push(first);
        bags.push(vec![s]);
        parent_bag[s] = first;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    let b = bags.len();
                    bags.push(vec![v.min(w), v.max(w)]);
                    edges.push((parent_bag[v], b));
                    parent_bag[w] = b;
                    stack.push(w);
                } else if parent[v] != w && parent[w] != v {
                    return Err(GenError::Params("graph has a cycle".into()));
                }
            }
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    let td = TreeDecomposition::new(bags, edges, 0)?;
    td.validate(g)?;
    Ok(td)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Triangulation {
    pub graph: Graph,
    pub embedding: RotationSystem,
}

/// Stacked triangulation: start from the counterclockwise triangle 0, 1, 2
/// and insert each new vertex into a uniformly chosen inner face.
pub fn stacked_triangulation(n: usize, seed: u64) -> Result<Triangulation, GenError> {
    if n < 3 {
        return Err(GenError::Params("a triangulation needs 3 vertices".into()));
    }
    let mut rng = Seeded::new(seed);
    let mut rotation: Vec<Vec<Vertex>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2]];
    let insert_after = |rot: &mut Vec<Vertex>, after: Vertex, v: Vertex| {
        let i = rot.iter().position(|&x| x == after).expect("face corner");
        rot.insert(i + 1, v);
    };
    for v in 3..n {
        let f = rng.index(faces.len());
        let [a, b, c] = faces[f];
        insert_after(&mut rotation[a], b, v);
        insert_after(&mut rotation[b], c, v);
        insert_after(&mut rotation[c], a, v);
        rotation.push(vec![a, b, c]);
        faces[f] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    let embedding = RotationSystem::new(rotation, Some((0, 1)))?;
    if embedding.faces().len() != 2 * n - 4 {
        return Err(GenError::Params("face count mismatch".into()));
    }
    Ok(Triangulation {
        graph: embedding.graph().clone(),
        embedding,
    })
}

/// Pairing model for `d`-regular graphs on `n` vertices: shuffle `dn` points,
/// pair them off, reject loops, parallel edges and girth below `min_girth`.
pub fn regular_pairing(
    n: usize,
    d: usize,
    min_girth: usize,
    seed: u64,
    tries: u64,
) -> Result<Graph, GenError> {
    if n * d % 2 == 1 || d >= n {
        return Err(GenError::Params(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    let mut rng = Seeded::new(seed);
    for _ in 0..tries {
        let mut points: Vec<Vertex> = (0..n * d).map(|p| p / d).collect();
        rng.shuffle(&mut points);
        let pairs = points.chunks(2).map(|p| (p[0], p[1]));
        let Ok(g) = Graph::from_edges(n, pairs) else {
            continue;
        };
        if girth(&g, min_girth.saturating_sub(1)).is_none_or(|gi| gi >= min_girth) {
            return Ok(g);
        }
    }
    Err(GenError::RetryBudget { tries })
}

const K5_EDGES: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Net voltage coefficients (over the six non-tree edges of K5) of every
/// closed non-backtracking walk in K5 of length at most `max_len`, up to sign.
fn k5_walk_vectors(max_len: usize) -> Vec<[i32; 6]> {
    let mut out = std::collections::BTreeSet::new();
    let edge_index = |u: usize, v: usize| -> (usize, i32) {
        let i = K5_EDGES
            .iter()
            .position(|&e| e == (u.min(v), u.max(v)))
            .unwrap();
        (i, if u < v { 1 } else { -1 })
    };
    fn walk(
        start: usize,
        prev: usize,
        at: usize,
        len: usize,
        max_len: usize,
        coef: &mut [i32; 6],
        out: &mut std::collections::BTreeSet<[i32; 6]>,
        edge_index: &dyn Fn(usize, usize) -> (usize, i32),
    ) {
        for next in 0..5 {
            if next == at || next == prev {
                continue;
            }
            let (i, s) = edge_index(at, next);
            if i >= 4 {
                coef[i - 4] += s;
            }
            if next == start && len + 1 >= 3 {
                let neg = coef.map(|x| -x);
                out.insert(std::cmp::max(*coef, neg));
            }
            if len + 1 < max_len {
                walk(start, at, next, len + 1, max_len, coef, out, edge_index);
            }
            if i >= 4 {
                coef[i - 4] -= s;
            }
        }
    }
    for s in 0..5 {
        let mut coef = [0; 6];
        walk(
            s,
            usize::MAX,
            s,
            0,
            max_len,
            &mut coef,
            &mut out,
            &edge_index,
        );
    }
    out.into_iter().collect()
}

/// 4-regular graph on `5m` vertices with girth at least `min_girth`, as a
/// cyclic lift of K5 over `Z_m`: vertex `(i, a)` is `i·m + a`, and an edge
/// `ij` of voltage `α` joins `(i, a)` to `(j, a + α)`. The four edges at
/// vertex 0 carry voltage 0. Voltages are found by a seeded local search
/// that lowers the number of short closed walks with zero net voltage.
pub fn k5_lift(m: usize, min_girth: usize, seed: u64, tries: u64) -> Result<Graph, GenError> {
    if m < 2 {
        return Err(GenError::Params("lift order must be at least 2".into()));
    }
    let vectors = k5_walk_vectors(min_girth.saturating_sub(1));
    let bad = |volt: &[i64; 6]| -> usize {
        vectors
            .iter()
            .filter(|c| {
                c.iter()
                    .zip(volt)
                    .map(|(&a, &b)| a as i64 * b)
                    .sum::<i64>()
                    .rem_euclid(m as i64)
                    == 0
            })
            .count()
    };
    let mut rng = Seeded::new(seed);
    let mut volt = [0i64; 6];
    for x in volt.iter_mut() {
        *x = rng.below(m as u64) as i64;
    }
    let mut score = bad(&volt);
    let mut spent = 0;
    while score > 0 {
        if spent == tries {
            return Err(GenError::RetryBudget { tries });
        }
        spent += 1;
        let i = rng.index(6);
        let old = volt[i];
        volt[i] = rng.below(m as u64) as i64;
        let s = bad(&volt);
        if s <= score {
            score = s;
        } else {
            volt[i] = old;
        }
    }
    let mut edges = Vec::with_capacity(10 * m);
    for (e, &(u, v)) in K5_EDGES.iter().enumerate() {
        let alpha = if e < 4 { 0 } else { volt[e - 4] as usize };
        for a in 0..m {
            edges.push((u * m + a, v * m + (a + alpha) % m));
        }
    }
    let g = Graph::from_edges(5 * m, edges)?;
    match girth(&g, min_girth.saturating_sub(1)) {
        Some(gi) if gi < min_girth => Err(GenError::Params(format!(
            "lift girth {gi} below {min_girth}"
        ))),
        _ => Ok(g),
    }
}

/// 4-regular graph on `n` vertices with girth at least `min_girth`. Girth up
/// to 5 uses the pairing model; larger girth uses [`k5_lift`] and needs `n`
/// divisible by 5, since rejection sampling practically never reaches it.
pub fn regular_high_girth(
    n: usize,
    min_girth: usize,
    seed: u64,
    tries: u64,
) -> Result<Graph, GenError> {
    if min_girth <= 5 {
        regular_pairing(n, 4, min_girth, seed, tries)
    } else if n.is_multiple_of(5) {
        k5_lift(n / 5, min_girth, seed, tries)
    } else {
        Err(GenError::Params(format!(
            "girth {min_girth} needs n divisible by 5"
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialKTree {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
}

/// Random partial `k`-tree: grow a `k`-tree by stacking each new vertex on a
/// random `k`-clique whose members still have degree below `max_degree`,
/// then keep each edge with probability 1/2. The clique bags form a
/// decomposition of width `k`.
pub fn partial_k_tree(
    n: usize,
    k: usize,
    max_degree: usize,
    seed: u64,
) -> Result<PartialKTree, GenError> {
    if k == 0 || n < k + 1 || max_degree < k + 1 {
        return Err(GenError::Params(format!(
            "partial {k}-tree on {n} vertices with Δ ≤ {max_degree}"
        )));
    }
    let mut rng = Seeded::new(seed);
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    for u in 0..=k {
        for v in u + 1..=k {
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    let mut bags: Vec<Vec<Vertex>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    // (clique, bag holding it)
    let mut cliques: Vec<(Vec<Vertex>, usize)> = (0..=k)
        .map(|skip| ((0..=k).filter(|&x| x != skip).collect(), 0))
        .collect();
    let mut placed = k + 1;
    while placed < n {
        let open: Vec<usize> = (0..cliques.len())
            .filter(|&i| cliques[i].0.iter().all(|&u| degree[u] < max_degree))
            .collect();
        if open.is_empty() {
            break;
        }
        let (clique, holder) = cliques[open[rng.index(open.len())]].clone();
        let v = placed;
        placed += 1;
        for &u in &clique {
            edges.push((u, v));
            degree[u] += 1;
        }
        degree[v] = k;
        let mut bag = clique.clone();
        bag.push(v);
        let b = bags.len();
        bags.push(bag);
        tree.push((holder, b));
        for skip in 0..k {
            let mut c: Vec<Vertex> = clique
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, x)| x)
                .collect();
            c.push(v);
            cliques.push((c, b));
        }
    }
    let kept: Vec<(Vertex, Vertex)> = edges.into_iter().filter(|_| rng.below(2) == 1).collect();
    let graph = Graph::from_edges(placed, kept)?;
    let decomposition = TreeDecomposition::new(bags, tree, 0)?;
    decomposition.validate(&graph)?;
    Ok(PartialKTree {
        graph,
        decomposition,
    })
}

/// Connected partition grown greedily: the lowest unassigned vertex starts a
/// part, which takes unassigned vertices in BFS order up to `max_width`.
pub fn bfs_ball_partition(g: &Graph, max_width: usize) -> Result<Partition, GenError> {
    if max_width == 0 {
        return Err(GenError::Params("parts need at least one vertex".into()));
    }
    let mut taken = vec![false; g.n()];
    let mut parts = Vec::new();
    for s in 0..g.n() {
        if taken[s] {
            continue;
        }
        taken[s] = true;
        let mut part = vec![s];
        let mut head = 0;
        while head < part.len() && part.len() < max_width {
            let v = part[head];
            head += 1;
            for &w in g.neighbors(v) {
                if !taken[w] && part.len() < max_width {
                    taken[w] = true;
                    part.push(w);
                }
            }
        }
        parts.push(part);
    }
    Ok(Partition::from_parts(g.n(), parts)?)
}

/// Layered graph with designated vertical paths: a root above a grid, joined
/// to the whole top row, with `2g` grid columns turned into vertical paths
/// from the root and seeded same-row chords between consecutive designated
/// columns. Removing the paths leaves a subgraph of the grid, whose plane
/// embedding is `planar_part` (grid ids, root excluded).
#[derive(Debug, Clone)]
pub struct LayeredGenusInstance {
    pub graph: Graph,
    pub layering: Layering,
    pub tree: VerticalPathTree,
    pub genus: usize,
    pub columns: Vec<usize>,
    pub planar_part: RotationSystem,
}

pub fn layered_genus_instance(
    genus: usize,
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<LayeredGenusInstance, GenError> {
    if rows == 0 || cols < (2 * genus).max(1) {
        return Err(GenError::Params(
            "need rows >= 1 and at least max(2g, 1) columns".into(),
        ));
    }
    let gi = grid(rows, cols)?;
    let root = rows * cols;
    let id = |r: usize, c: usize| r * cols + c;
    let mut rng = Seeded::new(seed);
    let mut all: Vec<usize> = (0..cols).collect();
    rng.shuffle(&mut all);
    let mut columns = all[..2 * genus].to_vec();
    columns.sort_unstable();

    let mut edges: Vec<(Vertex, Vertex)> = gi.graph.edges().collect();
    edges.extend((0..cols).map(|c| (root, id(0, c))));
    for w in columns.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b == a + 1 {
            continue;
        }
        for _ in 0..1 + rng.index(3) {
            let r = rng.index(rows);
            edges.push((id(r, a), id(r, b)));
        }
    }
    let graph = Graph::from_edges_dedup(root + 1, edges)?;
    let layering = bfs_layering(&graph, root)?;
    let tree = VerticalPathTree {
        paths: columns
            .iter()
            .map(|&c| {
                std::iter::once(root)
                    .chain((0..rows).map(|r| id(r, c)))
                    .collect()
            })
            .collect(),
    };
    Ok(LayeredGenusInstance {
        graph,
        layering,
        tree,
        genus,
        columns,
        planar_part: gi.embedding,
    })
}

/// SHA-256 of the compact JSON encoding, hex-encoded.
pub fn content_hash<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serialisable");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub generator: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn add<T: Serialize>(
        &mut self,
        name: &str,
        generator: &str,
        seed: u64,
        params: serde_json::Value,
        value: &T,
    ) {
        self.entries.push(ManifestEntry {
            name: name.to_string(),
            generator: generator.to_string(),
            seed,
            params,
            sha256: content_hash(value),
        });
    }
}
