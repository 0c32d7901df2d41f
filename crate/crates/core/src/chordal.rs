//! Chordal partition of a plane graph into trees `T_1, …, T_m`, where each
//! tree touches at most two earlier trees and those two touch each other.
//!
//! Each step takes the bridge of the current forest holding the lowest
//! uncovered vertex, grows a Steiner core around the attachments that face
//! the outer face, and adds the core's neighbours in the bridge as leaves.
//! Every structural claim about the construction is checked as it runs and
//! tallied in a [`ClaimLedger`]; a failed check aborts with a witness.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::claims::ClaimLedger;
use crate::embedding::{bridges, Bridge, EmbeddingError, RotationSystem, Subgraph, SubgraphFaces};
use crate::graph::{Edge, Graph, GraphError, Partition, Vertex};
use crate::steiner::{check_local_minimality, steiner_tree, SteinerOptions, SubTree};
use crate::treepart::TreeDecomposition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChordalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("tau must be positive")]
    BadTau,
    #[error("graph is not connected")]
    Disconnected,
    #[error("claim {claim} failed at step {step}: {witness}")]
    ClaimFailed {
        claim: String,
        step: usize,
        witness: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalOptions {
    pub tau: usize,
    pub steiner: SteinerOptions,
}

impl ChordalOptions {
    pub fn new(tau: usize) -> Self {
        ChordalOptions {
            tau,
            steiner: SteinerOptions::default(),
        }
    }
}

/// Everything fixed while building one tree. Tree indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalState {
    pub bridge: Bridge,
    pub attachments: Vec<Vertex>,
    pub earlier_trees: Vec<usize>,
    pub outer_attachments: Vec<Vertex>,
    pub core_terminals: Vec<Vertex>,
    pub core: SubTree,
    pub tree: SubTree,
    pub exact_core: bool,
}

impl ChordalState {
    /// Mask of `V(B_j − A_j)`.
    pub fn interior_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.bridge.interior() {
            m[v] = true;
        }
        m
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChordalPartitionResult {
    pub tau: usize,
    pub trees: Vec<SubTree>,
    pub states: Vec<ChordalState>,
    pub partition: Partition,
    /// Decomposition of the quotient by the trees, from the construction order.
    pub quotient_decomposition: TreeDecomposition,
    pub claims: ClaimLedger,
}

impl ChordalPartitionResult {
    /// Tree index of each vertex.
    pub fn owner(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.partition.n()];
        for (i, t) in self.trees.iter().enumerate() {
            for &v in &t.vertices {
                owner[v] = i;
            }
        }
        owner
    }
}

fn tree_subgraph(t: &SubTree) -> Subgraph {
    Subgraph::new(t.vertices.iter().copied(), t.edges.iter().copied())
}

struct Builder<'a> {
    rs: &'a RotationSystem,
    g: &'a Graph,
    opts: ChordalOptions,
    owner: Vec<usize>,
    trees: Vec<SubTree>,
    states: Vec<ChordalState>,
    live: Vec<Bridge>,
    claims: ClaimLedger,
    /// Non-trivial bridge vertex sets alive after each step.
    history: Vec<Vec<Vec<Vertex>>>,
}

impl Builder<'_> {
    fn check(
        &mut self,
        claim: &str,
        ok: bool,
        witness: impl FnOnce() -> String,
    ) -> Result<(), ChordalError> {
        if self.claims.record(claim, ok) {
            Ok(())
        } else {
            Err(ChordalError::ClaimFailed {
                claim: claim.to_string(),
                step: self.trees.len(),
                witness: witness(),
            })
        }
    }

    fn trees_touching(&self, vs: &[Vertex]) -> Vec<usize> {
        let mut ts: Vec<usize> = vs
            .iter()
            .map(|&v| self.owner[v])
            .filter(|&t| t != usize::MAX)
            .collect();
        ts.sort_unstable();
        ts.dedup();
        ts
    }

    fn step(&mut self) -> Result<bool, ChordalError> {
        let g = self.g;
        let n = g.n();
        let Some(lowest) = (0..n).find(|&v| self.owner[v] == usize::MAX) else {
            return Ok(false);
        };
        let bi = self
            .live
            .iter()
            .position(|b| {
                b.vertices.binary_search(&lowest).is_ok()
                    && b.attachments.binary_search(&lowest).is_err()
            })
            .expect("every uncovered vertex lies in a live bridge");
        let bridge = self.live.remove(bi);
        let attachments = bridge.attachments.clone();
        let earlier = self.trees_touching(&attachments);
        self.check("bridge_attaches_two_trees", earlier.len() <= 2, || {
            format!("{earlier:?}")
        })?;

        let mut j_graph = bridge.subgraph();
        for &i in &earlier {
            j_graph = j_graph.union(&tree_subgraph(&self.trees[i]));
        }
        let outer_attachments: Vec<Vertex> = {
            let faces = SubgraphFaces::new(self.rs, &j_graph)?;
            attachments
                .iter()
                .copied()
                .filter(|&a| faces.on_outer_boundary(a))
                .collect()
        };
        for &i in &earlier {
            let k = outer_attachments
                .iter()
                .filter(|&&a| self.owner[a] == i)
                .count();
            self.check("outer_attachments_per_tree", (1..=2).contains(&k), || {
                format!("tree {i} has {k} outer attachments")
            })?;
        }
        self.check(
            "outer_attachments_bound",
            outer_attachments.len() <= 4
                && (attachments.is_empty() || !outer_attachments.is_empty()),
            || format!("{outer_attachments:?}"),
        )?;

        let interior = {
            let mut m = vec![false; n];
            for v in bridge.interior() {
                m[v] = true;
            }
            m
        };
        let core_terminals: Vec<Vertex> = if attachments.is_empty() {
            let bs = bridge.subgraph();
            let faces = SubgraphFaces::new(self.rs, &bs)?;
            vec![faces.outer_vertices()[0]]
        } else {
            let mut dist = vec![usize::MAX; n];
            let mut q = VecDeque::new();
            for &a in &outer_attachments {
                dist[a] = 0;
                q.push_back(a);
            }
            while let Some(v) = q.pop_front() {
                if dist[v] == self.opts.tau {
                    continue;
                }
                for &w in g.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            (0..n)
                .filter(|&v| interior[v] && dist[v] <= self.opts.tau)
                .collect()
        };
        let delta = g.max_degree() as u128;
        let ball: u128 = (0..=self.opts.tau as u32)
            .fold(0u128, |s, i| s.saturating_add(delta.saturating_pow(i)));
        let bound = (outer_attachments.len().max(1) as u128).saturating_mul(ball);
        self.check(
            "core_terminal_bound",
            !core_terminals.is_empty() && (core_terminals.len() as u128) <= bound,
            || format!("|D| = {} against {bound}", core_terminals.len()),
        )?;

        let st =
            steiner_tree(g, &interior, &core_terminals, &self.opts.steiner).ok_or_else(|| {
                ChordalError::ClaimFailed {
                    claim: "core_reachable".into(),
                    step: self.trees.len(),
                    witness: format!("{core_terminals:?}"),
                }
            })?;
        let core = st.tree;
        let minimal = check_local_minimality(g, &interior, &core, &core_terminals);
        self.check("core_locally_minimal", minimal.is_ok(), || {
            minimal.clone().unwrap_err()
        })?;

        let mut in_core = vec![false; n];
        for &v in &core.vertices {
            in_core[v] = true;
        }
        let mut vertices = core.vertices.clone();
        let mut edges: Vec<Edge> = core.edges.clone();
        for v in 0..n {
            if interior[v] && !in_core[v] {
                if let Some(&c) = g.neighbors(v).iter().find(|&&w| in_core[w]) {
                    vertices.push(v);
                    edges.push((c, v));
                }
            }
        }
        let tree = SubTree::from_edges(core.root, vertices, edges);
        let idx = self.trees.len();
        for &v in &tree.vertices {
            self.owner[v] = idx;
        }

        // bridges of the new forest inside the chosen bridge
        let mut rest = interior.clone();
        for &v in &tree.vertices {
            rest[v] = false;
        }
        let mut fresh = Vec::new();
        for comp in g.components(Some(&rest)) {
            let mut vs = comp.clone();
            let mut es = Vec::new();
            let mut att = Vec::new();
            for &v in &comp {
                for &w in g.neighbors(v) {
                    if rest[w] {
                        if v < w {
                            es.push((v, w));
                        }
                    } else {
                        att.push(w);
                        es.push((v.min(w), v.max(w)));
                    }
                }
            }
            att.sort_unstable();
            att.dedup();
            vs.extend(&att);
            vs.sort_unstable();
            vs.dedup();
            es.sort_unstable();
            fresh.push(Bridge {
                vertices: vs,
                edges: es,
                attachments: att,
                trivial: false,
            });
        }

        self.trees.push(tree.clone());
        self.states.push(ChordalState {
            bridge: bridge.clone(),
            attachments,
            earlier_trees: earlier.clone(),
            outer_attachments: outer_attachments.clone(),
            core_terminals: core_terminals.clone(),
            core: core.clone(),
            tree: tree.clone(),
            exact_core: st.exact,
        });

        for b in &fresh {
            self.check_fresh_bridge(b, &core)?;
        }

        if earlier.len() == 2 {
            let ok = self.core_separates(&bridge, &core, earlier[0], earlier[1]);
            self.check("core_separates_earlier_trees", ok, || {
                format!("trees {earlier:?}")
            })?;
        }
        for &i in &earlier {
            let ok = bridge.edges.iter().any(|&(u, v)| {
                let hit = |a: Vertex, d: Vertex| {
                    self.owner[a] == i
                        && outer_attachments.contains(&a)
                        && core_terminals.binary_search(&d).is_ok()
                };
                hit(u, v) || hit(v, u)
            });
            self.check("earlier_tree_meets_core", ok, || format!("tree {i}"))?;
        }

        self.live.extend(fresh);
        self.live.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        self.audit_bridges(&bridge)?;
        Ok(true)
    }

    /// Invariant clauses for a bridge of the new forest, plus the absence of
    /// attachments on the new core.
    fn check_fresh_bridge(&mut self, b: &Bridge, core: &SubTree) -> Result<(), ChordalError> {
        let touching = self.trees_touching(&b.attachments);
        self.check("bridge_attaches_two_trees", touching.len() <= 2, || {
            format!("{touching:?}")
        })?;
        let bs = b.subgraph();
        let faces = SubgraphFaces::new(self.rs, &bs)?;
        for &i in &touching {
            let t = &self.trees[i];
            let outer = faces.contains_in_outer_closure(&tree_subgraph(t));
            let leaves = b
                .attachments
                .iter()
                .filter(|&&a| self.owner[a] == i)
                .all(|&a| t.degree(a) <= 1);
            self.check("bridge_outer_leaves", outer && leaves, || {
                format!("bridge {:?} against tree {i}", b.attachments)
            })?;
        }
        if let [i, k] = touching[..] {
            let ti = tree_subgraph(&self.trees[i]);
            let tk = tree_subgraph(&self.trees[k]);
            let with_k = tk.union(&bs);
            let with_i = ti.union(&bs);
            let a = SubgraphFaces::new(self.rs, &with_k)?.contains_in_outer_closure(&ti);
            let c = SubgraphFaces::new(self.rs, &with_i)?.contains_in_outer_closure(&tk);
            self.check("bridge_mutual_outer", a && c, || format!("trees {i}, {k}"))?;
        }
        let clean = b.attachments.iter().all(|&a| !core.contains(a));
        self.check("no_attachment_on_core", clean, || {
            format!("{:?}", b.attachments)
        })
    }

    /// No path from `T_a` to `T_b` in `T_a ∪ T_b ∪ B − V(core)`.
    fn core_separates(&self, bridge: &Bridge, core: &SubTree, a: usize, b: usize) -> bool {
        let n = self.g.n();
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let all_edges = bridge
            .edges
            .iter()
            .chain(&self.trees[a].edges)
            .chain(&self.trees[b].edges);
        for &(u, v) in all_edges {
            if !core.contains(u) && !core.contains(v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<Vertex> = self.trees[a].vertices.clone();
        for &v in &stack {
            seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            if self.owner[v] == b {
                return false;
            }
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        true
    }

    /// Recomputes all bridges of the current forest from scratch and checks
    /// them against the incremental list and the chosen bridge.
    fn audit_bridges(&mut self, chosen: &Bridge) -> Result<(), ChordalError> {
        let n = self.g.n();
        let j = self.trees.len() - 1;
        let mut fv = Vec::new();
        let mut fe = Vec::new();
        for t in &self.trees {
            fv.extend(&t.vertices);
            fe.extend(&t.edges);
        }
        let forest = Subgraph::new(fv, fe);
        let all = bridges(self.g, &forest);
        let mut in_chosen = vec![false; n];
        for &v in &chosen.vertices {
            in_chosen[v] = true;
        }
        let chosen_edges = chosen.subgraph();
        for b in &all {
            let touches = b.attachments.iter().any(|&a| self.owner[a] == j);
            let inside = b.vertices.iter().all(|&v| in_chosen[v])
                && b.edges.iter().all(|&(u, v)| chosen_edges.has_edge(u, v));
            self.check("bridge_inside_iff_attached", touches == inside, || {
                format!("bridge {:?} / {:?}", b.vertices, b.edges)
            })?;
        }
        let nontrivial: Vec<Vec<Vertex>> = all
            .iter()
            .filter(|b| !b.trivial)
            .map(|b| b.vertices.clone())
            .collect();
        let mut live: Vec<Vec<Vertex>> = self.live.iter().map(|b| b.vertices.clone()).collect();
        let mut sorted = nontrivial.clone();
        sorted.sort();
        live.sort();
        self.check("bridge_list_consistent", sorted == live, || {
            "incremental bridge list diverged".into()
        })?;
        self.history.push(nontrivial);
        Ok(())
    }
}

/// Builds the chordal partition. `rs` must embed a connected graph.
pub fn build_chordal_partition(
    rs: &RotationSystem,
    opts: &ChordalOptions,
) -> Result<ChordalPartitionResult, ChordalError> {
    if opts.tau == 0 {
        return Err(ChordalError::BadTau);
    }
    let g = rs.graph();
    let n = g.n();
    if !g.is_connected() {
        return Err(ChordalError::Disconnected);
    }
    let mut b = Builder {
        rs,
        g,
        opts: *opts,
        owner: vec![usize::MAX; n],
        trees: Vec::new(),
        states: Vec::new(),
        live: bridges(g, &Subgraph::new([], []))
            .into_iter()
            .filter(|b| !b.trivial)
            .collect(),
        claims: ClaimLedger::default(),
        history: Vec::new(),
    };
    while b.step()? {}

    // every bridge alive after step j is picked at a later step
    let picked: std::collections::BTreeMap<Vec<Vertex>, usize> = b
        .states
        .iter()
        .enumerate()
        .map(|(k, s)| (s.bridge.vertices.clone(), k))
        .collect();
    let history = std::mem::take(&mut b.history);
    for (j, alive) in history.iter().enumerate() {
        for vs in alive {
            let ok = picked.get(vs).is_some_and(|&k| k > j);
            b.check("bridge_picked_later", ok, || {
                format!("bridge {vs:?} after step {j}")
            })?;
        }
    }

    let trees_ok = b.trees.iter().all(|t| t.is_tree(n));
    b.check("parts_are_trees", trees_ok, || {
        "a part is not a tree".into()
    })?;
    let partition = Partition::from_parts(n, b.trees.iter().map(|t| t.vertices.clone()).collect())?;

    // each tree sees at most two earlier trees, which see each other
    let owner = b.owner.clone();
    let m = b.trees.len();
    let mut earlier_nbrs: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut adjacent = std::collections::BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, c) = (owner[u], owner[v]);
        if a != c {
            let (lo, hi) = (a.min(c), a.max(c));
            adjacent.insert((lo, hi));
            earlier_nbrs[hi].push(lo);
        }
    }
    for j in 0..m {
        let nb = &mut earlier_nbrs[j];
        nb.sort_unstable();
        nb.dedup();
        let within = nb.iter().all(|i| b.states[j].earlier_trees.contains(i));
        let ok = within && nb.len() <= 2 && (nb.len() < 2 || adjacent.contains(&(nb[0], nb[1])));
        let nbs = nb.clone();
        b.check("quotient_chordal", ok, || {
            format!("tree {j} sees earlier trees {nbs:?}")
        })?;
    }
    let bags: Vec<Vec<Vertex>> = (0..m)
        .map(|j| {
            let mut bag = earlier_nbrs[j].clone();
            bag.push(j);
            bag
        })
        .collect();
    let tree_edges: Vec<(usize, usize)> = (1..m)
        .map(|j| (earlier_nbrs[j].last().copied().unwrap_or(j - 1), j))
        .collect();
    let quotient = Graph::from_edges(m, adjacent.iter().copied())?;
    let td =
        TreeDecomposition::new(bags, tree_edges, 0).map_err(|e| ChordalError::ClaimFailed {
            claim: "quotient_width_two".into(),
            step: m,
            witness: e.to_string(),
        })?;
    let valid = td.validate(&quotient).is_ok() && td.width() <= 2;
    b.check("quotient_width_two", valid, || {
        format!("width {}", td.width())
    })?;

    Ok(ChordalPartitionResult {
        tau: opts.tau,
        trees: b.trees,
        states: b.states,
        partition,
        quotient_decomposition: td,
        claims: b.claims,
    })
}
