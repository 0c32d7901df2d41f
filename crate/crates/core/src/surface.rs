//! Lifting blocking partitions from plane graphs to graphs on surfaces.
//!
//! A tree made of at most `2g` vertical paths is cut into slabs of BFS layers.
//! Short connecting paths are absorbed until no path of length `ℓ` joins two
//! pieces of a slab. The resulting partition `𝓩` of a subgraph `Z` is then
//! merged with a blocking partition of the planar remainder `G − V(Z)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{
    blocking_number, verify_ell_blocking, verify_z_property, BlockingError, SearchOptions, Verdict,
};
use crate::chordal::{build_chordal_partition, ChordalError, ChordalOptions};
use crate::claims::ClaimLedger;
use crate::embedding::{EmbeddingError, RotationSystem};
use crate::graph::{Graph, GraphError, Layering, Partition, SubPartition, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error("invalid vertical paths: {0}")]
    InvalidPaths(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("ell_z = {ell_z} is below 4 * ell_p + 7 = {}", 4 * ell_p + 7)]
    Closure { ell_p: usize, ell_z: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget exhausted while checking {0}")]
    Budget(String),
    #[error("claim {claim} failed at step {step}: {detail}")]
    Assertion {
        claim: String,
        step: usize,
        detail: String,
    },
}

/// A tree given as the union of vertical paths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalPathTree {
    pub paths: Vec<Vec<Vertex>>,
}

impl VerticalPathTree {
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.paths.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Each path is a path of `g` that meets every layer at most once, and
    /// the union is a tree.
    pub fn validate(&self, g: &Graph, layering: &Layering) -> Result<(), SurfaceError> {
        let mut edges = Vec::new();
        for (i, p) in self.paths.iter().enumerate() {
            if p.is_empty() {
                return Err(SurfaceError::InvalidPaths(format!("path {i} is empty")));
            }
            for &v in p {
                g.check_vertex(v)?;
            }
            for w in p.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(SurfaceError::InvalidPaths(format!(
                        "path {i}: {} and {} are not adjacent",
                        w[0], w[1]
                    )));
                }
                if layering.layer_of[w[0]] == layering.layer_of[w[1]] {
                    return Err(SurfaceError::InvalidPaths(format!(
                        "path {i} stays in layer {}",
                        layering.layer_of[w[0]]
                    )));
                }
                edges.push((w[0].min(w[1]), w[0].max(w[1])));
            }
            let mut layers: Vec<usize> = p.iter().map(|&v| layering.layer_of[v]).collect();
            layers.sort_unstable();
            if layers.windows(2).any(|w| w[0] == w[1]) {
                return Err(SurfaceError::InvalidPaths(format!(
                    "path {i} meets a layer twice"
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let verts = self.vertices();
        if !verts.is_empty() {
            let h = Graph::from_edges(g.n(), edges.iter().copied())?;
            let mut mask = vec![false; g.n()];
            for &v in &verts {
                mask[v] = true;
            }
            if edges.len() + 1 != verts.len() || h.components(Some(&mask)).len() != 1 {
                return Err(SurfaceError::InvalidPaths(
                    "union of the paths is not a tree".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabStep {
    /// Last layer covered after this step.
    pub last_layer: usize,
    pub absorbed_paths: usize,
    pub parts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusZResult {
    pub z_vertices: Vec<Vertex>,
    pub partition: SubPartition,
    pub steps: Vec<SlabStep>,
    pub width_bound: usize,
    pub claims: ClaimLedger,
}

/// `2g((5g+1)ℓ+3)`.
pub fn genus_z_width_bound(genus: usize, ell: usize) -> usize {
    2 * genus * ((5 * genus + 1) * ell + 3)
}

fn components_of(g: &Graph, mask: &[bool]) -> (Vec<Vec<Vertex>>, Vec<usize>) {
    let comps = g.components(Some(mask));
    let mut comp_of = vec![usize::MAX; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    (comps, comp_of)
}

/// Shortest path of length at most `ell` in `G − blocked` joining two
/// components of `in_x`; lexicographically least among the shortest.
fn shortest_connecting_path(
    g: &Graph,
    blocked: &[bool],
    in_x: &[bool],
    comp_of: &[usize],
    comps: usize,
    ell: usize,
) -> Option<Vec<Vertex>> {
    let n = g.n();
    // distances to other components through vertices outside X
    let dist_to_others = |c: usize| {
        let mut dist = vec![usize::MAX; n];
        let mut q = std::collections::VecDeque::new();
        for v in 0..n {
            if in_x[v] && comp_of[v] != c {
                dist[v] = 0;
                q.push_back(v);
            }
        }
        while let Some(v) = q.pop_front() {
            if dist[v] >= ell {
                continue;
            }
            for &w in g.neighbors(v) {
                if !blocked[w] && !in_x[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    };
    let step_len = |dist: &[usize], c: usize, w: Vertex| -> Option<usize> {
        if in_x[w] {
            (comp_of[w] != c).then_some(1)
        } else if !blocked[w] && dist[w] < ell {
            Some(dist[w] + 1)
        } else {
            None
        }
    };
    let mut best: Option<(usize, Vertex)> = None;
    for c in 0..comps {
        let dist = dist_to_others(c);
        for s in (0..n).filter(|&v| in_x[v] && comp_of[v] == c) {
            if let Some(len) = g
                .neighbors(s)
                .iter()
                .filter_map(|&w| step_len(&dist, c, w))
                .min()
            {
                if len <= ell && best.is_none_or(|b| (len, s) < b) {
                    best = Some((len, s));
                }
            }
        }
    }
    let (len, s) = best?;
    let c = comp_of[s];
    let dist = dist_to_others(c);
    let mut path = vec![s];
    let mut rem = len;
    let mut cur = s;
    while rem > 0 {
        let next = if cur == s {
            g.neighbors(cur)
                .iter()
                .copied()
                .find(|&w| step_len(&dist, c, w) == Some(rem))
        } else if rem == 1 {
            g.neighbors(cur)
                .iter()
                .copied()
                .find(|&w| in_x[w] && comp_of[w] != c)
        } else {
            g.neighbors(cur)
                .iter()
                .copied()
                .find(|&w| !in_x[w] && !blocked[w] && dist[w] == rem - 1)
        }
        .expect("shortest path continues");
        path.push(next);
        cur = next;
        rem -= 1;
    }
    Some(path)
}

struct Steps<'a> {
    claims: &'a mut ClaimLedger,
    step: usize,
}

impl Steps<'_> {
    fn check(
        &mut self,
        claim: &str,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) -> Result<(), SurfaceError> {
        if self.claims.record(claim, ok) {
            Ok(())
        } else {
            Err(SurfaceError::Assertion {
                claim: claim.into(),
                step: self.step,
                detail: detail(),
            })
        }
    }
}

/// Builds `Z` and `𝓩` slab by slab, checking every step's properties. The
/// per-step clean-path check runs the bounded search with `opts`.
pub fn genus_z_partition(
    g: &Graph,
    layering: &Layering,
    tree: &VerticalPathTree,
    genus: usize,
    ell: usize,
    opts: &SearchOptions,
) -> Result<GenusZResult, SurfaceError> {
    let n = g.n();
    if ell == 0 {
        return Err(SurfaceError::Params("ell must be positive".into()));
    }
    if tree.paths.len() > 2 * genus {
        return Err(SurfaceError::Params(format!(
            "{} paths exceed 2g = {}",
            tree.paths.len(),
            2 * genus
        )));
    }
    layering.validate(g)?;
    tree.validate(g, layering)?;
    let width_bound = genus_z_width_bound(genus, ell);
    let mut claims = ClaimLedger::default();
    if tree.paths.is_empty() {
        return Ok(GenusZResult {
            z_vertices: Vec::new(),
            partition: SubPartition::empty(n),
            steps: Vec::new(),
            width_bound,
            claims,
        });
    }
    let layer = &layering.layer_of;
    let t_verts = tree.vertices();

    let root = layering.root;
    let mut in_z = vec![false; n];
    in_z[root] = true;
    let mut parts: Vec<Vec<Vertex>> = vec![vec![root]];
    let mut xs = vec![0usize];
    let mut steps = vec![SlabStep {
        last_layer: 0,
        absorbed_paths: 0,
        parts: 1,
    }];
    let slab = 3 * genus * ell + 1;

    while t_verts.iter().any(|&v| !in_z[v]) {
        let i = xs.len();
        let mut ck = Steps {
            claims: &mut claims,
            step: i,
        };
        let x_prev = xs[i - 1];
        let mut x = x_prev + slab;
        let mut absorbed: Vec<Vertex> = Vec::new();
        let mut absorptions = 0;
        let mut last_count = usize::MAX;
        let (in_x, comps) = loop {
            let mut in_x = vec![false; n];
            for &v in &t_verts {
                if layer[v] > x_prev && layer[v] <= x {
                    in_x[v] = true;
                }
            }
            for &v in &absorbed {
                in_x[v] = true;
            }
            let (comps, comp_of) = components_of(g, &in_x);
            ck.check("absorption_merges", comps.len() < last_count, || {
                format!(
                    "{} pieces after absorbing, {} before",
                    comps.len(),
                    last_count
                )
            })?;
            last_count = comps.len();
            match shortest_connecting_path(g, &in_z, &in_x, &comp_of, comps.len(), ell) {
                None => break (in_x, comps),
                Some(p) => {
                    absorptions += 1;
                    x = x.max(p.iter().map(|&v| layer[v]).max().expect("nonempty path"));
                    absorbed.extend(p);
                }
            }
        };
        ck.check("absorption_count", absorptions < 2 * genus.max(1), || {
            format!("{absorptions} absorptions")
        })?;

        // (1) slab end
        ck.check(
            "slab_end_window",
            x > x_prev + 3 * genus * ell && x <= x_prev + 5 * genus * ell + 1,
            || format!("x = {x} after {x_prev}"),
        )?;
        // (2) T-slab ⊆ X_i ⊆ V[x_{i−2} + ℓ + 1, x_i]
        let low = if i >= 2 { xs[i - 2] + ell + 1 } else { 0 };
        let t_slab_in = t_verts
            .iter()
            .filter(|&&v| layer[v] > x_prev && layer[v] <= x)
            .all(|&v| in_x[v]);
        let x_verts: Vec<Vertex> = (0..n).filter(|&v| in_x[v]).collect();
        let within = x_verts.iter().all(|&v| layer[v] >= low && layer[v] <= x);
        ck.check("slab_layers", t_slab_in && within, || {
            format!("slab ({low}..={x}) violated")
        })?;
        // (4) disjoint from the previous prefix
        ck.check(
            "slab_disjoint_from_prefix",
            x_verts.iter().all(|&v| !in_z[v]),
            || "slab meets Z".into(),
        )?;
        // (7) no short path in G − V(Z_{i−1}) meets two slab parts
        let mut part_of = vec![usize::MAX; n];
        for (k, c) in comps.iter().enumerate() {
            for &v in c {
                part_of[v] = k;
            }
        }
        let free: Vec<bool> = in_z.iter().map(|&z| !z).collect();
        for (k, c) in comps.iter().enumerate() {
            let dist = g.bfs_from(c, Some(&free));
            let clash = (0..n).find(|&v| {
                part_of[v] != usize::MAX && part_of[v] != k && dist[v].is_some_and(|d| d <= ell)
            });
            ck.check("short_paths_meet_one_part", clash.is_none(), || {
                format!("part {k} reaches {clash:?}")
            })?;
        }
        // (5) slab parts connected and narrow
        let slab_parts = SubPartition::from_parts(n, comps.clone())?;
        ck.check(
            "slab_parts_connected",
            slab_parts.is_connected_in(g),
            || "slab part disconnected".into(),
        )?;
        ck.check("slab_part_width", slab_parts.width() <= width_bound, || {
            format!("{} above {width_bound}", slab_parts.width())
        })?;

        for &v in &x_verts {
            in_z[v] = true;
        }
        parts.extend(comps);
        xs.push(x);

        // (3) T[0, x_i] ⊆ Z_i ⊆ V[0, x_i]
        let t_in = t_verts.iter().filter(|&&v| layer[v] <= x).all(|&v| in_z[v]);
        let bounded = (0..n).filter(|&v| in_z[v]).all(|v| layer[v] <= x);
        ck.check("prefix_layers", t_in && bounded, || {
            format!("prefix up to layer {x} violated")
        })?;
        // (6) and (8)
        let z = SubPartition::from_parts(n, parts.clone())?;
        ck.check("prefix_parts_connected", z.is_connected_in(g), || {
            "prefix part disconnected".into()
        })?;
        ck.check("prefix_part_width", z.width() <= width_bound, || {
            format!("{} above {width_bound}", z.width())
        })?;
        let rep = verify_z_property(g, &z, ell, 3, opts)?;
        match rep.verdict {
            Verdict::Holds => ck.check("clean_paths_meet_three_parts", true, String::new)?,
            Verdict::Counterexample(p) => {
                ck.check("clean_paths_meet_three_parts", false, || format!("{p:?}"))?
            }
            Verdict::BudgetExhausted => {
                return Err(SurfaceError::Budget(format!("clean paths at step {i}")))
            }
        }
        steps.push(SlabStep {
            last_layer: x,
            absorbed_paths: absorptions,
            parts: z.parts().len() - steps.iter().map(|s| s.parts).sum::<usize>(),
        });
    }
    let partition = SubPartition::from_parts(n, parts)?;
    Ok(GenusZResult {
        z_vertices: partition.domain(),
        partition,
        steps,
        width_bound,
        claims,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombineResult {
    pub partition: Partition,
    pub bound: usize,
    pub nodes_expanded: u64,
}

/// `𝓡 = 𝓡′ ∪ 𝓩`. `rest` partitions exactly the vertices outside `z`.
pub fn blocking_genus_combine(
    g: &Graph,
    z: &SubPartition,
    rest: &SubPartition,
    ell_p: usize,
    ell_z: usize,
    opts: &SearchOptions,
) -> Result<CombineResult, SurfaceError> {
    let n = g.n();
    if ell_p == 0 {
        return Err(SurfaceError::Params("ell_p must be positive".into()));
    }
    if ell_z < 4 * ell_p + 7 {
        return Err(SurfaceError::Closure { ell_p, ell_z });
    }
    if z.n() != n || rest.n() != n {
        return Err(GraphError::PartitionSize(z.n().min(rest.n()), n).into());
    }
    if let Some(v) = (0..n).find(|&v| z.part_of(v).is_some() == rest.part_of(v).is_some()) {
        return Err(SurfaceError::Precondition(format!(
            "vertex {v} must lie in exactly one of Z and its complement"
        )));
    }
    if !z.is_connected_in(g) || !rest.is_connected_in(g) {
        return Err(SurfaceError::Precondition("disconnected part".into()));
    }

    let keep: Vec<bool> = (0..n).map(|v| z.part_of(v).is_none()).collect();
    let (h, old) = g.induced(&keep);
    // rest parts are numbered 0.. and every one of them lies outside Z
    let local = Partition::from_part_of(
        old.iter()
            .map(|&v| rest.part_of(v).expect("covered"))
            .collect(),
    )?;
    match verify_ell_blocking(&h, &local, ell_p, opts)?.verdict {
        Verdict::Holds => {}
        Verdict::Counterexample(p) => {
            let p: Vec<Vertex> = p.iter().map(|&v| old[v]).collect();
            return Err(SurfaceError::Precondition(format!(
                "planar part is not {ell_p}-blocking: {p:?}"
            )));
        }
        Verdict::BudgetExhausted => return Err(SurfaceError::Budget("planar blocking".into())),
    }
    match verify_z_property(g, z, ell_z, 3, opts)?.verdict {
        Verdict::Holds => {}
        Verdict::Counterexample(p) => {
            return Err(SurfaceError::Precondition(format!(
                "Z property fails at {ell_z}: {p:?}"
            )))
        }
        Verdict::BudgetExhausted => return Err(SurfaceError::Budget("Z property".into())),
    }

    let mut parts: Vec<Vec<Vertex>> = rest.parts().to_vec();
    parts.extend(z.parts().iter().cloned());
    let r = Partition::from_parts(n, parts)?;
    let bound = 4 * ell_p + 6;
    let rep = verify_ell_blocking(g, &r, bound, opts)?;
    match rep.verdict {
        Verdict::Holds => Ok(CombineResult {
            partition: r,
            bound,
            nodes_expanded: rep.nodes_expanded,
        }),
        Verdict::Counterexample(p) => Err(SurfaceError::Assertion {
            claim: "combined_blocking".into(),
            step: 0,
            detail: format!("clean path {p:?} longer than {bound}"),
        }),
        Verdict::BudgetExhausted => Err(SurfaceError::Budget("combined blocking".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarRest {
    pub rest: SubPartition,
    /// Longest clean path of `rest` inside `G − V(Z)`.
    pub ell_p: usize,
    pub exact: bool,
}

/// Chordal partition of `G − V(Z)`, one component at a time, where
/// `embedding` is a plane embedding of a graph on the ids `0..k` whose
/// restriction to the vertices outside `Z` equals `G − V(Z)`. The blocking
/// number of the result is measured with `opts`.
pub fn planar_rest_partition(
    g: &Graph,
    embedding: &RotationSystem,
    z: &SubPartition,
    tau: usize,
    opts: &SearchOptions,
) -> Result<PlanarRest, SurfaceError> {
    let n = g.n();
    let k = embedding.graph().n();
    if z.n() != n || k > n {
        return Err(GraphError::PartitionSize(z.n(), n).into());
    }
    if let Some(v) = (k..n).find(|&v| z.part_of(v).is_none()) {
        return Err(SurfaceError::Precondition(format!(
            "vertex {v} is outside Z and outside the embedding"
        )));
    }
    let keep: Vec<bool> = (0..k).map(|v| z.part_of(v).is_none()).collect();
    let (rs, old) = embedding.restrict(&keep)?;
    let mut host_keep = keep.clone();
    host_keep.resize(n, false);
    let (h, host_old) = g.induced(&host_keep);
    let sorted = |x: &Graph| {
        let mut e: Vec<_> = x.edges().collect();
        e.sort_unstable();
        e
    };
    if host_old != old || sorted(&h) != sorted(rs.graph()) {
        return Err(SurfaceError::Precondition(
            "embedding does not match G − V(Z)".into(),
        ));
    }
    let mut parts: Vec<Vec<Vertex>> = Vec::new();
    for comp in h.components(None) {
        let mut m = vec![false; h.n()];
        for &v in &comp {
            m[v] = true;
        }
        let (crs, cold) = rs.restrict(&m)?;
        let ch = build_chordal_partition(&crs, &ChordalOptions::new(tau))?;
        parts.extend(
            ch.partition
                .parts()
                .iter()
                .map(|p| p.iter().map(|&v| cold[v]).collect::<Vec<_>>()),
        );
    }
    let local = Partition::from_parts(h.n(), parts)?;
    let measured = blocking_number(&h, &local, opts)?;
    let rest = SubPartition::from_parts(
        n,
        local
            .parts()
            .iter()
            .map(|p| p.iter().map(|&v| old[v]).collect())
            .collect(),
    )?;
    Ok(PlanarRest {
        rest,
        ell_p: measured.max_length_found,
        exact: measured.exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_layering;

    /// Cylinder-like: two long vertical paths from a root joined by rungs.
    fn ladder(len: usize, rung_every: usize) -> (Graph, Layering, VerticalPathTree) {
        // root 0; left path 1..=len, right path len+1..=2len
        let left = |i: usize| 1 + i;
        let right = |i: usize| 1 + len + i;
        let mut edges = vec![(0, left(0)), (0, right(0))];
        for i in 0..len - 1 {
            edges.push((left(i), left(i + 1)));
            edges.push((right(i), right(i + 1)));
        }
        // a middle column joins the two sides through one extra vertex
        let mid0 = 1 + 2 * len;
        let mut mids = 0;
        for i in (0..len).step_by(rung_every) {
            let m = mid0 + mids;
            mids += 1;
            edges.push((left(i), m));
            edges.push((m, right(i)));
        }
        let g = Graph::from_edges(mid0 + mids, edges).unwrap();
        let lay = bfs_layering(&g, 0).unwrap();
        let paths = VerticalPathTree {
            paths: vec![
                std::iter::once(0).chain((0..len).map(left)).collect(),
                std::iter::once(0).chain((0..len).map(right)).collect(),
            ],
        };
        (g, lay, paths)
    }

    #[test]
    fn empty_tree_gives_empty_z() {
        let (g, lay, _) = ladder(10, 3);
        let r = genus_z_partition(
            &g,
            &lay,
            &VerticalPathTree::default(),
            1,
            3,
            &SearchOptions::default(),
        )
        .unwrap();
        assert!(r.z_vertices.is_empty());
        assert!(r.partition.parts().is_empty());
    }

    #[test]
    fn ladder_absorbs_rungs() {
        let (g, lay, t) = ladder(60, 7);
        let r = genus_z_partition(&g, &lay, &t, 1, 3, &SearchOptions::default()).unwrap();
        assert!(r.claims.all_passed());
        assert!(r.steps.iter().skip(1).any(|s| s.absorbed_paths == 1));
        assert!(r.partition.width() <= genus_z_width_bound(1, 3));
        for v in t.vertices() {
            assert!(r.partition.part_of(v).is_some());
        }
    }

    #[test]
    fn single_path_gives_slabs() {
        let len = 40;
        let g = Graph::from_edges(len + 1, (0..len).map(|i| (i, i + 1))).unwrap();
        let lay = bfs_layering(&g, 0).unwrap();
        let t = VerticalPathTree {
            paths: vec![(0..=len).collect()],
        };
        let r = genus_z_partition(&g, &lay, &t, 1, 2, &SearchOptions::default()).unwrap();
        assert!(r.steps.iter().all(|s| s.absorbed_paths == 0));
        // root, then slabs of 3gℓ+1 = 7 layers
        assert_eq!(r.partition.parts()[0], vec![0]);
        assert_eq!(r.partition.parts()[1], (1..=7).collect::<Vec<_>>());
        assert_eq!(r.partition.parts().len(), 1 + 40usize.div_ceil(7));
    }

    #[test]
    fn rejects_non_vertical_paths() {
        let (g, lay, _) = ladder(10, 3);
        let bad = VerticalPathTree {
            paths: vec![vec![0, 1, 2, 1 + 20]],
        };
        assert!(genus_z_partition(&g, &lay, &bad, 1, 2, &SearchOptions::default()).is_err());
    }

    #[test]
    fn combine_refuses_open_closure() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let z = SubPartition::empty(3);
        let rest = SubPartition::from_parts(3, vec![vec![0, 1, 2]]).unwrap();
        let e =
            blocking_genus_combine(&g, &z, &rest, 2, 14, &SearchOptions::default()).unwrap_err();
        assert!(matches!(e, SurfaceError::Closure { .. }));
        let ok = blocking_genus_combine(&g, &z, &rest, 2, 15, &SearchOptions::default()).unwrap();
        assert_eq!(ok.partition.num_parts(), 1);
    }

    #[test]
    fn combine_with_one_artificial_part() {
        // 6x6 grid, the middle column as Z
        let gi = crate::generators::grid(6, 6).unwrap();
        let g = gi.graph;
        let col: Vec<Vertex> = (0..6).map(|r| r * 6 + 2).collect();
        let z = SubPartition::from_parts(36, vec![col.clone()]).unwrap();
        let rest_parts: Vec<Vec<Vertex>> = vec![
            (0..6).flat_map(|r| [r * 6, r * 6 + 1]).collect(),
            (0..6)
                .flat_map(|r| [r * 6 + 3, r * 6 + 4, r * 6 + 5])
                .collect(),
        ];
        let rest = SubPartition::from_parts(36, rest_parts).unwrap();
        let r = blocking_genus_combine(&g, &z, &rest, 1, 11, &SearchOptions::default()).unwrap();
        assert_eq!(r.bound, 10);
        assert_eq!(r.partition.num_parts(), 3);
    }

    #[test]
    fn planar_rest_feeds_combine() {
        let inst = crate::generators::layered_genus_instance(1, 24, 10, 2).unwrap();
        let opts = SearchOptions::default();
        let z = genus_z_partition(&inst.graph, &inst.layering, &inst.tree, 1, 11, &opts).unwrap();
        let pr =
            planar_rest_partition(&inst.graph, &inst.planar_part, &z.partition, 2, &opts).unwrap();
        assert!(pr.exact);
        let c = blocking_genus_combine(
            &inst.graph,
            &z.partition,
            &pr.rest,
            pr.ell_p.max(1),
            11,
            &opts,
        )
        .unwrap();
        assert_eq!(c.bound, 4 * pr.ell_p.max(1) + 6);
    }
}
