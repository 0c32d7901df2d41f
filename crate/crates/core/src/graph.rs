//! Simple undirected graphs over dense vertex ids, plus the partition,
//! layering and product machinery the rest of the crate builds on.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(Vertex, usize),
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(Vertex, Vertex),
    #[error("vertex {0} is not reachable from root {1}")]
    Disconnected(Vertex, Vertex),
    #[error("empty vertex set")]
    EmptySet,
    #[error("product of {0} and {1} vertices overflows")]
    ProductOverflow(usize, usize),
    #[error("partition covers {0} vertices but graph has {1}")]
    PartitionSize(usize, usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex {0} listed in more than one part")]
    DuplicateMember(Vertex),
    #[error("part {0} has no vertex of H assigned to it")]
    UnlabelledPart(usize),
    #[error("layering has {0} entries but graph has {1} vertices")]
    LayeringSize(usize, usize),
    #[error("layering is not a BFS layering at vertex {0}")]
    BadLayering(Vertex),
}

/// Shortest-path length, with unreachable pairs kept distinct from any
/// finite value. `Finite` orders before `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Distance::Infinite)
    }

    /// Sum that stays infinite if either side is.
    pub fn add(self, other: Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl From<Option<usize>> for Distance {
    fn from(d: Option<usize>) -> Self {
        d.map_or(Distance::Infinite, Distance::Finite)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;
    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        Graph::from_edges(j.n, j.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a simple graph; loops, repeated edges and out-of-range ids are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// Like [`Graph::from_edges`] but silently merges repeated edges.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.n()))
        }
    }

    /// Subgraph induced by `keep`; returns the new graph and the map from new
    /// ids to old ids (ascending).
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| new_id[w])
                    .collect()
            })
            .collect();
        (Graph { adj }, old)
    }

    /// Connected components of the subgraph induced by `mask` (all vertices if
    /// `None`). Components are listed by their lowest vertex, members sorted.
    pub fn components(&self, mask: Option<&[bool]>) -> Vec<Vec<Vertex>> {
        let inside = |v: Vertex| mask.is_none_or(|m| m[v]);
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] || !inside(s) {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] && inside(w) {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components(None).len() == 1
    }

    /// Multi-source BFS restricted to `mask`. Sources outside the mask are
    /// ignored. Unreached vertices get `None`.
    pub fn bfs_from(&self, sources: &[Vertex], mask: Option<&[bool]>) -> Vec<Option<usize>> {
        let inside = |v: Vertex| mask.is_none_or(|m| m[v]);
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if inside(s) && dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap() + 1;
            for &w in &self.adj[v] {
                if dist[w].is_none() && inside(w) {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// A shortest path from any vertex of `sources` to `target` inside
    /// `mask`, as a vertex sequence starting in `sources`. Ties resolve to the
    /// lowest-id predecessor.
    pub fn shortest_path(
        &self,
        sources: &[Vertex],
        target: Vertex,
        mask: Option<&[bool]>,
    ) -> Option<Vec<Vertex>> {
        let dist = self.bfs_from(sources, mask);
        let mut d = dist[target]?;
        let mut path = vec![target];
        let mut v = target;
        while d > 0 {
            v = *self.adj[v]
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("bfs predecessor exists");
            path.push(v);
            d -= 1;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layering {
    pub root: Vertex,
    pub layer_of: Vec<usize>,
}

impl Layering {
    pub fn depth(&self) -> usize {
        self.layer_of.iter().copied().max().unwrap_or(0)
    }

    /// Vertices of each layer, ascending.
    pub fn layers(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.depth() + 1];
        for (v, &l) in self.layer_of.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// Checks that this is the BFS layering of `g` from its root.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        if self.layer_of.len() != g.n() {
            return Err(GraphError::LayeringSize(self.layer_of.len(), g.n()));
        }
        let expected = bfs_layering(g, self.root)?;
        match (0..g.n()).find(|&v| expected.layer_of[v] != self.layer_of[v]) {
            Some(v) => Err(GraphError::BadLayering(v)),
            None => Ok(()),
        }
    }
}

pub fn bfs_layering(g: &Graph, root: Vertex) -> Result<Layering, GraphError> {
    g.check_vertex(root)?;
    let dist = g.bfs_from(&[root], None);
    let mut layer_of = Vec::with_capacity(g.n());
    for (v, d) in dist.into_iter().enumerate() {
        layer_of.push(d.ok_or(GraphError::Disconnected(v, root))?);
    }
    Ok(Layering { root, layer_of })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
    pub depth: Vec<usize>,
}

impl RootedTree {
    /// Vertices on the tree path from `v` up to the root, starting at `v`.
    pub fn path_to_root(&self, mut v: Vertex) -> Vec<Vertex> {
        let mut out = vec![v];
        while let Some(p) = self.parent[v] {
            out.push(p);
            v = p;
        }
        out
    }

    pub fn as_graph(&self) -> Graph {
        let n = self.parent.len();
        Graph::from_edges(
            n,
            self.parent
                .iter()
                .enumerate()
                .filter_map(|(v, p)| p.map(|p| (v, p))),
        )
        .expect("tree edges are simple")
    }
}

/// BFS spanning tree whose parent choice is the lowest-id neighbour in the
/// previous layer.
pub fn bfs_spanning_tree(g: &Graph, layering: &Layering) -> RootedTree {
    let parent = (0..g.n())
        .map(|v| {
            let l = layering.layer_of[v];
            if l == 0 {
                None
            } else {
                g.neighbors(v)
                    .iter()
                    .copied()
                    .find(|&w| layering.layer_of[w] + 1 == l)
            }
        })
        .collect();
    RootedTree {
        root: layering.root,
        parent,
        depth: layering.layer_of.clone(),
    }
}

pub fn distance(g: &Graph, from: &[Vertex], to: &[Vertex]) -> Result<Distance, GraphError> {
    distance_within(g, from, to, None)
}

/// Distance inside the subgraph induced by `mask`.
pub fn distance_within(
    g: &Graph,
    from: &[Vertex],
    to: &[Vertex],
    mask: Option<&[bool]>,
) -> Result<Distance, GraphError> {
    if from.is_empty() || to.is_empty() {
        return Err(GraphError::EmptySet);
    }
    for &v in from.iter().chain(to) {
        g.check_vertex(v)?;
    }
    let dist = g.bfs_from(from, mask);
    Ok(to
        .iter()
        .filter_map(|&v| dist[v])
        .min()
        .map_or(Distance::Infinite, Distance::Finite))
}

pub fn vertex_distance(g: &Graph, u: Vertex, v: Vertex) -> Result<Distance, GraphError> {
    distance(g, &[u], &[v])
}

/// Distance between edge sets, measured between their endpoint sets.
pub fn edge_set_distance(g: &Graph, a: &[Edge], b: &[Edge]) -> Result<Distance, GraphError> {
    let ends = |s: &[Edge]| -> Vec<Vertex> {
        let mut v: Vec<Vertex> = s.iter().flat_map(|&(x, y)| [x, y]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    distance(g, &ends(a), &ends(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionJson", into = "PartitionJson")]
pub struct Partition {
    part_of: Vec<usize>,
    parts: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    part_of: Vec<usize>,
}

impl TryFrom<PartitionJson> for Partition {
    type Error = GraphError;
    fn try_from(j: PartitionJson) -> Result<Self, Self::Error> {
        Partition::from_part_of(j.part_of)
    }
}

impl From<Partition> for PartitionJson {
    fn from(p: Partition) -> Self {
        PartitionJson { part_of: p.part_of }
    }
}

impl Partition {
    /// Part ids must form `0..k` with every id used.
    pub fn from_part_of(part_of: Vec<usize>) -> Result<Self, GraphError> {
        let k = part_of.iter().map(|&p| p + 1).max().unwrap_or(0);
        let mut parts = vec![Vec::new(); k];
        for (v, &p) in part_of.iter().enumerate() {
            parts[p].push(v);
        }
        if let Some(i) = parts.iter().position(Vec::is_empty) {
            return Err(GraphError::EmptyPart(i));
        }
        Ok(Partition { part_of, parts })
    }

    /// Builds from an explicit roster; part `i` is `parts[i]`. Vertices not
    /// covered are rejected.
    pub fn from_parts(n: usize, parts: Vec<Vec<Vertex>>) -> Result<Self, GraphError> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(GraphError::EmptyPart(i));
            }
            for &v in part {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange(v, n));
                }
                if part_of[v] != usize::MAX {
                    return Err(GraphError::DuplicateMember(v));
                }
                part_of[v] = i;
            }
        }
        let covered = part_of.iter().filter(|&&p| p != usize::MAX).count();
        if covered != n {
            return Err(GraphError::PartitionSize(covered, n));
        }
        Partition::from_part_of(part_of)
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            part_of: (0..n).collect(),
            parts: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Renumbers parts in order of their lowest vertex.
    pub fn canonical(&self) -> Partition {
        let mut order: Vec<usize> = (0..self.parts.len()).collect();
        order.sort_by_key(|&i| self.parts[i][0]);
        let parts = order.iter().map(|&i| self.parts[i].clone()).collect();
        Partition::from_parts(self.part_of.len(), parts).expect("relabelling keeps validity")
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        self.part_of[v]
    }

    pub fn part_ids(&self) -> &[usize] {
        &self.part_of
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn width(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_size(&self, g: &Graph) -> Result<(), GraphError> {
        if self.n() == g.n() {
            Ok(())
        } else {
            Err(GraphError::PartitionSize(self.n(), g.n()))
        }
    }
}

/// A partition of a vertex subset: vertices outside every part map to
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SubPartitionJson", into = "SubPartitionJson")]
pub struct SubPartition {
    part_of: Vec<Option<usize>>,
    parts: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
pub struct SubPartitionJson {
    pub n: usize,
    pub parts: Vec<Vec<Vertex>>,
}

impl TryFrom<SubPartitionJson> for SubPartition {
    type Error = GraphError;
    fn try_from(j: SubPartitionJson) -> Result<Self, Self::Error> {
        SubPartition::from_parts(j.n, j.parts)
    }
}

impl From<SubPartition> for SubPartitionJson {
    fn from(s: SubPartition) -> Self {
        SubPartitionJson {
            n: s.part_of.len(),
            parts: s.parts,
        }
    }
}

impl SubPartition {
    pub fn from_parts(n: usize, parts: Vec<Vec<Vertex>>) -> Result<Self, GraphError> {
        let mut part_of = vec![None; n];
        let mut parts = parts;
        for (i, part) in parts.iter_mut().enumerate() {
            if part.is_empty() {
                return Err(GraphError::EmptyPart(i));
            }
            part.sort_unstable();
            for &v in part.iter() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange(v, n));
                }
                if part_of[v].is_some() {
                    return Err(GraphError::DuplicateMember(v));
                }
                part_of[v] = Some(i);
            }
        }
        Ok(SubPartition { part_of, parts })
    }

    pub fn empty(n: usize) -> Self {
        SubPartition {
            part_of: vec![None; n],
            parts: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.part_of[v]
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn width(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertices covered by some part.
    pub fn domain(&self) -> Vec<Vertex> {
        (0..self.n())
            .filter(|&v| self.part_of[v].is_some())
            .collect()
    }

    pub fn is_connected_in(&self, g: &Graph) -> bool {
        let mut inside = vec![false; g.n()];
        self.parts.iter().all(|part| {
            for &v in part {
                inside[v] = true;
            }
            let reached = g.bfs_from(&part[..1], Some(&inside));
            let ok = part.iter().all(|&v| reached[v].is_some());
            for &v in part {
                inside[v] = false;
            }
            ok
        })
    }
}

impl From<&Partition> for SubPartition {
    fn from(p: &Partition) -> Self {
        SubPartition {
            part_of: p.part_of.iter().map(|&i| Some(i)).collect(),
            parts: p.parts.clone(),
        }
    }
}

/// `G/P`: one vertex per part, adjacent iff some edge crosses between them.
pub fn quotient(g: &Graph, p: &Partition) -> Graph {
    let edges = g
        .edges()
        .map(|(u, v)| (p.part_of(u), p.part_of(v)))
        .filter(|(a, b)| a != b);
    Graph::from_edges_dedup(p.num_parts(), edges).expect("part ids are in range")
}

/// Strong product; vertex `(a, b)` gets id `a * |B| + b`.
pub fn strong_product(a: &Graph, b: &Graph) -> Result<Graph, GraphError> {
    let nb = b.n();
    let n = a
        .n()
        .checked_mul(nb)
        .filter(|&n| n <= u32::MAX as usize)
        .ok_or(GraphError::ProductOverflow(a.n(), nb))?;
    let id = |x: Vertex, y: Vertex| x * nb + y;
    let mut edges = Vec::new();
    // same first coordinate, adjacent second
    for x in 0..a.n() {
        for (y, z) in b.edges() {
            edges.push((id(x, y), id(x, z)));
        }
    }
    for (v, w) in a.edges() {
        for y in 0..nb {
            // adjacent first coordinate, same second
            edges.push((id(v, y), id(w, y)));
        }
        for (y, z) in b.edges() {
            edges.push((id(v, y), id(w, z)));
            edges.push((id(v, z), id(w, y)));
        }
    }
    Graph::from_edges(n, edges)
}

pub fn is_connected_partition(g: &Graph, p: &Partition) -> bool {
    let mut inside = vec![false; g.n()];
    p.parts().iter().all(|part| {
        for &v in part {
            inside[v] = true;
        }
        let reached = g.bfs_from(&part[..1], Some(&inside));
        let ok = part.iter().all(|&v| reached[v].is_some());
        for &v in part {
            inside[v] = false;
        }
        ok
    })
}

/// True iff `p` has width at most `max_width` and every part adjacency is an
/// edge of `h`, with part `i` identified with vertex `i` of `h`.
pub fn h_partition_width_check(
    g: &Graph,
    p: &Partition,
    h: &Graph,
    max_width: usize,
) -> Result<bool, GraphError> {
    p.check_size(g)?;
    if p.num_parts() > h.n() {
        return Err(GraphError::UnlabelledPart(h.n()));
    }
    if p.width() > max_width {
        return Ok(false);
    }
    Ok(quotient(g, p).edges().all(|(a, b)| h.has_edge(a, b)))
}
