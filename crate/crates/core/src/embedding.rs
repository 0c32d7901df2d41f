//! Combinatorial plane embeddings given by rotation systems, face tracing,
//! outer faces of subgraphs and bridges of subgraphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rotation at vertex {0} is not a permutation of its neighbours")]
    BadRotation(Vertex),
    #[error("outer face edge {0}-{1} is not an edge")]
    BadOuterEdge(Vertex, Vertex),
    #[error("outer face side must be 0 or 1, got {0}")]
    BadOuterSide(u8),
    #[error("graph has edges but no outer face edge was given")]
    MissingOuterEdge,
    #[error("Euler check failed: n={n}, m={m}, faces={f}, components={c}")]
    Euler {
        n: usize,
        m: usize,
        f: usize,
        c: usize,
    },
    #[error("subgraph is empty")]
    EmptySubgraph,
    #[error("subgraph edge {0}-{1} is not an edge of the graph")]
    NotSubgraph(Vertex, Vertex),
}

/// A subgraph given by explicit vertex and edge lists. Both lists are kept
/// sorted; edges are stored with the smaller endpoint first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

fn norm(e: Edge) -> Edge {
    (e.0.min(e.1), e.0.max(e.1))
}

impl Subgraph {
    /// Endpoints of `edges` are added to `vertices` automatically.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().map(norm).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<Vertex> = vertices.into_iter().collect();
        vertices.extend(edges.iter().flat_map(|&(u, v)| [u, v]));
        vertices.sort_unstable();
        vertices.dedup();
        Subgraph { vertices, edges }
    }

    /// Subgraph of `g` induced by `vertices`.
    pub fn induced(g: &Graph, vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        let mut mask = vec![false; g.n()];
        for &v in &vs {
            mask[v] = true;
        }
        let edges: Vec<Edge> = vs
            .iter()
            .flat_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .filter(move |&&w| w > u)
                    .map(move |&w| (u, w))
            })
            .filter(|&(_, w)| mask[w])
            .collect();
        Subgraph {
            vertices: vs,
            edges,
        }
    }

    pub fn whole(g: &Graph) -> Self {
        Subgraph {
            vertices: (0..g.n()).collect(),
            edges: g.edges().collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&norm((u, v))).is_ok()
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph::new(
            self.vertices.iter().chain(&other.vertices).copied(),
            self.edges.iter().chain(&other.edges).copied(),
        )
    }

    pub fn vertex_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.vertices {
            m[v] = true;
        }
        m
    }

    /// The subgraph as a standalone graph on the same vertex ids.
    pub fn to_graph(&self, n: usize) -> Graph {
        Graph::from_edges(n, self.edges.iter().copied()).expect("subgraph edges are simple")
    }
}

/// A closed facial walk. `darts[i]` is the directed edge leaving
/// `vertices[i]`; a face of an edgeless single-vertex graph has one vertex
/// and no darts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceWalk {
    pub vertices: Vec<Vertex>,
    pub darts: Vec<Edge>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Distinct vertices on the walk, ascending.
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub rotation: Vec<Vec<Vertex>>,
    #[serde(default)]
    pub outer_face_edge: Option<[Vertex; 2]>,
    #[serde(default)]
    pub outer_face_side: u8,
}

/// A rotation system with a designated outer face. Rotations list
/// neighbours counterclockwise; the successor of dart `u→v` is `v→w` where
/// `w` follows `u` in the rotation at `v`, so each face lies to the right of
/// its darts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddingJson", into = "EmbeddingJson")]
pub struct RotationSystem {
    graph: Graph,
    rotation: Vec<Vec<Vertex>>,
    outer_dart: Option<Edge>,
    // dart ids: offset[v] + index in rotation[v]
    offset: Vec<usize>,
    // for each v, rotation index of the i-th sorted neighbour
    rot_index: Vec<Vec<usize>>,
    face_of_dart: Vec<usize>,
    faces: Vec<FaceWalk>,
    outer_face: usize,
}

impl TryFrom<EmbeddingJson> for RotationSystem {
    type Error = EmbeddingError;
    fn try_from(j: EmbeddingJson) -> Result<Self, Self::Error> {
        let outer = match j.outer_face_edge {
            None => None,
            Some([u, v]) => match j.outer_face_side {
                0 => Some((u, v)),
                1 => Some((v, u)),
                s => return Err(EmbeddingError::BadOuterSide(s)),
            },
        };
        RotationSystem::new(j.rotation, outer)
    }
}

impl From<RotationSystem> for EmbeddingJson {
    fn from(r: RotationSystem) -> Self {
        EmbeddingJson {
            rotation: r.rotation,
            outer_face_edge: r.outer_dart.map(|(u, v)| [u, v]),
            outer_face_side: 0,
        }
    }
}

impl RotationSystem {
    /// `outer_dart` is a directed edge whose face is the outer face.
    pub fn new(
        rotation: Vec<Vec<Vertex>>,
        outer_dart: Option<Edge>,
    ) -> Result<Self, EmbeddingError> {
        let n = rotation.len();
        let graph = Graph::from_edges_dedup(
            n,
            rotation
                .iter()
                .enumerate()
                .flat_map(|(u, r)| r.iter().map(move |&v| (u, v))),
        )?;
        let mut rot_index = Vec::with_capacity(n);
        for (v, rot) in rotation.iter().enumerate() {
            let nb = graph.neighbors(v);
            if rot.len() != nb.len() {
                return Err(EmbeddingError::BadRotation(v));
            }
            let mut idx = vec![usize::MAX; nb.len()];
            for (i, &w) in rot.iter().enumerate() {
                let k = nb
                    .binary_search(&w)
                    .map_err(|_| EmbeddingError::BadRotation(v))?;
                if idx[k] != usize::MAX {
                    return Err(EmbeddingError::BadRotation(v));
                }
                idx[k] = i;
            }
            rot_index.push(idx);
        }
        // asymmetric rotations show up as degree mismatches above
        let mut offset = vec![0; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + rotation[v].len();
        }
        let mut r = RotationSystem {
            graph,
            rotation,
            outer_dart: None,
            offset,
            rot_index,
            face_of_dart: Vec::new(),
            faces: Vec::new(),
            outer_face: 0,
        };
        r.trace_faces();
        r.euler_check()?;
        match outer_dart {
            Some((u, v)) => {
                if !r.graph.has_edge(u, v) {
                    return Err(EmbeddingError::BadOuterEdge(u, v));
                }
                r.outer_dart = Some((u, v));
                r.outer_face = r.face_of_dart[r.dart_id(u, v)];
            }
            None if r.graph.m() > 0 => return Err(EmbeddingError::MissingOuterEdge),
            None => r.outer_face = 0,
        }
        Ok(r)
    }

    /// Embedding of the subgraph induced by `keep`, renumbered in increasing
    /// order; returns the new-to-old map. The outer dart survives if both its
    /// ends do, otherwise the first dart at the lowest non-isolated vertex is used.
    pub fn restrict(&self, keep: &[bool]) -> Result<(RotationSystem, Vec<Vertex>), EmbeddingError> {
        let n = self.rotation.len();
        let old: Vec<Vertex> = (0..n).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let rotation: Vec<Vec<Vertex>> = old
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| new_id[w])
                    .collect()
            })
            .collect();
        let outer = match self.outer_dart {
            Some((u, v)) if keep[u] && keep[v] => Some((new_id[u], new_id[v])),
            _ => rotation
                .iter()
                .enumerate()
                .find(|(_, r)| !r.is_empty())
                .map(|(u, r)| (u, r[0])),
        };
        Ok((RotationSystem::new(rotation, outer)?, old))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn outer_dart(&self) -> Option<Edge> {
        self.outer_dart
    }

    fn pos(&self, v: Vertex, u: Vertex) -> usize {
        let k = self
            .graph
            .neighbors(v)
            .binary_search(&u)
            .expect("u adjacent to v");
        self.rot_index[v][k]
    }

    fn dart_id(&self, u: Vertex, v: Vertex) -> usize {
        self.offset[u] + self.pos(u, v)
    }

    fn dart(&self, id: usize) -> Edge {
        let u = self.offset.partition_point(|&o| o <= id) - 1;
        (u, self.rotation[u][id - self.offset[u]])
    }

    fn next_dart(&self, (u, v): Edge) -> Edge {
        let rot = &self.rotation[v];
        (v, rot[(self.pos(v, u) + 1) % rot.len()])
    }

    fn trace_faces(&mut self) {
        let nd = self.offset[self.graph.n()];
        let mut face_of = vec![usize::MAX; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = FaceWalk {
                vertices: Vec::new(),
                darts: Vec::new(),
            };
            let mut d = self.dart(start);
            loop {
                let did = self.dart_id(d.0, d.1);
                if face_of[did] != usize::MAX {
                    break;
                }
                face_of[did] = id;
                walk.vertices.push(d.0);
                walk.darts.push(d);
                d = self.next_dart(d);
            }
            faces.push(walk);
        }
        for v in 0..self.graph.n() {
            if self.graph.degree(v) == 0 {
                faces.push(FaceWalk {
                    vertices: vec![v],
                    darts: Vec::new(),
                });
            }
        }
        self.face_of_dart = face_of;
        self.faces = faces;
    }

    fn euler_check(&self) -> Result<(), EmbeddingError> {
        let (n, m, f) = (self.graph.n(), self.graph.m(), self.faces.len());
        let c = self.graph.components(None).len();
        // each component contributes n_i - m_i + f_i = 2
        if n + f != m + 2 * c {
            return Err(EmbeddingError::Euler { n, m, f, c });
        }
        Ok(())
    }

    /// All facial walks; every dart appears in exactly one.
    pub fn faces(&self) -> &[FaceWalk] {
        &self.faces
    }

    pub fn outer_face(&self) -> &FaceWalk {
        &self.faces[self.outer_face]
    }

    /// Index of the face traced from dart `u→v`.
    pub fn face_of_dart(&self, u: Vertex, v: Vertex) -> usize {
        self.face_of_dart[self.dart_id(u, v)]
    }

    /// Outer face of `h` under the inherited rotation, i.e. the face of `h`
    /// containing the designated outer face of the whole embedding.
    pub fn subgraph_outer_face(&self, h: &Subgraph) -> Result<FaceWalk, EmbeddingError> {
        Ok(SubgraphFaces::new(self, h)?.outer_walk())
    }

    /// Vertices of `attachments` lying on the outer face boundary of `j`.
    pub fn boundary_attachments(
        &self,
        j: &Subgraph,
        attachments: &[Vertex],
    ) -> Result<Vec<Vertex>, EmbeddingError> {
        let sf = SubgraphFaces::new(self, j)?;
        let mut out: Vec<Vertex> = attachments
            .iter()
            .copied()
            .filter(|&a| sf.on_outer_boundary(a))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Regions of the plane cut out by a subgraph `h`, expressed as classes of
/// faces of the full embedding merged across edges outside `h`.
pub struct SubgraphFaces<'a> {
    rs: &'a RotationSystem,
    h: &'a Subgraph,
    region: Vec<usize>,
    outer_region: usize,
}

impl<'a> SubgraphFaces<'a> {
    pub fn new(rs: &'a RotationSystem, h: &'a Subgraph) -> Result<Self, EmbeddingError> {
        if h.is_empty() {
            return Err(EmbeddingError::EmptySubgraph);
        }
        for &(u, v) in h.edges() {
            if !rs.graph.has_edge(u, v) {
                return Err(EmbeddingError::NotSubgraph(u, v));
            }
        }
        let mut uf = UnionFind::new(rs.faces.len());
        for (u, v) in rs.graph.edges() {
            if !h.has_edge(u, v) {
                uf.union(rs.face_of_dart(u, v), rs.face_of_dart(v, u));
            }
        }
        let region: Vec<usize> = (0..rs.faces.len()).map(|f| uf.find(f)).collect();
        let outer_region = region[rs.outer_face];
        Ok(SubgraphFaces {
            rs,
            h,
            region,
            outer_region,
        })
    }

    fn dart_on_outer(&self, u: Vertex, v: Vertex) -> bool {
        self.region[self.rs.face_of_dart(u, v)] == self.outer_region
    }

    /// Region containing a vertex not in `h` (or an isolated vertex of `h`).
    fn vertex_region(&self, x: Vertex) -> usize {
        match self.rs.rotation[x].first() {
            Some(&w) => self.region[self.rs.face_of_dart(x, w)],
            None => {
                self.region[self
                    .rs
                    .faces
                    .iter()
                    .position(|f| f.darts.is_empty() && f.vertices[0] == x)
                    .unwrap()]
            }
        }
    }

    fn h_degree(&self, v: Vertex) -> usize {
        self.rs
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&w| self.h.has_edge(v, w))
            .count()
    }

    /// True iff `v ∈ V(h)` lies on the boundary of the outer face of `h`.
    pub fn on_outer_boundary(&self, v: Vertex) -> bool {
        if !self.h.has_vertex(v) {
            return false;
        }
        if self.h_degree(v) == 0 {
            return self.vertex_region(v) == self.outer_region;
        }
        self.rs
            .graph
            .neighbors(v)
            .iter()
            .any(|&w| self.h.has_edge(v, w) && self.dart_on_outer(v, w))
    }

    /// Vertices of `h` on the outer boundary, ascending.
    pub fn outer_vertices(&self) -> Vec<Vertex> {
        self.h
            .vertices()
            .iter()
            .copied()
            .filter(|&v| self.on_outer_boundary(v))
            .collect()
    }

    /// True iff `x ∉ V(h)` lies strictly inside the outer face of `h`.
    pub fn vertex_in_outer_face(&self, x: Vertex) -> bool {
        !self.h.has_vertex(x) && self.vertex_region(x) == self.outer_region
    }

    /// True iff the edge `uv ∉ E(h)` runs through the outer face of `h`.
    pub fn edge_in_outer_face(&self, u: Vertex, v: Vertex) -> bool {
        !self.h.has_edge(u, v) && self.dart_on_outer(u, v)
    }

    /// True iff `t` lies in the closure of the outer face of `h`.
    pub fn contains_in_outer_closure(&self, t: &Subgraph) -> bool {
        t.vertices().iter().all(|&v| {
            if self.h.has_vertex(v) {
                self.on_outer_boundary(v)
            } else {
                self.vertex_in_outer_face(v)
            }
        }) && t
            .edges()
            .iter()
            .all(|&(u, v)| self.h.has_edge(u, v) || self.edge_in_outer_face(u, v))
    }

    /// Traces the outer facial walk of the component of `h` that has the
    /// lowest boundary dart.
    pub fn outer_walk(&self) -> FaceWalk {
        let start = self.h.edges().iter().find_map(|&(u, v)| {
            if self.dart_on_outer(u, v) {
                Some((u, v))
            } else if self.dart_on_outer(v, u) {
                Some((v, u))
            } else {
                None
            }
        });
        let Some(start) = start else {
            let v = self.h.vertices()[0];
            return FaceWalk {
                vertices: vec![v],
                darts: Vec::new(),
            };
        };
        let mut walk = FaceWalk {
            vertices: Vec::new(),
            darts: Vec::new(),
        };
        let mut d = start;
        loop {
            walk.vertices.push(d.0);
            walk.darts.push(d);
            d = self.next_h_dart(d);
            if d == start {
                break;
            }
        }
        walk
    }

    fn next_h_dart(&self, (u, v): Edge) -> Edge {
        let rot = &self.rs.rotation[v];
        let k = rot.len();
        let p = self.rs.pos(v, u);
        for step in 1..=k {
            let w = rot[(p + step) % k];
            if self.h.has_edge(v, w) {
                return (v, w);
            }
        }
        unreachable!("dart u→v is an edge of h")
    }
}

/// An `F`-bridge. `vertices` and `attachments` are sorted, edges normalised
/// and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub attachments: Vec<Vertex>,
    pub trivial: bool,
}

impl Bridge {
    pub fn subgraph(&self) -> Subgraph {
        Subgraph::new(self.vertices.iter().copied(), self.edges.iter().copied())
    }

    /// Vertices of the bridge other than its attachments.
    pub fn interior(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| self.attachments.binary_search(v).is_err())
            .collect()
    }
}

/// Bridges of `f` in `g`: non-trivial ones (one per component of `g − V(f)`,
/// ordered by lowest vertex) followed by trivial ones (edges outside `f`
/// joining two vertices of `f`, in edge order).
pub fn bridges(g: &Graph, f: &Subgraph) -> Vec<Bridge> {
    let in_f = f.vertex_mask(g.n());
    let outside: Vec<bool> = in_f.iter().map(|&b| !b).collect();
    let mut out = Vec::new();
    for comp in g.components(Some(&outside)) {
        let mut vertices = comp.clone();
        let mut edges = Vec::new();
        let mut attachments = Vec::new();
        for &v in &comp {
            for &w in g.neighbors(v) {
                if in_f[w] {
                    attachments.push(w);
                    edges.push((v.min(w), v.max(w)));
                } else if v < w {
                    edges.push((v, w));
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        vertices.extend(&attachments);
        vertices.sort_unstable();
        edges.sort_unstable();
        out.push(Bridge {
            vertices,
            edges,
            attachments,
            trivial: false,
        });
    }
    for (u, v) in g.edges() {
        if in_f[u] && in_f[v] && !f.has_edge(u, v) {
            out.push(Bridge {
                vertices: vec![u, v],
                edges: vec![(u, v)],
                attachments: vec![u, v],
                trivial: true,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> RotationSystem {
        RotationSystem::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], Some((0, 1))).unwrap()
    }

    /// Planar K4: outer triangle 0,1,2 counterclockwise, 3 in the centre.
    fn k4() -> RotationSystem {
        RotationSystem::new(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            Some((0, 1)),
        )
        .unwrap()
    }

    /// Square grid with coordinates `(r, c)` and id `r * cols + c`; rotation
    /// counterclockwise (east, north, west, south with north = r + 1).
    fn grid(rows: usize, cols: usize) -> RotationSystem {
        let id = |r: usize, c: usize| r * cols + c;
        let mut rot = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let mut l = Vec::new();
                if c + 1 < cols {
                    l.push(id(r, c + 1));
                }
                if r + 1 < rows {
                    l.push(id(r + 1, c));
                }
                if c > 0 {
                    l.push(id(r, c - 1));
                }
                if r > 0 {
                    l.push(id(r - 1, c));
                }
                rot.push(l);
            }
        }
        RotationSystem::new(rot, Some((0, 1))).unwrap()
    }

    #[test]
    fn face_counts() {
        let t = triangle();
        assert_eq!(t.faces().len(), 2);
        assert!(t.faces().iter().all(|f| f.len() == 3));
        let k = k4();
        assert_eq!(k.faces().len(), 4);
        assert!(k.faces().iter().all(|f| f.len() == 3));
        assert_eq!(k.outer_face().vertex_set(), vec![0, 1, 2]);
        let g = grid(3, 3);
        let mut lens: Vec<usize> = g.faces().iter().map(FaceWalk::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![4, 4, 4, 4, 8]);
        assert_eq!(g.outer_face().len(), 8);
        assert_eq!(g.outer_face().vertex_set(), vec![0, 1, 2, 3, 5, 6, 7, 8]);
    }

    #[test]
    fn rejects_bad_rotations() {
        assert!(RotationSystem::new(vec![vec![1], vec![]], None).is_err());
        assert!(RotationSystem::new(vec![vec![1, 1], vec![0]], None).is_err());
        // K4 with a non-planar rotation: 0 has rotation swapped
        let bad = RotationSystem::new(
            vec![vec![1, 2, 3], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            Some((0, 1)),
        );
        assert!(matches!(bad, Err(EmbeddingError::Euler { .. })));
        assert!(RotationSystem::new(vec![vec![1], vec![0]], Some((0, 2))).is_err());
    }

    #[test]
    fn dart_lengths_sum_to_twice_edges() {
        for rs in [triangle(), k4(), grid(4, 5)] {
            let total: usize = rs.faces().iter().map(FaceWalk::len).sum();
            assert_eq!(total, 2 * rs.graph().m());
        }
    }

    #[test]
    fn json_round_trip() {
        let rs = k4();
        let s = serde_json::to_string(&rs).unwrap();
        let back: RotationSystem = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let side1: RotationSystem = serde_json::from_str(
            r#"{"rotation":[[1,3,2],[2,3,0],[0,3,1],[0,1,2]],"outer_face_edge":[1,0],"outer_face_side":1}"#,
        )
        .unwrap();
        assert_eq!(side1.outer_face().vertex_set(), vec![0, 1, 2]);
    }

    #[test]
    fn subgraph_outer_faces() {
        let g = grid(4, 4);
        let whole = Subgraph::whole(g.graph());
        assert_eq!(
            g.subgraph_outer_face(&whole).unwrap(),
            g.outer_face().clone()
        );
        let e = Subgraph::new([], [(5, 6)]);
        let w = g.subgraph_outer_face(&e).unwrap();
        assert_eq!(w.len(), 2);
        // inner 4-cycle 5-6-10-9
        let c = Subgraph::new([], [(5, 6), (6, 10), (10, 9), (9, 5)]);
        let w = g.subgraph_outer_face(&c).unwrap();
        assert_eq!(w.len(), 4);
        let sf = SubgraphFaces::new(&g, &c).unwrap();
        // the grid's outer face is absorbed by the unbounded side of the cycle
        assert!(sf.vertex_in_outer_face(0));
        assert!(sf.vertex_in_outer_face(15));
        assert!(!sf.vertex_in_outer_face(5));
        assert!(sf.edge_in_outer_face(1, 5));
        assert!(sf.contains_in_outer_closure(&Subgraph::new([], [(0, 1), (1, 5)])));
        let single = Subgraph::new([6], []);
        assert_eq!(g.subgraph_outer_face(&single).unwrap().vertices, vec![6]);
        assert!(g.subgraph_outer_face(&Subgraph::default()).is_err());
    }

    #[test]
    fn outer_face_stable_under_extra_vertices_outside() {
        let g = grid(4, 4);
        let c = Subgraph::new([], [(5, 6), (6, 10), (10, 9), (9, 5)]);
        let a = g.subgraph_outer_face(&c).unwrap();
        let b = g
            .subgraph_outer_face(&c.union(&Subgraph::new([0, 15], [])))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn boundary_attachments_examples() {
        let g = grid(4, 4);
        let whole = Subgraph::whole(g.graph());
        assert!(g
            .boundary_attachments(&whole, &[5, 6, 9, 10])
            .unwrap()
            .is_empty());
        let c = Subgraph::new([], [(5, 6), (6, 10), (10, 9), (9, 5)]);
        assert_eq!(g.boundary_attachments(&c, &[5, 10]).unwrap(), vec![5, 10]);
    }

    #[test]
    fn bridges_examples() {
        let g = grid(3, 3);
        assert!(bridges(g.graph(), &Subgraph::whole(g.graph())).is_empty());
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let b = bridges(&c5, &Subgraph::new([], [(0, 1)]));
        assert_eq!(b.len(), 1);
        assert!(!b[0].trivial);
        assert_eq!(b[0].attachments, vec![0, 1]);
        assert_eq!(b[0].edges.len(), 4);
    }

    /// A forest path 0..5 with four chords between forest vertices and four
    /// outside vertices each hanging off the forest.
    #[test]
    fn four_trivial_four_nontrivial() {
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (0, 2),
            (1, 3),
            (2, 4),
            (3, 5),
            (6, 0),
            (6, 1),
            (7, 2),
            (7, 3),
            (8, 4),
            (8, 5),
            (9, 0),
            (9, 5),
        ];
        let g = Graph::from_edges(10, edges).unwrap();
        let f = Subgraph::new([], edges[..5].iter().copied());
        let b = bridges(&g, &f);
        assert_eq!(b.iter().filter(|x| x.trivial).count(), 4);
        assert_eq!(b.iter().filter(|x| !x.trivial).count(), 4);
        // every edge outside F lies in exactly one bridge
        let mut seen: Vec<Edge> = b.iter().flat_map(|x| x.edges.clone()).collect();
        seen.sort_unstable();
        let mut expect: Vec<Edge> = g.edges().filter(|&(u, v)| !f.has_edge(u, v)).collect();
        expect.sort_unstable();
        assert_eq!(seen, expect);
        assert_eq!(b[3].attachments, vec![0, 5]);
    }
}
