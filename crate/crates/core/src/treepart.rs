//! Tree-decompositions, detached tree-partitions and the 2-blocking
//! partition for graphs of bounded treewidth and degree.
//!
//! Levels in [`two_blocking_partition`] are depths of nodes in the
//! partition tree: the layering in the construction is taken over the tree
//! `T` rooted at `z`, since its levels index parts rather than vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{verify_ell_blocking, BlockingError, SearchOptions};
use crate::graph::{Graph, GraphError, Partition, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreePartError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid tree-partition: {0}")]
    InvalidPartition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("assertion {claim} failed: {detail}")]
    Assertion { claim: String, detail: String },
}

fn fail(claim: &str, detail: String) -> TreePartError {
    TreePartError::Assertion {
        claim: claim.to_string(),
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeDecompositionJson", into = "TreeDecompositionJson")]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    tree_edges: Vec<(usize, usize)>,
    root: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeDecompositionJson {
    bags: Vec<Vec<Vertex>>,
    tree_edges: Vec<[usize; 2]>,
    root: usize,
}

impl TryFrom<TreeDecompositionJson> for TreeDecomposition {
    type Error = TreePartError;
    fn try_from(j: TreeDecompositionJson) -> Result<Self, Self::Error> {
        TreeDecomposition::new(
            j.bags,
            j.tree_edges.iter().map(|e| (e[0], e[1])).collect(),
            j.root,
        )
    }
}

impl From<TreeDecomposition> for TreeDecompositionJson {
    fn from(t: TreeDecomposition) -> Self {
        TreeDecompositionJson {
            bags: t.bags,
            tree_edges: t.tree_edges.iter().map(|&(a, b)| [a, b]).collect(),
            root: t.root,
        }
    }
}

impl TreeDecomposition {
    /// Checks that `tree_edges` form a tree on the bag indices. Validity
    /// against a graph is checked separately by [`TreeDecomposition::validate`].
    pub fn new(
        mut bags: Vec<Vec<Vertex>>,
        tree_edges: Vec<(usize, usize)>,
        root: usize,
    ) -> Result<Self, TreePartError> {
        let nb = bags.len();
        let bad = |s: String| TreePartError::InvalidDecomposition(s);
        if nb == 0 {
            return Err(bad("no bags".into()));
        }
        if root >= nb {
            return Err(bad(format!("root {root} out of range")));
        }
        if tree_edges.len() + 1 != nb {
            return Err(bad(format!(
                "{} tree edges for {nb} bags",
                tree_edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nb];
        for &(a, b) in &tree_edges {
            if a >= nb || b >= nb || a == b {
                return Err(bad(format!("bad tree edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = Graph::from_edges(nb, tree_edges.iter().copied())
            .map_err(|e| bad(format!("tree edges: {e}")))?;
        if !tree.is_connected() {
            return Err(bad("tree edges do not form a tree".into()));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        for b in bags.iter_mut() {
            b.sort_unstable();
            b.dedup();
        }
        Ok(TreeDecomposition {
            bags,
            tree_edges,
            root,
            adj,
        })
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn tree_neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    /// Maximum bag size minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Every vertex and edge covered, and the bags containing each vertex
    /// form a subtree.
    pub fn validate(&self, g: &Graph) -> Result<(), TreePartError> {
        let bad = |s: String| TreePartError::InvalidDecomposition(s);
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(bad(format!("bag {x} holds unknown vertex {v}")));
                }
                holders[v].push(x);
            }
        }
        let nb = self.bags.len();
        let mut mark = vec![false; nb];
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return Err(bad(format!("vertex {v} is in no bag")));
            }
            for &x in hs {
                mark[x] = true;
            }
            let mut seen = 1;
            let mut stack = vec![hs[0]];
            mark[hs[0]] = false;
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if mark[y] {
                        mark[y] = false;
                        seen += 1;
                        stack.push(y);
                    }
                }
            }
            if seen != hs.len() {
                for &x in hs {
                    mark[x] = false;
                }
                return Err(bad(format!("bags holding vertex {v} are not connected")));
            }
        }
        for (u, v) in g.edges() {
            let covered = holders[u]
                .iter()
                .any(|&x| self.bags[x].binary_search(&v).is_ok());
            if !covered {
                return Err(bad(format!("edge {u}-{v} is in no bag")));
            }
        }
        Ok(())
    }

    /// Parent of every node when rooted at `root`, plus a preorder.
    fn rooted(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let nb = self.bags.len();
        let mut parent = vec![None; nb];
        let mut seen = vec![false; nb];
        let mut order = vec![self.root];
        seen[self.root] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    order.push(y);
                }
            }
        }
        (parent, order)
    }
}

/// Tree-decomposition from a min-fill elimination order (ties to the lowest
/// id). No optimality claim.
pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new(), 0).expect("single bag");
    }
    let mut adj: Vec<std::collections::BTreeSet<Vertex>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut bag_of = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let fill = |v: Vertex| -> usize {
            let nb: Vec<Vertex> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        missing += 1;
                    }
                }
            }
            missing
        };
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| (fill(v), adj[v].len(), v))
            .unwrap();
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        eliminated[v] = true;
        position[v] = step;
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bag_of[v] = bag;
        order.push((v, nb));
    }
    // bag of v hangs below the bag of its earliest-eliminated later neighbour
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (v, nb) in &order {
        match nb.iter().min_by_key(|&&w| position[w]) {
            Some(&w) => edges.push((position[*v], position[w])),
            None => roots.push(position[*v]),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    let bags: Vec<Vec<Vertex>> = order.iter().map(|(v, _)| bag_of[*v].clone()).collect();
    let root = *roots.last().unwrap();
    TreeDecomposition::new(bags, edges, root).expect("elimination tree is a tree")
}

/// A rooted tree-partition: bags indexed by nodes of a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTreePartition {
    pub bags: Vec<Vec<Vertex>>,
    pub parent: Vec<Option<usize>>,
    pub root: usize,
    pub detached: bool,
}

impl RootedTreePartition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree(&self, x: usize) -> usize {
        self.parent.iter().filter(|&&p| p == Some(x)).count()
            + usize::from(self.parent[x].is_some())
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0; self.bags.len()];
        for (x, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                deg[x] += 1;
                deg[p] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn depth(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.bags.len()];
        fn get(x: usize, parent: &[Option<usize>], depth: &mut [usize]) -> usize {
            if depth[x] == usize::MAX {
                depth[x] = match parent[x] {
                    None => 0,
                    Some(p) => get(p, parent, depth) + 1,
                };
            }
            depth[x]
        }
        for x in 0..self.bags.len() {
            get(x, &self.parent, &mut depth);
        }
        depth
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (x, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(x);
            }
        }
        ch
    }

    /// Bag index of each vertex.
    pub fn node_of(&self, n: usize) -> Vec<usize> {
        let mut node = vec![usize::MAX; n];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                node[v] = x;
            }
        }
        node
    }

    /// Bags partition `V(g)`, the parent links form a tree rooted at
    /// `root`, and every edge lies in a bag or joins a parent to a child.
    pub fn validate(&self, g: &Graph) -> Result<(), TreePartError> {
        let bad = |s: String| TreePartError::InvalidPartition(s);
        let nb = self.bags.len();
        if self.parent.len() != nb || self.root >= nb || self.parent[self.root].is_some() {
            return Err(bad("malformed tree".into()));
        }
        let depth = self.depth();
        if (0..nb).any(|x| x != self.root && self.parent[x].is_none())
            || depth.iter().any(|&d| d > nb)
        {
            return Err(bad("parent links do not form a tree".into()));
        }
        let mut node = vec![usize::MAX; g.n()];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() || node[v] != usize::MAX {
                    return Err(bad(format!("vertex {v} misplaced")));
                }
                node[v] = x;
            }
        }
        if let Some(v) = node.iter().position(|&x| x == usize::MAX) {
            return Err(bad(format!("vertex {v} is in no bag")));
        }
        for (u, v) in g.edges() {
            let (a, b) = (node[u], node[v]);
            if a != b && self.parent[a] != Some(b) && self.parent[b] != Some(a) {
                return Err(bad(format!(
                    "edge {u}-{v} joins non-adjacent nodes {a}, {b}"
                )));
            }
        }
        Ok(())
    }

    /// Direct scan of the detached property over every parent-child pair.
    pub fn check_detached(&self, g: &Graph) -> bool {
        let node = self.node_of(g.n());
        let mut comp = vec![usize::MAX; g.n()];
        for bag in &self.bags {
            label_components(g, bag, &node, &mut comp);
        }
        for (y, p) in self.parent.iter().enumerate() {
            let Some(x) = *p else { continue };
            for &v in &self.bags[y] {
                let mut seen = None;
                for &w in g.neighbors(v) {
                    if node[w] == x {
                        match seen {
                            None => seen = Some(comp[w]),
                            Some(c) if c != comp[w] => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }
}

/// Writes into `comp` a component label (lowest member) for each vertex of
/// `bag` within `G[bag]`.
fn label_components(g: &Graph, bag: &[Vertex], node: &[usize], comp: &mut [usize]) {
    let Some(&first) = bag.first() else { return };
    let x = node[first];
    for &s in bag {
        if comp[s] != usize::MAX && comp[s] <= s {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if node[w] == x && comp[w] != s {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
    }
}

/// Grows `s` inside `alive` by repeatedly adding the lowest-id vertex that
/// sees two or more components of the current set.
pub fn detach_expand(g: &Graph, s: &[Vertex], alive: Option<&[bool]>) -> Vec<Vertex> {
    let inside = |v: Vertex| alive.is_none_or(|m| m[v]);
    let mut in_x = vec![false; g.n()];
    for &v in s {
        in_x[v] = true;
    }
    let mut x: Vec<Vertex> = s.to_vec();
    x.sort_unstable();
    x.dedup();
    loop {
        let comps = g.components(Some(&in_x));
        let mut label = vec![usize::MAX; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                label[v] = i;
            }
        }
        let mut candidates: Vec<Vertex> = x
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| !in_x[w] && inside(w))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let pick = candidates.into_iter().find(|&w| {
            let mut first = None;
            g.neighbors(w).iter().any(|&u| {
                if !in_x[u] {
                    return false;
                }
                match first {
                    None => {
                        first = Some(label[u]);
                        false
                    }
                    Some(l) => l != label[u],
                }
            })
        });
        match pick {
            Some(w) => {
                in_x[w] = true;
                let pos = x.binary_search(&w).unwrap_err();
                x.insert(pos, w);
            }
            None => return x,
        }
    }
}

/// A separation `(V1, V2)` of the live vertices with `V1 ∪ V2` everything,
/// no edges between `V1 ∖ V2` and `V2 ∖ V1`, and `V1 ∩ V2` inside one bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub side1: Vec<Vertex>,
    pub side2: Vec<Vertex>,
    pub separator: Vec<Vertex>,
}

/// Centroid-bag separator: the bag minimising the largest `S`-weight of the
/// components of the decomposition tree minus that node (ties to the lowest
/// node id), with components split between the sides to balance `S`.
pub fn balanced_separator(
    g: &Graph,
    s: &[Vertex],
    td: &TreeDecomposition,
    alive: Option<&[bool]>,
) -> Separation {
    let inside = |v: Vertex| alive.is_none_or(|m| m[v]);
    let mut in_s = vec![false; g.n()];
    for &v in s {
        in_s[v] = true;
    }
    let nb = td.bags.len();
    let (parent, order) = td.rooted();
    // first node holding each vertex in preorder is the top of its subtree
    let mut top_seen = vec![false; g.n()];
    let mut own = vec![0usize; nb];
    for &x in &order {
        for &v in &td.bags[x] {
            if inside(v) && !top_seen[v] {
                top_seen[v] = true;
                if in_s[v] {
                    own[x] += 1;
                }
            }
        }
    }
    let total: usize = own.iter().sum();
    let mut sub = own.clone();
    for &x in order.iter().rev() {
        if let Some(p) = parent[x] {
            sub[p] += sub[x];
        }
    }
    let weight_in_bag = |x: usize| td.bags[x].iter().filter(|&&v| inside(v) && in_s[v]).count();
    // S-weight of the branch of T − x through neighbour y, excluding B_x
    let branch = |x: usize, y: usize| -> usize {
        if parent[y] == Some(x) {
            sub[y]
        } else {
            total - sub[x] - (weight_in_bag(x) - own[x])
        }
    };
    let best = (0..nb)
        .min_by_key(|&x| {
            (
                td.adj[x].iter().map(|&y| branch(x, y)).max().unwrap_or(0),
                x,
            )
        })
        .unwrap();
    let mut pieces: Vec<(usize, usize)> =
        td.adj[best].iter().map(|&y| (branch(best, y), y)).collect();
    // exact two-way split of the piece weights, heaviest piece first
    pieces.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let wsum: usize = pieces.iter().map(|p| p.0).sum();
    let mut reach: Vec<Option<usize>> = vec![None; wsum + 1];
    reach[0] = Some(usize::MAX);
    for (i, &(w, _)) in pieces.iter().enumerate() {
        for t in (w..=wsum).rev() {
            if reach[t].is_none() && reach[t - w].is_some() {
                reach[t] = Some(i);
            }
        }
    }
    let target = (0..=wsum)
        .filter(|&t| reach[t].is_some())
        .min_by_key(|&t| (t.max(wsum - t), t))
        .unwrap_or(0);
    let mut on_side1 = vec![false; pieces.len()];
    let mut t = target;
    while t > 0 {
        let i = reach[t].unwrap();
        on_side1[i] = true;
        t -= pieces[i].0;
    }
    // vertices of each branch: collect by walking the tree away from `best`
    let mut side_of = vec![0u8; g.n()];
    let mut sep_mask = vec![false; g.n()];
    for &v in &td.bags[best] {
        if inside(v) {
            sep_mask[v] = true;
        }
    }
    for (i, &(_, y)) in pieces.iter().enumerate() {
        let mark = if on_side1[i] { 1 } else { 2 };
        let mut stack = vec![(y, best)];
        while let Some((x, from)) = stack.pop() {
            for &v in &td.bags[x] {
                if inside(v) && !sep_mask[v] {
                    side_of[v] = mark;
                }
            }
            for &z in &td.adj[x] {
                if z != from {
                    stack.push((z, x));
                }
            }
        }
    }
    let live = |v: &Vertex| inside(*v);
    let separator: Vec<Vertex> = (0..g.n()).filter(|&v| sep_mask[v]).collect();
    let side1: Vec<Vertex> = (0..g.n())
        .filter(live)
        .filter(|&v| sep_mask[v] || side_of[v] == 1)
        .collect();
    let side2: Vec<Vertex> = (0..g.n())
        .filter(live)
        .filter(|&v| sep_mask[v] || side_of[v] == 2)
        .collect();
    Separation {
        side1,
        side2,
        separator,
    }
}

/// Statistics gathered over one run of [`heart`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeartStats {
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    pub padded: usize,
    pub max_depth: usize,
    pub nodes_checked: usize,
}

struct HeartRun<'a> {
    g: &'a Graph,
    td: &'a TreeDecomposition,
    k: usize,
    d: usize,
    stats: HeartStats,
}

/// A tree-partition under construction; node 0 is the root.
struct Part {
    bags: Vec<Vec<Vertex>>,
    parent: Vec<Option<usize>>,
}

impl HeartRun<'_> {
    fn run(&mut self, alive: &[bool], s: &[Vertex], depth: usize) -> Result<Part, TreePartError> {
        let (g, k, d) = (self.g, self.k, self.d);
        let live: Vec<Vertex> = (0..g.n()).filter(|&v| alive[v]).collect();
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if depth > g.n() {
            return Err(fail(
                "heart.depth",
                format!("recursion depth {depth} exceeds n"),
            ));
        }
        if s.len() < 5 * k || s.len() > 30 * k * d {
            return Err(TreePartError::Precondition(format!(
                "|S| = {} outside [{}, {}]",
                s.len(),
                5 * k,
                30 * k * d
            )));
        }
        let out = if live.len() - s.len() <= 90 * k * d {
            self.stats.case1 += 1;
            let bz = detach_expand(g, s, Some(alive));
            let mut in_z = vec![false; g.n()];
            for &v in &bz {
                in_z[v] = true;
            }
            let by: Vec<Vertex> = live.iter().copied().filter(|&v| !in_z[v]).collect();
            if by.is_empty() {
                Part {
                    bags: vec![bz],
                    parent: vec![None],
                }
            } else {
                Part {
                    bags: vec![bz, by],
                    parent: vec![None, Some(0)],
                }
            }
        } else if s.len() <= 15 * k {
            self.stats.case2 += 1;
            let bz = detach_expand(g, s, Some(alive));
            let mut rest = alive.to_vec();
            for &v in &bz {
                rest[v] = false;
            }
            let mut s2: Vec<Vertex> = bz
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().copied())
                .filter(|&w| rest[w])
                .collect();
            s2.sort_unstable();
            s2.dedup();
            if s2.len() < 5 * k {
                self.stats.padded += 1;
                let mut chosen = vec![false; g.n()];
                for &v in &s2 {
                    chosen[v] = true;
                }
                let need = 5 * k - s2.len();
                let extra: Vec<Vertex> = (0..g.n())
                    .filter(|&v| rest[v] && !chosen[v])
                    .take(need)
                    .collect();
                if extra.len() < need {
                    return Err(fail(
                        "heart.padding",
                        format!("only {} vertices left to pad S'", extra.len()),
                    ));
                }
                s2.extend(extra);
                s2.sort_unstable();
            }
            let sub = self.run(&rest, &s2, depth + 1)?;
            let mut bags = vec![bz];
            let mut parent = vec![None];
            for (x, bag) in sub.bags.into_iter().enumerate() {
                bags.push(bag);
                parent.push(Some(sub.parent[x].map_or(0, |p| p + 1)));
            }
            Part { bags, parent }
        } else {
            self.stats.case3 += 1;
            let sep = balanced_separator(g, s, self.td, Some(alive));
            let mut parts = Vec::new();
            for side in [&sep.side1, &sep.side2] {
                let mut mask = vec![false; g.n()];
                for &v in side.iter() {
                    mask[v] = true;
                }
                let mut si: Vec<Vertex> = s.iter().copied().filter(|&v| mask[v]).collect();
                si.extend(&sep.separator);
                si.sort_unstable();
                si.dedup();
                if si.len() < 5 * k || 3 * si.len() > 2 * s.len() + 3 * k {
                    return Err(fail(
                        "heart.separator",
                        format!("|S_i| = {} for |S| = {}, k = {k}", si.len(), s.len()),
                    ));
                }
                parts.push((mask, si));
            }
            if parts[0].1.len() + parts[1].1.len() > s.len() + 2 * k {
                return Err(fail(
                    "heart.separator",
                    "|S_1| + |S_2| exceeds |S| + 2k".into(),
                ));
            }
            let mut bags: Vec<Vec<Vertex>> = vec![Vec::new()];
            let mut parent = vec![None];
            for (mask, si) in &parts {
                let sub = self.run(mask, si, depth + 1)?;
                let base = bags.len() - 1;
                bags[0].extend(&sub.bags[0]);
                for x in 1..sub.bags.len() {
                    bags.push(sub.bags[x].clone());
                    parent.push(Some(match sub.parent[x] {
                        Some(0) | None => 0,
                        Some(p) => p + base,
                    }));
                }
            }
            bags[0].sort_unstable();
            bags[0].dedup();
            Part { bags, parent }
        };
        self.check(alive, s, &out)?;
        Ok(out)
    }

    /// The five bounds and detachedness, on the tree-partition of the live
    /// subgraph just built.
    fn check(&mut self, alive: &[bool], s: &[Vertex], p: &Part) -> Result<(), TreePartError> {
        let (g, k, d) = (self.g, self.k, self.d);
        self.stats.nodes_checked += 1;
        let rtp = RootedTreePartition {
            bags: p.bags.clone(),
            parent: p.parent.clone(),
            root: 0,
            detached: false,
        };
        let (sub, map) = g.induced(alive);
        let mut new_id = vec![usize::MAX; g.n()];
        for (i, &v) in map.iter().enumerate() {
            new_id[v] = i;
        }
        let local = RootedTreePartition {
            bags: rtp
                .bags
                .iter()
                .map(|b| b.iter().map(|&v| new_id[v]).collect())
                .collect(),
            ..rtp.clone()
        };
        local.validate(&sub)?;
        if local.max_degree() > 15 * d {
            return Err(fail(
                "heart.max_tree_degree",
                format!("{} > 15d = {}", local.max_degree(), 15 * d),
            ));
        }
        if local.width() > 90 * k * d {
            return Err(fail(
                "heart.bag_size",
                format!("{} > 90kd = {}", local.width(), 90 * k * d),
            ));
        }
        if let Some(v) = s.iter().find(|v| p.bags[0].binary_search(v).is_err()) {
            return Err(fail(
                "heart.root_holds_s",
                format!("vertex {v} of S missing from root bag"),
            ));
        }
        if p.bags[0].len() + 5 * k > 3 * s.len() {
            return Err(fail(
                "heart.root_size",
                format!("|B_z| = {} > 3|S| - 5k", p.bags[0].len()),
            ));
        }
        if 2 * k * (local.degree(0) + 1) > s.len() {
            return Err(fail(
                "heart.root_degree",
                format!(
                    "deg(z) = {} > |S|/(2k) - 1 with |S| = {}",
                    local.degree(0),
                    s.len()
                ),
            ));
        }
        if !local.check_detached(&sub) {
            return Err(fail(
                "heart.detached",
                "tree-partition is not detached".into(),
            ));
        }
        Ok(())
    }
}

/// Detached tree-partition of `g` with root bag containing `s`, following
/// the three-case recursion. `k` bounds bag sizes of `td` and `d` the
/// maximum degree.
pub fn heart(
    g: &Graph,
    s: &[Vertex],
    k: usize,
    d: usize,
    td: &TreeDecomposition,
) -> Result<(RootedTreePartition, HeartStats), TreePartError> {
    td.validate(g)?;
    if td.width() + 1 > k {
        return Err(TreePartError::Precondition(format!(
            "decomposition width {} ≥ k = {k}",
            td.width()
        )));
    }
    if g.max_degree() > d {
        return Err(TreePartError::Precondition(format!(
            "Δ(G) = {} > d = {d}",
            g.max_degree()
        )));
    }
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut run = HeartRun {
        g,
        td,
        k,
        d,
        stats: HeartStats::default(),
    };
    let alive = vec![true; g.n()];
    let part = run.run(&alive, &s, 0)?;
    let mut rtp = RootedTreePartition {
        bags: part.bags,
        parent: part.parent,
        root: 0,
        detached: false,
    };
    rtp.detached = rtp.check_detached(g);
    Ok((rtp, run.stats))
}

/// Detached tree-partition of width at most `90(tw+1)Δ` whose tree has
/// maximum degree at most `15Δ`, where `tw` is the width of `td`.
pub fn improved_tree_partition(
    g: &Graph,
    td: &TreeDecomposition,
) -> Result<(RootedTreePartition, HeartStats), TreePartError> {
    td.validate(g)?;
    let k = td.width() + 1;
    let d = g.max_degree().max(1);
    let (rtp, stats) = if g.n() < 5 * k {
        let rtp = RootedTreePartition {
            bags: vec![(0..g.n()).collect()],
            parent: vec![None],
            root: 0,
            detached: true,
        };
        (rtp, HeartStats::default())
    } else {
        let s: Vec<Vertex> = (0..5 * k).collect();
        heart(g, &s, k, d, td)?
    };
    rtp.validate(g)?;
    if rtp.width() > 90 * k * d {
        return Err(fail(
            "tree_partition.width",
            format!("{} > 90(tw+1)Δ = {}", rtp.width(), 90 * k * d),
        ));
    }
    if rtp.max_degree() > 15 * d {
        return Err(fail(
            "tree_partition.tree_degree",
            format!("{} > 15Δ", rtp.max_degree()),
        ));
    }
    if !rtp.detached {
        return Err(fail("tree_partition.detached", "not detached".into()));
    }
    Ok((rtp, stats))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBlockingResult {
    pub partition: Partition,
    pub tree_partition: RootedTreePartition,
    pub stats: HeartStats,
    pub width_bound: usize,
}

/// Connected partition with every clean path of length at most 2, built by
/// colouring the edges of a detached tree-partition by level parity.
pub fn two_blocking_partition(
    g: &Graph,
    td: &TreeDecomposition,
) -> Result<TwoBlockingResult, TreePartError> {
    let (rtp, stats) = improved_tree_partition(g, td)?;
    let node = rtp.node_of(g.n());
    let level = rtp.depth();
    let red = g.edges().filter(|&(u, v)| {
        let (a, b) = (node[u], node[v]);
        a == b || level[a].min(level[b]) % 2 == 1
    });
    let red = Graph::from_edges(g.n(), red)?;
    let partition = Partition::from_parts(g.n(), red.components(None))?;
    let k = td.width() + 1;
    let d = g.max_degree().max(1);
    let width_bound = 1350 * k * d * d;
    if partition.width() > width_bound {
        return Err(fail(
            "two_blocking.width",
            format!("{} > {width_bound}", partition.width()),
        ));
    }
    // each part sits inside one bag plus the bags of that node's children
    for part in partition.parts() {
        let top = part
            .iter()
            .map(|&v| node[v])
            .min_by_key(|&x| level[x])
            .unwrap();
        if part
            .iter()
            .any(|&v| node[v] != top && rtp.parent[node[v]] != Some(top))
        {
            return Err(fail(
                "two_blocking.part_shape",
                format!("part containing {} spans more than a star of bags", part[0]),
            ));
        }
    }
    let check = verify_ell_blocking(g, &partition, 2, &SearchOptions::default())?;
    if !check.holds() {
        return Err(fail(
            "two_blocking.blocking",
            format!("{:?}", check.verdict),
        ));
    }
    Ok(TwoBlockingResult {
        partition,
        tree_partition: rtp,
        stats,
        width_bound,
    })
}
