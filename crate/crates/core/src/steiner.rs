//! Steiner trees in a vertex-masked subgraph with unit edge lengths.
//!
//! Small terminal sets are solved exactly by Dreyfus-Wagner. Larger ones
//! start from a shortest-path tree and are improved by branch-path
//! exchanges until no exchange shortens the tree.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, Vertex};

/// A tree given by its vertices and edges (both sorted, edges normalised).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubTree {
    pub root: Vertex,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl SubTree {
    pub fn single(v: Vertex) -> Self {
        SubTree {
            root: v,
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(
        root: Vertex,
        mut vertices: Vec<Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Self {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        vertices.sort_unstable();
        vertices.dedup();
        SubTree {
            root,
            vertices,
            edges,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Tree adjacency restricted to the tree's own vertices, indexed by
    /// global vertex id.
    pub fn adjacency(&self, n: usize) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Connected with `|E| = |V| − 1`.
    pub fn is_tree(&self, n: usize) -> bool {
        if self.vertices.is_empty() || self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let adj = self.adjacency(n);
        let mut seen = vec![false; n];
        let start = self.vertices[0];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    if !self.contains(w) {
                        return false;
                    }
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertices.len()
    }

    /// The maximal paths whose inner vertices have tree-degree 2 and are not
    /// in `keys`. Leaves and vertices of degree ≥ 3 are always path ends.
    pub fn branch_paths(&self, n: usize, keys: &[bool]) -> Vec<Vec<Vertex>> {
        let adj = self.adjacency(n);
        let is_end = |v: Vertex| keys[v] || adj[v].len() != 2;
        let mut paths = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        for &s in &self.vertices {
            if !is_end(s) {
                continue;
            }
            for &first in &adj[s] {
                if used.contains(&(s.min(first), s.max(first))) {
                    continue;
                }
                let mut path = vec![s, first];
                let (mut prev, mut cur) = (s, first);
                while !is_end(cur) {
                    let next = if adj[cur][0] == prev {
                        adj[cur][1]
                    } else {
                        adj[cur][0]
                    };
                    path.push(next);
                    prev = cur;
                    cur = next;
                }
                for w in path.windows(2) {
                    used.insert((w[0].min(w[1]), w[0].max(w[1])));
                }
                paths.push(path);
            }
        }
        // a cycle-free tree with no end vertex is impossible; a lone vertex has no paths
        paths
    }
}

/// Tuning for [`steiner_tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerOptions {
    /// Exact solving is used only up to this many terminals.
    pub exact_max_terminals: usize,
    /// And only while `3^t · |V|` stays below this.
    pub exact_max_work: u64,
}

impl Default for SteinerOptions {
    fn default() -> Self {
        SteinerOptions {
            exact_max_terminals: 12,
            exact_max_work: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerResult {
    pub tree: SubTree,
    pub exact: bool,
    pub exchanges: usize,
}

fn bfs_within(g: &Graph, alive: &[bool], sources: &[Vertex]) -> (Vec<usize>, Vec<usize>) {
    let mut dist = vec![usize::MAX; g.n()];
    let mut pred = vec![usize::MAX; g.n()];
    let mut q = VecDeque::new();
    for &s in sources {
        if dist[s] == usize::MAX {
            dist[s] = 0;
            q.push_back(s);
        }
    }
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if alive[w] && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                pred[w] = v;
                q.push_back(w);
            }
        }
    }
    (dist, pred)
}

/// Minimum-edge tree in `g[alive]` containing `terminals`, or `None` if the
/// terminals are not connected there.
pub fn steiner_tree(
    g: &Graph,
    alive: &[bool],
    terminals: &[Vertex],
    opts: &SteinerOptions,
) -> Option<SteinerResult> {
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    let first = *terms.first()?;
    if terms.iter().any(|&t| !alive[t]) {
        return None;
    }
    let (dist, _) = bfs_within(g, alive, &[first]);
    if terms.iter().any(|&t| dist[t] == usize::MAX) {
        return None;
    }
    let live = alive.iter().filter(|&&b| b).count() as u64;
    let t = terms.len();
    let exact = t <= opts.exact_max_terminals
        && 3u64
            .checked_pow(t as u32)
            .and_then(|w| w.checked_mul(live))
            .is_some_and(|w| w <= opts.exact_max_work);
    let mut tree = if exact {
        let (sub, map) = g.induced(alive);
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let lt: Vec<Vertex> = terms.iter().map(|&v| local[v]).collect();
        let t = dreyfus_wagner(&sub, &vec![true; sub.n()], &lt);
        SubTree::from_edges(
            first,
            t.vertices.iter().map(|&v| map[v]).collect(),
            t.edges.iter().map(|&(a, b)| (map[a], map[b])),
        )
    } else {
        shortest_path_tree(g, alive, &terms)
    };
    let mut keys = vec![false; g.n()];
    for &v in &terms {
        keys[v] = true;
    }
    prune_leaves(&mut tree, g.n(), &keys);
    let mut exchanges = 0;
    while let Some(better) = improving_exchange(g, alive, &tree, &keys) {
        tree = better;
        prune_leaves(&mut tree, g.n(), &keys);
        exchanges += 1;
    }
    tree.root = first;
    Some(SteinerResult {
        tree,
        exact,
        exchanges,
    })
}

fn shortest_path_tree(g: &Graph, alive: &[bool], terms: &[Vertex]) -> SubTree {
    let mut in_tree = vec![false; g.n()];
    in_tree[terms[0]] = true;
    let mut vertices = vec![terms[0]];
    let mut edges = Vec::new();
    let mut pending: Vec<Vertex> = terms[1..].to_vec();
    while !pending.is_empty() {
        let (dist, pred) = bfs_within(g, alive, &vertices);
        let (i, &t) = pending
            .iter()
            .enumerate()
            .min_by_key(|&(_, &t)| (dist[t], t))
            .unwrap();
        let mut v = t;
        while !in_tree[v] {
            in_tree[v] = true;
            vertices.push(v);
            edges.push((v.min(pred[v]), v.max(pred[v])));
            v = pred[v];
        }
        pending.swap_remove(i);
        pending.retain(|&p| !in_tree[p]);
    }
    SubTree::from_edges(terms[0], vertices, edges)
}

fn dreyfus_wagner(g: &Graph, alive: &[bool], terms: &[Vertex]) -> SubTree {
    let n = g.n();
    let t = terms.len();
    let full = (1usize << t) - 1;
    const INF: u32 = u32::MAX / 4;
    #[derive(Clone, Copy)]
    enum Back {
        None,
        Split(usize),
        Step(Vertex),
    }
    let mut cost = vec![vec![INF; n]; full + 1];
    let mut back = vec![vec![Back::None; n]; full + 1];
    for (i, &x) in terms.iter().enumerate() {
        cost[1 << i][x] = 0;
    }
    for set in 1..=full {
        if set.count_ones() > 1 {
            // subsets holding the lowest bit, so each split is seen once
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            let mut sub = rest;
            loop {
                let a = sub | low;
                if a != set {
                    let b = set ^ a;
                    for v in 0..n {
                        if !alive[v] {
                            continue;
                        }
                        let c = cost[a][v] + cost[b][v];
                        if c < cost[set][v] {
                            cost[set][v] = c;
                            back[set][v] = Back::Split(a);
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        // unit-length relaxation with a bucket queue
        let row = &mut cost[set];
        let maxc = row.iter().filter(|&&c| c < INF).max().copied().unwrap_or(0) as usize + n;
        let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); maxc + 2];
        for v in 0..n {
            if row[v] < INF {
                buckets[row[v] as usize].push(v);
            }
        }
        let mut d = 0;
        while d < buckets.len() {
            let list = std::mem::take(&mut buckets[d]);
            for v in list {
                if row[v] as usize != d {
                    continue;
                }
                for &w in g.neighbors(v) {
                    if alive[w] && row[w] > row[v] + 1 {
                        row[w] = row[v] + 1;
                        back[set][w] = Back::Step(v);
                        if (row[w] as usize) < buckets.len() {
                            buckets[row[w] as usize].push(w);
                        }
                    }
                }
            }
            d += 1;
        }
    }
    let root = terms[0];
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((set, v)) = stack.pop() {
        vertices.push(v);
        match back[set][v] {
            Back::None => {}
            Back::Split(a) => {
                stack.push((a, v));
                stack.push((set ^ a, v));
            }
            Back::Step(u) => {
                edges.push((u.min(v), u.max(v)));
                stack.push((set, u));
            }
        }
    }
    let raw = SubTree::from_edges(root, vertices, edges);
    spanning_subtree(&raw, n)
}

/// BFS spanning tree of a connected edge set; a no-op on trees.
fn spanning_subtree(t: &SubTree, n: usize) -> SubTree {
    let adj = t.adjacency(n);
    let mut seen = vec![false; n];
    seen[t.root] = true;
    let mut q = VecDeque::from([t.root]);
    let mut edges = Vec::new();
    let mut vertices = vec![t.root];
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                vertices.push(w);
                edges.push((v, w));
                q.push_back(w);
            }
        }
    }
    SubTree::from_edges(t.root, vertices, edges)
}

/// Repeatedly removes leaves outside `keys`.
pub fn prune_leaves(t: &mut SubTree, n: usize, keys: &[bool]) {
    loop {
        let adj = t.adjacency(n);
        let drop: Vec<Vertex> = t
            .vertices
            .iter()
            .copied()
            .filter(|&v| !keys[v] && adj[v].len() <= 1 && t.vertices.len() > 1)
            .collect();
        if drop.is_empty() {
            return;
        }
        t.vertices.retain(|v| drop.binary_search(v).is_err());
        t.edges
            .retain(|&(a, b)| drop.binary_search(&a).is_err() && drop.binary_search(&b).is_err());
    }
}

/// First branch path (in [`SubTree::branch_paths`] order) that can be
/// replaced by a strictly shorter path through vertices outside the tree.
pub fn improving_exchange(
    g: &Graph,
    alive: &[bool],
    t: &SubTree,
    keys: &[bool],
) -> Option<SubTree> {
    let n = g.n();
    let mut in_tree = vec![false; n];
    for &v in &t.vertices {
        in_tree[v] = true;
    }
    for path in t.branch_paths(n, keys) {
        let len = path.len() - 1;
        // components of the tree after dropping the path's edges and inner vertices
        let inner = &path[1..path.len() - 1];
        let mut removed: Vec<Edge> = path
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect();
        removed.sort_unstable();
        let adj = t.adjacency(n);
        let mut side = vec![0u8; n];
        let mut stack = vec![path[0]];
        side[path[0]] = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if side[w] == 0 && removed.binary_search(&(v.min(w), v.max(w))).is_err() {
                    side[w] = 1;
                    stack.push(w);
                }
            }
        }
        let target = *path.last().unwrap();
        if side[target] == 1 {
            continue;
        }
        // shortest path from side 1 to the far component through non-tree vertices
        let mut far = vec![false; n];
        let mut stack = vec![target];
        far[target] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !far[w] && removed.binary_search(&(v.min(w), v.max(w))).is_err() {
                    far[w] = true;
                    stack.push(w);
                }
            }
        }
        let passable = |v: Vertex| alive[v] && (!in_tree[v] || inner.contains(&v));
        let sources: Vec<Vertex> = t
            .vertices
            .iter()
            .copied()
            .filter(|&v| side[v] == 1)
            .collect();
        let mut dist = vec![usize::MAX; n];
        let mut pred = vec![usize::MAX; n];
        let mut q = VecDeque::new();
        for &s in &sources {
            dist[s] = 0;
            q.push_back(s);
        }
        let mut hit = None;
        'search: while let Some(v) = q.pop_front() {
            if dist[v] + 1 >= len {
                break;
            }
            for &w in g.neighbors(v) {
                if dist[w] != usize::MAX {
                    continue;
                }
                if far[w] {
                    pred[w] = v;
                    hit = Some(w);
                    break 'search;
                }
                if passable(w) {
                    dist[w] = dist[v] + 1;
                    pred[w] = v;
                    q.push_back(w);
                }
            }
        }
        let Some(end) = hit else { continue };
        let mut vertices: Vec<Vertex> = t
            .vertices
            .iter()
            .copied()
            .filter(|v| !inner.contains(v))
            .collect();
        let mut edges: Vec<Edge> = t
            .edges
            .iter()
            .copied()
            .filter(|e| removed.binary_search(e).is_err())
            .collect();
        let mut v = end;
        while side[v] != 1 {
            let u = pred[v];
            edges.push((u.min(v), u.max(v)));
            vertices.push(u);
            v = u;
        }
        return Some(SubTree::from_edges(t.root, vertices, edges));
    }
    None
}

/// Checks the local optimality conditions: leaves are terminals, every
/// branch path is a shortest path in `g[alive]`, and no branch-path exchange
/// shortens the tree. Returns the first violation.
pub fn check_local_minimality(
    g: &Graph,
    alive: &[bool],
    t: &SubTree,
    terminals: &[Vertex],
) -> Result<(), String> {
    let n = g.n();
    if !t.is_tree(n) {
        return Err("not a tree".into());
    }
    if let Some(&v) = t.vertices.iter().find(|&&v| !alive[v]) {
        return Err(format!("vertex {v} outside the allowed subgraph"));
    }
    if let Some(&e) = t.edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(format!("edge {e:?} not in graph"));
    }
    let mut keys = vec![false; n];
    for &v in terminals {
        if !t.contains(v) {
            return Err(format!("terminal {v} missing"));
        }
        keys[v] = true;
    }
    let adj = t.adjacency(n);
    if let Some(&v) = t
        .vertices
        .iter()
        .find(|&&v| adj[v].len() <= 1 && !keys[v] && t.vertices.len() > 1)
    {
        return Err(format!("leaf {v} is not a terminal"));
    }
    for path in t.branch_paths(n, &keys) {
        let (d, _) = bfs_within(g, alive, &[path[0]]);
        let end = *path.last().unwrap();
        if d[end] != path.len() - 1 {
            return Err(format!(
                "branch path {}..{end} has length {} but distance {}",
                path[0],
                path.len() - 1,
                d[end]
            ));
        }
    }
    if improving_exchange(g, alive, t, &keys).is_some() {
        return Err("a branch-path exchange shortens the tree".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(r: usize, c: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if j + 1 < c {
                    e.push((i * c + j, i * c + j + 1));
                }
                if i + 1 < r {
                    e.push((i * c + j, (i + 1) * c + j));
                }
            }
        }
        Graph::from_edges(r * c, e).unwrap()
    }

    /// Fewest vertices of a connected induced subgraph holding the terminals,
    /// by enumeration of vertex sets in increasing size.
    fn brute_min_edges(g: &Graph, terms: &[Vertex]) -> usize {
        let others: Vec<Vertex> = (0..g.n()).filter(|v| !terms.contains(v)).collect();
        for extra in 0..=others.len() {
            let mut idx: Vec<usize> = (0..extra).collect();
            loop {
                let mut mask = vec![false; g.n()];
                for &t in terms {
                    mask[t] = true;
                }
                for &i in &idx {
                    mask[others[i]] = true;
                }
                if g.components(Some(&mask)).len() == 1 {
                    return terms.len() + extra - 1;
                }
                // next combination
                let mut k = extra;
                while k > 0 && idx[k - 1] == others.len() - extra + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                idx[k - 1] += 1;
                for x in k..extra {
                    idx[x] = idx[x - 1] + 1;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn single_and_pair() {
        let g = grid(3, 3);
        let all = vec![true; 9];
        let r = steiner_tree(&g, &all, &[4], &SteinerOptions::default()).unwrap();
        assert_eq!(r.tree.vertices, vec![4]);
        let r = steiner_tree(&g, &all, &[0, 8], &SteinerOptions::default()).unwrap();
        assert_eq!(r.tree.edges.len(), 4);
        check_local_minimality(&g, &all, &r.tree, &[0, 8]).unwrap();
    }

    #[test]
    fn grid_corners_match_brute_force() {
        let g = grid(5, 5);
        let all = vec![true; 25];
        let terms = [0, 4, 20];
        let r = steiner_tree(&g, &all, &terms, &SteinerOptions::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.tree.edges.len(), 8);
        assert_eq!(brute_min_edges(&g, &terms), 8);
    }

    #[test]
    fn unreachable_terminals() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(steiner_tree(&g, &[true; 4], &[0, 3], &SteinerOptions::default()).is_none());
        let mut alive = vec![true; 9];
        alive[4] = false;
        alive[1] = false;
        alive[3] = false;
        assert!(steiner_tree(&grid(3, 3), &alive, &[0, 8], &SteinerOptions::default()).is_none());
    }

    #[test]
    fn exchange_fixes_detour() {
        // tree goes the long way round a 6-cycle
        let g = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let t = SubTree::from_edges(0, vec![0, 1, 2, 3, 4], [(0, 1), (1, 2), (2, 3), (3, 4)]);
        let mut keys = vec![false; 6];
        keys[0] = true;
        keys[4] = true;
        let better = improving_exchange(&g, &[true; 6], &t, &keys).unwrap();
        assert_eq!(better.edges.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn exact_matches_brute_force(r in 2usize..4, c in 2usize..5, picks in proptest::collection::vec(0usize..20, 1..5)) {
            let g = grid(r, c);
            let mut terms: Vec<Vertex> = picks.into_iter().map(|p| p % g.n()).collect();
            terms.sort_unstable();
            terms.dedup();
            let all = vec![true; g.n()];
            let ex = steiner_tree(&g, &all, &terms, &SteinerOptions::default()).unwrap();
            prop_assert!(ex.exact);
            prop_assert_eq!(ex.tree.edges.len(), brute_min_edges(&g, &terms));
            check_local_minimality(&g, &all, &ex.tree, &terms).map_err(TestCaseError::fail)?;
        }

        #[test]
        fn heuristic_is_locally_minimal(r in 3usize..9, c in 3usize..9, picks in proptest::collection::vec(0usize..80, 1..14)) {
            let g = grid(r, c);
            let mut terms: Vec<Vertex> = picks.into_iter().map(|p| p % g.n()).collect();
            terms.sort_unstable();
            terms.dedup();
            let all = vec![true; g.n()];
            let opts = SteinerOptions { exact_max_terminals: 0, ..Default::default() };
            let h = steiner_tree(&g, &all, &terms, &opts).unwrap();
            prop_assert!(!h.exact);
            check_local_minimality(&g, &all, &h.tree, &terms).map_err(TestCaseError::fail)?;
            let ex = steiner_tree(&g, &all, &terms, &SteinerOptions { exact_max_work: u64::MAX, ..Default::default() }).unwrap();
            prop_assert!(ex.tree.edges.len() <= h.tree.edges.len());
        }
    }
}
