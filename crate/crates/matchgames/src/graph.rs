//! Graphs, bipartite graphs and hypergraphs with the matching machinery the
//! games are built on: line graphs, bipartite double covers, the iterated
//! degree-1 reduction, exhaustive maximum matchings, Hall violators and
//! exact independence numbers.
//!
//! Vertices are dense `0..n` integers and edge lists are kept sorted, so any
//! place that indexes answers by edges (games, correlations, certificates)
//! sees the same lexicographic order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const DEFAULT_MATCHING_CAP: usize = 32;
pub const DEFAULT_INDEPENDENCE_CAP: usize = 24;

/// Simple undirected graph. No self-loops, no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for n={n}"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", e.0, e.1)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    /// Cycle 0-1-...-(n-1)-0. Requires n >= 3.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}")));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((i, i + 5)); // spokes
            edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
        }
        Graph::new(10, edges).expect("petersen is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order; this order defines edge indices.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of `{u,v}` in the lexicographic edge order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).ok()
    }

    /// Indices of edges incident to `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.adj[v]
            .iter()
            .map(|&u| self.edge_index(v, u).expect("adjacency is consistent"))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("graph {}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

/// Bipartite graph with separate left/right index spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize)>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (l, r) in edges {
            if l >= n_left || r >= n_right {
                return Err(Error::InvalidGraph(format!(
                    "edge ({l},{r}) out of range for {n_left}+{n_right}"
                )));
            }
            if !set.insert((l, r)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({l},{r})")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut left_adj = vec![Vec::new(); n_left];
        let mut right_adj = vec![Vec::new(); n_right];
        for &(l, r) in &edges {
            left_adj[l].push(r);
            right_adj[r].push(l);
        }
        for a in left_adj.iter_mut().chain(right_adj.iter_mut()) {
            a.sort_unstable();
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            edges,
            left_adj,
            right_adj,
        })
    }

    /// K_{n,k}: every left vertex adjacent to every right vertex.
    pub fn complete(n_left: usize, n_right: usize) -> Self {
        let edges = (0..n_left).flat_map(|l| (0..n_right).map(move |r| (l, r)));
        BipartiteGraph::new(n_left, n_right, edges).expect("complete bipartite is valid")
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn left_neighbors(&self, l: usize) -> &[usize] {
        &self.left_adj[l]
    }

    pub fn right_neighbors(&self, r: usize) -> &[usize] {
        &self.right_adj[r]
    }

    pub fn left_degree(&self, l: usize) -> usize {
        self.left_adj[l].len()
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.left_adj[l].binary_search(&r).is_ok()
    }

    pub fn edge_index(&self, l: usize, r: usize) -> Option<usize> {
        self.edges.binary_search(&(l, r)).ok()
    }

    /// Indices of edges incident to left vertex `l`, ascending.
    pub fn incident_edges(&self, l: usize) -> Vec<usize> {
        self.left_adj[l]
            .iter()
            .map(|&r| self.edge_index(l, r).expect("adjacency is consistent"))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("bipartite {} {}\n", self.n_left, self.n_right);
        for &(l, r) in &self.edges {
            let _ = writeln!(s, "{l} {r}");
        }
        s
    }
}

/// Hypergraph: list of pairwise distinct nonempty vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, hyperedges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for h in hyperedges {
            let set: BTreeSet<usize> = h.into_iter().collect();
            if set.is_empty() {
                return Err(Error::InvalidGraph("empty hyperedge".into()));
            }
            if let Some(&v) = set.iter().next_back() {
                if v >= n {
                    return Err(Error::InvalidGraph(format!(
                        "hyperedge vertex {v} out of range for n={n}"
                    )));
                }
            }
            let h: Vec<usize> = set.iter().copied().collect();
            if !seen.insert(h.clone()) {
                return Err(Error::InvalidGraph(format!("duplicate hyperedge {h:?}")));
            }
            out.push(h);
        }
        Ok(Hypergraph { n, hyperedges: out })
    }

    /// The seven lines of the Fano plane on points 0..6.
    pub fn fano() -> Self {
        let lines = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        Hypergraph::new(7, lines).expect("fano is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("hypergraph {}\n", self.n);
        for h in &self.hyperedges {
            let words: Vec<String> = h.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", words.join(" "));
        }
        s
    }
}

/// A set of pairwise disjoint edges. For bipartite use the pairs are
/// (left, right) and disjointness is per side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Perfect on a graph with `n` vertices.
    pub fn is_perfect(&self, n: usize) -> bool {
        2 * self.edges.len() == n
    }
}

/// Any graph/bipartite/hypergraph input, as read from the shared text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphInput {
    Graph(Graph),
    Bipartite(BipartiteGraph),
    Hypergraph(Hypergraph),
}

/// Parses the plain-text format:
/// a header line `graph <n>` / `bipartite <nL> <nR>` / `hypergraph <n>`
/// followed by one edge (or hyperedge vertex list) per line. `#` starts a
/// comment; blank lines are ignored.
pub fn parse_graph_text(text: &str) -> Result<GraphInput> {
    let mut lines = text.lines().map(|l| {
        let l = match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        };
        l.trim()
    });
    let header = lines
        .by_ref()
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let nums: Vec<usize> = parts
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Parse(format!("bad header number {p:?}")))
        })
        .collect::<Result<_>>()?;
    let body: Vec<Vec<usize>> = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| Error::Parse(format!("bad vertex {w:?}")))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("graph", [n]) => {
            let mut edges = Vec::new();
            for row in body {
                match row.as_slice() {
                    [u, v] => edges.push((*u, *v)),
                    other => return Err(Error::Parse(format!("expected `u v`, got {other:?}"))),
                }
            }
            Ok(GraphInput::Graph(Graph::new(*n, edges)?))
        }
        ("bipartite", [nl, nr]) => {
            let mut edges = Vec::new();
            for row in body {
                match row.as_slice() {
                    [l, r] => edges.push((*l, *r)),
                    other => return Err(Error::Parse(format!("expected `l r`, got {other:?}"))),
                }
            }
            Ok(GraphInput::Bipartite(BipartiteGraph::new(*nl, *nr, edges)?))
        }
        ("hypergraph", [n]) => Ok(GraphInput::Hypergraph(Hypergraph::new(*n, body)?)),
        _ => Err(Error::Parse(format!("bad graph header {header:?}"))),
    }
}

/// Line graph: one vertex per edge of `g` (in edge-index order), adjacency
/// iff the edges share an endpoint.
pub fn line_graph(g: &Graph) -> Graph {
    let m = g.edge_count();
    let mut edges = Vec::new();
    for i in 0..m {
        let (a, b) = g.edges()[i];
        for j in i + 1..m {
            let (c, d) = g.edges()[j];
            if a == c || a == d || b == c || b == d {
                edges.push((i, j));
            }
        }
    }
    Graph::new(m, edges).expect("line graph construction is valid")
}

/// Line graph of a hypergraph: vertices are hyperedges, adjacency iff they
/// intersect.
pub fn hyper_line_graph(h: &Hypergraph) -> Graph {
    let m = h.hyperedges().len();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let a = &h.hyperedges()[i];
            let b = &h.hyperedges()[j];
            // both sorted
            let intersects = {
                let (mut x, mut y) = (0, 0);
                let mut found = false;
                while x < a.len() && y < b.len() {
                    match a[x].cmp(&b[y]) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            found = true;
                            break;
                        }
                    }
                }
                found
            };
            if intersects {
                edges.push((i, j));
            }
        }
    }
    Graph::new(m, edges).expect("hyper line graph construction is valid")
}

/// Bipartite double cover G x K_2: left and right copies of V(G), with
/// (u, v) and (v, u) present for every edge {u,v}.
pub fn double_cover(g: &Graph) -> BipartiteGraph {
    let n = g.n();
    let edges = g
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect::<Vec<_>>();
    BipartiteGraph::new(n, n, edges).expect("double cover is valid")
}

/// Result of the iterated degree-1 reduction (G -> G#).
#[derive(Clone, Debug)]
pub struct SharpReduction {
    /// The reduced graph, reindexed to dense vertex ids.
    pub reduced: BipartiteGraph,
    /// reduced left index -> original left index
    pub left_map: Vec<usize>,
    /// reduced right index -> original right index
    pub right_map: Vec<usize>,
    /// Removed (left, right) pairs in removal order, original indices.
    pub forced: Vec<(usize, usize)>,
    /// Degree-0 left vertices of the reduced graph, original indices.
    pub lonely_left: Vec<usize>,
}

impl SharpReduction {
    pub fn has_lonely_left(&self) -> bool {
        !self.lonely_left.is_empty()
    }
}

/// Iteratively removes degree-1 left vertices together with their right
/// neighbour until no left vertex has degree 1. Degree-0 left vertices are
/// kept and reported as lonely.
pub fn sharp_reduction(g: &BipartiteGraph) -> SharpReduction {
    sharp_reduction_with_order(g, false)
}

/// Same reduction with the scan direction flipped; used to check that the
/// outcome does not depend on removal order.
pub fn sharp_reduction_with_order(g: &BipartiteGraph, reverse_scan: bool) -> SharpReduction {
    let mut left_alive = vec![true; g.n_left()];
    let mut right_alive = vec![true; g.n_right()];
    let mut degree: Vec<usize> = (0..g.n_left()).map(|l| g.left_degree(l)).collect();
    let mut forced = Vec::new();
    loop {
        let scan: Box<dyn Iterator<Item = usize>> = if reverse_scan {
            Box::new((0..g.n_left()).rev())
        } else {
            Box::new(0..g.n_left())
        };
        let next = scan
            .filter(|&l| left_alive[l])
            .find(|&l| degree[l] == 1);
        let Some(l) = next else { break };
        let r = *g
            .left_neighbors(l)
            .iter()
            .find(|&&r| right_alive[r])
            .expect("degree-1 vertex has a live neighbour");
        forced.push((l, r));
        left_alive[l] = false;
        right_alive[r] = false;
        for &l2 in g.right_neighbors(r) {
            if left_alive[l2] {
                degree[l2] -= 1;
            }
        }
    }
    let left_map: Vec<usize> = (0..g.n_left()).filter(|&l| left_alive[l]).collect();
    let right_map: Vec<usize> = (0..g.n_right()).filter(|&r| right_alive[r]).collect();
    let left_index: Vec<Option<usize>> = {
        let mut v = vec![None; g.n_left()];
        for (i, &l) in left_map.iter().enumerate() {
            v[l] = Some(i);
        }
        v
    };
    let right_index: Vec<Option<usize>> = {
        let mut v = vec![None; g.n_right()];
        for (i, &r) in right_map.iter().enumerate() {
            v[r] = Some(i);
        }
        v
    };
    let edges = g.edges().iter().filter_map(|&(l, r)| {
        match (left_index[l], right_index[r]) {
            (Some(li), Some(ri)) => Some((li, ri)),
            _ => None,
        }
    });
    let reduced =
        BipartiteGraph::new(left_map.len(), right_map.len(), edges).expect("reduction is valid");
    let lonely_left = (0..reduced.n_left())
        .filter(|&li| reduced.left_degree(li) == 0)
        .map(|li| left_map[li])
        .collect();
    SharpReduction {
        reduced,
        left_map,
        right_map,
        forced,
        lonely_left,
    }
}

/// Exhaustive maximum-cardinality matching by branch and bound.
pub fn maximum_matching(g: &Graph) -> Result<Matching> {
    maximum_matching_with_cap(g, DEFAULT_MATCHING_CAP)
}

pub fn maximum_matching_with_cap(g: &Graph, cap: usize) -> Result<Matching> {
    if g.n() > cap {
        return Err(Error::SizeLimit {
            what: "maximum_matching vertex count",
            got: g.n(),
            cap,
        });
    }
    let mut covered = vec![false; g.n()];
    let mut current = Vec::new();
    let mut best = Vec::new();
    fn rec(
        g: &Graph,
        v: usize,
        covered: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        best: &mut Vec<(usize, usize)>,
    ) {
        // next uncovered vertex
        let mut v = v;
        while v < g.n() && covered[v] {
            v += 1;
        }
        if v == g.n() {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        let free = covered.iter().filter(|c| !**c).count();
        if current.len() + free / 2 <= best.len() {
            return; // cardinality bound
        }
        covered[v] = true;
        for &u in g.neighbors(v) {
            if !covered[u] {
                covered[u] = true;
                current.push((v.min(u), v.max(u)));
                rec(g, v + 1, covered, current, best);
                current.pop();
                covered[u] = false;
            }
        }
        // leave v unmatched
        rec(g, v + 1, covered, current, best);
        covered[v] = false;
    }
    rec(g, 0, &mut covered, &mut current, &mut best);
    best.sort_unstable();
    Ok(Matching { edges: best })
}

/// Outcome of the L-perfect matching search: either a matching covering L or
/// a Hall violator S with |N(S)| < |S|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LMatchingOutcome {
    Matching(Matching),
    HallViolator(Vec<usize>),
}

/// Augmenting-path search for a matching covering every left vertex. On
/// failure extracts a Hall violator from the final alternating-reachability
/// set.
pub fn l_perfect_matching(g: &BipartiteGraph) -> LMatchingOutcome {
    let nl = g.n_left();
    let nr = g.n_right();
    let mut match_right: Vec<Option<usize>> = vec![None; nr]; // right -> left
    let mut match_left: Vec<Option<usize>> = vec![None; nl];

    fn try_augment(
        g: &BipartiteGraph,
        l: usize,
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
        match_left: &mut [Option<usize>],
    ) -> bool {
        for &r in g.left_neighbors(l) {
            if !seen[r] {
                seen[r] = true;
                let free = match match_right[r] {
                    None => true,
                    Some(l2) => try_augment(g, l2, seen, match_right, match_left),
                };
                if free {
                    match_right[r] = Some(l);
                    match_left[l] = Some(r);
                    return true;
                }
            }
        }
        false
    }

    let mut all_matched = true;
    for l in 0..nl {
        let mut seen = vec![false; nr];
        if !try_augment(g, l, &mut seen, &mut match_right, &mut match_left) {
            all_matched = false;
        }
    }
    if all_matched {
        let edges = (0..nl)
            .map(|l| (l, match_left[l].expect("matched")))
            .collect();
        return LMatchingOutcome::Matching(Matching { edges });
    }
    // Alternating reachability from the unmatched left vertices: the reached
    // left set S satisfies |N(S)| < |S| because every reached right vertex is
    // matched into S.
    let mut in_s = vec![false; nl];
    let mut reached_r = vec![false; nr];
    let mut queue: Vec<usize> = (0..nl).filter(|&l| match_left[l].is_none()).collect();
    for &l in &queue {
        in_s[l] = true;
    }
    while let Some(l) = queue.pop() {
        for &r in g.left_neighbors(l) {
            if !reached_r[r] {
                reached_r[r] = true;
                if let Some(l2) = match_right[r] {
                    if !in_s[l2] {
                        in_s[l2] = true;
                        queue.push(l2);
                    }
                }
            }
        }
    }
    let s: Vec<usize> = (0..nl).filter(|&l| in_s[l]).collect();
    debug_assert!({
        let mut nbhd = BTreeSet::new();
        for &l in &s {
            nbhd.extend(g.left_neighbors(l).iter().copied());
        }
        nbhd.len() < s.len()
    });
    LMatchingOutcome::HallViolator(s)
}

/// All 3-cliques, each as an ascending triple, sorted.
pub fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        for &w in g.neighbors(v) {
            if w > v && g.has_edge(u, w) {
                out.push([u, v, w]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Exact independence number by branch and bound.
pub fn independence_number(g: &Graph) -> Result<usize> {
    independence_number_with_cap(g, DEFAULT_INDEPENDENCE_CAP)
}

pub fn independence_number_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    if g.n() > cap {
        return Err(Error::SizeLimit {
            what: "independence_number vertex count",
            got: g.n(),
            cap,
        });
    }
    let n = g.n();
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    fn rec(masks: &[u64], cand: u64, size: usize, best: &mut usize) {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        let v = cand.trailing_zeros() as usize;
        rec(masks, cand & !masks[v] & !(1 << v), size + 1, best);
        rec(masks, cand & !(1 << v), size, best);
    }
    let mut best = 0;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(&masks, full, 0, &mut best);
    Ok(best)
}

/// Disjoint union of `copies` copies of `g`, vertex blocks offset per copy.
pub fn disjoint_union(g: &Graph, copies: usize) -> Result<Graph> {
    if copies < 1 {
        return Err(Error::InvalidInput("disjoint_union needs copies >= 1".into()));
    }
    let n = g.n();
    let edges = (0..copies).flat_map(|c| {
        g.edges()
            .iter()
            .map(move |&(u, v)| (c * n + u, c * n + v))
            .collect::<Vec<_>>()
    });
    Graph::new(n * copies, edges)
}

/// Splits G into a forced matching P and a left-degree-2 subgraph S covering
/// the remaining left vertices, when the sharp reduction leaves no lonely
/// vertex. S keeps the two lowest-indexed right neighbours of each surviving
/// left vertex; any valid degree-2 witness works.
pub fn degree2_decomposition(g: &BipartiteGraph) -> Option<(Matching, BipartiteGraph)> {
    let red = sharp_reduction(g);
    if red.has_lonely_left() {
        return None;
    }
    let p = Matching {
        edges: {
            let mut f = red.forced.clone();
            f.sort_unstable();
            f
        },
    };
    let mut edges = Vec::new();
    for li in 0..red.reduced.n_left() {
        let l = red.left_map[li];
        let picked: Vec<usize> = red.reduced.left_neighbors(li)[..2]
            .iter()
            .map(|&ri| red.right_map[ri])
            .collect();
        for r in picked {
            edges.push((l, r));
        }
    }
    let s = BipartiteGraph::new(g.n_left(), g.n_right(), edges).expect("subgraph is valid");
    Some((p, s))
}
