//! Undirected graphs and the combinatorics the estimators need: chordality,
//! perfect clique sequences, clique number, treewidth, clique separators.
//!
//! Vertices carry 1-based labels `1..=d` everywhere in the public API and in
//! serialized form. Internally a vertex set is a 64-bit mask with bit `v - 1`
//! standing for label `v`, which caps graphs at 64 vertices; the exact
//! algorithms here are meant for desk-scale graphs far below that.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count any graph may have.
pub const MAX_VERTICES: usize = 64;
/// Largest vertex count for which [`treewidth`] runs the exact search.
pub const EXACT_TREEWIDTH_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("edge ({0}, {1}) has an endpoint outside 1..={2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("exact treewidth is limited to {EXACT_TREEWIDTH_CAP} vertices (got {0})")]
    TooLarge(usize),
    #[error("malformed edge list at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A set of vertex labels stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All labels `1..=d`.
    pub fn full(d: usize) -> Self {
        if d >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << d) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(1u64 << (v - 1))
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        labels
            .into_iter()
            .fold(VertexSet::EMPTY, |s, v| s.with(v))
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1u64 << (v - 1)))
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << (v - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest label in the set.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Labels in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Zero-based matrix indices of the members, increasing.
    pub fn indices(self) -> Vec<usize> {
        self.iter().map(|v| v - 1).collect()
    }

    /// Orders sets by cardinality, then lexicographically by sorted labels.
    pub fn cmp_size_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = labels.iter().find(|&&v| v == 0 || v > MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!(
                "vertex label {bad} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(VertexSet::from_labels(labels))
    }
}

/// Simple undirected graph on vertices `1..=d`.
#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    d: usize,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UndirectedGraph(d={}, edges={:?})", self.d, self.edges())
    }
}

impl UndirectedGraph {
    /// Builds a graph from 1-based edges, rejecting loops and duplicates.
    pub fn new(d: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if d > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(d));
        }
        let mut g = UndirectedGraph::empty(d);
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > d || j > d {
                return Err(GraphError::VertexOutOfRange(i, j, d));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if g.has_edge(i, j) {
                return Err(GraphError::DuplicateEdge(i.min(j), i.max(j)));
            }
            g.add_edge_unchecked(i, j);
        }
        Ok(g)
    }

    /// Edgeless graph.
    pub fn empty(d: usize) -> Self {
        assert!(d <= MAX_VERTICES, "graph too large");
        UndirectedGraph {
            d,
            adj: vec![VertexSet::EMPTY; d],
        }
    }

    pub fn complete(d: usize) -> Self {
        let mut g = UndirectedGraph::empty(d);
        for i in 1..=d {
            for j in i + 1..=d {
                g.add_edge_unchecked(i, j);
            }
        }
        g
    }

    /// Path `1 - 2 - ... - d`.
    pub fn path(d: usize) -> Self {
        let edges: Vec<_> = (1..d).map(|i| (i, i + 1)).collect();
        UndirectedGraph::new(d, &edges).expect("valid path")
    }

    /// Cycle `1 - 2 - ... - n - 1`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        UndirectedGraph::new(n, &edges).expect("valid cycle")
    }

    /// Complete bipartite graph with parts `{1..m}` and `{m+1..m+n}`.
    pub fn complete_bipartite(m: usize, n: usize) -> Self {
        let mut edges = Vec::with_capacity(m * n);
        for i in 1..=m {
            for j in m + 1..=m + n {
                edges.push((i, j));
            }
        }
        UndirectedGraph::new(m + n, &edges).expect("valid bipartite graph")
    }

    /// The decomposable six-vertex example with cliques {1,2,4}, {1,3,4}, {4,5}, {4,6}.
    pub fn fish() -> Self {
        UndirectedGraph::new(6, &[(1, 2), (1, 3), (1, 4), (2, 4), (3, 4), (4, 5), (4, 6)])
            .expect("valid fish graph")
    }

    fn add_edge_unchecked(&mut self, i: usize, j: usize) {
        self.adj[i - 1] = self.adj[i - 1].with(j);
        self.adj[j - 1] = self.adj[j - 1].with(i);
    }

    /// Copy with one extra edge (no-op if present).
    pub fn with_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        if i != j {
            g.add_edge_unchecked(i, j);
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.d
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.d)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.d && self.adj[i - 1].contains(j)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.d {
            for j in self.adj[i - 1].iter().filter(|&j| j > i) {
                out.push((i, j));
            }
        }
        out
    }

    /// Unordered non-adjacent pairs `(i, j)` with `i < j`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.d {
            for j in i + 1..=self.d {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter()
            .all(|v| set.without(v).is_subset(self.adj[v - 1]))
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.vertices())
    }

    /// Connected components of the subgraph induced on `within`, each as a
    /// vertex set, ordered by smallest label.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut remaining = within;
        let mut comps = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v - 1]);
                }
                next = next.intersection(within).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            remaining = remaining.difference(comp);
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.d <= 1 || self.components().len() == 1
    }

    /// Induced subgraph on `set`, relabeled to `1..=|set|` in increasing
    /// order. Returns the graph and the original label of each new vertex.
    pub fn induced(&self, set: VertexSet) -> (UndirectedGraph, Vec<usize>) {
        let labels = set.to_vec();
        let mut g = UndirectedGraph::empty(labels.len());
        for (a, &u) in labels.iter().enumerate() {
            for (b, &v) in labels.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge_unchecked(a + 1, b + 1);
                }
            }
        }
        (g, labels)
    }
}

/// Maximum-cardinality search order. Ties go to the smallest label.
pub fn mcs_order(g: &UndirectedGraph) -> Vec<usize> {
    let d = g.num_vertices();
    let mut weight = vec![0usize; d];
    let mut visited = VertexSet::EMPTY;
    let mut order = Vec::with_capacity(d);
    for _ in 0..d {
        let v = (1..=d)
            .filter(|&v| !visited.contains(v))
            .max_by(|&a, &b| weight[a - 1].cmp(&weight[b - 1]).then(b.cmp(&a)))
            .expect("unvisited vertex");
        visited = visited.with(v);
        order.push(v);
        for u in g.neighbors(v).difference(visited).iter() {
            weight[u - 1] += 1;
        }
    }
    order
}

/// True iff every vertex's earlier-visited neighbours in `order` form a clique.
fn is_perfect_order(g: &UndirectedGraph, order: &[usize]) -> bool {
    let mut seen = VertexSet::EMPTY;
    for &v in order {
        if !g.is_clique(g.neighbors(v).intersection(seen)) {
            return false;
        }
        seen = seen.with(v);
    }
    true
}

/// Chordality via maximum-cardinality search and a fill-in check.
pub fn is_chordal(g: &UndirectedGraph) -> bool {
    is_perfect_order(g, &mcs_order(g))
}

/// Perfect sequence of maximal cliques with separators and multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalDecomposition {
    pub cliques: Vec<VertexSet>,
    pub separators: Vec<Separator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub set: VertexSet,
    pub multiplicity: usize,
}

impl ChordalDecomposition {
    /// Checks the running intersection property directly.
    pub fn has_running_intersection(&self) -> bool {
        let mut union = VertexSet::EMPTY;
        for (j, &c) in self.cliques.iter().enumerate() {
            if j > 0 {
                let inter = c.intersection(union);
                if !self.cliques[..j]
                    .iter()
                    .any(|&ci| inter == c.intersection(ci))
                {
                    return false;
                }
            }
            union = union.union(c);
        }
        true
    }

    /// `C_j ∩ (C_1 ∪ … ∪ C_{j-1})` for `j >= 2`, in sequence order.
    pub fn sequence_separators(&self) -> Vec<VertexSet> {
        let mut union = VertexSet::EMPTY;
        let mut out = Vec::new();
        for (j, &c) in self.cliques.iter().enumerate() {
            if j > 0 {
                out.push(c.intersection(union));
            }
            union = union.union(c);
        }
        out
    }
}

/// Decomposes a connected chordal graph into a perfect clique sequence.
///
/// Cliques appear in the order maximum-cardinality search completes them;
/// separators are listed in order of first appearance.
pub fn chordal_decomposition(g: &UndirectedGraph) -> Result<ChordalDecomposition, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let order = mcs_order(g);
    if !is_perfect_order(g, &order) {
        return Err(GraphError::NotChordal);
    }
    // K_v = {v} ∪ earlier neighbours; the maximal ones, ordered by their
    // generating vertex, form a perfect sequence.
    let mut seen = VertexSet::EMPTY;
    let mut candidates = Vec::with_capacity(order.len());
    for &v in &order {
        candidates.push(g.neighbors(v).intersection(seen).with(v));
        seen = seen.with(v);
    }
    let mut cliques: Vec<VertexSet> = Vec::new();
    for (i, &k) in candidates.iter().enumerate() {
        let dominated = candidates
            .iter()
            .enumerate()
            .any(|(j, &other)| j != i && k.is_subset(other) && (k != other || j < i));
        if !dominated {
            cliques.push(k);
        }
    }
    let mut decomposition = ChordalDecomposition {
        cliques,
        separators: Vec::new(),
    };
    for s in decomposition.sequence_separators() {
        if s.is_empty() {
            continue;
        }
        match decomposition.separators.iter_mut().find(|x| x.set == s) {
            Some(x) => x.multiplicity += 1,
            None => decomposition.separators.push(Separator {
                set: s,
                multiplicity: 1,
            }),
        }
    }
    Ok(decomposition)
}

/// All maximal cliques (Bron–Kerbosch with pivoting), sorted by size then
/// lexicographically.
pub fn maximal_cliques(g: &UndirectedGraph) -> Vec<VertexSet> {
    fn expand(
        g: &UndirectedGraph,
        r: VertexSet,
        mut p: VertexSet,
        mut x: VertexSet,
        out: &mut Vec<VertexSet>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| g.neighbors(u).intersection(p).len())
            .expect("nonempty");
        for v in p.difference(g.neighbors(pivot)).iter() {
            let nv = g.neighbors(v);
            expand(g, r.with(v), p.intersection(nv), x.intersection(nv), out);
            p = p.without(v);
            x = x.with(v);
        }
    }
    let mut out = Vec::new();
    if g.num_vertices() > 0 {
        expand(g, VertexSet::EMPTY, g.vertices(), VertexSet::EMPTY, &mut out);
    }
    out.sort_by(|a, b| a.cmp_size_lex(b));
    out
}

/// Size of a largest clique, by branch and bound.
pub fn clique_number(g: &UndirectedGraph) -> usize {
    fn search(g: &UndirectedGraph, size: usize, mut p: VertexSet, best: &mut usize) {
        if p.is_empty() {
            *best = (*best).max(size);
            return;
        }
        while let Some(v) = p.first() {
            if size + p.len() <= *best {
                return;
            }
            search(g, size + 1, p.intersection(g.neighbors(v)), best);
            p = p.without(v);
        }
    }
    let mut best = 0;
    search(g, 0, g.vertices(), &mut best);
    best
}

/// How a treewidth value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreewidthMode {
    Exact,
    MinFillUpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreewidthReport {
    pub width: usize,
    pub mode: TreewidthMode,
}

/// Exact treewidth by dynamic programming over vertex subsets.
///
/// `tw(S) = min_{v ∈ S} max(tw(S \ v), |Q(S \ v, v)|)` where `Q(S, v)` is the
/// set of vertices outside `S ∪ {v}` reachable from `v` through `S`; this is
/// the minimum over elimination orders of the largest fill neighbourhood.
pub fn treewidth(g: &UndirectedGraph) -> Result<usize, GraphError> {
    let d = g.num_vertices();
    if d > EXACT_TREEWIDTH_CAP {
        return Err(GraphError::TooLarge(d));
    }
    if d == 0 {
        return Ok(0);
    }
    let n = 1usize << d;
    // Masks here are 0-based bit positions; VertexSet shares the layout.
    let mut tw = vec![u8::MAX; n];
    tw[0] = 0;
    for s in 1..n {
        let set = VertexSet::from_bits(s as u64);
        let mut best = u8::MAX;
        for v in set.iter() {
            let rest = set.without(v);
            let prev = tw[rest.bits() as usize];
            if prev >= best {
                continue;
            }
            let q = reach_through(g, v, rest).len() as u8;
            best = best.min(prev.max(q));
        }
        tw[s] = best;
    }
    Ok(tw[n - 1] as usize)
}

/// Vertices outside `through ∪ {v}` reachable from `v` by paths whose
/// interior lies in `through`.
fn reach_through(g: &UndirectedGraph, v: usize, through: VertexSet) -> VertexSet {
    let mut inside = VertexSet::singleton(v);
    let mut frontier = inside;
    let mut boundary = VertexSet::EMPTY;
    while !frontier.is_empty() {
        let mut next = VertexSet::EMPTY;
        for u in frontier.iter() {
            next = next.union(g.neighbors(u));
        }
        boundary = boundary.union(next.difference(through).without(v));
        next = next.intersection(through).difference(inside);
        inside = inside.union(next);
        frontier = next;
    }
    boundary
}

/// Min-fill elimination: returns the elimination order and the chordal cover
/// it induces. Ties go to the smallest label.
pub fn min_fill_cover(g: &UndirectedGraph) -> (Vec<usize>, UndirectedGraph) {
    let d = g.num_vertices();
    let mut work = g.clone();
    let mut cover = g.clone();
    let mut remaining = g.vertices();
    let mut order = Vec::with_capacity(d);
    while !remaining.is_empty() {
        let v = remaining
            .iter()
            .min_by_key(|&v| (fill_count(&work, v, remaining), v))
            .expect("nonempty");
        let nb = work.neighbors(v).intersection(remaining);
        for a in nb.iter() {
            for b in nb.iter().filter(|&b| b > a) {
                if !work.has_edge(a, b) {
                    work.add_edge_unchecked(a, b);
                    cover.add_edge_unchecked(a, b);
                }
            }
        }
        remaining = remaining.without(v);
        order.push(v);
    }
    (order, cover)
}

fn fill_count(g: &UndirectedGraph, v: usize, remaining: VertexSet) -> usize {
    let nb = g.neighbors(v).intersection(remaining);
    nb.iter()
        .map(|a| nb.difference(g.neighbors(a)).without(a).len())
        .sum::<usize>()
        / 2
}

/// Width of the min-fill elimination order, an upper bound on treewidth.
pub fn treewidth_min_fill(g: &UndirectedGraph) -> usize {
    let (order, cover) = min_fill_cover(g);
    let mut eliminated = VertexSet::EMPTY;
    let mut width = 0;
    for v in order {
        width = width.max(cover.neighbors(v).difference(eliminated).len());
        eliminated = eliminated.with(v);
    }
    width
}

/// Exact treewidth when the graph is small enough, otherwise the min-fill
/// upper bound; the report says which ran.
pub fn treewidth_report(g: &UndirectedGraph) -> TreewidthReport {
    match treewidth(g) {
        Ok(width) => TreewidthReport {
            width,
            mode: TreewidthMode::Exact,
        },
        Err(_) => TreewidthReport {
            width: treewidth_min_fill(g),
            mode: TreewidthMode::MinFillUpperBound,
        },
    }
}

/// A split of a connected graph along a separating clique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSplit {
    /// `A ∪ C`, where `A` is the component holding the smallest label outside `C`.
    pub left: VertexSet,
    /// `B ∪ C`, the remaining components together with the separator.
    pub right: VertexSet,
    pub separator: VertexSet,
}

/// All clique separators of `g`, ordered by size then lexicographically,
/// each with the split it induces.
pub fn clique_separators(g: &UndirectedGraph) -> Result<Vec<CliqueSplit>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let all = g.vertices();
    let mut splits = Vec::new();
    // Cliques grown level by level in lexicographic order.
    let mut level: Vec<VertexSet> = g.vertices().iter().map(VertexSet::singleton).collect();
    while !level.is_empty() {
        for &c in &level {
            if let Some(split) = split_on(g, all, c) {
                splits.push(split);
            }
        }
        let mut next = Vec::new();
        for &c in &level {
            let last = c.iter().last().expect("nonempty clique");
            let mut common = all;
            for v in c.iter() {
                common = common.intersection(g.neighbors(v));
            }
            for w in common.iter().filter(|&w| w > last) {
                next.push(c.with(w));
            }
        }
        level = next;
    }
    Ok(splits)
}

fn split_on(g: &UndirectedGraph, all: VertexSet, c: VertexSet) -> Option<CliqueSplit> {
    let comps = g.components_within(all.difference(c));
    if comps.len() < 2 {
        return None;
    }
    let a = comps[0];
    let b = comps[1..]
        .iter()
        .fold(VertexSet::EMPTY, |acc, &x| acc.union(x));
    Some(CliqueSplit {
        left: a.union(c),
        right: b.union(c),
        separator: c,
    })
}

/// One decomposition by a minimal clique separator (smallest cardinality
/// first, lexicographic tie-break), or `None` when `g` is prime.
pub fn separate_decompose(g: &UndirectedGraph) -> Result<Option<CliqueSplit>, GraphError> {
    Ok(clique_separators(g)?.into_iter().next())
}

/// Adds vertex `d + 1` adjacent to every original vertex.
pub fn suspension(g: &UndirectedGraph) -> UndirectedGraph {
    let d = g.num_vertices();
    let mut s = UndirectedGraph::empty(d + 1);
    for (i, j) in g.edges() {
        s.add_edge_unchecked(i, j);
    }
    for i in 1..=d {
        s.add_edge_unchecked(i, d + 1);
    }
    s
}

/// Wire form `{"d": int, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub d: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&UndirectedGraph> for GraphJson {
    fn from(g: &UndirectedGraph) -> Self {
        GraphJson {
            d: g.num_vertices(),
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for UndirectedGraph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        let edges: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        UndirectedGraph::new(j.d, &edges)
    }
}

impl Serialize for UndirectedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UndirectedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        UndirectedGraph::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Edge-list text: one `i j` pair per line; blank lines and `#` comments are
/// skipped. The vertex count is the largest label seen.
impl FromStr for UndirectedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (n, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.ok_or_else(|| GraphError::Parse {
                    line: n + 1,
                    msg: "expected two labels".into(),
                })?
                .parse::<usize>()
                .map_err(|e| GraphError::Parse {
                    line: n + 1,
                    msg: e.to_string(),
                })
            };
            let mut toks = line.split_whitespace();
            let i = parse(toks.next())?;
            let j = parse(toks.next())?;
            if toks.next().is_some() {
                return Err(GraphError::Parse {
                    line: n + 1,
                    msg: "trailing tokens".into(),
                });
            }
            edges.push((i, j));
        }
        let d = edges.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
        UndirectedGraph::new(d, &edges)
    }
}
