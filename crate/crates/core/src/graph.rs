//! Simple undirected graphs on at most 64 vertices, stored as adjacency bit rows.
//!
//! Vertices are 0-based. Every constructor checks symmetry and the zero
//! diagonal, so a `Graph` value is always a valid simple graph.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Undirected simple graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Graph { rows: vec![0; n] })
    }

    /// Builds a graph from adjacency bit rows, validating every invariant.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mask = full_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & !mask != 0 {
                return Err(Error::Parameter(format!("row {i} has bits beyond order {n}")));
            }
            if r & bit(i) != 0 {
                return Err(Error::Parameter(format!("loop at vertex {i}")));
            }
            let mut rest = r;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if rows[j] & bit(i) == 0 {
                    return Err(Error::Parameter(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(Graph { rows })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(Graph::from_rows(rows.clone()).is_ok());
        Graph { rows }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(Error::Parameter(format!("edge ({u}, {v}) out of range for order {n}")));
        }
        if u == v {
            return Err(Error::Parameter(format!("loop at vertex {u}")));
        }
        self.rows[u] |= bit(v);
        self.rows[v] |= bit(u);
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] & bit(v) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            let mut rest = self.rows[u] & !full_mask(u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out.push((u, v));
            }
        }
        out
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degree(0);
        (1..self.order()).all(|v| self.degree(v) == d)
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.rows.contains(&0)
    }

    pub fn is_edgeless(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.component_masks().into_iter().map(mask_to_vec).collect()
    }

    pub(crate) fn component_masks(&self) -> Vec<u64> {
        let n = self.order();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..n {
            if seen & bit(s) != 0 {
                continue;
            }
            let comp = self.reach(s);
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Vertex set reachable from `s`, as a bitmask.
    pub(crate) fn reach(&self, s: usize) -> u64 {
        let mut comp = bit(s);
        let mut frontier = bit(s);
        while frontier != 0 {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= self.rows[v];
            }
            frontier = next & !comp;
            comp |= next;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.reach(0) == full_mask(self.order())
    }

    pub fn component_count(&self) -> usize {
        self.component_masks().len()
    }

    /// BFS 2-coloring, component by component, with the lowest-indexed vertex of
    /// each component on the left. `None` if the graph has an odd cycle.
    pub fn bipartition_of(&self) -> Option<Bipartition> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                let mut rest = self.rows[v];
                while rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| color[v] == Some(false));
        Some(Bipartition { left, right })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition_of().is_some()
    }

    pub fn classify_acyclic(&self) -> Acyclicity {
        let components = self.component_count();
        let kind = if self.edge_count() + components != self.order() {
            AcyclicKind::HasCycle
        } else if components == 1 {
            AcyclicKind::Tree
        } else {
            AcyclicKind::ForestMulti
        };
        Acyclicity { kind, components }
    }

    /// True iff two distinct vertices share at least two common neighbours,
    /// i.e. the graph contains a (not necessarily induced) 4-cycle.
    pub fn contains_c4(&self) -> bool {
        let n = self.order();
        (0..n).any(|u| ((u + 1)..n).any(|v| (self.rows[u] & self.rows[v]).count_ones() >= 2))
    }

    /// Relabels vertex `v` as `p(v)`.
    pub fn permute(&self, p: &Permutation) -> Result<Graph> {
        if p.order() != self.order() {
            return Err(Error::Parameter(format!(
                "permutation of order {} applied to graph of order {}",
                p.order(),
                self.order()
            )));
        }
        let mut rows = vec![0u64; self.order()];
        for (v, &r) in self.rows.iter().enumerate() {
            let mut out = 0u64;
            let mut rest = r;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out |= bit(p.images[w]);
            }
            rows[p.images[v]] = out;
        }
        Ok(Graph::from_rows_unchecked(rows))
    }

    /// Subgraph induced by `vertices`, relabeled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        check_order(vertices.len())?;
        let mut rows = vec![0u64; vertices.len()];
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    rows[a] |= bit(b);
                }
            }
        }
        Graph::from_rows(rows)
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let shift = self.order();
        check_order(shift + other.order())?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|&r| r << shift));
        Ok(Graph::from_rows_unchecked(rows))
    }

    /// Upper-triangle bits in column order (column `j`, rows `0..j`), first bit
    /// most significant. Only defined while the triangle fits in 64 bits.
    pub fn upper_bits(&self) -> u64 {
        let n = self.order();
        debug_assert!(n * (n - 1) / 2 <= 64);
        let mut bits = 0u64;
        for j in 1..n {
            for i in 0..j {
                bits = (bits << 1) | ((self.rows[i] >> j) & 1);
            }
        }
        bits
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.order(), self.edges())
    }
}

pub(crate) fn mask_to_vec(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("graphs of order 0 are not supported".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::UnsupportedSize(format!("order {n} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcyclicKind {
    Tree,
    ForestMulti,
    HasCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Acyclicity {
    pub kind: AcyclicKind,
    pub components: usize,
}

impl Acyclicity {
    pub fn is_forest(&self) -> bool {
        self.kind != AcyclicKind::HasCycle
    }
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parameter(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (v, &w) in self.images.iter().enumerate() {
            inv[w] = v;
        }
        Permutation { images: inv }
    }
}

/// Two-sided vertex split; valid for a graph when no edge lies inside a side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.order();
        let mut seen = 0u64;
        for &v in self.left.iter().chain(&self.right) {
            if v >= n || seen & bit(v) != 0 {
                return false;
            }
            seen |= bit(v);
        }
        if seen != full_mask(n) {
            return false;
        }
        let left = vec_to_mask(&self.left);
        let right = vec_to_mask(&self.right);
        self.left.iter().all(|&v| g.row(v) & left == 0) && self.right.iter().all(|&v| g.row(v) & right == 0)
    }

    pub fn left_mask(&self) -> u64 {
        vec_to_mask(&self.left)
    }

    pub fn right_mask(&self) -> u64 {
        vec_to_mask(&self.right)
    }
}

pub(crate) fn vec_to_mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | bit(v))
}

/// Named graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// Star on `n` vertices with centre 0.
    Star(usize),
    /// `n` disjoint edges `{i, n + i}` on `2n` vertices.
    Matching(usize),
    CompleteBipartite(usize, usize),
    DisjointUnion(Box<Graph>, Box<Graph>),
    Edgeless(usize),
    TreeFromPruefer(Vec<usize>),
}

pub fn generate(family: &Family) -> Result<Graph> {
    match *family {
        Family::Complete(n) => {
            check_order(n)?;
            let m = full_mask(n);
            Graph::from_rows((0..n).map(|v| m & !bit(v)).collect())
        }
        Family::Cycle(n) => {
            if n < 3 {
                return Err(Error::Parameter(format!("cycle needs n >= 3, got {n}")));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Path(n) => {
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Star(n) => {
            let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
            Graph::from_edges(n, &edges)
        }
        Family::Matching(n) => {
            if n == 0 {
                return Err(Error::Parameter("matching needs at least one edge".into()));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, n + i)).collect();
            Graph::from_edges(2 * n, &edges)
        }
        Family::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return Err(Error::Parameter(format!("complete bipartite needs both sides nonempty, got ({a}, {b})")));
            }
            let mut edges = Vec::with_capacity(a * b);
            for i in 0..a {
                for j in 0..b {
                    edges.push((i, a + j));
                }
            }
            Graph::from_edges(a + b, &edges)
        }
        Family::DisjointUnion(ref g, ref h) => g.disjoint_union(h),
        Family::Edgeless(n) => Graph::empty(n),
        Family::TreeFromPruefer(ref seq) => tree_from_pruefer(seq),
    }
}

fn tree_from_pruefer(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    check_order(n)?;
    if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
        return Err(Error::Parameter(format!("Pruefer entry {bad} out of range for {n} vertices")));
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((last[0], last[1]));
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    generate(&Family::Complete(n))
}

pub fn cycle(n: usize) -> Result<Graph> {
    generate(&Family::Cycle(n))
}

pub fn path(n: usize) -> Result<Graph> {
    generate(&Family::Path(n))
}

pub fn star(n: usize) -> Result<Graph> {
    generate(&Family::Star(n))
}

pub fn matching(n: usize) -> Result<Graph> {
    generate(&Family::Matching(n))
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    generate(&Family::CompleteBipartite(a, b))
}

pub fn edgeless(n: usize) -> Result<Graph> {
    generate(&Family::Edgeless(n))
}
