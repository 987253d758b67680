//! Deciding and enumerating factorizations.
//!
//! `factor_naive` enumerates every pair of candidate factors and is the
//! ground truth for tiny orders. `factor_search` backtracks over the entries
//! of `B` and `C` with forward checking.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_key, CanonicalKey};
use crate::conditions::{screen, ConditionReport};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::graph::{bit, full_mask, Graph};
use crate::linalg::{adjacency, IntMatrix};

pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;
pub const DEFAULT_ORDER_CAP: usize = 7;
pub const NAIVE_MAX_ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    First,
    All,
}

/// Switches for the pruning rules. Disabling one never changes the witness
/// set, only the amount of work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruningRules {
    /// P1: `|N_B(i) & N_C(j)|` can still reach `A_ij` for `i != j`.
    pub entry: bool,
    /// P2: `N_B(i) & N_C(i)` can still be empty.
    pub diagonal: bool,
    /// P3: degree ranges admit `deg_B(i) * deg_C(i) = deg_A(i)`.
    pub degree: bool,
    /// P4: vertices joined by decided `B`-edges can share one `C`-degree, and
    /// symmetrically.
    pub component_degree: bool,
}

impl Default for PruningRules {
    fn default() -> Self {
        PruningRules { entry: true, diagonal: true, degree: true, component_degree: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub node_limit: u64,
    pub include_trivial: bool,
    pub order_cap: usize,
    pub pruning: PruningRules,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::First,
            node_limit: DEFAULT_NODE_LIMIT,
            include_trivial: false,
            order_cap: DEFAULT_ORDER_CAP,
            pruning: PruningRules::default(),
        }
    }
}

impl SearchConfig {
    pub fn all() -> Self {
        SearchConfig { mode: SearchMode::All, ..Default::default() }
    }

    pub fn unlimited(mut self) -> Self {
        self.node_limit = u64::MAX;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub prunes_by_rule: BTreeMap<String, u64>,
    pub witnesses_found: u64,
    /// The whole tree was explored within the node limit.
    pub exhausted: bool,
}

const RULE_NAMES: [&str; 4] = ["P1", "P2", "P3", "P4"];

/// Adjacency matrix of the canonical relabeling of `g`. Searching this one
/// labeling suffices: `A = BC` implies `P^T A P = (P^T B P)(P^T C P)`.
pub fn fix_labeling(g: &Graph) -> Result<IntMatrix> {
    Ok(adjacency(&fixed_graph(g)?))
}

pub(crate) fn fixed_graph(g: &Graph) -> Result<Graph> {
    let form = canonical_form(g)?;
    g.permute(&form.relabeling)
}

fn graph_from_upper(n: usize, bits: u64, len: usize) -> Graph {
    let mut rows = vec![0u64; n];
    let mut k = len;
    for j in 1..n {
        for i in 0..j {
            k -= 1;
            if (bits >> k) & 1 == 1 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
        }
    }
    Graph::from_rows_unchecked(rows)
}

/// Every pair `(B, C)` of adjacency matrices with `BC = A` for the fixed
/// labeling of `g`, in lexicographic order of `B` then `C`.
pub fn factor_naive(g: &Graph) -> Result<Vec<Factorization>> {
    let n = g.order();
    if n > NAIVE_MAX_ORDER {
        return Err(Error::UnsupportedSize(format!(
            "naive enumeration is limited to order {NAIVE_MAX_ORDER}, got {n}"
        )));
    }
    let a = fixed_graph(g)?;
    let len = n * (n - 1) / 2;
    let candidates: Vec<Graph> = (0..(1u64 << len)).map(|bits| graph_from_upper(n, bits, len)).collect();
    let mut out = Vec::new();
    for b in &candidates {
        for c in &candidates {
            let ok = (0..n).all(|i| (0..n).all(|j| (b.row(i) & c.row(j)).count_ones() == ((a.row(i) >> j) & 1) as u32));
            if ok {
                out.push(Factorization::from_graphs_unchecked(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    Ok(out)
}

struct Engine<'a, F> {
    n: usize,
    mask: u64,
    a: &'a Graph,
    a_deg: Vec<u32>,
    b1: Vec<u64>,
    b0: Vec<u64>,
    c1: Vec<u64>,
    c0: Vec<u64>,
    vars: Vec<(bool, usize, usize)>,
    cfg: SearchConfig,
    keep_trivial: bool,
    nodes: u64,
    prunes: [u64; 4],
    witnesses: u64,
    aborted: bool,
    stopped: bool,
    on_witness: F,
}

impl<F: FnMut(&Graph, &Graph) -> bool> Engine<'_, F> {
    fn set(&mut self, is_c: bool, u: usize, v: usize, val: bool) {
        let rows = match (is_c, val) {
            (false, true) => &mut self.b1,
            (false, false) => &mut self.b0,
            (true, true) => &mut self.c1,
            (true, false) => &mut self.c0,
        };
        rows[u] |= bit(v);
        rows[v] |= bit(u);
    }

    fn unset(&mut self, is_c: bool, u: usize, v: usize, val: bool) {
        let rows = match (is_c, val) {
            (false, true) => &mut self.b1,
            (false, false) => &mut self.b0,
            (true, true) => &mut self.c1,
            (true, false) => &mut self.c0,
        };
        rows[u] &= !bit(v);
        rows[v] &= !bit(u);
    }

    fn degree_feasible(&self, x: usize) -> bool {
        let d = self.a_deg[x];
        let blo = self.b1[x].count_ones();
        let bhi = (!self.b0[x] & self.mask).count_ones();
        let clo = self.c1[x].count_ones();
        let chi = (!self.c0[x] & self.mask).count_ones();
        if d == 0 {
            return blo == 0 || clo == 0;
        }
        (blo.max(1)..=bhi).any(|b| d % b == 0 && (clo..=chi).contains(&(d / b)))
    }

    /// Vertices joined to `x` by decided 1-edges of `ones` must admit a
    /// common degree in the other factor, whose bounds are `lo`/`hi_zero`.
    fn component_feasible(&self, x: usize, ones: &[u64], lo: &[u64], zero: &[u64]) -> bool {
        if ones[x] == 0 {
            return true;
        }
        let mut comp = bit(x);
        let mut frontier = bit(x);
        while frontier != 0 {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= ones[v];
            }
            frontier = next & !comp;
            comp |= next;
        }
        let (mut max_lo, mut min_hi) = (0u32, u32::MAX);
        let mut rest = comp;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            max_lo = max_lo.max(lo[v].count_ones());
            min_hi = min_hi.min((!zero[v] & self.mask).count_ones());
        }
        max_lo <= min_hi
    }

    /// Forward check after deciding the pair `{u, v}` of `B` (or `C`).
    /// Returns the index of the first violated rule.
    fn violated_rule(&self, is_c: bool, u: usize, v: usize) -> Option<usize> {
        let rules = self.cfg.pruning;
        if rules.entry || rules.diagonal {
            for x in [u, v] {
                for y in 0..self.n {
                    let (i, j) = if is_c { (y, x) } else { (x, y) };
                    let diag = i == j;
                    if (diag && !rules.diagonal) || (!diag && !rules.entry) {
                        continue;
                    }
                    let target = ((self.a.row(i) >> j) & 1) as u32;
                    let known = (self.b1[i] & self.c1[j]).count_ones();
                    let possible = (!self.b0[i] & !self.c0[j] & self.mask).count_ones();
                    if known > target || possible < target {
                        return Some(if diag { 1 } else { 0 });
                    }
                }
            }
        }
        if rules.degree && !(self.degree_feasible(u) && self.degree_feasible(v)) {
            return Some(2);
        }
        if rules.component_degree {
            for x in [u, v] {
                if !self.component_feasible(x, &self.b1, &self.c1, &self.c0)
                    || !self.component_feasible(x, &self.c1, &self.b1, &self.b0)
                {
                    return Some(3);
                }
            }
        }
        None
    }

    fn leaf(&mut self) {
        let n = self.n;
        let exact =
            (0..n).all(|i| (0..n).all(|j| (self.b1[i] & self.c1[j]).count_ones() == ((self.a.row(i) >> j) & 1) as u32));
        if !exact {
            return;
        }
        let trivial = self.b1.iter().all(|&r| r == 0) || self.c1.iter().all(|&r| r == 0);
        if trivial && !self.keep_trivial {
            return;
        }
        self.witnesses += 1;
        let h = Graph::from_rows_unchecked(self.b1.clone());
        let k = Graph::from_rows_unchecked(self.c1.clone());
        let go_on = (self.on_witness)(&h, &k);
        if !go_on || self.cfg.mode == SearchMode::First {
            self.stopped = true;
        }
    }

    fn descend(&mut self, idx: usize) {
        if idx == self.vars.len() {
            self.leaf();
            return;
        }
        let (is_c, u, v) = self.vars[idx];
        for val in [true, false] {
            if self.nodes >= self.cfg.node_limit {
                self.aborted = true;
                return;
            }
            self.nodes += 1;
            self.set(is_c, u, v, val);
            match self.violated_rule(is_c, u, v) {
                Some(rule) => self.prunes[rule] += 1,
                None => self.descend(idx + 1),
            }
            self.unset(is_c, u, v, val);
            if self.aborted || self.stopped {
                return;
            }
        }
    }
}

/// Backtracking search on the given labeling of `a`, reporting each witness
/// `(H, K)` to `on_witness`; returning `false` from the callback stops the
/// search.
pub fn search_labeled<F: FnMut(&Graph, &Graph) -> bool>(a: &Graph, cfg: &SearchConfig, on_witness: F) -> SearchStats {
    let n = a.order();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(a.degree(v)), v));
    let mut vars = Vec::with_capacity(n * (n - 1));
    for (x, &u) in order.iter().enumerate() {
        for &v in &order[x + 1..] {
            vars.push((false, u, v));
            vars.push((true, u, v));
        }
    }
    let diag: Vec<u64> = (0..n).map(bit).collect();
    let mut engine = Engine {
        n,
        mask: full_mask(n),
        a,
        a_deg: (0..n).map(|v| a.degree(v) as u32).collect(),
        b1: vec![0; n],
        b0: diag.clone(),
        c1: vec![0; n],
        c0: diag,
        vars,
        cfg: *cfg,
        keep_trivial: cfg.include_trivial || a.is_edgeless(),
        nodes: 0,
        prunes: [0; 4],
        witnesses: 0,
        aborted: false,
        stopped: false,
        on_witness,
    };
    engine.descend(0);
    SearchStats {
        nodes_expanded: engine.nodes,
        prunes_by_rule: RULE_NAMES.iter().zip(engine.prunes).map(|(k, v)| (k.to_string(), v)).collect(),
        witnesses_found: engine.witnesses,
        exhausted: !engine.aborted && !engine.stopped,
    }
}

/// Witnesses for the fixed labeling of `g`, ordered as in [`factor_naive`].
/// A node-limit hit returns the witnesses found so far with
/// `exhausted = false`.
pub fn factor_search(g: &Graph, cfg: &SearchConfig) -> Result<(Vec<Factorization>, SearchStats)> {
    if g.order() > cfg.order_cap {
        return Err(Error::UnsupportedSize(format!("search order cap is {}, got {}", cfg.order_cap, g.order())));
    }
    let a = fixed_graph(g)?;
    let mut found = Vec::new();
    let stats = search_labeled(&a, cfg, |h, k| {
        found.push(Factorization::from_graphs_unchecked(a.clone(), h.clone(), k.clone()));
        true
    });
    found.sort_by_key(|f| f.sort_key());
    Ok((found, stats))
}

/// Unordered pair of factor isomorphism classes, stored with `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorPair {
    pub first: CanonicalKey,
    pub second: CanonicalKey,
}

impl FactorPair {
    pub fn new(x: CanonicalKey, y: CanonicalKey) -> Self {
        if x <= y {
            FactorPair { first: x, second: y }
        } else {
            FactorPair { first: y, second: x }
        }
    }

    pub fn of(h: &Graph, k: &Graph) -> Result<Self> {
        Ok(Self::new(canonical_key(h)?, canonical_key(k)?))
    }
}

pub fn dedup_pairs(ws: &[Factorization]) -> Result<BTreeSet<FactorPair>> {
    ws.iter().map(|f| FactorPair::of(f.h(), f.k())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Factorization>,
    pub screen: ConditionReport,
    /// Absent when screening settled the question or the graph is beyond the search cap.
    pub stats: Option<SearchStats>,
}

/// Screens first, then searches for one witness.
pub fn is_factorizable(g: &Graph, cfg: &SearchConfig) -> Decision {
    let report = screen(g);
    if report.is_ruled_out() {
        return Decision { verdict: Verdict::No, witness: None, screen: report, stats: None };
    }
    let cfg = SearchConfig { mode: SearchMode::First, ..*cfg };
    match factor_search(g, &cfg) {
        Ok((mut ws, stats)) => {
            let verdict = if !ws.is_empty() {
                Verdict::Yes
            } else if stats.exhausted {
                Verdict::No
            } else {
                Verdict::Unknown
            };
            let witness = if ws.is_empty() { None } else { Some(ws.swap_remove(0)) };
            Decision { verdict, witness, screen: report, stats: Some(stats) }
        }
        Err(_) => Decision { verdict: Verdict::Unknown, witness: None, screen: report, stats: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, Permutation};

    #[test]
    fn fixed_labeling_is_relabeling_invariant() {
        let c6 = cycle(6).unwrap();
        let p = Permutation::new(vec![4, 2, 0, 5, 1, 3]).unwrap();
        assert_eq!(fix_labeling(&c6).unwrap(), fix_labeling(&c6.permute(&p).unwrap()).unwrap());
        assert_eq!(fix_labeling(&complete(3).unwrap()).unwrap(), adjacency(&complete(3).unwrap()));
    }

    #[test]
    fn naive_examples() {
        let e2 = factor_naive(&Graph::empty(2).unwrap()).unwrap();
        assert_eq!(e2.len(), 3);
        assert!(e2.iter().all(|f| f.is_trivial()));
        assert!(factor_naive(&path(3).unwrap()).unwrap().is_empty());
        assert!(factor_naive(&complete(2).unwrap()).unwrap().is_empty());
        assert!(factor_naive(&Graph::empty(6).unwrap()).is_err());
        let pairs = dedup_pairs(&e2).unwrap();
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn search_finds_c6_pair() {
        let (ws, stats) = factor_search(&cycle(6).unwrap(), &SearchConfig::all()).unwrap();
        assert!(stats.exhausted);
        assert!(!ws.is_empty());
        let k3 = complete(3).unwrap();
        let two_k3 = canonical_key(&k3.disjoint_union(&k3).unwrap()).unwrap();
        let three_k2 = canonical_key(&crate::graph::matching(3).unwrap()).unwrap();
        assert!(dedup_pairs(&ws).unwrap().contains(&FactorPair::new(two_k3, three_k2)));
    }

    #[test]
    fn node_limit_is_reported() {
        let cfg = SearchConfig { node_limit: 3, ..SearchConfig::all() };
        let (_, stats) = factor_search(&cycle(6).unwrap(), &cfg).unwrap();
        assert!(!stats.exhausted);
        assert_eq!(stats.nodes_expanded, 3);
        let d = is_factorizable(&cycle(6).unwrap(), &cfg);
        assert_eq!(d.verdict, Verdict::Unknown);
    }

    #[test]
    fn decisions() {
        let d = is_factorizable(&cycle(6).unwrap(), &SearchConfig::default());
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(d.witness.is_some());
        let d = is_factorizable(&complete(2).unwrap(), &SearchConfig::default());
        assert_eq!(d.verdict, Verdict::No);
        assert!(d.stats.is_none());
        let d = is_factorizable(&Graph::empty(1).unwrap(), &SearchConfig::default());
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(d.witness.unwrap().is_trivial());
        let d = is_factorizable(&complete(4).unwrap(), &SearchConfig::default());
        assert_eq!(d.verdict, Verdict::No);
        assert!(d.stats.unwrap().exhausted);
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(factor_search(&Graph::empty(8).unwrap(), &SearchConfig::default()).is_err());
    }
}
