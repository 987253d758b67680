//! Canonical labelings by exhaustive relabeling (orders up to 8) and
//! enumeration of isomorphism classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{bit, Graph, Permutation};

/// Largest order accepted by the canonicalizer.
pub const CANON_MAX_ORDER: usize = 8;

/// Number of isomorphism classes of simple graphs on `n` vertices, `n = 0..=8`.
pub const CLASS_COUNTS: [usize; 9] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];

/// Lexicographically minimal upper-triangle bit-string over all relabelings.
///
/// Bits are taken column by column (column `j`, rows `0..j`) as in graph6;
/// the first bit is the most significant, so integer order is string order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    order: u8,
    bits: u64,
}

impl CanonicalKey {
    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn len(&self) -> usize {
        let n = self.order();
        n * (n - 1) / 2
    }

    /// The canonical representative graph.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut rows = vec![0u64; n];
        let mut k = self.len();
        for j in 1..n {
            for i in 0..j {
                k -= 1;
                if (self.bits >> k) & 1 == 1 {
                    rows[i] |= bit(j);
                    rows[j] |= bit(i);
                }
            }
        }
        Graph::from_rows_unchecked(rows)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.len();
        for k in (0..len).rev() {
            f.write_str(if (self.bits >> k) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(n={}, {})", self.order, self)
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.len();
        let n = (1..=CANON_MAX_ORDER)
            .find(|n| n * (n - 1) / 2 == len)
            .ok_or_else(|| Error::Parameter(format!("{len} is not a triangular key length")))?;
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Parameter(format!("invalid key character {c:?}"))),
                };
        }
        Ok(CanonicalKey { order: n as u8, bits })
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical key together with one minimizing relabeling.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// Maps each original vertex to its canonical position.
    pub relabeling: Permutation,
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey> {
    Ok(canonical_form(g)?.key)
}

/// Branch and bound over relabelings: position `j` is filled with a vertex
/// whose column against positions `0..j` is smallest, and branches whose
/// prefix already exceeds the best complete string are cut. Twin vertices
/// (equal neighbourhoods up to each other) are tried only once per node.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.order();
    if n > CANON_MAX_ORDER {
        return Err(Error::UnsupportedSize(format!(
            "canonical keys are computed exhaustively up to order {CANON_MAX_ORDER}, got {n}"
        )));
    }
    let mut twins = vec![0u64; n];
    for v in 0..n {
        for w in 0..n {
            if v != w && g.row(v) & !bit(w) == g.row(w) & !bit(v) {
                twins[v] |= bit(w);
            }
        }
    }
    let mut search = CanonSearch { g, n, twins, order: Vec::with_capacity(n), best: None };
    search.descend(0, 0);
    let (bits, order) = search.best.expect("at least one labeling is explored");
    let mut images = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        images[v] = pos;
    }
    Ok(CanonicalForm { key: CanonicalKey { order: n as u8, bits }, relabeling: Permutation::new(images)? })
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    twins: Vec<u64>,
    order: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn column(&self, v: usize) -> u64 {
        self.order.iter().fold(0u64, |acc, &u| (acc << 1) | self.g.has_edge(u, v) as u64)
    }

    fn descend(&mut self, used: u64, prefix: u64) {
        let j = self.order.len();
        if j == self.n {
            if self.best.as_ref().is_none_or(|(b, _)| prefix < *b) {
                self.best = Some((prefix, self.order.clone()));
            }
            return;
        }
        let mut min_col = u64::MAX;
        for v in 0..self.n {
            if used & bit(v) == 0 {
                min_col = min_col.min(self.column(v));
            }
        }
        let next = (prefix << j) | min_col;
        if let Some((best, _)) = &self.best {
            let total = self.n * (self.n - 1) / 2;
            let done = j * (j + 1) / 2;
            if next > best >> (total - done) {
                return;
            }
        }
        let mut tried = 0u64;
        for v in 0..self.n {
            if used & bit(v) != 0 || self.twins[v] & tried != 0 || self.column(v) != min_col {
                continue;
            }
            tried |= bit(v);
            self.order.push(v);
            self.descend(used | bit(v), next);
            self.order.pop();
        }
    }
}

/// Relabels `g` into its canonical form.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    Ok(canonical_key(g)?.to_graph())
}

/// One canonical representative per isomorphism class on `n` vertices,
/// ordered by canonical key. Accepts `1..=7`.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    if !(1..=7).contains(&n) {
        return Err(Error::Parameter(format!("census enumeration covers orders 1..=7, got {n}")));
    }
    enumerate_graphs_extended(n)
}

/// As [`enumerate_graphs`], also admitting order 8 (12346 classes).
pub fn enumerate_graphs_extended(n: usize) -> Result<Vec<Graph>> {
    if !(1..=CANON_MAX_ORDER).contains(&n) {
        return Err(Error::Parameter(format!("enumeration covers orders 1..={CANON_MAX_ORDER}, got {n}")));
    }
    let mut classes: BTreeMap<CanonicalKey, ()> = BTreeMap::new();
    classes.insert(canonical_key(&Graph::empty(1)?)?, ());
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for key in classes.keys() {
            let base = key.to_graph();
            for nbhd in 0..(1u64 << (m - 1)) {
                let mut rows: Vec<u64> = base.rows().to_vec();
                for (i, r) in rows.iter_mut().enumerate() {
                    if nbhd & bit(i) != 0 {
                        *r |= bit(m - 1);
                    }
                }
                rows.push(nbhd);
                let g = Graph::from_rows_unchecked(rows);
                next.insert(canonical_key(&g)?, ());
            }
        }
        classes = next;
    }
    if classes.len() != CLASS_COUNTS[n] {
        return Err(Error::Precondition(format!(
            "enumerated {} classes at order {n}, expected {}",
            classes.len(),
            CLASS_COUNTS[n]
        )));
    }
    Ok(classes.keys().map(|k| k.to_graph()).collect())
}
