use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use crate::linalg::{adjacency, as_adjacency, multiply, IntMatrix};

/// A verified witness `A = BC` with the graph views `G`, `H`, `K`.
///
/// Construction checks the product exactly, so every value of this type
/// satisfies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    a: IntMatrix,
    b: IntMatrix,
    c: IntMatrix,
    g: Graph,
    h: Graph,
    k: Graph,
    trivial: bool,
}

/// First entry where `B * C` differs from `A`, on bit rows.
pub(crate) fn product_mismatch(g: &Graph, h: &Graph, k: &Graph) -> Option<(usize, usize, u32, bool)> {
    let n = g.order();
    for i in 0..n {
        for j in 0..n {
            let prod = (h.row(i) & k.row(j)).count_ones();
            let want = g.has_edge(i, j);
            if prod != want as u32 {
                return Some((i, j, prod, want));
            }
        }
    }
    None
}

impl Factorization {
    pub fn from_graphs(g: Graph, h: Graph, k: Graph) -> Result<Self> {
        if g.order() != h.order() || g.order() != k.order() {
            return Err(Error::Parameter(format!("orders differ: G {}, H {}, K {}", g.order(), h.order(), k.order())));
        }
        if let Some((row, col, observed, expected)) = product_mismatch(&g, &h, &k) {
            return Err(Error::ProductMismatch {
                row,
                col,
                expected: (expected as u8).to_string(),
                observed: observed.to_string(),
            });
        }
        Ok(Self::from_graphs_unchecked(g, h, k))
    }

    pub(crate) fn from_graphs_unchecked(g: Graph, h: Graph, k: Graph) -> Self {
        debug_assert!(product_mismatch(&g, &h, &k).is_none());
        let trivial = h.is_edgeless() || k.is_edgeless();
        Factorization { a: adjacency(&g), b: adjacency(&h), c: adjacency(&k), g, h, k, trivial }
    }

    /// Checks that all three are adjacency matrices and that `b * c == a`.
    pub fn from_matrices(a: IntMatrix, b: IntMatrix, c: IntMatrix) -> Result<Self> {
        let view = |m: &IntMatrix, name: &str| {
            as_adjacency(m).map_err(|v| {
                Error::Precondition(format!(
                    "{name} is not an adjacency matrix: entry ({}, {}) = {} ({})",
                    v.row, v.col, v.value, v.reason
                ))
            })
        };
        let (g, h, k) = (view(&a, "A")?, view(&b, "B")?, view(&c, "C")?);
        let product = multiply(&b, &c)?;
        if product != a {
            let n = a.order();
            let (row, col) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| product.get(i, j) != a.get(i, j))
                .expect("matrices differ somewhere");
            return Err(Error::ProductMismatch {
                row,
                col,
                expected: a.get(row, col).to_string(),
                observed: product.get(row, col).to_string(),
            });
        }
        let trivial = h.is_edgeless() || k.is_edgeless();
        Ok(Factorization { a, b, c, g, h, k, trivial })
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn h(&self) -> &Graph {
        &self.h
    }

    pub fn k(&self) -> &Graph {
        &self.k
    }

    /// True iff `B` or `C` is the zero matrix.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Order used when listing witnesses: `B`'s upper-triangle string, then `C`'s.
    pub(crate) fn sort_key(&self) -> (Vec<bool>, Vec<bool>) {
        (upper_string(&self.h), upper_string(&self.k))
    }

    pub fn to_record(&self) -> WitnessRecord {
        WitnessRecord {
            a: row_strings(&self.g),
            b: row_strings(&self.h),
            c: row_strings(&self.k),
            h_graph6: encode_graph6(&self.h).unwrap_or_default(),
            k_graph6: encode_graph6(&self.k).unwrap_or_default(),
            trivial: self.trivial,
        }
    }
}

fn upper_string(g: &Graph) -> Vec<bool> {
    let n = g.order();
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| g.has_edge(i, j)).collect()
}

fn row_strings(g: &Graph) -> Vec<String> {
    let n = g.order();
    (0..n).map(|i| (0..n).map(|j| if g.has_edge(i, j) { '1' } else { '0' }).collect()).collect()
}

/// Serialized witness: matrices as row-wise bit-strings plus graph6 of the factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub h_graph6: String,
    pub k_graph6: String,
    pub trivial: bool,
}

impl WitnessRecord {
    /// Rebuilds and re-verifies the witness.
    pub fn to_factorization(&self) -> Result<Factorization> {
        let parse = |rows: &[String]| -> Result<IntMatrix> {
            let rows: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.chars()
                        .map(|ch| match ch {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            _ => Err(Error::Parameter(format!("invalid matrix character {ch:?}"))),
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            IntMatrix::from_rows(&rows)
        };
        Factorization::from_matrices(parse(&self.a)?, parse(&self.b)?, parse(&self.c)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, matching};

    #[test]
    fn record_round_trip() {
        let k3 = complete(3).unwrap();
        let h = k3.disjoint_union(&k3).unwrap();
        let k = matching(3).unwrap();
        let g = {
            let mut rows = vec![0u64; 6];
            for i in 0..6 {
                for j in 0..6 {
                    if (h.row(i) & k.row(j)).count_ones() == 1 {
                        rows[i] |= 1 << j;
                    }
                }
            }
            Graph::from_rows(rows).unwrap()
        };
        let f = Factorization::from_graphs(g, h, k).unwrap();
        assert!(!f.is_trivial());
        let rec = f.to_record();
        assert_eq!(rec.a[0], "000011");
        assert_eq!(rec.to_factorization().unwrap(), f);
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let k2 = complete(2).unwrap();
        let err = Factorization::from_graphs(Graph::empty(2).unwrap(), k2.clone(), k2).unwrap_err();
        assert!(matches!(err, Error::ProductMismatch { row: 0, col: 0, .. }));
        let i = IntMatrix::identity(2);
        assert!(Factorization::from_matrices(i.clone(), i.clone(), i).is_err());
    }
}
