//! Explicit factorization families.

use crate::conditions::validate_factorization;
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::graph::{bit, cycle, matching, Graph};
use crate::spectral::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// `(n K2)(2 C_n)`, the matching on pairs `{i, n+i}` times the two cycles
    /// on `0..n` and `n..2n`. The product is `C_2n` for odd `n` and `2 C_n`
    /// for even `n` (the bipartite double cover of `C_n`).
    CycleProduct(usize),
    /// For connected non-bipartite `G` with matrix `M`:
    /// `diag(M, M) = antidiag(M, M) * antidiag(I, I)`.
    DoubledGraph(Graph),
    /// `H * K` with `H = nK2 + 2C_n` and `K = 2C_n + nK2`: two copies of the
    /// cycle product, a disconnected graph whose spectral radius 2 is not
    /// `2 * 2`.
    DisconnectedCounterexample(usize),
}

fn two_cycles(n: usize) -> Result<Graph> {
    let c = cycle(n)?;
    c.disjoint_union(&c)
}

fn product_graph(h: &Graph, k: &Graph) -> Result<Graph> {
    let n = h.order();
    let mut rows = vec![0u64; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..n {
            match (h.row(i) & k.row(j)).count_ones() {
                0 => {}
                1 => *row |= bit(j),
                c => {
                    return Err(Error::Precondition(format!("product entry ({i}, {j}) is {c}, not 0 or 1")));
                }
            }
        }
    }
    Graph::from_rows(rows)
}

fn from_factors(h: Graph, k: Graph) -> Result<Factorization> {
    let g = product_graph(&h, &k)?;
    Factorization::from_graphs(g, h, k)
}

fn doubled(m: &Graph) -> Result<Factorization> {
    if !m.is_connected() {
        return Err(Error::Precondition("input disconnected".into()));
    }
    if m.is_bipartite() {
        return Err(Error::Precondition("input bipartite".into()));
    }
    let n = m.order();
    let (mut a, mut b, mut c) = (vec![0u64; 2 * n], vec![0u64; 2 * n], vec![0u64; 2 * n]);
    for i in 0..n {
        let row = m.row(i);
        a[i] = row;
        a[n + i] = row << n;
        b[i] = row << n;
        b[n + i] = row;
        c[i] = bit(n + i);
        c[n + i] = bit(i);
    }
    let (a, b, c) = (Graph::from_rows(a)?, Graph::from_rows(b)?, Graph::from_rows(c)?);
    if !b.is_connected() {
        return Err(Error::Violation("doubled factor is disconnected".into()));
    }
    Factorization::from_graphs(a, b, c)
}

/// Builds the construction and checks it against the product identity and
/// the assertion registry.
pub fn construct(kind: &Construction) -> Result<Factorization> {
    let f = match kind {
        Construction::CycleProduct(n) | Construction::DisconnectedCounterexample(n) if *n < 3 => {
            return Err(Error::Parameter(format!("n must be at least 3, got {n}")));
        }
        Construction::CycleProduct(n) => from_factors(matching(*n)?, two_cycles(*n)?)?,
        Construction::DoubledGraph(m) => doubled(m)?,
        Construction::DisconnectedCounterexample(n) => {
            let (mk, cc) = (matching(*n)?, two_cycles(*n)?);
            from_factors(mk.disjoint_union(&cc)?, cc.disjoint_union(&mk)?)?
        }
    };
    let violations = validate_factorization(&f, DEFAULT_TOL);
    if let Some(v) = violations.items.first() {
        return Err(Error::Violation(format!("{}: expected {}, observed {}", v.assertion_id, v.expected, v.observed)));
    }
    Ok(f)
}
