//! Shared fixtures: the two worked products transcribed from their matrices.
#![allow(dead_code)]

use graphfactor::IntMatrix;

pub fn six_cycle_triple() -> (IntMatrix, IntMatrix, IntMatrix) {
    let b = IntMatrix::from_rows(&[
        [0, 1, 1, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1, 0],
    ])
    .unwrap();
    let c = IntMatrix::from_rows(&[
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
    ])
    .unwrap();
    let a = IntMatrix::from_rows(&[
        [0, 0, 0, 0, 1, 1],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1, 0],
        [0, 1, 1, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
    ])
    .unwrap();
    (a, b, c)
}

pub fn two_squares_triple() -> (IntMatrix, IntMatrix, IntMatrix) {
    let b = IntMatrix::from_rows(&[
        [0, 1, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
    ])
    .unwrap();
    let c = IntMatrix::from_rows(&[
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 0, 1, 1, 0],
    ])
    .unwrap();
    let a = IntMatrix::from_rows(&[
        [0, 1, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 0, 1, 1, 0],
    ])
    .unwrap();
    (a, b, c)
}

/// Exact power sums `tr(A^k)` for `k = 1..=n`. Newton's identities tie these
/// to the characteristic polynomial, so they pin down the eigenvalue multiset.
pub fn trace_powers(a: &IntMatrix) -> Vec<f64> {
    use num_traits::ToPrimitive;
    let n = a.order();
    (1..=n as u32)
        .map(|k| {
            let p = graphfactor::linalg::power(a, k);
            let t: num_bigint::BigInt = (0..n).map(|i| p.get(i, i).clone()).sum();
            t.to_f64().unwrap()
        })
        .collect()
}

/// Labeled witness set keyed by the upper-triangle bits of `B` and `C`.
pub fn witness_set(ws: &[graphfactor::Factorization]) -> std::collections::BTreeSet<(u64, u64)> {
    ws.iter().map(|f| (f.h().upper_bits(), f.k().upper_bits())).collect()
}

/// Graph on `n` vertices from a seed, each pair present with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> graphfactor::Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    graphfactor::Graph::from_edges(n, &edges).unwrap()
}
