//! Exact integer and rational square matrices.
//!
//! Everything here is exact: entries are arbitrary-precision, so powers of
//! dense adjacency matrices cannot overflow.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{bit, Bipartition, Graph};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    order: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { order: n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        IntMatrix { order: n, entries: vec![BigInt::one(); n * n] }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Parameter(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(IntMatrix { order: n, entries })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.order + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.order + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| ((i + 1)..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.order;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        let n = self.order;
        (0..n).map(|i| (0..n).map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN)).collect()).collect()
    }

    fn check_same_order(&self, other: &IntMatrix) -> Result<()> {
        if self.order != other.order {
            return Err(Error::Parameter(format!("matrix orders differ: {} vs {}", self.order, other.order)));
        }
        Ok(())
    }

    fn mul_unchecked(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    fn add_unchecked(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix { order: self.order, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({})\n{}", self.order, self)
    }
}

pub fn adjacency(g: &Graph) -> IntMatrix {
    let n = g.order();
    let mut m = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(i, j) {
                m.set(i, j, BigInt::one());
            }
        }
    }
    m
}

pub fn multiply(m: &IntMatrix, n: &IntMatrix) -> Result<IntMatrix> {
    m.check_same_order(n)?;
    Ok(m.mul_unchecked(n))
}

/// First entry that keeps a matrix from being an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryViolation {
    pub row: usize,
    pub col: usize,
    pub value: BigInt,
    pub reason: &'static str,
}

/// Reads `m` as the adjacency matrix of a simple graph.
pub fn as_adjacency(m: &IntMatrix) -> std::result::Result<Graph, EntryViolation> {
    let n = m.order();
    let violation = |row, col, reason| EntryViolation { row, col, value: m.get(row, col).clone(), reason };
    if n == 0 || n > crate::graph::MAX_ORDER {
        return Err(EntryViolation { row: 0, col: 0, value: BigInt::zero(), reason: "unsupported order" });
    }
    let mut rows = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if i == j {
                if !v.is_zero() {
                    return Err(violation(i, j, "nonzero diagonal"));
                }
            } else if v.is_one() {
                rows[i] |= bit(j);
            } else if !v.is_zero() {
                return Err(violation(i, j, "entry not 0 or 1"));
            }
            if v != m.get(j, i) {
                return Err(violation(i, j, "not symmetric"));
            }
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}

pub fn power(m: &IntMatrix, k: u32) -> IntMatrix {
    let mut result = IntMatrix::identity(m.order());
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_unchecked(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_unchecked(&base);
        }
    }
    result
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityProfile {
    pub all_positive: bool,
    pub zero_rows: Vec<usize>,
}

pub fn positivity_profile(m: &IntMatrix) -> PositivityProfile {
    let n = m.order();
    PositivityProfile {
        all_positive: m.entries.iter().all(|x| x.is_positive()),
        zero_rows: (0..n).filter(|&i| (0..n).all(|j| m.get(i, j).is_zero())).collect(),
    }
}

fn require_adjacency(a: &IntMatrix) -> Result<()> {
    as_adjacency(a).map(|_| ()).map_err(|v| {
        Error::Precondition(format!(
            "not an adjacency matrix: entry ({}, {}) = {} ({})",
            v.row, v.col, v.value, v.reason
        ))
    })
}

/// Connectivity via positivity of `I + A + ... + A^(n-1)`.
pub fn connected_by_powers(a: &IntMatrix) -> Result<bool> {
    require_adjacency(a)?;
    let n = a.order();
    let mut sum = IntMatrix::identity(n);
    let mut p = IntMatrix::identity(n);
    for _ in 1..n {
        p = p.mul_unchecked(a);
        sum = sum.add_unchecked(&p);
    }
    Ok(positivity_profile(&sum).all_positive)
}

/// Sharp bound `n^2 - 2n + 2` on the exponent of a primitive `n x n` 0-1 matrix.
pub fn wielandt_bound(n: usize) -> usize {
    let m = n.saturating_sub(1);
    m * m + 1
}

/// Smallest `k` with `a^k > 0`, searched up to the Wielandt bound.
/// Present exactly for connected non-bipartite graphs.
pub fn primitivity_exponent(a: &IntMatrix) -> Option<usize> {
    let n = a.order();
    let mut p = a.clone();
    for k in 1..=wielandt_bound(n) {
        if positivity_profile(&p).all_positive {
            return Some(k);
        }
        p = p.mul_unchecked(a);
    }
    None
}

pub fn commute(m: &IntMatrix, n: &IntMatrix) -> Result<bool> {
    m.check_same_order(n)?;
    Ok(m.mul_unchecked(n) == n.mul_unchecked(m))
}

/// Square matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    order: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix { order: n, entries: vec![BigRational::zero(); n * n] }
    }

    pub fn ones(n: usize) -> Self {
        RationalMatrix { order: n, entries: vec![BigRational::one(); n * n] }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix {
            order: m.order,
            entries: m.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.order + j]
    }

    /// `self + c * m`.
    fn add_scaled(&self, c: &BigRational, m: &IntMatrix) -> RationalMatrix {
        RationalMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&m.entries)
                .map(|(x, y)| x + c * BigRational::from_integer(y.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Coefficients `a_0..a_{n-1}` of a polynomial `p` with `p(A) = J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoffmanCertificate {
    pub coefficients: Vec<BigRational>,
}

impl HoffmanCertificate {
    /// `sum a_i A^i`, computed exactly.
    pub fn evaluate(&self, a: &IntMatrix) -> RationalMatrix {
        let mut acc = RationalMatrix::zeros(a.order());
        let mut p = IntMatrix::identity(a.order());
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                p = p.mul_unchecked(a);
            }
            if !c.is_zero() {
                acc = acc.add_scaled(c, &p);
            }
        }
        acc
    }

    pub fn reproduces_ones(&self, a: &IntMatrix) -> bool {
        self.evaluate(a) == RationalMatrix::ones(a.order())
    }
}

impl fmt::Display for HoffmanCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Solves `sum_i a_i A^i = J` over `i < n` by exact Gaussian elimination on
/// the `n^2 x n` system. Free coefficients are set to zero, so the result is
/// the unique solution supported on the pivot powers.
pub fn hoffman_polynomial(a: &IntMatrix) -> Option<HoffmanCertificate> {
    let n = a.order();
    let mut powers = Vec::with_capacity(n);
    let mut p = IntMatrix::identity(n);
    for i in 0..n {
        if i > 0 {
            p = p.mul_unchecked(a);
        }
        powers.push(p.clone());
    }
    let system: Vec<Vec<BigRational>> = (0..n * n)
        .map(|e| {
            let mut row: Vec<BigRational> =
                powers.iter().map(|m| BigRational::from_integer(m.entries[e].clone())).collect();
            row.push(BigRational::one());
            row
        })
        .collect();
    let coefficients = solve_exact(system, n)?;
    let cert = HoffmanCertificate { coefficients };
    debug_assert!(cert.reproduces_ones(a));
    Some(cert)
}

/// Reduced row echelon solve of an augmented system with `unknowns` columns
/// plus a right-hand side. `None` when inconsistent.
fn solve_exact(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut solution = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        solution[col] = rows[i][unknowns].clone();
    }
    Some(solution)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartitePowers {
    /// Smallest even `k` with `(B12 B12^T)^k > 0`.
    pub even_k: Option<usize>,
    /// Smallest odd `k` whose power `A^k` has a strictly positive cross block.
    pub odd_k: Option<usize>,
}

/// Power structure of a bipartite adjacency matrix with cross block `B12`
/// (rows `parts.left`, columns `parts.right`). Both exponents exist exactly
/// when the graph is connected and has at least two vertices.
pub fn bipartite_power_structure(a: &IntMatrix, parts: &Bipartition) -> Result<BipartitePowers> {
    require_adjacency(a)?;
    let g = as_adjacency(a).expect("checked above");
    if !parts.is_valid_for(&g) {
        return Err(Error::Precondition("bipartition is not a valid 2-coloring of the graph".into()));
    }
    let (left, right) = (&parts.left, &parts.right);
    if left.is_empty() || right.is_empty() {
        return Ok(BipartitePowers { even_k: None, odd_k: None });
    }
    let p = left.len();
    let mut square = IntMatrix::zeros(p);
    for (x, &u) in left.iter().enumerate() {
        for (y, &v) in left.iter().enumerate() {
            let c = right.iter().filter(|&&w| g.has_edge(u, w) && g.has_edge(v, w)).count();
            square.set(x, y, BigInt::from(c));
        }
    }

    let square2 = square.mul_unchecked(&square);
    let mut even_k = None;
    let mut m = square2.clone();
    let mut k = 2;
    while k <= wielandt_bound(p) + 1 {
        if positivity_profile(&m).all_positive {
            even_k = Some(k);
            break;
        }
        m = m.mul_unchecked(&square2);
        k += 2;
    }

    let a2 = a.mul_unchecked(a);
    let odd_bound = 2 * wielandt_bound(p.max(right.len())) + 1;
    let mut odd_k = None;
    let mut m = a.clone();
    let mut k = 1;
    while k <= odd_bound {
        if left.iter().all(|&u| right.iter().all(|&v| m.get(u, v).is_positive())) {
            odd_k = Some(k);
            break;
        }
        m = m.mul_unchecked(&a2);
        k += 2;
    }
    Ok(BipartitePowers { even_k, odd_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, edgeless, matching, path};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn adjacency_examples() {
        let k3 = adjacency(&complete(3).unwrap());
        assert_eq!(k3, IntMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]).unwrap());
        let m3 = adjacency(&matching(3).unwrap());
        let expected = IntMatrix::from_rows(&[
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
        ])
        .unwrap();
        assert_eq!(m3, expected);
        assert_eq!(adjacency(&edgeless(2).unwrap()), IntMatrix::zeros(2));
    }

    #[test]
    fn multiply_identity_and_mismatch() {
        let m = adjacency(&path(4).unwrap());
        assert_eq!(multiply(&m, &IntMatrix::identity(4)).unwrap(), m);
        assert!(multiply(&m, &IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn as_adjacency_examples() {
        assert!(as_adjacency(&IntMatrix::identity(3)).is_err());
        let k3 = adjacency(&complete(3).unwrap());
        let sq = multiply(&k3, &k3).unwrap();
        let v = as_adjacency(&sq).unwrap_err();
        assert_eq!((v.row, v.col, v.value.clone()), (0, 0, BigInt::from(2)));
        let asym = IntMatrix::from_rows(&[[0, 1], [0, 0]]).unwrap();
        assert_eq!(as_adjacency(&asym).unwrap_err().reason, "not symmetric");
    }

    #[test]
    fn power_examples() {
        let a = adjacency(&complete(3).unwrap());
        let j_plus_i = IntMatrix::from_rows(&[[2, 1, 1], [1, 2, 1], [1, 1, 2]]).unwrap();
        assert_eq!(power(&a, 2), j_plus_i);
        assert_eq!(power(&a, 0), IntMatrix::identity(3));
        let c4 = power(&adjacency(&cycle(4).unwrap()), 2);
        assert!((0..4).all(|i| *c4.get(i, i) == BigInt::from(2)));
    }

    #[test]
    fn positivity_examples() {
        assert!(positivity_profile(&IntMatrix::ones(3)).all_positive);
        let k3 = positivity_profile(&adjacency(&complete(3).unwrap()));
        assert!(!k3.all_positive);
        assert!(k3.zero_rows.is_empty());
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(positivity_profile(&adjacency(&g)).zero_rows, vec![0]);
    }

    #[test]
    fn connectivity_examples() {
        assert!(connected_by_powers(&adjacency(&cycle(6).unwrap())).unwrap());
        let k3 = complete(3).unwrap();
        assert!(!connected_by_powers(&adjacency(&k3.disjoint_union(&k3).unwrap())).unwrap());
        assert!(connected_by_powers(&adjacency(&Graph::empty(1).unwrap())).unwrap());
        assert!(connected_by_powers(&IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!([1, 2, 3, 6].map(wielandt_bound), [1, 2, 5, 26]);
        assert_eq!(primitivity_exponent(&IntMatrix::zeros(1)), None);
        assert_eq!(primitivity_exponent(&adjacency(&complete(3).unwrap())), Some(2));
        assert_eq!(primitivity_exponent(&adjacency(&cycle(4).unwrap())), None);
        let c5 = adjacency(&cycle(5).unwrap());
        // Oracle: iterate powers directly.
        let mut p = c5.clone();
        let mut k = 1;
        while !p.entries.iter().all(|x| x.is_positive()) {
            p = multiply(&p, &c5).unwrap();
            k += 1;
        }
        assert_eq!(k, 4);
        assert_eq!(primitivity_exponent(&c5), Some(4));
        assert!(k <= 17);
    }

    #[test]
    fn hoffman_examples() {
        let c4 = adjacency(&cycle(4).unwrap());
        let cert = hoffman_polynomial(&c4).unwrap();
        assert_eq!(cert.coefficients, vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(0, 1)]);
        assert!(cert.reproduces_ones(&c4));
        assert_eq!(cert.to_string(), "(1)x + (1/2)x^2");
        assert!(hoffman_polynomial(&adjacency(&path(3).unwrap())).is_none());
        let k3 = complete(3).unwrap();
        assert!(hoffman_polynomial(&adjacency(&k3.disjoint_union(&k3).unwrap())).is_none());
        // K_n: J = I + A
        let k4 = adjacency(&complete(4).unwrap());
        assert_eq!(hoffman_polynomial(&k4).unwrap().coefficients[..2], [rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn commute_examples() {
        let p3 = adjacency(&path(3).unwrap());
        assert!(commute(&p3, &IntMatrix::identity(3)).unwrap());
        // K3 minus edge {0,2} on the same labels is P3 centred at 1: commutes with itself.
        let other = adjacency(&Graph::from_edges(3, &[(0, 2), (0, 1)]).unwrap());
        let lhs = multiply(&p3, &other).unwrap();
        let rhs = multiply(&other, &p3).unwrap();
        assert_eq!(commute(&p3, &other).unwrap(), lhs == rhs);
        assert!(!commute(&p3, &other).unwrap());
        assert!(commute(&p3, &IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn bipartite_power_examples() {
        let c4 = cycle(4).unwrap();
        let parts = c4.bipartition_of().unwrap();
        let s = bipartite_power_structure(&adjacency(&c4), &parts).unwrap();
        assert_eq!((s.even_k, s.odd_k), (Some(2), Some(1)));

        let m2 = matching(2).unwrap();
        let s = bipartite_power_structure(&adjacency(&m2), &m2.bipartition_of().unwrap()).unwrap();
        assert_eq!((s.even_k, s.odd_k), (None, None));

        let p4 = path(4).unwrap();
        let s = bipartite_power_structure(&adjacency(&p4), &p4.bipartition_of().unwrap()).unwrap();
        assert!(s.even_k.is_some() && s.odd_k.is_some());
        // left {0,2}, right {1,3}: cross block [[1,0],[1,1]] is not positive, A^3's is.
        assert_eq!(s.odd_k, Some(3));

        let bad = Bipartition { left: vec![0, 1], right: vec![2, 3] };
        assert!(bipartite_power_structure(&adjacency(&c4), &bad).is_err());
    }

    #[test]
    fn solver_handles_inconsistent_systems() {
        let rows = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(2, 1)]];
        assert!(solve_exact(rows, 1).is_none());
    }
}
