//! Floating-point spectra of adjacency matrices: cyclic Jacobi
//! diagonalization, Perron vectors, and the spectral product checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{adjacency, commute, IntMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;

const MAX_SWEEPS: usize = 100;
const MAX_POWER_STEPS: usize = 1_000_000;
const BASIS_ATTEMPTS: usize = 5;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub tolerance: f64,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Returns
/// eigenvalues (unsorted, diagonal order) and the accumulated rotation whose
/// columns are the eigenvectors.
fn jacobi(mut a: Vec<Vec<f64>>, tol: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    let off = |a: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        // one extra sweep after reaching tolerance
        if off(&a) < tol {
            if converged {
                break;
            }
            converged = true;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Eigenvalues of a symmetric integer matrix, descending.
pub fn eigen_sym(m: &IntMatrix, tol: f64) -> Result<Spectrum> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    if !m.is_symmetric() {
        return Err(Error::Precondition("eigen_sym requires a symmetric matrix".into()));
    }
    let (mut values, _) = jacobi(m.to_f64_rows(), tol);
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { values, tolerance: tol })
}

pub fn lambda_max(g: &Graph, tol: f64) -> f64 {
    eigen_sym(&adjacency(g), tol).expect("adjacency matrices are symmetric").max()
}

/// Largest eigenvalue with its positive unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronData {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Power iteration from the all-ones vector. Iterates with `A + I`, which
/// has the same eigenvectors but no eigenvalue of modulus equal to the top
/// one, so bipartite graphs converge too.
pub fn perron(g: &Graph, tol: f64) -> Result<PerronData> {
    if !g.is_connected() {
        return Err(Error::Precondition("Perron vector requested for a disconnected graph".into()));
    }
    let n = g.order();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                let mut rest = g.row(i);
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    s += x[j];
                }
                s
            })
            .collect()
    };
    for _ in 0..MAX_POWER_STEPS {
        let av = apply(&v);
        let mut w: Vec<f64> = av.iter().zip(&v).map(|(a, x)| a + x).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        let step = w.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        v = w;
        if step < tol {
            let av = apply(&v);
            let value = av.iter().zip(&v).map(|(a, b)| a * b).sum();
            return Ok(PerronData { value, vector: v });
        }
    }
    Err(Error::Precondition(format!("power iteration did not converge in {MAX_POWER_STEPS} steps")))
}

/// `values[i] + values[n-1-i]` vanishes within `2 tol` for every `i`.
pub fn spectrum_is_symmetric(s: &Spectrum) -> bool {
    let n = s.values.len();
    (0..n).all(|i| (s.values[i] + s.values[n - 1 - i]).abs() <= 2.0 * s.tolerance)
}

/// Orthonormal basis as columns: `vectors[k]` is the `k`-th basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    pub vectors: Vec<Vec<f64>>,
}

fn conjugate_off_diagonal(x: &IntMatrix, v: &[Vec<f64>]) -> f64 {
    let n = x.order();
    let xf = x.to_f64_rows();
    // y = X V, then V^T y
    let y: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| (0..n).map(|j| xf[i][j] * v[j][k]).sum()).collect()).collect();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            if a != b {
                let e: f64 = (0..n).map(|i| v[i][a] * y[i][b]).sum();
                worst = worst.max(e.abs());
            }
        }
    }
    worst
}

/// Looks for one orthonormal basis diagonalizing `a`, `b` and `c` at once by
/// diagonalizing a seeded random combination `r b + s c`.
pub fn common_eigenbasis(
    a: &IntMatrix,
    b: &IntMatrix,
    c: &IntMatrix,
    tol: f64,
    seed: u64,
) -> Result<Option<EigenBasis>> {
    for (name, m) in [("a", a), ("b", b), ("c", c)] {
        if !m.is_symmetric() {
            return Err(Error::Precondition(format!("matrix {name} is not symmetric")));
        }
    }
    if !(commute(a, b)? && commute(a, c)? && commute(b, c)?) {
        return Err(Error::Precondition("matrices do not pairwise commute".into()));
    }
    let n = a.order();
    let (bf, cf) = (b.to_f64_rows(), c.to_f64_rows());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..BASIS_ATTEMPTS {
        let r: f64 = rng.gen_range(-1.0..1.0);
        let s: f64 = rng.gen_range(-1.0..1.0);
        let mix: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| r * bf[i][j] + s * cf[i][j]).collect()).collect();
        let (_, v) = jacobi(mix, tol * 1e-3);
        if [a, b, c].iter().all(|x| conjugate_off_diagonal(x, &v) < tol) {
            let vectors = (0..n).map(|k| (0..n).map(|i| v[i][k]).collect()).collect();
            return Ok(Some(EigenBasis { vectors }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaMaxCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `lambda_max(G)` with `lambda_max(H) * lambda_max(K)` at relative
/// tolerance `tol * max(1, |lambda_max(G)|)`.
pub fn lambda_max_product_check(g: &Graph, h: &Graph, k: &Graph, tol: f64) -> LambdaMaxCheck {
    let lhs = lambda_max(g, tol);
    let rhs = lambda_max(h, tol) * lambda_max(k, tol);
    LambdaMaxCheck { lhs, rhs, holds: (lhs - rhs).abs() <= tol * lhs.abs().max(1.0) }
}

/// Every component of a graph has the graph's spectral radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRadiusCheck {
    pub applicable: bool,
    pub holds: bool,
    pub detail: String,
}

/// When one of `G`, `H`, `K` is connected and the factorization is not
/// trivial, every component of each graph shares its parent's spectral
/// radius and no graph has an isolated vertex.
pub fn component_radius_check(g: &Graph, h: &Graph, k: &Graph, tol: f64) -> ComponentRadiusCheck {
    let graphs = [("G", g), ("H", h), ("K", k)];
    let applicable = !g.is_edgeless() && graphs.iter().any(|(_, x)| x.is_connected());
    if !applicable {
        return ComponentRadiusCheck { applicable, holds: true, detail: String::new() };
    }
    for (name, x) in graphs {
        if x.has_isolated_vertex() {
            return ComponentRadiusCheck { applicable, holds: false, detail: format!("{name} has an isolated vertex") };
        }
        let parent = lambda_max(x, tol);
        for comp in x.components() {
            let sub = x.induced(&comp).expect("component is a valid vertex set");
            let r = lambda_max(&sub, tol);
            if (r - parent).abs() > tol * parent.abs().max(1.0) {
                return ComponentRadiusCheck {
                    applicable,
                    holds: false,
                    detail: format!("{name} component {comp:?} has radius {r}, graph has {parent}"),
                };
            }
        }
    }
    ComponentRadiusCheck { applicable, holds: true, detail: String::new() }
}

/// Decimal rendering with `digits` significant digits, trailing zeros trimmed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, generate, matching, path, Family};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn spectra_of_small_families() {
        let s = eigen_sym(&adjacency(&cycle(6).unwrap()), DEFAULT_TOL).unwrap();
        assert!(close(&s.values, &[2.0, 1.0, 1.0, -1.0, -1.0, -2.0], 1e-9));
        let s = eigen_sym(&adjacency(&complete(3).unwrap()), DEFAULT_TOL).unwrap();
        assert!(close(&s.values, &[2.0, -1.0, -1.0], 1e-9));
        let s = eigen_sym(&adjacency(&matching(3).unwrap()), DEFAULT_TOL).unwrap();
        assert!(close(&s.values, &[1.0, 1.0, 1.0, -1.0, -1.0, -1.0], 1e-9));
        let trace: f64 = s.values.iter().sum();
        assert!(trace.abs() < 1e-9);
    }

    #[test]
    fn eigen_sym_rejects_asymmetric() {
        let m = IntMatrix::from_rows(&[[0, 1], [0, 0]]).unwrap();
        assert!(eigen_sym(&m, DEFAULT_TOL).is_err());
        assert!(eigen_sym(&IntMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn perron_examples() {
        let p = perron(&cycle(6).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.value - 2.0).abs() < 1e-9);
        assert!(p.vector.iter().all(|x| (x - 1.0 / 6f64.sqrt()).abs() < 1e-9));
        let p = perron(&complete(3).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.value - 2.0).abs() < 1e-9);
        // path(3): eigenvector (1, sqrt 2, 1) / 2 for sqrt 2
        let p = perron(&path(3).unwrap(), DEFAULT_TOL).unwrap();
        assert!((p.value - 2f64.sqrt()).abs() < 1e-9);
        assert!(close(&p.vector, &[0.5, 2f64.sqrt() / 2.0, 0.5], 1e-8));
        let k3 = complete(3).unwrap();
        assert!(perron(&k3.disjoint_union(&k3).unwrap(), DEFAULT_TOL).is_err());
    }

    #[test]
    fn symmetric_spectra() {
        let spec = |g: &Graph| eigen_sym(&adjacency(g), DEFAULT_TOL).unwrap();
        assert!(spectrum_is_symmetric(&spec(&cycle(6).unwrap())));
        assert!(!spectrum_is_symmetric(&spec(&complete(3).unwrap())));
        let forest =
            generate(&Family::TreeFromPruefer(vec![0, 0, 4])).unwrap().disjoint_union(&path(3).unwrap()).unwrap();
        assert!(spectrum_is_symmetric(&spec(&forest)));
    }

    #[test]
    fn common_basis_examples() {
        let i = IntMatrix::identity(4);
        assert!(common_eigenbasis(&i, &i, &i, DEFAULT_TOL, DEFAULT_SEED).unwrap().is_some());
        let a = adjacency(&cycle(6).unwrap());
        let a2 = crate::linalg::power(&a, 2);
        let basis = common_eigenbasis(&a, &a, &a2, DEFAULT_TOL, DEFAULT_SEED).unwrap().unwrap();
        for (x, vx) in basis.vectors.iter().enumerate() {
            for (y, vy) in basis.vectors.iter().enumerate() {
                let dot: f64 = vx.iter().zip(vy).map(|(p, q)| p * q).sum();
                assert!((dot - (x == y) as u8 as f64).abs() < 1e-9);
            }
        }
        let p3 = adjacency(&path(3).unwrap());
        let other = adjacency(&Graph::from_edges(3, &[(0, 2), (0, 1)]).unwrap());
        assert!(common_eigenbasis(&p3, &p3, &other, DEFAULT_TOL, DEFAULT_SEED).is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(2.0, 12), "2");
        assert_eq!(format_significant(-1.0000000000000002, 12), "-1");
        assert_eq!(format_significant(2f64.sqrt(), 12), "1.41421356237");
        assert_eq!(format_significant(-1e-17, 12), "-0.00000000000000001");
        assert_eq!(format_significant(0.0, 12), "0");
    }
}
