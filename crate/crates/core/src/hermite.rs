//! Normalized probabilist's Hermite polynomials, their tensor and scaled
//! variants, capped versions, and quadrature for the standard Gaussian.
//!
//! All evaluation goes through the normalized three-term recurrence
//! `H_{n+1}(x) = (x H_n(x) - sqrt(n) H_{n-1}(x)) / sqrt(n+1)`, which keeps
//! values bounded where the factorial-normalized Rodrigues form would
//! overflow. The family is orthonormal with respect to the standard
//! Gaussian measure on the line.

use nalgebra::DMatrix;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::index_sets::MultiIndex;
use crate::spectrum::Spectrum;

/// Value of the `n`-th normalized Hermite polynomial at `x`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 0.0; // H_{-1} by convention
    let mut cur = 1.0; // H_0
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// All values `H_0(x), ..., H_n(x)` in one sweep of the recurrence.
pub fn hermite_eval_upto(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Tensor-product value `prod_i H_{gamma_i}(x_i)`; coordinates outside the
/// support contribute the factor 1.
pub fn hermite_tensor_eval(gamma: &MultiIndex, x: &[f64]) -> Result<f64> {
    let needed = gamma.max_support();
    if x.len() < needed {
        return Err(Error::DimensionMismatch {
            needed,
            got: x.len(),
        });
    }
    let mut prod = 1.0;
    for &(i, v) in gamma.pairs() {
        prod *= hermite_eval(v as usize, x[i - 1]);
    }
    Ok(prod)
}

/// Scaled value `prod_i H_{gamma_i}(x_i / sqrt(lambda_i))` on PCA
/// coordinates; uses the unweighted eigenvalues.
pub fn hermite_scaled_eval(gamma: &MultiIndex, coords: &[f64], s: &Spectrum) -> Result<f64> {
    let needed = gamma.max_support();
    if coords.len() < needed {
        return Err(Error::DimensionMismatch {
            needed,
            got: coords.len(),
        });
    }
    let mut prod = 1.0;
    for &(i, v) in gamma.pairs() {
        let lambda = s.eigenvalue(i)?;
        prod *= hermite_eval(v as usize, coords[i - 1] / lambda.sqrt());
    }
    Ok(prod)
}

/// Capped polynomial: `H_n` on `[-cap, cap]`, frozen at the boundary
/// values outside.
pub fn capped_hermite_eval(n: usize, cap: f64, x: f64) -> f64 {
    debug_assert!(cap > 0.0);
    hermite_eval(n, x.clamp(-cap, cap))
}

/// Nodes and weights integrating against a probability measure; for the
/// Gauss-Hermite rule the weights sum to one.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Eigen-decomposition of a symmetric tridiagonal Jacobi matrix: nodes are
/// the eigenvalues, weights the squared first eigenvector components times
/// the measure's total mass.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mass: f64) -> QuadratureRule {
    let n = diag.len();
    let m = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r + 1 == c || c + 1 == r {
            offdiag[r.min(c)]
        } else {
            0.0
        }
    });
    let eig = m.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss-Hermite rule for the standard Gaussian: exact for polynomials of
/// degree up to `2n - 1`. The Jacobi matrix has zero diagonal and
/// off-diagonal `sqrt(k)`; the eigennodes are then Newton-polished on
/// `H_n` (using `H_n' = sqrt(n) H_{n-1}`) and the weights rebuilt from
/// the Christoffel sum `w = 1 / sum_{k<n} H_k(x)^2`, which recovers full
/// double precision where the raw eigensolve leaves ~1e-12 residuals.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if !(1..=200).contains(&n) {
        return Err(Error::BadNodeCount(n));
    }
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let mut rule = golub_welsch(&diag, &offdiag, 1.0);
    let sqrt_n = (n as f64).sqrt();
    for (x, w) in rule.nodes.iter_mut().zip(rule.weights.iter_mut()) {
        for _ in 0..3 {
            let hn = hermite_eval(n, *x);
            let dh = sqrt_n * hermite_eval(n - 1, *x);
            if dh == 0.0 {
                break;
            }
            *x -= hn / dh;
        }
        let christoffel: f64 = hermite_eval_upto(n - 1, *x).iter().map(|h| h * h).sum();
        *w = 1.0 / christoffel;
    }
    // Polishing preserves node order but renormalize the total mass.
    let total: f64 = rule.weights.iter().sum();
    for w in rule.weights.iter_mut() {
        *w /= total;
    }
    Ok(rule)
}

/// Gauss-Legendre rule on `[-1, 1]` (weights sum to 2).
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::BadNodeCount(n));
    }
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    Ok(golub_welsch(&diag, &offdiag, 2.0))
}

/// Standard normal density.
#[inline]
fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Integral of `f` times the standard Gaussian density over `[a, b]`,
/// by composite Gauss-Legendre on panels of width at most one. The
/// per-panel node count covers the polynomial degree carried by `f` plus
/// headroom for the Gaussian factor.
fn integrate_gaussian_segment<F: Fn(f64) -> f64>(a: f64, b: f64, degree: usize, f: F) -> f64 {
    debug_assert!(b >= a);
    let nodes_per_panel = (degree + 8).max(12);
    let rule = gauss_legendre_rule(nodes_per_panel).expect("node count >= 1");
    let panels = ((b - a).ceil() as usize).max(1);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let half = 0.5 * width;
        let mid = lo + half;
        // Map [-1, 1] to the panel; the Legendre weights sum to 2.
        total += rule.integrate(|t| {
            let x = mid + half * t;
            f(x) * gaussian_pdf(x)
        }) * half;
    }
    total
}

/// Tail width used when truncating one-sided Gaussian integrals; the
/// density beyond `cap + 30` is below the double-precision floor for any
/// polynomial factor of desk-scale degree.
const TAIL_WIDTH: f64 = 30.0;

/// `int_{-cap}^{cap} H_n H_m dmu_1` plus the two frozen boundary terms
/// `1/2 H_n(+-cap) H_m(+-cap) erfc(cap / sqrt(2))`: the inner product of
/// two capped polynomials against the standard Gaussian.
pub fn capped_pair_integral(n: usize, m: usize, cap: f64) -> f64 {
    let t1 = integrate_gaussian_segment(-cap, cap, n + m, |x| {
        hermite_eval(n, x) * hermite_eval(m, x)
    });
    let c = 0.5 * erfc(cap / std::f64::consts::SQRT_2);
    let t2 = hermite_eval(n, -cap) * hermite_eval(m, -cap) * c;
    let t3 = hermite_eval(n, cap) * hermite_eval(m, cap) * c;
    t1 + t2 + t3
}

/// Inner product of the capped polynomial with the uncapped one.
fn capped_cross_integral(n: usize, cap: f64) -> f64 {
    let inner = integrate_gaussian_segment(-cap, cap, 2 * n, |x| {
        let h = hermite_eval(n, x);
        h * h
    });
    let left = hermite_eval(n, -cap)
        * integrate_gaussian_segment(-cap - TAIL_WIDTH, -cap, n, |x| hermite_eval(n, x));
    let right = hermite_eval(n, cap)
        * integrate_gaussian_segment(cap, cap + TAIL_WIDTH, n, |x| hermite_eval(n, x));
    inner + left + right
}

/// Squared distance in the Gaussian L2 norm between the capped and the
/// uncapped tensor polynomial for multi-index `gamma`:
/// `|H~|^2 - 2 <H~, H> + 1` with both terms factorizing over coordinates.
pub fn capped_l2_distance_squared(gamma: &MultiIndex, cap: f64) -> f64 {
    let mut norm_capped = 1.0;
    let mut cross = 1.0;
    for &(_, v) in gamma.pairs() {
        let n = v as usize;
        norm_capped *= capped_pair_integral(n, n, cap);
        cross *= capped_cross_integral(n, cap);
    }
    // Rounding can push the mathematically nonnegative result slightly
    // below zero for large caps.
    (norm_capped - 2.0 * cross + 1.0).max(0.0)
}

/// Gram matrix of a capped tensor-Hermite system with its extremal
/// eigenvalues; `epsilon_star` measures the distance of the spectrum
/// from 1, the deviation from exact orthonormality.
#[derive(Debug, Clone, Serialize)]
pub struct CappedGramReport {
    pub index_set: Vec<MultiIndex>,
    pub gram: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub epsilon_star: f64,
}

/// Gram matrix of `{H~_{gamma, cap}}` over a finite index set. Entries
/// factorize into one-dimensional capped pair integrals; extremal
/// eigenvalues come from a symmetric eigensolver.
///
/// The rule argument fixes the resolution contract: it must be fine enough
/// to integrate any pairwise product in the set exactly in the uncapped
/// limit, i.e. `node_count > max total degree in the set`.
pub fn capped_gram(
    index_set: &[MultiIndex],
    cap: f64,
    rule: &QuadratureRule,
) -> Result<CappedGramReport> {
    if !(cap > 0.0) {
        return Err(Error::BadParams(format!("cap must be > 0, got {cap}")));
    }
    if index_set.is_empty() {
        return Err(Error::BadParams("index set must be nonempty".into()));
    }
    let max_degree = index_set
        .iter()
        .map(|g| g.total_degree() as usize)
        .max()
        .unwrap_or(0);
    if rule.node_count() <= max_degree {
        return Err(Error::QuadratureTooCoarse(format!(
            "{} nodes cannot resolve pair products of total degree up to {}",
            rule.node_count(),
            2 * max_degree
        )));
    }

    let k = index_set.len();
    // Cache the distinct one-dimensional entries.
    let mut cache: std::collections::HashMap<(usize, usize), f64> =
        std::collections::HashMap::new();
    let mut entry_1d = |n: usize, m: usize| -> f64 {
        let key = (n.min(m), n.max(m));
        *cache
            .entry(key)
            .or_insert_with(|| capped_pair_integral(key.0, key.1, cap))
    };

    let mut gram = vec![vec![0.0; k]; k];
    for r in 0..k {
        for c in r..k {
            let mut prod = 1.0;
            let dim = index_set[r].max_support().max(index_set[c].max_support());
            for i in 1..=dim {
                let n = index_set[r].get(i) as usize;
                let m = index_set[c].get(i) as usize;
                if n > 0 || m > 0 {
                    prod *= entry_1d(n, m);
                }
            }
            gram[r][c] = prod;
            gram[c][r] = prod;
        }
    }

    let m = DMatrix::from_fn(k, k, |r, c| gram[r][c]);
    let eig = m.symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let max_eigenvalue = eig
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let epsilon_star = (1.0 - min_eigenvalue)
        .abs()
        .max((max_eigenvalue - 1.0).abs());

    Ok(CappedGramReport {
        index_set: index_set.to_vec(),
        gram,
        min_eigenvalue,
        max_eigenvalue,
        epsilon_star,
    })
}
