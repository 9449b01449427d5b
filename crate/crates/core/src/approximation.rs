//! Polynomial-chaos expansion pipeline: Gaussian sampling, coefficient
//! estimation by tensor quadrature or Monte Carlo, projections, error
//! norms, and built-in Lipschitz test operators.
//!
//! Operators act on truncated PCA coordinates `x_i` with `x_i ~ N(0,
//! lambda_i)` independent. An operator's chaos coefficients are `Y_gamma =
//! E[F(X) H_gamma(X)]` against the scaled tensor Hermite system; Parseval
//! turns truncation errors into coefficient tail sums, which is the exact
//! route used to cross-check every Monte Carlo estimate.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{capped_hermite_eval, hermite_eval_upto};
use crate::index_sets::{enumerate_rearrangement, sobolev_weight, MultiIndex};
use crate::spectrum::{Spectrum, SpectrumConfig};

/// Work cap for tensor-quadrature grids.
const GRID_POINT_CAP: usize = 10_000_000;

/// A finite Wiener-Hermite chaos expansion: a map from multi-indices to
/// coefficient vectors in the codomain, tied to the spectrum that scales
/// its polynomials.
#[derive(Debug, Clone)]
pub struct PcExpansion {
    spectrum: Arc<Spectrum>,
    codomain_dim: usize,
    coeffs: Vec<(MultiIndex, Vec<f64>)>,
}

impl PcExpansion {
    /// Build from sparse entries; duplicate indices are rejected, all
    /// coefficient vectors must have the codomain length.
    pub fn new(
        spectrum: Arc<Spectrum>,
        codomain_dim: usize,
        mut entries: Vec<(MultiIndex, Vec<f64>)>,
    ) -> Result<Self> {
        if codomain_dim == 0 {
            return Err(Error::BadParams("codomain dimension must be >= 1".into()));
        }
        for (gamma, coeff) in &entries {
            if coeff.len() != codomain_dim {
                return Err(Error::BadParams(format!(
                    "coefficient for {gamma} has length {}, expected {codomain_dim}",
                    coeff.len()
                )));
            }
            if coeff.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteValue(format!("coefficient for {gamma}")));
            }
        }
        entries.sort_by(|a, b| a.0.graded_lex_cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::BadParams(format!(
                    "duplicate index {} in expansion",
                    w[0].0
                )));
            }
        }
        Ok(PcExpansion {
            spectrum,
            codomain_dim,
            coeffs: entries,
        })
    }

    pub fn empty(spectrum: Arc<Spectrum>, codomain_dim: usize) -> Result<Self> {
        PcExpansion::new(spectrum, codomain_dim, Vec::new())
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    /// Entries in graded-lex order.
    pub fn coefficients(&self) -> &[(MultiIndex, Vec<f64>)] {
        &self.coeffs
    }

    pub fn coefficient(&self, gamma: &MultiIndex) -> Option<&[f64]> {
        self.coeffs
            .iter()
            .find(|(g, _)| g == gamma)
            .map(|(_, c)| c.as_slice())
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest coordinate any entry touches.
    pub fn max_dim(&self) -> usize {
        self.coeffs
            .iter()
            .map(|(g, _)| g.max_support())
            .max()
            .unwrap_or(0)
    }

    /// Per-coordinate maximal degree, indexed from coordinate 1.
    pub fn degree_per_dim(&self) -> Vec<u32> {
        let dim = self.max_dim();
        let mut deg = vec![0u32; dim];
        for (g, _) in &self.coeffs {
            for &(i, v) in g.pairs() {
                deg[i - 1] = deg[i - 1].max(v);
            }
        }
        deg
    }

    /// Squared chaos norm `sum_gamma |Y_gamma|^2` (Parseval).
    pub fn l2_norm_squared(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(_, c)| c.iter().map(|x| x * x).sum::<f64>())
            .sum()
    }

    /// Pointwise evaluation on PCA coordinates.
    pub fn evaluate(&self, coords: &[f64]) -> Result<Vec<f64>> {
        let dim = self.max_dim();
        if coords.len() < dim {
            return Err(Error::DimensionMismatch {
                needed: dim,
                got: coords.len(),
            });
        }
        // One Hermite table per coordinate up to its maximal degree.
        let degs = self.degree_per_dim();
        let mut tables = Vec::with_capacity(dim);
        for i in 0..dim {
            let t = coords[i] / self.spectrum.eigenvalue(i + 1)?.sqrt();
            tables.push(hermite_eval_upto(degs[i] as usize, t));
        }
        let mut out = vec![0.0; self.codomain_dim];
        for (g, c) in &self.coeffs {
            let mut h = 1.0;
            for &(i, v) in g.pairs() {
                h *= tables[i - 1][v as usize];
            }
            for (o, &y) in out.iter_mut().zip(c.iter()) {
                *o += h * y;
            }
        }
        Ok(out)
    }

    /// Scaled copy `c * F`.
    pub fn scaled(&self, c: f64) -> PcExpansion {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, y)| (g.clone(), y.iter().map(|v| c * v).collect()))
            .collect();
        PcExpansion {
            spectrum: self.spectrum.clone(),
            codomain_dim: self.codomain_dim,
            coeffs,
        }
    }
}

/// Sobolev norm `sqrt(sum_gamma u_gamma^-2 |Y_gamma|^2)` of a finite
/// expansion.
pub fn sobolev_norm(e: &PcExpansion) -> Result<f64> {
    let mut total = 0.0;
    for (g, c) in e.coefficients() {
        let u = sobolev_weight(g, e.spectrum())?;
        let norm2: f64 = c.iter().map(|x| x * x).sum();
        total += norm2 / (u * u);
    }
    Ok(total.sqrt())
}

/// Tags for the built-in operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    FinitePc,
    NormFunctional,
    CappedHermiteCombo,
    Custom,
}

type EvalFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

struct CappedCombo {
    spectrum: Arc<Spectrum>,
    terms: Vec<(MultiIndex, f64)>,
    cap: f64,
    direction: usize,
}

/// A black-box operator on truncated PCA coordinates with declared input
/// and codomain dimensions.
pub struct OperatorSpec {
    kind: OperatorKind,
    pub active_dim: usize,
    pub codomain_dim: usize,
    expansion: Option<PcExpansion>,
    capped: Option<CappedCombo>,
    custom: Option<EvalFn>,
}

impl std::fmt::Debug for OperatorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorSpec")
            .field("kind", &self.kind)
            .field("active_dim", &self.active_dim)
            .field("codomain_dim", &self.codomain_dim)
            .finish()
    }
}

impl OperatorSpec {
    /// Wrap a finite expansion as an operator; it evaluates exactly as the
    /// stored expansion.
    pub fn finite_pc(expansion: PcExpansion) -> OperatorSpec {
        OperatorSpec {
            kind: OperatorKind::FinitePc,
            active_dim: expansion.max_dim(),
            codomain_dim: expansion.codomain_dim(),
            expansion: Some(expansion),
            capped: None,
            custom: None,
        }
    }

    /// The norm functional `x -> sqrt(sum_{i <= D} x_i^2)`, a 1-Lipschitz
    /// unbounded scalar operator.
    pub fn norm_functional(active_dim: usize) -> OperatorSpec {
        OperatorSpec {
            kind: OperatorKind::NormFunctional,
            active_dim,
            codomain_dim: 1,
            expansion: None,
            capped: None,
            custom: None,
        }
    }

    /// A linear combination of capped scaled Hermite polynomials sent
    /// along one codomain direction: Lipschitz for every finite cap.
    pub fn capped_hermite_combo(
        spectrum: Arc<Spectrum>,
        terms: Vec<(MultiIndex, f64)>,
        cap: f64,
        direction: usize,
        codomain_dim: usize,
    ) -> Result<OperatorSpec> {
        if !(cap > 0.0) {
            return Err(Error::BadParams(format!("cap must be > 0, got {cap}")));
        }
        if direction >= codomain_dim {
            return Err(Error::BadParams(format!(
                "direction {direction} outside codomain of dimension {codomain_dim}"
            )));
        }
        if terms.iter().any(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFiniteValue(
                "capped combination coefficient".into(),
            ));
        }
        let active_dim = terms
            .iter()
            .map(|(g, _)| g.max_support())
            .max()
            .unwrap_or(0);
        Ok(OperatorSpec {
            kind: OperatorKind::CappedHermiteCombo,
            active_dim,
            codomain_dim,
            expansion: None,
            capped: Some(CappedCombo {
                spectrum,
                terms,
                cap,
                direction,
            }),
            custom: None,
        })
    }

    /// Arbitrary deterministic evaluation map.
    pub fn custom<F>(f: F, active_dim: usize, codomain_dim: usize) -> OperatorSpec
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        OperatorSpec {
            kind: OperatorKind::Custom,
            active_dim,
            codomain_dim,
            expansion: None,
            capped: None,
            custom: Some(Box::new(f)),
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// The stored expansion, for `FinitePc` operators.
    pub fn expansion(&self) -> Option<&PcExpansion> {
        self.expansion.as_ref()
    }

    /// Evaluate on PCA coordinates (length at least `active_dim`).
    pub fn evaluate(&self, coords: &[f64]) -> Result<Vec<f64>> {
        if coords.len() < self.active_dim {
            return Err(Error::DimensionMismatch {
                needed: self.active_dim,
                got: coords.len(),
            });
        }
        match self.kind {
            OperatorKind::FinitePc => self.expansion.as_ref().unwrap().evaluate(coords),
            OperatorKind::NormFunctional => {
                let norm2: f64 = coords[..self.active_dim].iter().map(|x| x * x).sum();
                Ok(vec![norm2.sqrt()])
            }
            OperatorKind::CappedHermiteCombo => {
                let combo = self.capped.as_ref().unwrap();
                let mut value = 0.0;
                for (g, c) in &combo.terms {
                    let mut prod = 1.0;
                    for &(i, v) in g.pairs() {
                        let t = coords[i - 1] / combo.spectrum.eigenvalue(i)?.sqrt();
                        prod *= capped_hermite_eval(v as usize, combo.cap, t);
                    }
                    value += c * prod;
                }
                let mut out = vec![0.0; self.codomain_dim];
                out[combo.direction] = value;
                Ok(out)
            }
            OperatorKind::Custom => Ok((self.custom.as_ref().unwrap())(coords)),
        }
    }

    /// Per-dimension polynomial degree when declared (finite expansions).
    fn declared_degree(&self) -> Option<Vec<u32>> {
        self.expansion.as_ref().map(|e| {
            let mut d = e.degree_per_dim();
            d.resize(self.active_dim.max(d.len()), 0);
            d
        })
    }
}

/// Built-in operator selector for [`builtin_operator`].
#[derive(Debug, Clone)]
pub enum BuiltinOperator {
    NormFunctional {
        active_dim: usize,
    },
    CappedHermiteCombo {
        terms: Vec<(MultiIndex, f64)>,
        cap: f64,
        direction: usize,
        codomain_dim: usize,
    },
}

/// Construct one of the built-in Lipschitz test operators.
pub fn builtin_operator(kind: BuiltinOperator, s: &Arc<Spectrum>) -> Result<OperatorSpec> {
    match kind {
        BuiltinOperator::NormFunctional { active_dim } => {
            Ok(OperatorSpec::norm_functional(active_dim))
        }
        BuiltinOperator::CappedHermiteCombo {
            terms,
            cap,
            direction,
            codomain_dim,
        } => OperatorSpec::capped_hermite_combo(s.clone(), terms, cap, direction, codomain_dim),
    }
}

/// One draw of the truncated Gaussian measure on `dim` PCA coordinates.
///
/// Counter-based determinism: the draw is a pure function of `(seed,
/// sample_index)`, independent of any other draws.
pub fn gaussian_sample(s: &Spectrum, dim: usize, seed: u64, sample_index: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    let mut out = Vec::with_capacity(dim);
    for i in 1..=dim {
        let z: f64 = rng.sample(StandardNormal);
        out.push(z * s.eigenvalue(i)?.sqrt());
    }
    Ok(out)
}

/// How chaos coefficients are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimationMethod {
    /// Tensor Gauss-Hermite over the operator's active dimensions; exact
    /// when the integrand's per-dimension degree is at most `2n - 1`.
    TensorQuadrature {
        nodes_per_dim: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

/// A coefficient estimate with a 95% half-width per component (zero for
/// quadrature).
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientEstimate {
    pub value: Vec<f64>,
    pub half_width_95: Vec<f64>,
    pub samples_used: usize,
}

/// Estimate `Y_gamma = E[F(X) H_gamma(X)]` for one multi-index.
pub fn estimate_coefficient(
    f: &OperatorSpec,
    gamma: &MultiIndex,
    s: &Arc<Spectrum>,
    method: &EstimationMethod,
) -> Result<CoefficientEstimate> {
    let mut all = estimate_many(f, std::slice::from_ref(gamma), s, method)?;
    Ok(all.pop().unwrap())
}

/// Orthogonal projection of `F` onto the span of the chaos polynomials
/// indexed by `set`: the expansion with estimated coefficients.
pub fn project(
    f: &OperatorSpec,
    set: &[MultiIndex],
    s: &Arc<Spectrum>,
    method: &EstimationMethod,
) -> Result<PcExpansion> {
    let estimates = estimate_many(f, set, s, method)?;
    let entries = set
        .iter()
        .cloned()
        .zip(estimates.into_iter().map(|e| e.value))
        .collect();
    PcExpansion::new(s.clone(), f.codomain_dim, entries)
}

/// Shared estimation core: evaluates `F` once per node or sample and
/// accumulates every requested coefficient from those values.
fn estimate_many(
    f: &OperatorSpec,
    set: &[MultiIndex],
    s: &Arc<Spectrum>,
    method: &EstimationMethod,
) -> Result<Vec<CoefficientEstimate>> {
    let dim = f.active_dim;
    for gamma in set {
        if gamma.max_support() > dim {
            return Err(Error::DimensionMismatch {
                needed: gamma.max_support(),
                got: dim,
            });
        }
    }
    match *method {
        EstimationMethod::TensorQuadrature { nodes_per_dim } => {
            quadrature_estimates(f, set, s, nodes_per_dim)
        }
        EstimationMethod::MonteCarlo { samples, seed } => {
            monte_carlo_estimates(f, set, s, samples, seed)
        }
    }
}

fn quadrature_estimates(
    f: &OperatorSpec,
    set: &[MultiIndex],
    s: &Arc<Spectrum>,
    nodes_per_dim: usize,
) -> Result<Vec<CoefficientEstimate>> {
    let dim = f.active_dim;
    let degrees = f.declared_degree().ok_or_else(|| {
        Error::QuadratureTooCoarse(
            "operator declares no polynomial degree; use Monte Carlo estimation".into(),
        )
    })?;
    let exact_through = 2 * nodes_per_dim - 1;
    for gamma in set {
        for i in 1..=dim {
            let need = degrees.get(i - 1).copied().unwrap_or(0) as usize + gamma.get(i) as usize;
            if need > exact_through {
                return Err(Error::QuadratureTooCoarse(format!(
                    "coordinate {i} carries degree {need}, but {nodes_per_dim} nodes are exact only through {exact_through}"
                )));
            }
        }
    }
    let grid_points = (nodes_per_dim as f64).powi(dim as i32);
    if grid_points > GRID_POINT_CAP as f64 {
        return Err(Error::ResourceLimit(format!(
            "tensor grid of {nodes_per_dim}^{dim} points exceeds {GRID_POINT_CAP}"
        )));
    }
    let rule = crate::hermite::gauss_hermite_rule(nodes_per_dim)?;

    // Scaled coordinates x_i = sqrt(lambda_i) t_i at each node.
    let mut sqrt_lambda = Vec::with_capacity(dim);
    for i in 1..=dim {
        sqrt_lambda.push(s.eigenvalue(i)?.sqrt());
    }
    let max_degree = set.iter().map(|g| g.total_degree()).max().unwrap_or(0) as usize;
    // Hermite values H_k(t_j) for every node and needed degree.
    let tables: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&t| hermite_eval_upto(max_degree, t))
        .collect();

    // Walk the tensor grid once, storing F values and per-point weights.
    let total = (0..dim).fold(1usize, |acc, _| acc * nodes_per_dim);
    let mut f_values: Vec<Vec<f64>> = Vec::with_capacity(total);
    let mut point_weights: Vec<f64> = Vec::with_capacity(total);
    let mut odometer = vec![0usize; dim];
    let mut coords = vec![0.0f64; dim];
    loop {
        let mut w = 1.0;
        for (i, &node_idx) in odometer.iter().enumerate() {
            coords[i] = sqrt_lambda[i] * rule.nodes[node_idx];
            w *= rule.weights[node_idx];
        }
        let value = f.evaluate(&coords)?;
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(format!(
                "operator value at quadrature node {odometer:?}"
            )));
        }
        f_values.push(value);
        point_weights.push(w);
        // Advance the odometer; dim = 0 means a single empty point.
        let mut pos = 0;
        loop {
            if pos == dim {
                break;
            }
            odometer[pos] += 1;
            if odometer[pos] < nodes_per_dim {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
        if pos == dim {
            break;
        }
    }

    let mut out = Vec::with_capacity(set.len());
    for gamma in set {
        let mut acc = vec![0.0f64; f.codomain_dim];
        let mut odometer = vec![0usize; dim];
        for (fv, &w) in f_values.iter().zip(point_weights.iter()) {
            let mut h = 1.0;
            for &(i, v) in gamma.pairs() {
                h *= tables[odometer[i - 1]][v as usize];
            }
            let wh = w * h;
            for (a, &y) in acc.iter_mut().zip(fv.iter()) {
                *a += wh * y;
            }
            let mut pos = 0;
            while pos < dim {
                odometer[pos] += 1;
                if odometer[pos] < nodes_per_dim {
                    break;
                }
                odometer[pos] = 0;
                pos += 1;
            }
        }
        out.push(CoefficientEstimate {
            half_width_95: vec![0.0; acc.len()],
            value: acc,
            samples_used: total,
        });
    }
    Ok(out)
}

fn monte_carlo_estimates(
    f: &OperatorSpec,
    set: &[MultiIndex],
    s: &Arc<Spectrum>,
    samples: usize,
    seed: u64,
) -> Result<Vec<CoefficientEstimate>> {
    if samples == 0 {
        return Err(Error::BadParams("sample count must be >= 1".into()));
    }
    let dim = f.active_dim;
    let k = f.codomain_dim;
    let mut sums = vec![vec![0.0f64; k]; set.len()];
    let mut sq_sums = vec![vec![0.0f64; k]; set.len()];
    for j in 0..samples {
        let coords = gaussian_sample(s, dim, seed, j as u64)?;
        let value = f.evaluate(&coords)?;
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(format!(
                "operator value at sample {j}"
            )));
        }
        for (g_idx, gamma) in set.iter().enumerate() {
            let h = crate::hermite::hermite_scaled_eval(gamma, &coords, s)?;
            for (c, &y) in value.iter().enumerate() {
                let z = h * y;
                sums[g_idx][c] += z;
                sq_sums[g_idx][c] += z * z;
            }
        }
    }
    let n = samples as f64;
    Ok(set
        .iter()
        .enumerate()
        .map(|(g_idx, _)| {
            let value: Vec<f64> = sums[g_idx].iter().map(|&t| t / n).collect();
            let half_width_95 = sums[g_idx]
                .iter()
                .zip(&sq_sums[g_idx])
                .map(|(&t, &t2)| {
                    let mean = t / n;
                    let var = (t2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
                    1.96 * (var / n).sqrt()
                })
                .collect();
            CoefficientEstimate {
                value,
                half_width_95,
                samples_used: samples,
            }
        })
        .collect())
}

/// Tag recording how an error estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum ErrorMethod {
    MonteCarlo { seed: u64 },
    TensorQuadrature { nodes_per_dim: usize },
}

/// Squared-error estimate with a normal-approximation confidence
/// half-width (zero for exact/quadrature paths).
#[derive(Debug, Clone, Serialize)]
pub struct ErrorEstimate {
    pub mean_square: f64,
    pub half_width_95: f64,
    pub samples_used: usize,
    #[serde(flatten)]
    pub method: ErrorMethod,
}

/// Monte Carlo L2 error together with the exact Parseval route when the
/// operator is itself a finite expansion.
#[derive(Debug, Clone, Serialize)]
pub struct L2ErrorReport {
    pub estimate: ErrorEstimate,
    pub exact_mean_square: Option<f64>,
}

/// Estimate `E |F(X) - G(X)|^2` by Monte Carlo; for finite-expansion
/// operators the coefficientwise tail sum is returned alongside.
pub fn l2_error(
    f: &OperatorSpec,
    g: &PcExpansion,
    s: &Arc<Spectrum>,
    mc_samples: usize,
    seed: u64,
) -> Result<L2ErrorReport> {
    if mc_samples < 100 {
        return Err(Error::BadParams(format!(
            "need at least 100 Monte Carlo samples, got {mc_samples}"
        )));
    }
    if g.spectrum().as_ref() != s.as_ref() {
        return Err(Error::BadParams(
            "expansion spectrum differs from the sampling spectrum".into(),
        ));
    }
    let dim = f.active_dim.max(g.max_dim());
    let mut sum = 0.0f64;
    let mut sq_sum = 0.0f64;
    for j in 0..mc_samples {
        let coords = gaussian_sample(s, dim, seed, j as u64)?;
        let fv = f.evaluate(&coords)?;
        let gv = g.evaluate(&coords)?;
        if fv.len() != gv.len() {
            return Err(Error::DimensionMismatch {
                needed: fv.len(),
                got: gv.len(),
            });
        }
        let d2: f64 = fv
            .iter()
            .zip(gv.iter())
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum();
        if !d2.is_finite() {
            return Err(Error::NonFiniteValue(format!(
                "squared error at sample {j}"
            )));
        }
        sum += d2;
        sq_sum += d2 * d2;
    }
    let n = mc_samples as f64;
    let mean_square = sum / n;
    let var = (sq_sum / n - mean_square * mean_square).max(0.0) * n / (n - 1.0);
    let estimate = ErrorEstimate {
        mean_square,
        half_width_95: 1.96 * (var / n).sqrt(),
        samples_used: mc_samples,
        method: ErrorMethod::MonteCarlo { seed },
    };
    let exact_mean_square = match f.expansion() {
        Some(fe) if fe.spectrum().as_ref() == s.as_ref() => {
            Some(expansion_difference_norm_squared(fe, g))
        }
        _ => None,
    };
    Ok(L2ErrorReport {
        estimate,
        exact_mean_square,
    })
}

/// Exact `|F - G|^2` for two finite expansions over the same spectrum.
pub fn expansion_difference_norm_squared(f: &PcExpansion, g: &PcExpansion) -> f64 {
    let mut total = 0.0;
    let zero = vec![0.0; f.codomain_dim()];
    let mut seen: HashSet<&MultiIndex> = HashSet::new();
    for (gamma, fc) in f.coefficients() {
        seen.insert(gamma);
        let gc = g.coefficient(gamma).unwrap_or(&zero);
        total += fc
            .iter()
            .zip(gc.iter())
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<f64>();
    }
    for (gamma, gc) in g.coefficients() {
        if !seen.contains(gamma) {
            total += gc.iter().map(|x| x * x).sum::<f64>();
        }
    }
    total
}

/// Best `s`-term truncation error of a finite-expansion operator: keep the
/// `s` coefficients of largest norm (ties resolved toward larger Sobolev
/// weight, then the deterministic index order) and report the Parseval
/// tail of the rest. The infimum over arbitrary index sets is attained
/// inside the support, since indices outside it contribute nothing.
pub fn optimal_s_term_error(f: &OperatorSpec, s_count: usize) -> Result<f64> {
    let e = f
        .expansion()
        .ok_or_else(|| Error::BadParams("optimal s-term error needs a finite expansion".into()))?;
    let mut ranked: Vec<(f64, f64, &MultiIndex)> = Vec::with_capacity(e.support_len());
    for (gamma, c) in e.coefficients() {
        let norm2: f64 = c.iter().map(|x| x * x).sum();
        let cost = crate::index_sets::index_cost(gamma, e.spectrum())?;
        ranked.push((norm2, cost, gamma));
    }
    ranked.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| a.1.total_cmp(&b.1))
            .then_with(|| a.2.graded_lex_cmp(b.2))
    });
    let tail: f64 = ranked.iter().skip(s_count).map(|&(n2, _, _)| n2).sum();
    Ok(tail.sqrt())
}

/// Error of projecting a finite-expansion operator onto the head
/// `pi([s])` of the global rearrangement, via the exact Parseval tail.
pub fn rearrangement_projection_error(f: &OperatorSpec, s_count: usize) -> Result<f64> {
    let e = f
        .expansion()
        .ok_or_else(|| Error::BadParams("projection error needs a finite expansion".into()))?;
    let kept: HashSet<MultiIndex> = if s_count == 0 {
        HashSet::new()
    } else {
        enumerate_rearrangement(e.spectrum(), s_count)?
            .items
            .into_iter()
            .map(|it| it.index)
            .collect()
    };
    let mut tail = 0.0;
    for (gamma, c) in e.coefficients() {
        if !kept.contains(gamma) {
            tail += c.iter().map(|x| x * x).sum::<f64>();
        }
    }
    Ok(tail.sqrt())
}

/// Serialized form of an expansion:
/// `{spectrum_ref, entries: [{index, coeff}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PcExpansionConfig {
    pub spectrum_ref: SpectrumConfig,
    pub entries: Vec<PcEntryConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PcEntryConfig {
    pub index: MultiIndex,
    pub coeff: Vec<f64>,
}

impl PcExpansionConfig {
    pub fn from_expansion(e: &PcExpansion) -> Self {
        PcExpansionConfig {
            spectrum_ref: SpectrumConfig::from_spectrum(e.spectrum()),
            entries: e
                .coefficients()
                .iter()
                .map(|(g, c)| PcEntryConfig {
                    index: g.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<PcExpansion> {
        let spectrum = Arc::new(self.spectrum_ref.build()?);
        let codomain_dim = self
            .entries
            .first()
            .map(|e| e.coeff.len())
            .ok_or_else(|| Error::Parse("expansion needs at least one entry".into()))?;
        let entries = self
            .entries
            .iter()
            .map(|e| (e.index.clone(), e.coeff.clone()))
            .collect();
        PcExpansion::new(spectrum, codomain_dim, entries)
    }
}
