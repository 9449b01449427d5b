//! Sobolev weights, the certified nonincreasing rearrangement, and
//! anisotropic total-degree index sets.
//!
//! Multi-indices live on the lattice of finitely supported sequences of
//! nonnegative integers. Every index carries a cost
//! `t(gamma) = sum_i gamma_i / lambda_b_i` and a weight
//! `u_gamma = (1 + t(gamma))^(-1/2)`; enumerating indices by nonincreasing
//! weight is the same as enumerating them by nondecreasing cost.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{EffectiveDimension, Spectrum};

/// Hard limit on nodes popped by the best-first enumeration.
pub const ENUMERATION_NODE_CAP: usize = 10_000_000;

/// Default cap on index-set sizes admitted by [`td_index_set`].
pub const DEFAULT_SET_SIZE_CAP: usize = 10_000_000;

/// Costs within ~9e-13 relative are treated as tied. Implemented by
/// masking the low mantissa bits so that the grouping stays a total order.
const TIE_MASK: u64 = !0xFFFu64;

/// Quantized cost used for ordering and tie detection.
#[inline]
pub(crate) fn quantize_cost(cost: f64) -> u64 {
    debug_assert!(cost >= 0.0);
    cost.to_bits() & TIE_MASK
}

/// A finitely supported sequence of nonnegative integers, stored sparsely
/// as `(coordinate, value)` pairs with 1-based coordinates and values >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    entries: Vec<(usize, u32)>,
}

impl MultiIndex {
    /// The zero index (empty support).
    pub fn zero() -> Self {
        MultiIndex::default()
    }

    /// The unit index `e_i` (1-based).
    pub fn unit(i: usize) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        MultiIndex {
            entries: vec![(i, 1)],
        }
    }

    /// Build from sparse pairs; zero values are dropped, duplicates merged.
    pub fn from_pairs(pairs: &[(usize, u32)]) -> Result<Self> {
        let mut entries: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        let mut sorted: Vec<(usize, u32)> = pairs.to_vec();
        sorted.sort_by_key(|&(i, _)| i);
        for (i, v) in sorted {
            if i == 0 {
                return Err(Error::BadParams(
                    "multi-index coordinates are 1-based".into(),
                ));
            }
            if v == 0 {
                continue;
            }
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => entries.push((i, v)),
            }
        }
        Ok(MultiIndex { entries })
    }

    /// Build from a dense vector (`v[0]` is coordinate 1).
    pub fn from_dense(values: &[u32]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v > 0)
            .map(|(i, &v)| (i + 1, v))
            .collect();
        MultiIndex { entries }
    }

    /// Dense expansion of the first `dim` coordinates.
    pub fn to_dense(&self, dim: usize) -> Vec<u32> {
        let mut out = vec![0u32; dim];
        for &(i, v) in &self.entries {
            if i <= dim {
                out[i - 1] = v;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at coordinate `i` (1-based), zero when unsupported.
    pub fn get(&self, i: usize) -> u32 {
        self.entries
            .binary_search_by_key(&i, |&(j, _)| j)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0)
    }

    /// Sparse `(coordinate, value)` pairs in increasing coordinate order.
    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.entries
    }

    /// Sum of all entries.
    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|&(_, v)| v).sum()
    }

    /// Largest supported coordinate, 0 for the zero index.
    pub fn max_support(&self) -> usize {
        self.entries.last().map(|&(i, _)| i).unwrap_or(0)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// `self + e_j`.
    pub fn plus_unit(&self, j: usize) -> Self {
        let mut entries = self.entries.clone();
        match entries.binary_search_by_key(&j, |&(i, _)| i) {
            Ok(pos) => entries[pos].1 += 1,
            Err(pos) => entries.insert(pos, (j, 1)),
        }
        MultiIndex { entries }
    }

    /// `self - e_j`, or `None` when coordinate `j` is unsupported.
    pub fn minus_unit(&self, j: usize) -> Option<Self> {
        let pos = self.entries.binary_search_by_key(&j, |&(i, _)| i).ok()?;
        let mut entries = self.entries.clone();
        if entries[pos].1 == 1 {
            entries.remove(pos);
        } else {
            entries[pos].1 -= 1;
        }
        Some(MultiIndex { entries })
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.entries.iter().all(|&(i, v)| v <= other.get(i))
    }

    /// Deterministic tie order: total degree ascending, then entries
    /// compared coordinate by coordinate with the larger value at the
    /// first differing coordinate sorting earlier (so `e_1` precedes `e_2`).
    pub fn graded_lex_cmp(&self, other: &MultiIndex) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let mut a = self.entries.iter().peekable();
                let mut b = other.entries.iter().peekable();
                loop {
                    match (a.peek(), b.peek()) {
                        (None, None) => return Ordering::Equal,
                        (Some(&&(ia, va)), Some(&&(ib, vb))) => match ia.cmp(&ib) {
                            // The side whose next entry sits at the earlier
                            // coordinate is positive where the other is zero.
                            Ordering::Less => return Ordering::Less,
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Equal => {
                                if va != vb {
                                    return vb.cmp(&va); // larger entry first
                                }
                                a.next();
                                b.next();
                            }
                        },
                        (Some(_), None) => return Ordering::Less,
                        (None, Some(_)) => return Ordering::Greater,
                    }
                }
            })
    }

    /// Sparse display form `"i:v,j:v"`; empty string for the zero index.
    pub fn to_sparse_string(&self) -> String {
        self.entries
            .iter()
            .map(|&(i, v)| format!("{i}:{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the sparse display form.
    pub fn from_sparse_string(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(MultiIndex::zero());
        }
        let mut pairs = Vec::new();
        for part in text.split(',') {
            let (i, v) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad multi-index component `{part}`")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate `{i}`")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value `{v}`")))?;
            pairs.push((i, v));
        }
        MultiIndex::from_pairs(&pairs)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sparse_string())
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_sparse_string())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        MultiIndex::from_sparse_string(&s).map_err(serde::de::Error::custom)
    }
}

/// Cost `t(gamma) = sum_i gamma_i / lambda_b_i`.
pub fn index_cost(gamma: &MultiIndex, s: &Spectrum) -> Result<f64> {
    let mut total = 0.0;
    for &(i, v) in gamma.pairs() {
        total += v as f64 / s.weighted_eigenvalue(i)?;
    }
    Ok(total)
}

/// Sobolev weight `u_gamma = (1 + t(gamma))^(-1/2)`, in (0, 1] with
/// `u_0 = 1`.
pub fn sobolev_weight(gamma: &MultiIndex, s: &Spectrum) -> Result<f64> {
    Ok(weight_from_cost(index_cost(gamma, s)?))
}

#[inline]
pub(crate) fn weight_from_cost(cost: f64) -> f64 {
    1.0 / (1.0 + cost).sqrt()
}

/// One entry of the rearrangement: index, cost, weight.
#[derive(Debug, Clone, Serialize)]
pub struct RearrangementItem {
    pub index: MultiIndex,
    pub cost: f64,
    pub weight: f64,
}

/// The first `k` indices of the nonincreasing rearrangement of the weights
/// `u_gamma`, together with a completeness certificate.
///
/// `certified = true` means the cheapest index touching any coordinate
/// beyond `dim_used` costs strictly more than the last listed item, so the
/// list provably equals the global head of the rearrangement.
#[derive(Debug, Clone, Serialize)]
pub struct RearrangementList {
    pub items: Vec<RearrangementItem>,
    pub certified: bool,
    pub dim_used: usize,
}

impl RearrangementList {
    /// Weight of the `r`-th item (1-based rank).
    pub fn weight(&self, r: usize) -> f64 {
        self.items[r - 1].weight
    }

    /// CSV with columns `rank,cost,weight,index`; the index column is the
    /// quoted sparse form, floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut text = String::from("rank,cost,weight,index\n");
        for (rank, item) in self.items.iter().enumerate() {
            text.push_str(&format!(
                "{},{:.16e},{:.16e},\"{}\"\n",
                rank + 1,
                item.cost,
                item.weight,
                item.index.to_sparse_string()
            ));
        }
        text
    }
}

struct HeapNode {
    qcost: u64,
    cost: f64,
    /// Cost of the node this one extends; siblings rebuild from it so
    /// lazy and eager generation produce bit-identical sums.
    parent_cost: f64,
    degree: u32,
    /// Coordinate whose increment created this node (0 for the root).
    branch: usize,
    index: MultiIndex,
}

impl PartialEq for HeapNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapNode {}

impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapNode {
    // Reversed so that BinaryHeap pops the smallest (cost, degree, lex).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .qcost
            .cmp(&self.qcost)
            .then_with(|| other.degree.cmp(&self.degree))
            .then_with(|| other.index.graded_lex_cmp(&self.index))
    }
}

/// Best-first enumeration over the lattice restricted to coordinates
/// `1..=window`. Canonical parenting (children only extend at or beyond
/// the maximal supported coordinate) visits each index exactly once, and
/// since the increments `1/lambda_b_j` are nondecreasing in `j`, a node's
/// children come cost-sorted by coordinate: popping one child schedules
/// just its first child and its next sibling, so the heap sees at most
/// two pushes per pop no matter how wide the window is.
fn enumerate_window(
    inv_lambda: &[f64],
    window: usize,
    k: usize,
    budget: &mut usize,
) -> Result<Vec<(MultiIndex, f64)>> {
    let mut heap: BinaryHeap<HeapNode> = BinaryHeap::new();
    heap.push(HeapNode {
        qcost: quantize_cost(0.0),
        cost: 0.0,
        parent_cost: 0.0,
        degree: 0,
        branch: 0,
        index: MultiIndex::zero(),
    });
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let node = match heap.pop() {
            Some(n) => n,
            None => break,
        };
        if *budget == 0 {
            return Err(Error::ResourceLimit(format!(
                "enumeration exceeded {ENUMERATION_NODE_CAP} popped nodes"
            )));
        }
        *budget -= 1;
        // First child: extend at this node's own branch coordinate.
        let child_branch = node.branch.max(1);
        if child_branch <= window {
            let cost = node.cost + inv_lambda[child_branch - 1];
            heap.push(HeapNode {
                qcost: quantize_cost(cost),
                cost,
                parent_cost: node.cost,
                degree: node.degree + 1,
                branch: child_branch,
                index: node.index.plus_unit(child_branch),
            });
        }
        // Next sibling: the parent's extension at the following coordinate.
        if node.branch >= 1 && node.branch < window {
            let sibling_branch = node.branch + 1;
            let cost = node.parent_cost + inv_lambda[sibling_branch - 1];
            let index = node
                .index
                .minus_unit(node.branch)
                .expect("branch coordinate is supported")
                .plus_unit(sibling_branch);
            heap.push(HeapNode {
                qcost: quantize_cost(cost),
                cost,
                parent_cost: node.parent_cost,
                degree: node.degree,
                branch: sibling_branch,
                index,
            });
        }
        out.push((node.index, node.cost));
    }
    Ok(out)
}

/// The `k` smallest-cost multi-indices under `t(gamma)`, ties broken by
/// total degree then lexicographically.
///
/// The dimension window grows geometrically until the certificate holds:
/// the `k`-th cost is strictly below `1 / lambda_b[D+1]`, the cheapest
/// possible cost of an index touching coordinate `D + 1`. A window of
/// `k - 1` coordinates always contains the true head of the rearrangement
/// (a listed index using coordinate `j` forces `0, e_1, ..., e_{j-1}` to be
/// listed before it), so growth stops there; spectra whose weighted
/// eigenvalues do not decay enough come back with `certified = false`.
/// Explicit spectra are additionally windowed at `dim_cap`, with the
/// certificate bounding unseen continuations by `lambda_b[dim_cap]`.
pub fn enumerate_rearrangement(s: &Spectrum, k: usize) -> Result<RearrangementList> {
    if k == 0 {
        return Err(Error::BadParams("enumeration count k must be >= 1".into()));
    }
    let window_limit = match s.max_queryable() {
        Some(cap) => cap,
        None => k.saturating_sub(1).max(1),
    };
    let mut window = window_limit.clamp(1, 4);
    let mut budget = ENUMERATION_NODE_CAP;
    loop {
        let mut inv_lambda = Vec::with_capacity(window);
        for i in 1..=window {
            inv_lambda.push(1.0 / s.weighted_eigenvalue(i)?);
        }
        let raw = enumerate_window(&inv_lambda, window, k, &mut budget)?;
        let last_cost = raw.last().map(|&(_, c)| c).unwrap_or(0.0);

        // Cheapest conceivable cost of any index beyond the window. For
        // explicit spectra past their table this bounds every admissible
        // nonincreasing continuation.
        let beyond = match s.weighted_eigenvalue(window + 1) {
            Ok(lb) => 1.0 / lb,
            Err(_) => 1.0 / s.weighted_eigenvalue(s.dim_cap())?,
        };
        let certified = quantize_cost(last_cost) < quantize_cost(beyond);

        if certified || window >= window_limit {
            let items = raw
                .into_iter()
                .map(|(index, cost)| RearrangementItem {
                    weight: weight_from_cost(cost),
                    index,
                    cost,
                })
                .collect();
            return Ok(RearrangementList {
                items,
                certified,
                dim_used: window,
            });
        }
        window = (window * 2).min(window_limit);
    }
}

/// An anisotropic total-degree index set `{nu : sum_i a_i nu_i <= 1}`,
/// with members sorted graded-lexicographically.
#[derive(Debug, Clone, Serialize)]
pub struct TdIndexSet {
    /// The weight vector `a` (nondecreasing).
    pub weights: Vec<f64>,
    pub members: Vec<MultiIndex>,
}

impl TdIndexSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, gamma: &MultiIndex) -> bool {
        self.members.iter().any(|m| m == gamma)
    }

    /// CSV with columns `rank,cost,weight,index`. With a spectrum the cost
    /// and weight are `t(gamma)` and `u_gamma`; without one the cost is
    /// the budget `sum_i a_i nu_i` and the weight column stays empty.
    pub fn to_csv(&self, spectrum: Option<&Spectrum>) -> Result<String> {
        let mut text = String::from("rank,cost,weight,index\n");
        for (rank, member) in self.members.iter().enumerate() {
            let (cost, weight) = match spectrum {
                Some(s) => {
                    let c = index_cost(member, s)?;
                    (c, format!("{:.16e}", weight_from_cost(c)))
                }
                None => {
                    let c: f64 = member
                        .pairs()
                        .iter()
                        .map(|&(i, v)| v as f64 * self.weights[i - 1])
                        .sum();
                    (c, String::new())
                }
            };
            text.push_str(&format!(
                "{},{cost:.16e},{weight},\"{}\"\n",
                rank + 1,
                member.to_sparse_string()
            ));
        }
        Ok(text)
    }
}

/// Lower and upper size bounds `(prod 1/(a_i i), prod (1/(a_i i) + 1))`
/// for the set defined by a nondecreasing positive weight vector.
pub fn td_size_bounds(a: &[f64]) -> Result<(f64, f64)> {
    validate_td_weights(a)?;
    let mut lower = 1.0;
    let mut upper = 1.0;
    for (pos, &ai) in a.iter().enumerate() {
        let x = 1.0 / (ai * (pos + 1) as f64);
        lower *= x;
        upper *= x + 1.0;
    }
    Ok((lower, upper))
}

fn validate_td_weights(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::BadParams("weight vector must be nonempty".into()));
    }
    for (pos, &ai) in a.iter().enumerate() {
        if !(ai > 0.0) || !ai.is_finite() {
            return Err(Error::BadParams(format!(
                "TD weight a[{}] = {ai} must be positive and finite",
                pos + 1
            )));
        }
        if pos > 0 && ai < a[pos - 1] {
            return Err(Error::BadParams(format!(
                "TD weights must be nondecreasing, a[{}] = {ai} < a[{}] = {}",
                pos + 1,
                pos,
                a[pos - 1]
            )));
        }
    }
    Ok(())
}

/// Budgeted depth-first enumeration shared by [`td_index_set`] and
/// [`s_epsilon_set`]: all `nu` with `sum_i increments[i] * nu_i <= budget`
/// under the quantized comparison.
fn enumerate_budget(increments: &[f64], budget: f64) -> Vec<MultiIndex> {
    let d = increments.len();
    let mut members = Vec::new();
    let mut dense = vec![0u32; d];
    fn recurse(
        increments: &[f64],
        budget: f64,
        coord: usize,
        spent: f64,
        dense: &mut Vec<u32>,
        members: &mut Vec<MultiIndex>,
    ) {
        if coord == increments.len() {
            members.push(MultiIndex::from_dense(dense));
            return;
        }
        let c = increments[coord];
        let mut v = 0u32;
        loop {
            let total = spent + v as f64 * c;
            if quantize_cost(total) > quantize_cost(budget) {
                break;
            }
            dense[coord] = v;
            recurse(increments, budget, coord + 1, total, dense, members);
            v += 1;
        }
        dense[coord] = 0;
    }
    recurse(increments, budget, 0, 0.0, &mut dense, &mut members);
    members.sort_by(|a, b| a.graded_lex_cmp(b));
    members
}

/// Full enumeration of the anisotropic TD index set for weight vector `a`,
/// guarded by the size cap applied to the closed-form upper bound.
pub fn td_index_set(a: &[f64]) -> Result<TdIndexSet> {
    td_index_set_with_cap(a, DEFAULT_SET_SIZE_CAP)
}

pub fn td_index_set_with_cap(a: &[f64], cap: usize) -> Result<TdIndexSet> {
    let (_, upper) = td_size_bounds(a)?;
    if upper > cap as f64 {
        return Err(Error::SetTooLarge { bound: upper, cap });
    }
    let members = enumerate_budget(a, 1.0);
    Ok(TdIndexSet {
        weights: a.to_vec(),
        members,
    })
}

/// The truncation set `S(eps) = {gamma : t(gamma) <= 1/eps^2}`, realized as
/// the TD set in `d(eps)` dimensions with weights `a_i = eps^2 / lambda_b_i`.
///
/// When even coordinate 1 is inactive (`lambda_b_1 < eps^2`), the budget
/// forbids any increment and the set degenerates to `{0}`; this extends the
/// effective dimension to behave like 0 while the stored weight vector
/// keeps the single entry `a_1 > 1`.
pub fn s_epsilon_set(s: &Spectrum, eps: f64) -> Result<TdIndexSet> {
    s_epsilon_set_with_cap(s, eps, DEFAULT_SET_SIZE_CAP)
}

pub fn s_epsilon_set_with_cap(s: &Spectrum, eps: f64, cap: usize) -> Result<TdIndexSet> {
    if !(eps > 0.0) {
        return Err(Error::BadParams(format!("eps must be > 0, got {eps}")));
    }
    let d = match s.effective_dimension(eps) {
        EffectiveDimension::Finite(d) => d,
        EffectiveDimension::AtLeast(n) => {
            return Err(Error::InfiniteEffectiveDimension(format!(
                "explicit table exhausted at {n} entries with lambda_b still >= eps^2"
            )))
        }
        EffectiveDimension::Infinite => {
            return Err(Error::InfiniteEffectiveDimension(
                "weighted eigenvalues never drop below eps^2".into(),
            ))
        }
    };
    let eps2 = eps * eps;
    let mut a = Vec::with_capacity(d);
    let mut increments = Vec::with_capacity(d);
    for i in 1..=d {
        let lb = s.weighted_eigenvalue(i)?;
        a.push(eps2 / lb);
        increments.push(1.0 / lb);
    }
    let (_, upper) = td_size_bounds(&a)?;
    if upper > cap as f64 {
        return Err(Error::SetTooLarge { bound: upper, cap });
    }
    // Membership is decided through the same cost form the rearrangement
    // uses, so prefixes agree with enumerate_rearrangement at ties.
    let members = enumerate_budget(&increments, 1.0 / eps2);
    Ok(TdIndexSet {
        weights: a,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{BWeights, SpectralFamily};

    fn explicit(lambda: &[f64]) -> Spectrum {
        Spectrum::new(
            SpectralFamily::Explicit(lambda.to_vec()),
            BWeights::Ones,
            lambda.len(),
        )
        .unwrap()
    }

    fn flat() -> Spectrum {
        Spectrum::new(
            SpectralFamily::Algebraic { alpha: 2.0 },
            BWeights::SqrtLambda,
            8,
        )
        .unwrap()
    }

    fn mi(pairs: &[(usize, u32)]) -> MultiIndex {
        MultiIndex::from_pairs(pairs).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)] // frozen expected value
    fn sobolev_weight_examples() {
        let s = explicit(&[1.0, 0.5]);
        assert_eq!(sobolev_weight(&MultiIndex::zero(), &s).unwrap(), 1.0);
        let u = sobolev_weight(&MultiIndex::unit(1), &s).unwrap();
        assert!((u - 0.70710678).abs() < 1e-8);
        let u = sobolev_weight(&mi(&[(1, 1), (2, 1)]), &s).unwrap();
        assert!((u - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sobolev_weight_out_of_range() {
        let s = explicit(&[1.0, 0.5]);
        assert!(matches!(
            sobolev_weight(&MultiIndex::unit(3), &s),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn graded_lex_order_is_deterministic() {
        let e1 = MultiIndex::unit(1);
        let e2 = MultiIndex::unit(2);
        assert_eq!(e1.graded_lex_cmp(&e2), Ordering::Less);
        let two_e1 = mi(&[(1, 2)]);
        let e1e2 = mi(&[(1, 1), (2, 1)]);
        assert_eq!(two_e1.graded_lex_cmp(&e1e2), Ordering::Less);
        assert_eq!(e2.graded_lex_cmp(&two_e1), Ordering::Less); // degree wins
        assert_eq!(e1.graded_lex_cmp(&e1), Ordering::Equal);
    }

    #[test]
    fn sparse_string_round_trip() {
        let g = mi(&[(1, 2), (7, 1)]);
        assert_eq!(g.to_sparse_string(), "1:2,7:1");
        assert_eq!(MultiIndex::from_sparse_string("1:2,7:1").unwrap(), g);
        assert_eq!(
            MultiIndex::from_sparse_string("").unwrap(),
            MultiIndex::zero()
        );
    }

    #[test]
    fn enumeration_matches_worked_example() {
        // lambda_b = (1, 1/2): order 0, e1, e2 (cost 2, degree 1), 2e1.
        let s = explicit(&[1.0, 0.5]);
        let list = enumerate_rearrangement(&s, 4).unwrap();
        let idx: Vec<String> = list
            .items
            .iter()
            .map(|it| it.index.to_sparse_string())
            .collect();
        assert_eq!(idx, vec!["", "1:1", "2:1", "1:2"]);
        let weights: Vec<f64> = list.items.iter().map(|it| it.weight).collect();
        let expect = [
            1.0,
            0.7071067811865475,
            0.5773502691896258,
            0.5773502691896258,
        ];
        for (w, e) in weights.iter().zip(expect.iter()) {
            assert!((w - e).abs() < 1e-12);
        }
        let costs: Vec<f64> = list.items.iter().map(|it| it.cost).collect();
        assert_eq!(costs, vec![0.0, 1.0, 2.0, 2.0]);
    }

    #[test]
    fn constant_spectrum_is_uncertified() {
        let list = enumerate_rearrangement(&flat(), 3).unwrap();
        assert!(!list.certified);
        assert_eq!(list.items[0].weight, 1.0);
        assert!((list.items[1].weight - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((list.items[2].weight - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        // Ties at unit cost resolve to e1 then e2.
        assert_eq!(list.items[1].index, MultiIndex::unit(1));
        assert_eq!(list.items[2].index, MultiIndex::unit(2));
    }

    #[test]
    fn single_item_enumeration_is_the_zero_index() {
        let s = explicit(&[0.3]);
        let list = enumerate_rearrangement(&s, 1).unwrap();
        assert_eq!(list.items.len(), 1);
        assert!(list.items[0].index.is_zero());
        assert_eq!(list.items[0].weight, 1.0);
        assert!(list.certified);
    }

    #[test]
    fn decaying_spectrum_certifies() {
        let s = Spectrum::new(SpectralFamily::Algebraic { alpha: 2.0 }, BWeights::Ones, 4).unwrap();
        let list = enumerate_rearrangement(&s, 50).unwrap();
        assert!(list.certified);
        for w in list.items.windows(2) {
            assert!(w[0].weight >= w[1].weight - 1e-12);
            assert!(w[0].cost <= w[1].cost + 1e-12 * w[1].cost.max(1.0));
        }
    }

    #[test]
    fn enumerated_prefixes_are_downward_closed() {
        let s = Spectrum::new(
            SpectralFamily::Exponential {
                alpha: 1.0,
                beta: 1.0,
            },
            BWeights::Ones,
            8,
        )
        .unwrap();
        let list = enumerate_rearrangement(&s, 200).unwrap();
        let mut seen: std::collections::HashSet<MultiIndex> = std::collections::HashSet::new();
        for item in &list.items {
            for &(j, _) in item.index.pairs() {
                let parent = item.index.minus_unit(j).unwrap();
                assert!(
                    seen.contains(&parent),
                    "parent {parent} of {} not listed earlier",
                    item.index
                );
            }
            seen.insert(item.index.clone());
        }
    }

    #[test]
    fn td_set_examples() {
        let set = td_index_set(&[0.5]).unwrap();
        assert_eq!(set.len(), 3);
        let dense: Vec<Vec<u32>> = set.members.iter().map(|m| m.to_dense(1)).collect();
        assert_eq!(dense, vec![vec![0], vec![1], vec![2]]);

        let set = td_index_set(&[0.5, 1.0]).unwrap();
        assert_eq!(set.len(), 4);
        let dense: Vec<Vec<u32>> = set.members.iter().map(|m| m.to_dense(2)).collect();
        assert_eq!(dense, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]]);

        let set = td_index_set(&[2.0]).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.members[0].is_zero());
    }

    #[test]
    fn td_sets_are_downward_closed() {
        let set = td_index_set(&[0.21, 0.33, 0.9]).unwrap();
        for m in &set.members {
            for &(j, _) in m.pairs() {
                let parent = m.minus_unit(j).unwrap();
                assert!(set.contains(&parent));
            }
        }
    }

    #[test]
    fn td_size_bound_examples() {
        let (lo, hi) = td_size_bounds(&[0.5, 1.0]).unwrap();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 4.5).abs() < 1e-15);
        assert_eq!(td_index_set(&[0.5, 1.0]).unwrap().len(), 4);

        let (lo, hi) = td_size_bounds(&[1.0]).unwrap();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 2.0).abs() < 1e-15);
        assert_eq!(td_index_set(&[1.0]).unwrap().len(), 2);

        let (lo, hi) = td_size_bounds(&[2.0]).unwrap();
        assert!((lo - 0.5).abs() < 1e-15 && (hi - 1.5).abs() < 1e-15);
    }

    #[test]
    fn td_set_too_large_is_rejected() {
        let a = vec![1e-9, 1e-9];
        assert!(matches!(td_index_set(&a), Err(Error::SetTooLarge { .. })));
    }

    #[test]
    fn s_epsilon_examples() {
        let s = explicit(&[1.0, 0.5]);
        let set = s_epsilon_set(&s, 1.0).unwrap();
        assert_eq!(set.weights.len(), 1); // d(1) = 1
        assert_eq!(set.len(), 2);
        assert!(set.members[0].is_zero());
        assert_eq!(set.members[1], MultiIndex::unit(1));

        // eps so large that even coordinate 1 is inactive.
        let set = s_epsilon_set(&s, 1.5).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.members[0].is_zero());

        assert!(matches!(
            s_epsilon_set(&flat(), 0.5),
            Err(Error::InfiniteEffectiveDimension(_))
        ));
    }

    #[test]
    fn csv_exports() {
        let s = explicit(&[1.0, 0.5]);
        let list = enumerate_rearrangement(&s, 3).unwrap();
        let csv = list.to_csv();
        assert!(csv.starts_with("rank,cost,weight,index\n"));
        assert!(csv.contains("\"1:1\""));
        assert_eq!(csv.lines().count(), 4);

        let set = s_epsilon_set(&s, 1.0).unwrap();
        let with_spectrum = set.to_csv(Some(&s)).unwrap();
        assert!(with_spectrum
            .lines()
            .nth(1)
            .unwrap()
            .contains("1.0000000000000000e0"));
        let without = set.to_csv(None).unwrap();
        assert!(without.lines().nth(1).unwrap().contains(",,"));
    }

    #[test]
    fn u_weights_monotone_under_index_growth() {
        let s = explicit(&[1.0, 0.7, 0.2]);
        let g = mi(&[(1, 1), (3, 2)]);
        let bigger = g.plus_unit(2);
        assert!(sobolev_weight(&g, &s).unwrap() > sobolev_weight(&bigger, &s).unwrap());
        assert!(g.le(&bigger) && !bigger.le(&g));
    }
}
