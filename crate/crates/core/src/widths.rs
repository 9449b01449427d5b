//! Adaptive m-widths, decay bound curves, and the closed-form Kolmogorov
//! width of weighted p-balls.
//!
//! The central identity is that the best worst-case error from `m`
//! adaptive linear samples of the Sobolev unit (Lipschitz) ball equals the
//! `(m+1)`-th largest Sobolev weight `u_pi(m+1)`. The bound curves give
//! the impossibility floor `C s^(-1/(2p))` and the decay ceilings for
//! algebraic, exponential, and double-exponential spectra, together with a
//! verification harness that locates empirical thresholds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_sets::{enumerate_rearrangement, RearrangementList};
use crate::spectrum::Spectrum;

/// Value of the adaptive m-width together with the enumeration
/// certificate it inherits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdaptiveWidth {
    pub value: f64,
    pub certified: bool,
}

/// Adaptive m-width `Theta_m = u_pi(m+1)`.
pub fn adaptive_m_width(s: &Spectrum, m: usize) -> Result<AdaptiveWidth> {
    if m == 0 {
        return Err(Error::BadParams("sample count m must be >= 1".into()));
    }
    let list = enumerate_rearrangement(s, m + 1)?;
    Ok(AdaptiveWidth {
        value: list.weight(m + 1),
        certified: list.certified,
    })
}

/// Sampled width curve `m -> Theta_m`.
#[derive(Debug, Clone, Serialize)]
pub struct WidthCurve {
    pub m_values: Vec<usize>,
    pub theta: Vec<f64>,
    pub certified: bool,
}

impl WidthCurve {
    /// CSV with columns `m,theta,certified`.
    pub fn to_csv(&self) -> String {
        let mut text = String::from("m,theta,certified\n");
        for (m, theta) in self.m_values.iter().zip(self.theta.iter()) {
            text.push_str(&format!("{m},{theta:.16e},{}\n", self.certified));
        }
        text
    }
}

/// Evaluate the width at every requested `m` with a single enumeration up
/// to `max(m) + 1`.
pub fn width_curve(s: &Spectrum, m_values: &[usize]) -> Result<WidthCurve> {
    let max_m = *m_values
        .iter()
        .max()
        .ok_or_else(|| Error::BadParams("m grid must be nonempty".into()))?;
    if m_values.contains(&0) {
        return Err(Error::BadParams("sample counts must be >= 1".into()));
    }
    let list = enumerate_rearrangement(s, max_m + 1)?;
    let theta = m_values.iter().map(|&m| list.weight(m + 1)).collect();
    Ok(WidthCurve {
        m_values: m_values.to_vec(),
        theta,
        certified: list.certified,
    })
}

/// The bound families: one impossibility lower bound, three decay upper
/// bounds matched to the spectral families, and the sharp exponential
/// lower companion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundKind {
    /// `C s^(-1/(2p))` with `C = (1/2) (prod_{i<=p} lambda_b_i / i)^(1/(2p))`.
    ImpossibilityLower { p: u32, constant: f64 },
    /// `eta log(s)^(-1/(2(1/alpha + delta)))` for `lambda_b_i = i^-alpha`.
    UpperAlgebraic { alpha: f64, delta: f64, eta: f64 },
    /// `exp(-(1/2) alpha^(1/(beta+1)) ((beta+1)/(beta+delta))^(1/(1+1/beta))
    ///  log(s)^(1/(1+1/beta)))` for `lambda_b_i = exp(-alpha i^beta)`.
    UpperExponential { alpha: f64, beta: f64, delta: f64 },
    /// `exp(-eta log(s)^(1/(1+delta)))` for `lambda_b_i = exp(-exp(alpha i))`;
    /// `alpha` only identifies the spectrum, the bound uses `eta` and `delta`.
    UpperDoubleExponential { alpha: f64, delta: f64, eta: f64 },
    /// `prefactor * exp(-(1/2) alpha^(1/(beta+1))
    ///  ((beta+1)/(beta-delta))^(1/(1+1/beta)) log(s+1)^(1/(1+1/beta)))`,
    /// the matching lower envelope in the exponential regime.
    SharpExponentialLower {
        alpha: f64,
        beta: f64,
        delta: f64,
        prefactor: f64,
    },
}

impl BoundKind {
    /// Whether the curve bounds the widths from below (`u >= curve`) or
    /// from above (`u <= curve`).
    pub fn is_lower(&self) -> bool {
        matches!(
            self,
            BoundKind::ImpossibilityLower { .. } | BoundKind::SharpExponentialLower { .. }
        )
    }

    /// Smallest argument at which the curve is defined.
    pub fn min_s(&self) -> u64 {
        match self {
            BoundKind::ImpossibilityLower { .. } | BoundKind::SharpExponentialLower { .. } => 1,
            _ => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::BadParams(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match *self {
            BoundKind::ImpossibilityLower { p, constant } => {
                if p == 0 {
                    return Err(Error::BadParams("p must be >= 1".into()));
                }
                if !(constant >= 0.0) {
                    return Err(Error::BadParams(format!("bad constant {constant}")));
                }
            }
            BoundKind::UpperAlgebraic { alpha, delta, eta } => {
                positive("alpha", alpha)?;
                positive("delta", delta)?;
                positive("eta", eta)?;
            }
            BoundKind::UpperExponential { alpha, beta, delta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
                positive("delta", delta)?;
            }
            BoundKind::UpperDoubleExponential { alpha, delta, eta } => {
                positive("alpha", alpha)?;
                positive("delta", delta)?;
                positive("eta", eta)?;
            }
            BoundKind::SharpExponentialLower {
                alpha,
                beta,
                delta,
                prefactor,
            } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
                positive("prefactor", prefactor)?;
                if !(delta > 0.0 && delta < beta) {
                    return Err(Error::BadParams(format!(
                        "sharp exponential bound needs 0 < delta < beta, got delta = {delta}, beta = {beta}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pointwise value at real argument `s`.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        self.validate()?;
        if s < self.min_s() as f64 {
            return Err(Error::BadParams(format!(
                "curve defined for s >= {}, got {s}",
                self.min_s()
            )));
        }
        Ok(match *self {
            BoundKind::ImpossibilityLower { p, constant } => {
                constant * s.powf(-1.0 / (2.0 * p as f64))
            }
            BoundKind::UpperAlgebraic { alpha, delta, eta } => {
                eta * s.ln().powf(-1.0 / (2.0 * (1.0 / alpha + delta)))
            }
            BoundKind::UpperExponential { alpha, beta, delta } => {
                let inner = ((beta + 1.0) / (beta + delta)).powf(1.0 / (1.0 + 1.0 / beta));
                let exponent = 0.5
                    * alpha.powf(1.0 / (beta + 1.0))
                    * inner
                    * s.ln().powf(1.0 / (1.0 + 1.0 / beta));
                (-exponent).exp()
            }
            BoundKind::UpperDoubleExponential { delta, eta, .. } => {
                (-eta * s.ln().powf(1.0 / (1.0 + delta))).exp()
            }
            BoundKind::SharpExponentialLower {
                alpha,
                beta,
                delta,
                prefactor,
            } => {
                let inner = ((beta + 1.0) / (beta - delta)).powf(1.0 / (1.0 + 1.0 / beta));
                let exponent = 0.5
                    * alpha.powf(1.0 / (beta + 1.0))
                    * inner
                    * (s + 1.0).ln().powf(1.0 / (1.0 + 1.0 / beta));
                prefactor * (-exponent).exp()
            }
        })
    }
}

/// A bound curve sampled on an integer grid. `s_bar` is the empirically
/// located threshold from which the bound holds, when known.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub s_values: Vec<u64>,
    pub values: Vec<f64>,
    pub s_bar: Option<u64>,
}

impl BoundCurve {
    /// CSV with columns `s,value`.
    pub fn to_csv(&self) -> String {
        let mut text = String::from("s,value\n");
        for (s, v) in self.s_values.iter().zip(self.values.iter()) {
            text.push_str(&format!("{s},{v:.16e}\n"));
        }
        text
    }
}

/// The constant `C = (1/2) (prod_{i=1}^p lambda_b_i / i)^(1/(2p))` of the
/// impossibility bound, computed in log space.
pub fn lower_bound_constant(s: &Spectrum, p: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::BadParams("p must be >= 1".into()));
    }
    let mut log_prod = 0.0f64;
    for i in 1..=(p as usize) {
        log_prod += s.weighted_eigenvalue(i)?.ln() - (i as f64).ln();
    }
    Ok(0.5 * (log_prod / (2.0 * p as f64)).exp())
}

/// Impossibility curve `C s^(-1/(2p))` on the given grid, with the
/// threshold located against the enumerated widths: the smallest grid `s`
/// from which `u_pi(s+1)` dominates the curve for the rest of the grid.
pub fn lower_bound_curve(s: &Spectrum, p: u32, s_values: &[u64]) -> Result<BoundCurve> {
    let max_s = *s_values
        .iter()
        .max()
        .ok_or_else(|| Error::BadParams("s grid must be nonempty".into()))?
        as usize;
    let list = enumerate_rearrangement(s, max_s + 1)?;
    lower_bound_curve_from_weights(s, p, s_values, &list)
}

/// Same as [`lower_bound_curve`] but reusing an existing enumeration,
/// which must reach one past the largest grid point.
pub fn lower_bound_curve_from_weights(
    s: &Spectrum,
    p: u32,
    s_values: &[u64],
    list: &RearrangementList,
) -> Result<BoundCurve> {
    let need = s_values.iter().max().map(|&m| m as usize + 1).unwrap_or(0);
    if list.items.len() < need {
        return Err(Error::BadParams(format!(
            "enumeration holds {} items but the grid needs {need}",
            list.items.len()
        )));
    }
    let constant = lower_bound_constant(s, p)?;
    let kind = BoundKind::ImpossibilityLower { p, constant };
    let mut values = Vec::with_capacity(s_values.len());
    for &sv in s_values {
        values.push(kind.evaluate(sv as f64)?);
    }
    let mut s_bar = None;
    for (&sv, &cv) in s_values.iter().zip(values.iter()).rev() {
        if list.weight(sv as usize + 1) >= cv {
            s_bar = Some(sv);
        } else {
            break;
        }
    }
    Ok(BoundCurve {
        kind,
        s_values: s_values.to_vec(),
        values,
        s_bar,
    })
}

/// Pointwise evaluation of an upper decay curve on a grid; the threshold
/// is left unknown for the verifier to locate.
pub fn upper_bound_curve(kind: BoundKind, s_values: &[u64]) -> Result<BoundCurve> {
    if kind.is_lower() {
        return Err(Error::BadParams(
            "upper_bound_curve expects an upper bound kind".into(),
        ));
    }
    let mut values = Vec::with_capacity(s_values.len());
    for &sv in s_values {
        values.push(kind.evaluate(sv as f64)?);
    }
    Ok(BoundCurve {
        kind,
        s_values: s_values.to_vec(),
        values,
        s_bar: None,
    })
}

/// The sharp lower companion of the exponential decay regime at real
/// argument `s`, with an explicit prefactor standing in for the hidden
/// constant.
pub fn sharp_exponential_lower(
    alpha: f64,
    beta: f64,
    delta: f64,
    prefactor: f64,
    s: f64,
) -> Result<f64> {
    BoundKind::SharpExponentialLower {
        alpha,
        beta,
        delta,
        prefactor,
    }
    .evaluate(s)
}

/// Kolmogorov width of the weighted p-ball in the q-norm on `N`
/// coordinates from `m`-dimensional subspaces:
/// the maximizing subset in the closed form is the `N - m` smallest
/// weights, so the width reduces to the tail sum
/// `(sum of the N-m smallest w_j^e)^(1/e)` with `e = pq/(p-q)`
/// (`e = q` in the limit `p = infinity`).
pub fn stesin_width(w: &[f64], p: f64, q: f64, m: usize) -> Result<f64> {
    if !(q >= 1.0) || !(q < p) {
        return Err(Error::BadExponents { p, q });
    }
    if m >= w.len() {
        return Err(Error::BadParams(format!(
            "need m < N, got m = {m}, N = {}",
            w.len()
        )));
    }
    for &x in w {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::BadParams(format!(
                "weights must be positive, got {x}"
            )));
        }
    }
    let e = if p.is_infinite() { q } else { p * q / (p - q) };
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let tail: f64 = sorted[..w.len() - m].iter().map(|&x| x.powf(e)).sum();
    Ok(tail.powf(1.0 / e))
}

/// Verification outcome for one curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurveVerification {
    pub kind: BoundKind,
    /// Smallest integer `s` from which the inequality holds through
    /// `k_max`; `None` when it fails even at `k_max`.
    pub holds_from: Option<u64>,
    /// Largest shortfall observed anywhere in the scanned range.
    pub max_violation: f64,
    pub checked_through: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<CurveVerification>,
    pub certified: bool,
}

/// Check each curve against the enumerated widths at every integer
/// `s` in `[min_s, k_max]`.
pub fn verify_bounds(
    s: &Spectrum,
    kinds: &[BoundKind],
    k_max: usize,
) -> Result<VerificationReport> {
    if k_max < 2 {
        return Err(Error::BadParams("k_max must be >= 2".into()));
    }
    let list = enumerate_rearrangement(s, k_max + 1)?;
    let mut entries = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        kind.validate()?;
        let lower = kind.is_lower();
        let start = kind.min_s();
        // Reverse scan: holds_from tracks the maximal suffix streak, which
        // freezes at the first (largest) violated s.
        let mut holds_from = None;
        let mut streak_open = true;
        let mut max_violation = 0.0f64;
        for sv in (start..=k_max as u64).rev() {
            let curve = kind.evaluate(sv as f64)?;
            let u = list.weight(sv as usize + 1);
            let ok = if lower { u >= curve } else { u <= curve };
            if ok {
                if streak_open {
                    holds_from = Some(sv);
                }
            } else {
                streak_open = false;
                max_violation = max_violation.max(if lower { curve - u } else { u - curve });
            }
        }
        entries.push(CurveVerification {
            kind,
            holds_from,
            max_violation,
            checked_through: k_max as u64,
        });
    }
    Ok(VerificationReport {
        entries,
        certified: list.certified,
    })
}

/// Result of searching for a two-sided envelope in the exponential
/// regime.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub s_star: Option<u64>,
    pub prefactor: f64,
    pub checked_through: u64,
}

/// Locate `s*` such that for all `s` in `[s*, k_max]` the enumerated
/// width sits between the sharp lower curve (with some admissible
/// prefactor from the candidate list) and the exponential upper curve.
pub fn verify_exponential_sandwich(
    s: &Spectrum,
    alpha: f64,
    beta: f64,
    delta: f64,
    k_max: usize,
    prefactors: &[f64],
) -> Result<SandwichReport> {
    let list = enumerate_rearrangement(s, k_max + 1)?;
    let upper = BoundKind::UpperExponential { alpha, beta, delta };
    for &prefactor in prefactors {
        let lower = BoundKind::SharpExponentialLower {
            alpha,
            beta,
            delta,
            prefactor,
        };
        let mut s_star = None;
        for sv in (2..=k_max as u64).rev() {
            let u = list.weight(sv as usize + 1);
            let lo = lower.evaluate(sv as f64)?;
            let hi = upper.evaluate(sv as f64)?;
            if lo <= u && u <= hi {
                s_star = Some(sv);
            } else {
                break;
            }
        }
        if s_star.is_some() {
            return Ok(SandwichReport {
                s_star,
                prefactor,
                checked_through: k_max as u64,
            });
        }
    }
    Ok(SandwichReport {
        s_star: None,
        prefactor: f64::NAN,
        checked_through: k_max as u64,
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
            16,
        )
        .unwrap()
    }

    #[test]
    fn adaptive_width_examples() {
        let s = explicit(&[1.0, 0.5]);
        let w = adaptive_m_width(&s, 1).unwrap();
        assert!((w.value - 1.0 / 2f64.sqrt()).abs() < 1e-12);

        let w = adaptive_m_width(&flat(), 10).unwrap();
        assert!((w.value - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(!w.certified);

        // The zero index is the unique cost-0 element, so Theta_1 < 1.
        for lambda in [[1.0, 0.9], [0.4, 0.1]] {
            let s = explicit(&lambda);
            assert!(adaptive_m_width(&s, 1).unwrap().value < 1.0);
        }
    }

    #[test]
    fn width_curve_is_nonincreasing() {
        let s = Spectrum::new(
            SpectralFamily::Exponential {
                alpha: 1.0,
                beta: 1.0,
            },
            BWeights::Ones,
            16,
        )
        .unwrap();
        let ms: Vec<usize> = (1..=64).collect();
        let curve = width_curve(&s, &ms).unwrap();
        assert!(curve.certified);
        for w in curve.theta.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
        assert!(curve.theta.iter().all(|&t| t > 0.0 && t <= 1.0));
    }

    #[test]
    fn lower_bound_constant_examples() {
        let s = explicit(&[1.0]);
        assert!((lower_bound_constant(&s, 1).unwrap() - 0.5).abs() < 1e-15);

        let s = explicit(&[1.0, 0.5]);
        let c = lower_bound_constant(&s, 2).unwrap();
        assert!((c - 0.5 * 0.25f64.powf(0.25)).abs() < 1e-15);
        assert!((c - 0.35355339).abs() < 1e-7);

        // At s = 1 the curve value is the constant itself.
        let kind = BoundKind::ImpossibilityLower { p: 2, constant: c };
        assert_eq!(kind.evaluate(1.0).unwrap(), c);
    }

    #[test]
    fn upper_bound_values_at_e() {
        let e = std::f64::consts::E;
        let v = BoundKind::UpperAlgebraic {
            alpha: 2.0,
            delta: 0.5,
            eta: 1.0,
        }
        .evaluate(e)
        .unwrap();
        assert!((v - 1.0).abs() < 1e-14);

        let v = BoundKind::UpperExponential {
            alpha: 1.0,
            beta: 1.0,
            delta: 1.0,
        }
        .evaluate(e)
        .unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-14);

        let v = BoundKind::UpperDoubleExponential {
            alpha: 1.0,
            delta: 1.0,
            eta: 2.0,
        }
        .evaluate(e)
        .unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn sharp_exponential_examples() {
        let e = std::f64::consts::E;
        let v = sharp_exponential_lower(1.0, 1.0, 0.5, 1.0, e - 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-14);

        let v = sharp_exponential_lower(1.0, 1.0, 0.5, 2.0, e - 1.0).unwrap();
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-14);

        assert!(matches!(
            sharp_exponential_lower(1.0, 1.0, 1.0, 1.0, 10.0),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn stesin_examples() {
        let w = stesin_width(&[2.0, 1.0], 4.0, 2.0, 1).unwrap();
        assert!((w - 1.0).abs() < 1e-15);

        let w = stesin_width(&[1.0, 1.0, 1.0], f64::INFINITY, 2.0, 0).unwrap();
        assert!((w - 3f64.sqrt()).abs() < 1e-15);

        // m = N - 1 keeps only the single smallest weight.
        let w = stesin_width(&[0.3, 2.0, 0.9], 5.0, 2.0, 2).unwrap();
        assert!((w - 0.3).abs() < 1e-15);

        assert!(matches!(
            stesin_width(&[1.0, 2.0], 2.0, 2.0, 0),
            Err(Error::BadExponents { .. })
        ));
        assert!(matches!(
            stesin_width(&[1.0], 3.0, 2.0, 1),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn stesin_matches_subset_maximization() {
        // Independent route: the literal maximum over all (N-m)-subsets.
        fn oracle(w: &[f64], p: f64, q: f64, m: usize) -> f64 {
            let n = w.len();
            let keep = n - m;
            let e = if p.is_infinite() { q } else { p * q / (p - q) };
            let kappa = if p.is_infinite() {
                -1.0 / q
            } else {
                1.0 / p - 1.0 / q
            };
            let mut best = f64::NEG_INFINITY;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != keep {
                    continue;
                }
                let sum: f64 = (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| w[i].powf(e))
                    .sum();
                best = best.max(sum.powf(kappa));
            }
            1.0 / best
        }
        let cases: [(&[f64], f64, f64, usize); 5] = [
            (&[2.0, 1.0], 4.0, 2.0, 1),
            (&[0.2, 0.9, 1.7, 0.4], 3.0, 2.0, 2),
            (&[1.0, 1.0, 1.0], f64::INFINITY, 2.0, 1),
            (&[0.5, 0.6, 0.7, 0.8, 0.9], 8.0, 2.0, 3),
            (&[3.0, 0.1, 0.2, 2.2, 1.1, 0.7], 5.0, 3.0, 4),
        ];
        for (w, p, q, m) in cases {
            let got = stesin_width(w, p, q, m).unwrap();
            let expect = oracle(w, p, q, m);
            assert!(
                (got - expect).abs() <= 1e-12 * expect,
                "w = {w:?}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn stesin_weight_change_identity() {
        // Replacing (w, unweighted target) by the reciprocal-weight
        // formulation leaves the width unchanged; both sides reduce to the
        // tail-sum form.
        let cases: [(&[f64], f64, usize); 4] = [
            (&[2.0, 1.0, 0.5], 4.0, 1),
            (&[0.3, 0.7, 1.3, 2.1], 3.0, 2),
            (&[1.0, 0.25], 6.0, 0),
            (&[0.9, 0.8, 0.7, 0.6, 0.5], 2.5, 2),
        ];
        for (w, p, m) in cases {
            let direct = stesin_width(w, p, 2.0, m).unwrap();
            let recip: Vec<f64> = w.iter().map(|&x| 1.0 / x).collect();
            let through_reciprocal = {
                let back: Vec<f64> = recip.iter().map(|&x| 1.0 / x).collect();
                stesin_width(&back, p, 2.0, m).unwrap()
            };
            assert!(
                (direct - through_reciprocal).abs() <= 1e-12 * direct,
                "w = {w:?}"
            );
        }
    }

    #[test]
    fn verify_reflexive_curve_holds_from_the_start() {
        let s = explicit(&[1.0, 0.5, 0.25]);
        // A lower curve pinned exactly to the enumerated value at s = 1 and
        // decaying much faster afterwards holds from s = 1.
        let u2 = adaptive_m_width(&s, 1).unwrap().value;
        let kind = BoundKind::ImpossibilityLower { p: 1, constant: u2 };
        let report = verify_bounds(&s, &[kind], 50).unwrap();
        assert_eq!(report.entries[0].holds_from, Some(1));
        assert_eq!(report.entries[0].max_violation, 0.0);
    }

    #[test]
    fn verify_flat_spectrum_fails_decaying_upper_curve() {
        let kind = BoundKind::UpperExponential {
            alpha: 1.0,
            beta: 1.0,
            delta: 1.0,
        };
        let report = verify_bounds(&flat(), &[kind], 200).unwrap();
        assert_eq!(report.entries[0].holds_from, None);
        assert!(report.entries[0].max_violation > 0.0);
        assert!(!report.certified);
    }

    #[test]
    fn impossibility_bound_holds_for_algebraic_decay() {
        let s = Spectrum::new(SpectralFamily::Algebraic { alpha: 2.0 }, BWeights::Ones, 8).unwrap();
        let constant = lower_bound_constant(&s, 2).unwrap();
        let kind = BoundKind::ImpossibilityLower { p: 2, constant };
        let report = verify_bounds(&s, &[kind], 2000).unwrap();
        let holds_from = report.entries[0].holds_from.expect("bound should hold");
        assert!(holds_from <= 100, "holds only from {holds_from}");
    }

    #[test]
    fn theta_monotone_in_m() {
        for s in [
            explicit(&[1.0, 0.6, 0.2, 0.05]),
            Spectrum::new(
                SpectralFamily::DoubleExponential { alpha: 1.0 },
                BWeights::Ones,
                4,
            )
            .unwrap(),
        ] {
            let mut prev = f64::INFINITY;
            for m in 1..=40 {
                let w = adaptive_m_width(&s, m).unwrap().value;
                // Tie groups may reorder costs that differ only in the
                // last few bits.
                assert!(w <= prev + 1e-12);
                prev = w;
            }
        }
    }

    #[test]
    fn upper_curves_reject_bad_parameters() {
        assert!(matches!(
            BoundKind::UpperAlgebraic {
                alpha: 2.0,
                delta: 0.0,
                eta: 1.0
            }
            .evaluate(10.0),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            BoundKind::UpperExponential {
                alpha: 1.0,
                beta: -1.0,
                delta: 1.0
            }
            .evaluate(10.0),
            Err(Error::BadParams(_))
        ));
        // Defined only for s past the log singularity.
        assert!(matches!(
            BoundKind::UpperDoubleExponential {
                alpha: 1.0,
                delta: 1.0,
                eta: 0.5
            }
            .evaluate(1.0),
            Err(Error::BadParams(_))
        ));
    }

    #[test]
    fn curves_export_csv() {
        let s = explicit(&[1.0, 0.5]);
        let curve = width_curve(&s, &[1, 2, 4]).unwrap();
        let csv = curve.to_csv();
        assert!(csv.starts_with("m,theta,certified\n"));
        assert_eq!(csv.lines().count(), 4);

        let grid: Vec<u64> = vec![1, 2, 4, 8];
        let bound = lower_bound_curve(&s, 1, &grid).unwrap();
        let csv = bound.to_csv();
        assert!(csv.starts_with("s,value\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn lower_curve_locates_threshold_on_grid() {
        let s = Spectrum::new(SpectralFamily::Algebraic { alpha: 2.0 }, BWeights::Ones, 8).unwrap();
        let grid: Vec<u64> = (0..=10).map(|k| 1u64 << k).collect();
        let curve = lower_bound_curve(&s, 1, &grid).unwrap();
        assert!(curve.s_bar.is_some());
        assert_eq!(curve.values.len(), grid.len());
    }
}
