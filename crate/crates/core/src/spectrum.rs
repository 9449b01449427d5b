//! The Gaussian measure's eigenvalue model.
//!
//! A [`Spectrum`] bundles the PCA eigenvalues `lambda_i` of the covariance
//! operator, the weight sequence `b` with `0 < b_i <= 1`, and the weighted
//! eigenvalues `lambda_b_i = lambda_i / b_i^2` that drive every weight and
//! width in this crate. Closed-form families answer queries for any index
//! by formula; explicit tables are bounded by `dim_cap`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalue decay families. `Algebraic { alpha }` is `i^-alpha`,
/// `Exponential { alpha, beta }` is `exp(-alpha * i^beta)`,
/// `DoubleExponential { alpha }` is `exp(-exp(alpha * i))`, and
/// `Explicit` is a finite table.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralFamily {
    Algebraic { alpha: f64 },
    Exponential { alpha: f64, beta: f64 },
    DoubleExponential { alpha: f64 },
    Explicit(Vec<f64>),
}

/// The weight sequence `b`. `SqrtLambda` sets `b_i = sqrt(lambda_i)`,
/// which flattens the weighted eigenvalues to the constant 1.
#[derive(Debug, Clone, PartialEq)]
pub enum BWeights {
    Ones,
    SqrtLambda,
    Explicit(Vec<f64>),
}

/// Eigenvalue model of a centered nondegenerate Gaussian measure.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    family: SpectralFamily,
    b: BWeights,
    dim_cap: usize,
}

/// Tri-state verdict on square-summability of `b`, with an extra variant
/// for the finite-codomain case where no such condition is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L2Verdict {
    Holds,
    HoldsVacuously,
    Fails,
    UnknownByTruncation,
}

/// Outcome of checking the standing assumptions on a spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub nonincreasing_ok: bool,
    pub b_range_ok: bool,
    pub b_l2_ok: L2Verdict,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.nonincreasing_ok && self.b_range_ok && self.b_l2_ok != L2Verdict::Fails
    }
}

/// Result of the effective-dimension query `min { l : lambda_b[l+1] < eps^2 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveDimension {
    Finite(usize),
    /// An explicit table was exhausted before the threshold was crossed;
    /// the true value is at least this large.
    AtLeast(usize),
    /// The spectrum provably never drops below the threshold (constant
    /// weighted eigenvalues).
    Infinite,
}

impl EffectiveDimension {
    pub fn finite(self) -> Option<usize> {
        match self {
            EffectiveDimension::Finite(d) => Some(d),
            _ => None,
        }
    }
}

impl Spectrum {
    /// Build a spectrum and validate it: weights in (0, 1], positive finite
    /// table entries, and nonincreasing weighted eigenvalues within
    /// `dim_cap`.
    ///
    /// Explicit inputs must already be sorted nonincreasing; no reordering
    /// is applied.
    pub fn new(family: SpectralFamily, b: BWeights, dim_cap: usize) -> Result<Self> {
        if dim_cap == 0 {
            return Err(Error::BadParams("dim_cap must be >= 1".into()));
        }
        match &family {
            SpectralFamily::Algebraic { alpha } => {
                if !(*alpha > 0.0) {
                    return Err(Error::BadParams(format!(
                        "algebraic alpha must be > 0, got {alpha}"
                    )));
                }
            }
            SpectralFamily::Exponential { alpha, beta } => {
                if !(*alpha > 0.0) || !(*beta > 0.0) {
                    return Err(Error::BadParams(format!(
                        "exponential alpha, beta must be > 0, got ({alpha}, {beta})"
                    )));
                }
            }
            SpectralFamily::DoubleExponential { alpha } => {
                if !(*alpha > 0.0) {
                    return Err(Error::BadParams(format!(
                        "double-exponential alpha must be > 0, got {alpha}"
                    )));
                }
            }
            SpectralFamily::Explicit(v) => {
                if v.len() < dim_cap {
                    return Err(Error::BadParams(format!(
                        "explicit eigenvalue table has {} entries, dim_cap is {dim_cap}",
                        v.len()
                    )));
                }
                for (i, &x) in v.iter().enumerate() {
                    if !(x > 0.0) || !x.is_finite() {
                        return Err(Error::BadParams(format!(
                            "explicit eigenvalue lambda[{}] = {x} must be positive and finite",
                            i + 1
                        )));
                    }
                }
            }
        }
        if let BWeights::Explicit(v) = &b {
            if v.len() < dim_cap {
                return Err(Error::BadParams(format!(
                    "explicit b table has {} entries, dim_cap is {dim_cap}",
                    v.len()
                )));
            }
        }
        let s = Spectrum { family, b, dim_cap };
        for i in 1..=dim_cap {
            let bi = s.b_weight(i)?;
            if !(bi > 0.0 && bi <= 1.0) {
                return Err(Error::BadWeight {
                    index: i,
                    value: bi,
                });
            }
        }
        // Closed-form families are strictly decreasing in i, so only table
        // inputs need the scan.
        if s.has_tabulated_part() {
            let mut prev = s.weighted_eigenvalue(1)?;
            for i in 2..=dim_cap {
                let cur = s.weighted_eigenvalue(i)?;
                if cur > prev {
                    return Err(Error::NonMonotone {
                        index: i,
                        value: cur,
                        previous: prev,
                    });
                }
                prev = cur;
            }
        }
        Ok(s)
    }

    pub fn family(&self) -> &SpectralFamily {
        &self.family
    }

    pub fn b_choice(&self) -> &BWeights {
        &self.b
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    fn has_tabulated_part(&self) -> bool {
        matches!(self.family, SpectralFamily::Explicit(_))
            || matches!(self.b, BWeights::Explicit(_))
    }

    /// Whether weighted eigenvalues can be answered for arbitrary indices.
    pub fn is_closed_form(&self) -> bool {
        !self.has_tabulated_part()
    }

    /// Largest queryable index, `None` when unbounded.
    pub fn max_queryable(&self) -> Option<usize> {
        if self.is_closed_form() {
            None
        } else {
            Some(self.dim_cap)
        }
    }

    /// Unweighted PCA eigenvalue `lambda_i` (1-based).
    pub fn eigenvalue(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::BadParams("eigenvalue indices are 1-based".into()));
        }
        match &self.family {
            SpectralFamily::Algebraic { alpha } => Ok((i as f64).powf(-alpha)),
            SpectralFamily::Exponential { alpha, beta } => {
                Ok((-alpha * (i as f64).powf(*beta)).exp())
            }
            SpectralFamily::DoubleExponential { alpha } => Ok((-(alpha * i as f64).exp()).exp()),
            SpectralFamily::Explicit(v) => v.get(i - 1).copied().ok_or(Error::OutOfRange {
                index: i,
                max: self.dim_cap,
            }),
        }
    }

    /// Natural log of `lambda_i`, computed without intermediate underflow
    /// for the closed-form families.
    fn log_eigenvalue(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::BadParams("eigenvalue indices are 1-based".into()));
        }
        match &self.family {
            SpectralFamily::Algebraic { alpha } => Ok(-alpha * (i as f64).ln()),
            SpectralFamily::Exponential { alpha, beta } => Ok(-alpha * (i as f64).powf(*beta)),
            SpectralFamily::DoubleExponential { alpha } => Ok(-(alpha * i as f64).exp()),
            SpectralFamily::Explicit(_) => Ok(self.eigenvalue(i)?.ln()),
        }
    }

    /// Weight `b_i` (1-based).
    pub fn b_weight(&self, i: usize) -> Result<f64> {
        match &self.b {
            BWeights::Ones => {
                // Still bounded by the table when the family is explicit.
                self.eigenvalue(i)?;
                Ok(1.0)
            }
            // exp(log(lambda)/2) keeps sqrt(lambda) positive well past the
            // point where lambda itself underflows.
            BWeights::SqrtLambda => Ok((self.log_eigenvalue(i)? / 2.0).exp()),
            BWeights::Explicit(v) => v.get(i - 1).copied().ok_or(Error::OutOfRange {
                index: i,
                max: self.dim_cap,
            }),
        }
    }

    /// Weighted eigenvalue `lambda_b_i = lambda_i / b_i^2`.
    ///
    /// For `SqrtLambda` weights this is identically 1. Double-exponential
    /// eigenvalues underflow to 0.0 for `alpha * i` beyond roughly 6.6; the
    /// reciprocal cost `1 / lambda_b_i` then saturates at infinity and the
    /// coordinate is inert in every enumeration.
    pub fn weighted_eigenvalue(&self, i: usize) -> Result<f64> {
        if matches!(self.b, BWeights::SqrtLambda) {
            self.eigenvalue(i)?;
            return Ok(1.0);
        }
        let bi = self.b_weight(i)?;
        Ok(self.eigenvalue(i)? / (bi * bi))
    }

    /// Check the standing assumptions and report, without throwing.
    pub fn validate_assumption(&self, codomain_infinite: bool) -> ValidationReport {
        let mut messages = Vec::new();
        let mut nonincreasing_ok = true;
        let mut b_range_ok = true;
        let mut prev = f64::INFINITY;
        for i in 1..=self.dim_cap {
            let lb = self.weighted_eigenvalue(i).unwrap_or(f64::NAN);
            if lb > prev {
                nonincreasing_ok = false;
                messages.push(format!(
                    "lambda_b[{i}] = {lb} exceeds lambda_b[{}] = {prev}",
                    i - 1
                ));
            }
            if lb == 0.0 {
                messages.push(format!(
                    "lambda_b[{i}] underflowed to zero; coordinate {i} is numerically inert"
                ));
            }
            prev = lb;
            let bi = self.b_weight(i).unwrap_or(f64::NAN);
            if !(bi > 0.0 && bi <= 1.0) {
                b_range_ok = false;
                messages.push(format!("b[{i}] = {bi} outside (0, 1]"));
            }
        }

        let b_l2_ok = if !codomain_infinite {
            L2Verdict::HoldsVacuously
        } else {
            match (&self.b, &self.family) {
                (BWeights::Ones, _) => {
                    messages.push("constant weights b = 1 are not square-summable".into());
                    L2Verdict::Fails
                }
                // sum b_i^2 = sum lambda_i, decided per family.
                (BWeights::SqrtLambda, SpectralFamily::Algebraic { alpha }) => {
                    if *alpha > 1.0 {
                        L2Verdict::Holds
                    } else {
                        messages.push(format!(
                            "sum i^-alpha diverges for alpha = {alpha} <= 1, so b = sqrt(lambda) is not square-summable"
                        ));
                        L2Verdict::Fails
                    }
                }
                (BWeights::SqrtLambda, SpectralFamily::Exponential { .. })
                | (BWeights::SqrtLambda, SpectralFamily::DoubleExponential { .. }) => {
                    L2Verdict::Holds
                }
                (BWeights::SqrtLambda, SpectralFamily::Explicit(_))
                | (BWeights::Explicit(_), _) => {
                    messages.push(
                        "partial sums of a finite table cannot certify square-summability".into(),
                    );
                    L2Verdict::UnknownByTruncation
                }
            }
        };

        ValidationReport {
            nonincreasing_ok,
            b_range_ok,
            b_l2_ok,
            messages,
        }
    }

    /// Effective dimension `d(eps) = min { l >= 1 : lambda_b[l+1] < eps^2 }`.
    ///
    /// Comparison is exact strict `<` on floating values: a tie counts as
    /// "not less". Constant closed-form spectra that never cross return
    /// `Infinite`; exhausted explicit tables return `AtLeast(dim_cap)`.
    pub fn effective_dimension(&self, eps: f64) -> EffectiveDimension {
        assert!(eps > 0.0, "effective_dimension requires eps > 0");
        let eps2 = eps * eps;
        let below = |l: usize| -> Option<bool> {
            match self.weighted_eigenvalue(l + 1) {
                Ok(v) => Some(v < eps2),
                Err(_) => None,
            }
        };
        if below(1) == Some(true) {
            return EffectiveDimension::Finite(1);
        }
        // Constant weighted eigenvalues never cross the threshold.
        if self.is_closed_form() && matches!(self.b, BWeights::SqrtLambda) {
            return EffectiveDimension::Infinite;
        }
        // The sequence is nonincreasing, so galloping + bisection finds the
        // first crossing without a linear scan.
        let mut lo = 1usize; // below(lo) is false
        let mut hi = 2usize;
        loop {
            match below(hi) {
                Some(true) => break,
                Some(false) => {
                    lo = hi;
                    match hi.checked_mul(2) {
                        Some(next) => hi = next,
                        None => return EffectiveDimension::AtLeast(usize::MAX),
                    }
                }
                None => {
                    // Table exhausted: clamp the gallop to the last valid l.
                    let max = self.dim_cap;
                    if max <= lo || below(max - 1) != Some(true) {
                        // Even the last queryable value does not cross.
                        return EffectiveDimension::AtLeast(self.dim_cap);
                    }
                    hi = max - 1;
                    break;
                }
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if below(mid) == Some(true) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        EffectiveDimension::Finite(hi)
    }
}

/// Serialized form of a [`Spectrum`]: `{family, params, b, dim_cap}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub family: String,
    pub params: serde_json::Value,
    pub b: serde_json::Value,
    pub dim_cap: usize,
}

impl SpectrumConfig {
    pub fn from_spectrum(s: &Spectrum) -> Self {
        let (family, params) = match s.family() {
            SpectralFamily::Algebraic { alpha } => (
                "algebraic".to_string(),
                serde_json::json!({ "alpha": alpha }),
            ),
            SpectralFamily::Exponential { alpha, beta } => (
                "exponential".to_string(),
                serde_json::json!({ "alpha": alpha, "beta": beta }),
            ),
            SpectralFamily::DoubleExponential { alpha } => (
                "double-exponential".to_string(),
                serde_json::json!({ "alpha": alpha }),
            ),
            SpectralFamily::Explicit(v) => {
                ("explicit".to_string(), serde_json::json!({ "lambda": v }))
            }
        };
        let b = match s.b_choice() {
            BWeights::Ones => serde_json::json!("ones"),
            BWeights::SqrtLambda => serde_json::json!("sqrt-lambda"),
            BWeights::Explicit(v) => serde_json::json!({ "explicit": v }),
        };
        SpectrumConfig {
            family,
            params,
            b,
            dim_cap: s.dim_cap(),
        }
    }

    pub fn build(&self) -> Result<Spectrum> {
        let getf = |v: &serde_json::Value, key: &str| -> Result<f64> {
            v.get(key)
                .and_then(|x| x.as_f64())
                .ok_or_else(|| Error::Parse(format!("missing numeric field `{key}` in params")))
        };
        let family = match self.family.as_str() {
            "algebraic" | "alg" => SpectralFamily::Algebraic {
                alpha: getf(&self.params, "alpha")?,
            },
            "exponential" | "exp" => SpectralFamily::Exponential {
                alpha: getf(&self.params, "alpha")?,
                beta: getf(&self.params, "beta")?,
            },
            "double-exponential" | "dexp" => SpectralFamily::DoubleExponential {
                alpha: getf(&self.params, "alpha")?,
            },
            "explicit" => {
                let list = self
                    .params
                    .get("lambda")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| Error::Parse("explicit family needs params.lambda".into()))?;
                let v: Option<Vec<f64>> = list.iter().map(|x| x.as_f64()).collect();
                SpectralFamily::Explicit(
                    v.ok_or_else(|| Error::Parse("params.lambda must be numeric".into()))?,
                )
            }
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        };
        let b = if let Some(s) = self.b.as_str() {
            match s {
                "ones" => BWeights::Ones,
                "sqrt-lambda" => BWeights::SqrtLambda,
                other => return Err(Error::Parse(format!("unknown b choice `{other}`"))),
            }
        } else if let Some(list) = self.b.get("explicit").and_then(|x| x.as_array()) {
            let v: Option<Vec<f64>> = list.iter().map(|x| x.as_f64()).collect();
            BWeights::Explicit(v.ok_or_else(|| Error::Parse("b.explicit must be numeric".into()))?)
        } else {
            return Err(Error::Parse(
                "b must be \"ones\", \"sqrt-lambda\", or {\"explicit\": [...]}".into(),
            ));
        };
        Spectrum::new(family, b, self.dim_cap)
    }
}
