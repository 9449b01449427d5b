//! Shared brute-force oracles and random generators for the integration
//! suites. Everything here is deliberately independent of the library's
//! enumeration path: dense boxes, plain sorts, and explicit formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lipwidth::spectrum::{BWeights, SpectralFamily, Spectrum};

// Each integration test compiles this module separately, so not every
// helper is used by every binary.
#[allow(dead_code)]
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random nonincreasing eigenvalue table in `[lo, hi]`.
#[allow(dead_code)]
pub fn random_descending(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn explicit_spectrum(lambda: &[f64]) -> Spectrum {
    Spectrum::new(
        SpectralFamily::Explicit(lambda.to_vec()),
        BWeights::Ones,
        lambda.len(),
    )
    .expect("valid explicit spectrum")
}

/// One row of the oracle enumeration: dense index, cost, weight.
#[derive(Debug, Clone)]
pub struct OracleItem {
    pub dense: Vec<u32>,
    pub cost: f64,
    pub weight: f64,
}

/// Exhaustive enumeration of the box `{0..=bound}^d`, sorted by
/// (cost, total degree, first-larger-entry-first), truncated to `k` items.
///
/// Panics if the box provably truncated the true head: the `k`-th cost
/// must stay below the cheapest index outside the box.
pub fn box_rearrangement_oracle(lambda_b: &[f64], bound: u32, k: usize) -> Vec<OracleItem> {
    let d = lambda_b.len();
    let inv: Vec<f64> = lambda_b.iter().map(|&l| 1.0 / l).collect();
    let mut items = Vec::new();
    let mut dense = vec![0u32; d];
    loop {
        let cost: f64 = dense
            .iter()
            .enumerate()
            .map(|(i, &v)| v as f64 * inv[i])
            .sum();
        items.push(OracleItem {
            dense: dense.clone(),
            cost,
            weight: 1.0 / (1.0 + cost).sqrt(),
        });
        let mut pos = 0;
        while pos < d {
            dense[pos] += 1;
            if dense[pos] <= bound {
                break;
            }
            dense[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }
    items.sort_by(|a, b| {
        a.cost.total_cmp(&b.cost).then_with(|| {
            let da: u32 = a.dense.iter().sum();
            let db: u32 = b.dense.iter().sum();
            da.cmp(&db).then_with(|| {
                for (x, y) in a.dense.iter().zip(b.dense.iter()) {
                    if x != y {
                        return y.cmp(x); // larger entry first
                    }
                }
                std::cmp::Ordering::Equal
            })
        })
    });
    assert!(items.len() >= k, "box too small to produce {k} items");
    items.truncate(k);
    // Box validity: everything outside the box costs at least
    // (bound + 1) / lambda_b_1, which must exceed the k-th cost.
    let cheapest_outside = (bound as f64 + 1.0) * inv[0];
    let kth = items.last().map(|it| it.cost).unwrap_or(0.0);
    assert!(
        kth < cheapest_outside,
        "oracle box {bound} too small: k-th cost {kth} vs outside floor {cheapest_outside}"
    );
    items
}
