//! Inequality measures over non-negative score distributions.
//!
//! All measures treat the distribution as a full population: the Gini
//! coefficient is `Σ_i Σ_j |x_i - x_j| / (2 n² μ)` without the `n / (n - 1)`
//! sample correction. Zeros are ordinary observations; callers that want to
//! exclude uncited articles must drop them before building a [`Distribution`].

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcentrationError {
    #[error("empty distribution")]
    Empty,
    #[error("undefined Gini (zero mean)")]
    ZeroTotal,
    #[error("value {0} is negative or not finite")]
    BadValue(f64),
    #[error("share {0} is outside (0, 1]")]
    BadShare(f64),
    #[error("a Lorenz curve needs at least one sample interval")]
    BadPoints,
}

/// A multiset of non-negative scores with its count of exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
    zero_count: usize,
}

impl Distribution {
    pub fn new(values: Vec<f64>) -> Result<Self, ConcentrationError> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(ConcentrationError::BadValue(bad));
        }
        let zero_count = values.iter().filter(|&&v| v == 0.0).count();
        Ok(Self { values, zero_count })
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let zero_count = counts.iter().filter(|&&c| c == 0).count();
        Self { values, zero_count }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// The same distribution with every exact zero removed.
    pub fn without_zeros(&self) -> Self {
        Self {
            values: self.values.iter().copied().filter(|&v| v > 0.0).collect(),
            zero_count: 0,
        }
    }

    fn checked(&self) -> Result<(), ConcentrationError> {
        if self.values.is_empty() {
            return Err(ConcentrationError::Empty);
        }
        if self.zero_count == self.values.len() {
            return Err(ConcentrationError::ZeroTotal);
        }
        Ok(())
    }

    fn sorted_ascending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }
}

/// Population Gini coefficient in `[0, 1)`, computed in `O(n log n)` from the
/// order statistics: `G = Σ_i (2i - n - 1) x_(i) / (n Σ x)`.
pub fn gini(d: &Distribution) -> Result<f64, ConcentrationError> {
    d.checked()?;
    let sorted = d.sorted_ascending();
    let n = sorted.len() as f64;
    let mut weighted = 0.0;
    let mut total = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        weighted += (2.0 * (i as f64 + 1.0) - n - 1.0) * x;
        total += x;
    }
    Ok((weighted / (n * total)).max(0.0))
}

/// Points `(p, L)` of cumulative population share against cumulative value share.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    pub points: Vec<(f64, f64)>,
}

/// Lorenz curve over ascending values, sampled at `intervals + 1` evenly
/// spaced population shares `0, 1/intervals, ..., 1`, interpolating linearly
/// between order statistics.
pub fn lorenz(d: &Distribution, intervals: usize) -> Result<LorenzCurve, ConcentrationError> {
    d.checked()?;
    if intervals == 0 {
        return Err(ConcentrationError::BadPoints);
    }
    let sorted = d.sorted_ascending();
    let n = sorted.len();
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for &x in &sorted {
        cum.push(cum.last().unwrap() + x);
    }
    let total = cum[n];
    let mut points = Vec::with_capacity(intervals + 1);
    for j in 0..=intervals {
        let p = j as f64 / intervals as f64;
        let l = if j == 0 {
            0.0
        } else if j == intervals {
            1.0
        } else {
            let t = p * n as f64;
            let k = (t.floor() as usize).min(n - 1);
            let frac = t - k as f64;
            ((cum[k] + frac * sorted[k]) / total).clamp(0.0, p)
        };
        points.push((p, l));
    }
    Ok(LorenzCurve { points })
}

/// Number of members in the top `pct` of `n`: `ceil(pct · n)`, at least one.
pub fn top_count(n: usize, pct: f64) -> usize {
    let raw = pct * n as f64;
    // absorb representation error in products like 0.07 * 100
    let k = (raw - raw * 1e-12).ceil() as usize;
    k.clamp(1, n.max(1))
}

fn check_share(pct: f64) -> Result<(), ConcentrationError> {
    if pct > 0.0 && pct <= 1.0 {
        Ok(())
    } else {
        Err(ConcentrationError::BadShare(pct))
    }
}

/// Share of the total held by the `ceil(pct · n)` largest values.
pub fn top_share(d: &Distribution, pct: f64) -> Result<f64, ConcentrationError> {
    check_share(pct)?;
    d.checked()?;
    let mut sorted = d.sorted_ascending();
    sorted.reverse();
    let k = top_count(sorted.len(), pct);
    let top: f64 = sorted[..k].iter().sum();
    let rest: f64 = sorted[k..].iter().sum();
    Ok(top / (top + rest))
}

/// Indices of the top `ceil(pct · n)` values, ordered by value descending and
/// then by `key` ascending, so ties at the boundary resolve the same way on every run.
pub fn top_members<K: Ord>(
    values: &[f64],
    key: impl Fn(usize) -> K,
    pct: f64,
) -> Result<Vec<usize>, ConcentrationError> {
    check_share(pct)?;
    if values.is_empty() {
        return Err(ConcentrationError::Empty);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| match values[b].total_cmp(&values[a]) {
        Ordering::Equal => key(a).cmp(&key(b)),
        o => o,
    });
    order.truncate(top_count(values.len(), pct));
    Ok(order)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    /// `Σ_i Σ_j |x_i - x_j| / (2 n² μ)` evaluated literally.
    fn gini_pairwise(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let mut acc = 0.0;
        for a in v {
            for b in v {
                acc += (a - b).abs();
            }
        }
        acc / (2.0 * n * n * mean)
    }

    fn top_share_oracle(v: &[f64], pct: f64) -> f64 {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let k = ((pct * v.len() as f64) - 1e-9).ceil().max(1.0) as usize;
        s[..k].iter().sum::<f64>() / v.iter().sum::<f64>()
    }

    #[test]
    fn analytic_anchors() {
        assert_eq!(gini(&dist(&[1.0, 1.0, 1.0, 1.0])).unwrap(), 0.0);
        assert_eq!(gini(&dist(&[0.0, 0.0, 0.0, 1.0])).unwrap(), 0.75);
        assert_eq!(gini(&dist(&[5.0])).unwrap(), 0.0);
    }

    #[test]
    fn error_cases() {
        assert_eq!(gini(&dist(&[])), Err(ConcentrationError::Empty));
        assert_eq!(gini(&dist(&[0.0, 0.0])), Err(ConcentrationError::ZeroTotal));
        assert!(Distribution::new(vec![-1.0]).is_err());
        assert!(Distribution::new(vec![f64::NAN]).is_err());
        assert_eq!(top_share(&dist(&[1.0]), 0.0), Err(ConcentrationError::BadShare(0.0)));
        assert_eq!(top_share(&dist(&[1.0]), 1.5), Err(ConcentrationError::BadShare(1.5)));
        assert_eq!(lorenz(&dist(&[1.0]), 0), Err(ConcentrationError::BadPoints));
        assert_eq!(lorenz(&dist(&[0.0]), 4), Err(ConcentrationError::ZeroTotal));
    }

    #[test]
    fn gini_matches_pairwise_oracle_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=200);
            let v: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..100.0) })
                .collect();
            if v.iter().all(|&x| x == 0.0) {
                continue;
            }
            let fast = gini(&dist(&v)).unwrap();
            assert!((fast - gini_pairwise(&v)).abs() < 1e-12);
        }
    }

    #[test]
    fn lorenz_examples() {
        let eq = lorenz(&dist(&[3.0; 7]), 10).unwrap();
        for &(p, l) in &eq.points {
            assert!((l - p).abs() < 1e-12, "{p} {l}");
        }
        let c = lorenz(&dist(&[0.0, 0.0, 0.0, 1.0]), 8).unwrap();
        for &(p, l) in &c.points {
            let expected = if p <= 0.75 { 0.0 } else { (p - 0.75) / 0.25 };
            assert!((l - expected).abs() < 1e-12, "{p} {l}");
        }
        assert_eq!(c.points.first(), Some(&(0.0, 0.0)));
        assert_eq!(c.points.last(), Some(&(1.0, 1.0)));
    }

    #[test]
    fn lorenz_agrees_with_cumulative_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=60);
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let curve = lorenz(&dist(&v), n).unwrap();
            let mut s = v.clone();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let total: f64 = s.iter().sum();
            // with one interval per member the samples sit on the order statistics
            let mut acc = 0.0;
            for (k, &(p, l)) in curve.points.iter().enumerate() {
                assert!((p - k as f64 / n as f64).abs() < 1e-15);
                assert!((l - acc / total).abs() < 1e-12);
                assert!(l <= p);
                if k < n {
                    acc += s[k];
                }
            }
            assert!(curve.points.windows(2).all(|w| w[0].1 <= w[1].1));
        }
    }

    #[test]
    fn top_share_examples() {
        assert!((top_share(&dist(&[2.0; 10]), 0.10).unwrap() - 0.10).abs() < 1e-15);
        let mut one = vec![0.0; 100];
        one[42] = 3.0;
        assert_eq!(top_share(&dist(&one), 0.01).unwrap(), 1.0);
        assert_eq!(top_share(&dist(&[1.0, 2.0, 3.0]), 1.0).unwrap(), 1.0);
    }

    #[test]
    fn top_share_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=200);
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..50.0)).collect();
            for pct in [0.01, 0.05, 0.1, 0.37, 1.0] {
                let got = top_share(&dist(&v), pct).unwrap();
                assert!((got - top_share_oracle(&v, pct)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn top_count_rounding() {
        assert_eq!(top_count(100, 0.05), 5);
        assert_eq!(top_count(100, 0.07), 7);
        assert_eq!(top_count(101, 0.01), 2);
        assert_eq!(top_count(10, 0.1), 1);
        assert_eq!(top_count(3, 0.01), 1);
        assert_eq!(top_count(3, 1.0), 3);
    }

    #[test]
    fn top_members_break_ties_by_key() {
        let v = [1.0, 3.0, 3.0, 2.0];
        let ids = ["d", "c", "b", "a"];
        let m = top_members(&v, |i| ids[i], 0.25).unwrap();
        assert_eq!(m, vec![2]);
        let m = top_members(&v, |i| ids[i], 0.75).unwrap();
        assert_eq!(m, vec![2, 1, 3]);
    }

    fn positive_vec() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..1e3], 1..120)
            .prop_filter("positive total", |v| v.iter().any(|&x| x > 0.0))
    }

    proptest! {
        #[test]
        fn scale_invariance(v in positive_vec(), c in 1e-3f64..1e3) {
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            prop_assert!((gini(&dist(&v)).unwrap() - gini(&dist(&scaled)).unwrap()).abs() < 1e-12);
            for pct in [0.01, 0.1, 0.5] {
                prop_assert!((top_share(&dist(&v), pct).unwrap() - top_share(&dist(&scaled), pct).unwrap()).abs() < 1e-12);
            }
            let a = lorenz(&dist(&v), 20).unwrap();
            let b = lorenz(&dist(&scaled), 20).unwrap();
            for (x, y) in a.points.iter().zip(&b.points) {
                prop_assert!((x.1 - y.1).abs() < 1e-12);
            }
        }

        #[test]
        fn zero_padding_strictly_increases_gini(v in positive_vec()) {
            let mut padded = v.clone();
            padded.push(0.0);
            prop_assert!(gini(&dist(&padded)).unwrap() > gini(&dist(&v)).unwrap());
        }

        #[test]
        fn bounds_and_monotone_top_share(v in positive_vec()) {
            let d = dist(&v);
            let g = gini(&d).unwrap();
            prop_assert!((0.0..1.0).contains(&g));
            let mut last = 0.0;
            for pct in [0.01, 0.05, 0.1, 0.25, 0.5, 0.9, 1.0] {
                let s = top_share(&d, pct).unwrap();
                prop_assert!(s > 0.0 && s <= 1.0);
                prop_assert!(s >= last);
                last = s;
            }
            prop_assert_eq!(top_share(&d, 1.0).unwrap(), 1.0);
        }

        #[test]
        fn pigou_dalton_transfer_never_increases_gini(v in positive_vec(), i in any::<proptest::sample::Index>(), j in any::<proptest::sample::Index>(), frac in 0.0f64..1.0) {
            let mut s = v.clone();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (lo, hi) = {
                let a = i.index(s.len());
                let b = j.index(s.len());
                (a.min(b), a.max(b))
            };
            prop_assume!(lo != hi && s[hi] > s[lo]);
            // keep the order: moving at most half the gap
            let eps = frac * (s[hi] - s[lo]) / 2.0;
            let before = gini(&dist(&s)).unwrap();
            s[hi] -= eps;
            s[lo] += eps;
            prop_assert!(gini(&dist(&s)).unwrap() <= before + 1e-12);
        }

        #[test]
        fn fast_gini_equals_definition(v in positive_vec()) {
            prop_assert!((gini(&dist(&v)).unwrap() - gini_pairwise(&v)).abs() < 1e-12);
        }
    }
}
