//! Goodness-of-fit summaries for comparing draws with exact laws.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square and total-variation distance of a sample.
#[derive(Clone, Debug, Serialize)]
pub struct GoodnessOfFit {
    pub n: u64,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub tv: f64,
}

/// Compares `counts[v]` (draws equal to `v`) with `probs[v]`. Mass not
/// covered by `probs` forms one tail cell; cells are merged left to right
/// until each expects at least 5 draws.
pub fn goodness_of_fit(counts: &[u64], probs: &[f64]) -> GoodnessOfFit {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let len = counts.len().max(probs.len());
    let count = |v: usize| counts.get(v).copied().unwrap_or(0) as f64;
    let prob = |v: usize| probs.get(v).copied().unwrap_or(0.0);
    let covered: f64 = probs.iter().sum();
    let tail_prob = (1.0 - covered).max(0.0);
    let tail_count: f64 = (probs.len()..len).map(count).sum();

    let mut tv = (tail_count / nf - tail_prob).abs();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for v in 0..probs.len() {
        tv += (count(v) / nf - prob(v)).abs();
        obs += count(v);
        exp += prob(v) * nf;
        if exp >= 5.0 {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    obs += tail_count;
    exp += tail_prob * nf;
    if exp >= 5.0 || cells.is_empty() {
        cells.push((obs, exp));
    } else {
        let last = cells.last_mut().unwrap();
        last.0 += obs;
        last.1 += exp;
    }
    let chi2: f64 = cells.iter().filter(|c| c.1 > 0.0).map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 { 1.0 } else { 1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(chi2) };
    GoodnessOfFit { n, chi2, dof, p_value, tv: tv / 2.0 }
}

/// Histogram of nonnegative integer draws.
pub fn histogram(values: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut h = Vec::new();
    for v in values {
        if h.len() <= v {
            h.resize(v + 1, 0);
        }
        h[v] += 1;
    }
    h
}

/// Adds histograms cell by cell.
pub fn merge_histograms(parts: impl IntoIterator<Item = Vec<u64>>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for p in parts {
        if out.len() < p.len() {
            out.resize(p.len(), 0);
        }
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_match_has_high_p_value() {
        let probs = [0.5, 0.25, 0.25];
        let g = goodness_of_fit(&[500, 250, 250], &probs);
        assert!(g.chi2 < 1e-12 && g.p_value > 0.99 && g.tv < 1e-12);
    }

    #[test]
    fn gross_mismatch_is_rejected() {
        let g = goodness_of_fit(&[100, 900], &[0.5, 0.5]);
        assert!(g.p_value < 1e-6);
        assert!((g.tv - 0.4).abs() < 1e-12);
    }

    #[test]
    fn tail_cell_collects_overflow() {
        let g = goodness_of_fit(&[50, 30, 0, 20], &[0.5, 0.3]);
        assert!(g.tv < 1e-12);
        assert_eq!(g.dof, 2);
    }

    #[test]
    fn merging() {
        assert_eq!(merge_histograms([vec![1, 2], vec![0, 1, 5]]), vec![1, 3, 5]);
        assert_eq!(histogram([0, 2, 2]), vec![1, 0, 2]);
    }
}
