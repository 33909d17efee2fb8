//! The event that `k` well-spaced positions are pairwise close in the
//! cactus distance.

use num_bigint::BigInt;
use serde::Serialize;

use super::{all_bridges, sample_bridge, DiscreteBridge};
use crate::error::{Error, Result};
use crate::exactlaws::ExactRational;
use crate::rng::{run_shards, RngStream};

/// Largest `K` for exhaustive enumeration over bridges.
pub const EXACT_BRIDGE_CAP: usize = 10;

/// Minimal spacing `ceil(c r^2)`. Products within rounding error of an
/// integer count as that integer.
pub fn spacing(c: f64, r: usize) -> usize {
    let x = c * (r * r) as f64;
    let n = x.round();
    if (x - n).abs() <= 1e-9 * n.max(1.0) {
        n as usize
    } else {
        x.ceil() as usize
    }
}

/// Whether `k` of the sorted positions in `eligible` can be chosen with all
/// cyclic gaps at least `s` on a circle of length `len`.
fn cyclic_select(eligible: &[usize], len: usize, s: usize, k: usize) -> bool {
    let n = eligible.len();
    if k <= 1 {
        return n >= k && (k == 0 || len >= s);
    }
    // With the first point fixed, taking the earliest admissible point each
    // time maximises the count; every solution starts at some eligible point.
    for start in 0..n {
        let first = eligible[start];
        let limit = first + len - s.min(len);
        let mut last = first;
        let mut count = 1;
        let mut idx = start + 1;
        while idx < start + n {
            let x = if idx < n { eligible[idx] } else { eligible[idx - n] + len };
            if x > limit {
                break;
            }
            if x >= last + s {
                last = x;
                count += 1;
                if count >= k {
                    return true;
                }
            }
            idx += 1;
        }
    }
    false
}

/// Exact detection of the event for `k` positions, radius `r` and spacing
/// constant `c`.
///
/// The cactus distance is a tree pseudo-metric, so a set has diameter at most
/// `D` exactly when, for its farthest pair `(a, b)`, every member is within
/// `d(a, b)` of both `a` and `b`; that region has diameter `d(a, b)`. Each
/// pair with `d(a, b) <= 5r` is tried, and the spacing condition is then a
/// selection problem on the circle.
pub fn detect_event(b: &DiscreteBridge, k: usize, r: usize, c: f64) -> bool {
    let len = b.positions();
    let s = spacing(c, r);
    if k.saturating_mul(s) > len {
        return false;
    }
    let limit = 5 * r as u64;
    let dist: Vec<u64> = (0..len * len).map(|x| b.cactus_distance(x / len, x % len)).collect();
    let d = |i: usize, j: usize| dist[i * len + j];
    let mut eligible = Vec::with_capacity(len);
    for a in 0..len {
        for bb in a..len {
            let delta = d(a, bb);
            if delta > limit {
                continue;
            }
            eligible.clear();
            eligible.extend((0..len).filter(|&x| d(x, a) <= delta && d(x, bb) <= delta));
            if eligible.len() >= k && cyclic_select(&eligible, len, s, k) {
                return true;
            }
        }
    }
    false
}

/// Exhaustive search over all increasing position tuples.
pub fn brute_force_event(b: &DiscreteBridge, k: usize, r: usize, c: f64) -> bool {
    fn rec(b: &DiscreteBridge, chosen: &mut Vec<usize>, k: usize, s: usize, limit: u64) -> bool {
        let len = b.positions();
        if chosen.len() == k {
            return k == 0 || chosen[0] + len - chosen[k - 1] >= s;
        }
        let from = chosen.last().map_or(0, |&m| m + s);
        for m in from..len {
            if chosen.iter().all(|&x| b.cactus_distance(x, m) <= limit) {
                chosen.push(m);
                if rec(b, chosen, k, s, limit) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(b, &mut Vec::with_capacity(k), k, spacing(c, r).max(1), 5 * r as u64)
}

/// Probability of the event under the uniform bridge, by enumeration.
pub fn exact_event_probability(k: usize, big_k: usize, r: usize, c: f64) -> Result<ExactRational> {
    if big_k == 0 {
        return Err(Error::Invalid("K must be positive".into()));
    }
    if big_k > EXACT_BRIDGE_CAP {
        return Err(Error::CapExceeded { n: big_k, cap: EXACT_BRIDGE_CAP });
    }
    let all = all_bridges(big_k);
    let hits = all.iter().filter(|b| detect_event(b, k, r, c)).count();
    Ok(ExactRational::new(BigInt::from(hits), BigInt::from(all.len())))
}

/// Monte Carlo frequency of the event with its binomial standard error.
#[derive(Clone, Debug, Serialize)]
pub struct EventEstimate {
    pub k: usize,
    #[serde(rename = "K")]
    pub big_k: usize,
    pub r: usize,
    pub c: f64,
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub seed: u64,
}

pub fn estimate_event_probability(
    k: usize,
    big_k: usize,
    r: usize,
    c: f64,
    trials: u64,
    rng: &mut RngStream,
) -> Result<EventEstimate> {
    if trials == 0 || big_k == 0 || r == 0 || !(c > 0.0) {
        return Err(Error::Invalid("need trials, K, r >= 1 and c > 0".into()));
    }
    let seed = rng.next_u64();
    let hits = if k.saturating_mul(spacing(c, r)) > 2 * big_k {
        0
    } else {
        run_shards(seed, trials, |stream, n| {
            let mut hits = 0u64;
            for _ in 0..n {
                hits += u64::from(detect_event(&sample_bridge(big_k, stream)?, k, r, c));
            }
            Ok(hits)
        })?
        .into_iter()
        .sum()
    };
    let p_hat = hits as f64 / trials as f64;
    Ok(EventEstimate {
        k,
        big_k,
        r,
        c,
        trials,
        hits,
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let b = DiscreteBridge::from_values(vec![0, 1, 0]).unwrap();
        assert!(detect_event(&b, 2, 1, 1.0));
        assert!(brute_force_event(&b, 2, 1, 1.0));
    }

    #[test]
    fn spacing_rounding() {
        assert_eq!(spacing(1.0, 3), 9);
        assert_eq!(spacing(0.1, 10), 10);
        assert_eq!(spacing(0.5, 3), 5);
    }

    #[test]
    fn pigeonhole() {
        let mut rng = RngStream::new(1);
        let b = sample_bridge(5, &mut rng).unwrap();
        assert!(!detect_event(&b, 3, 2, 1.0));
    }

    #[test]
    fn agrees_with_brute_force_exhaustively() {
        for big_k in 1..=6 {
            for b in all_bridges(big_k) {
                for k in 2..=4 {
                    assert_eq!(detect_event(&b, k, 1, 1.0), brute_force_event(&b, k, 1, 1.0));
                }
            }
        }
    }

    #[test]
    fn agrees_on_random_larger_bridges() {
        let mut rng = RngStream::new(2);
        for _ in 0..300 {
            let big_k = 7 + rng.below(24) as usize;
            let b = sample_bridge(big_k, &mut rng).unwrap();
            let k = 2 + rng.below(3) as usize;
            let r = 1 + rng.below(2) as usize;
            let c = [0.5, 1.0, 1.5][rng.below(3) as usize];
            assert_eq!(detect_event(&b, k, r, c), brute_force_event(&b, k, r, c));
        }
    }

    #[test]
    fn reroot_invariance() {
        let mut rng = RngStream::new(6);
        for _ in 0..2000 {
            let big_k = 1 + rng.below(20) as usize;
            let b = sample_bridge(big_k, &mut rng).unwrap();
            let ell = rng.below(2 * big_k as u64) as usize;
            let k = 2 + rng.below(4) as usize;
            let r = 1 + rng.below(2) as usize;
            assert_eq!(detect_event(&b, k, r, 1.0), detect_event(&b.reroot(ell), k, r, 1.0));
        }
    }

    #[test]
    fn estimate_matches_enumeration() {
        let exact = exact_event_probability(2, 6, 1, 1.0).unwrap();
        let p = crate::exactlaws::approx(&exact);
        let est = estimate_event_probability(2, 6, 1, 1.0, 20_000, &mut RngStream::new(8)).unwrap();
        assert!((est.p_hat - p).abs() <= 3.0 * est.stderr.max(1e-3), "{} vs {p}", est.p_hat);
        let empty = estimate_event_probability(20, 6, 1, 1.0, 100, &mut RngStream::new(8)).unwrap();
        assert_eq!(empty.hits, 0);
    }
}
