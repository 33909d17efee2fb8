//! Discrete bridges, the cactus pseudo-distance and a clustering event.

mod event;

pub use event::{
    brute_force_event, detect_event, estimate_event_probability, exact_event_probability, spacing, EventEstimate,
};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A cyclic bridge `b(0..=2K)` with `b(0) = b(2K) = 0` and unit steps,
/// together with a sparse table answering range minima in O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteBridge {
    values: Vec<i64>,
    sparse: Vec<Vec<i64>>,
}

impl DiscreteBridge {
    /// Builds from the values `b(0), ..., b(2K)`.
    pub fn from_values(values: Vec<i64>) -> Result<Self> {
        let n = values.len();
        if n < 3 || n % 2 == 0 {
            return Err(Error::Invalid("a bridge of length 2K has 2K+1 values with K >= 1".into()));
        }
        if values[0] != 0 || values[n - 1] != 0 {
            return Err(Error::Invalid("bridge must start and end at 0".into()));
        }
        if values.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::Invalid("bridge steps must be +1 or -1".into()));
        }
        let base: Vec<i64> = values[..n - 1].to_vec();
        let mut sparse = vec![base];
        let mut width = 1;
        while 2 * width <= n - 1 {
            let prev = sparse.last().unwrap();
            let row = (0..prev.len() - width).map(|i| prev[i].min(prev[i + width])).collect();
            sparse.push(row);
            width *= 2;
        }
        Ok(Self { values, sparse })
    }

    pub fn from_steps(steps: &[i8]) -> Result<Self> {
        let mut values = Vec::with_capacity(steps.len() + 1);
        values.push(0);
        for &s in steps {
            values.push(values.last().unwrap() + s as i64);
        }
        Self::from_values(values)
    }

    /// `K`, half the length.
    pub fn half_len(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    /// Number of positions `2K`.
    pub fn positions(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i64 {
        self.values[i]
    }

    fn linear_min(&self, i: usize, j: usize) -> i64 {
        let level = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let row = &self.sparse[level];
        row[i].min(row[j + 1 - (1 << level)])
    }

    /// Minimum over the cyclic arc `[i, j]`, which wraps past `2K - 1`
    /// when `i > j`.
    pub fn arc_min(&self, i: usize, j: usize) -> i64 {
        if i <= j {
            self.linear_min(i, j)
        } else {
            self.linear_min(i, self.positions() - 1).min(self.linear_min(0, j))
        }
    }

    /// `b(i) + b(j) - 2 max(min over [i, j], min over [j, i])`.
    pub fn cactus_distance(&self, i: usize, j: usize) -> u64 {
        let m = self.arc_min(i, j).max(self.arc_min(j, i));
        (self.values[i] + self.values[j] - 2 * m) as u64
    }

    /// The bridge read from position `ell`: `b(ell + i) - b(ell)`.
    pub fn reroot(&self, ell: usize) -> Self {
        let n = self.positions();
        let shift = self.values[ell % n];
        let values = (0..=n).map(|i| self.values[(ell + i) % n] - shift).collect();
        Self::from_values(values).expect("rerooting preserves bridges")
    }
}

/// Uniform bridge of length `2K`: a uniformly shuffled sequence of `K`
/// up-steps and `K` down-steps.
pub fn sample_bridge(k: usize, rng: &mut RngStream) -> Result<DiscreteBridge> {
    if k == 0 {
        return Err(Error::Invalid("K must be positive".into()));
    }
    let mut steps: Vec<i8> = (0..2 * k).map(|i| if i < k { 1 } else { -1 }).collect();
    for i in (1..steps.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        steps.swap(i, j);
    }
    DiscreteBridge::from_steps(&steps)
}

pub fn cactus_distance(b: &DiscreteBridge, i: usize, j: usize) -> u64 {
    b.cactus_distance(i, j)
}

pub fn reroot_bridge(b: &DiscreteBridge, ell: usize) -> DiscreteBridge {
    b.reroot(ell)
}

/// Every bridge of length `2K`, in lexicographic order of steps (down first).
pub fn all_bridges(k: usize) -> Vec<DiscreteBridge> {
    fn rec(up: usize, down: usize, steps: &mut Vec<i8>, out: &mut Vec<DiscreteBridge>) {
        if up == 0 && down == 0 {
            out.push(DiscreteBridge::from_steps(steps).expect("balanced steps"));
            return;
        }
        for (s, u, d) in [(-1i8, up, down.wrapping_sub(1)), (1, up.wrapping_sub(1), down)] {
            if u <= up && d <= down {
                steps.push(s);
                rec(u, d, steps, out);
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::with_capacity(2 * k), &mut out);
    out
}
