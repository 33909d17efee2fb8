//! Doob-transformed Galton-Watson samplers for the skeleton laws.
//!
//! Tables are inverse-CDF arrays of `f64` built from the offspring law with
//! closed-form normalizers. A table stops once a rigorous bound on the mass it
//! leaves out falls below the tail threshold; drawing a uniform beyond the last
//! entry is reported as an error instead of being silently clamped.

use std::collections::HashMap;

use num_traits::Zero;

use super::tree::{PlaneForest, PlaneTree};
use crate::error::{Error, Result};
use crate::exactlaws::float::{hull_masses_f64, ThetaF64Stream};
use crate::exactlaws::laws::{f_const, g_theta_iter, hull_perimeter_law, pi, pi_f64, theta_law, DEFAULT_TAIL_EPS};
use crate::exactlaws::ExactRational;
use crate::rng::RngStream;

/// Untilted tables are stored up to this length and continued by streaming.
const PLAIN_TABLE_LEN: usize = 1 << 20;
/// Hard limit on the streamed continuation of the untilted law.
const PLAIN_STREAM_CAP: usize = 1 << 31;
const MAX_TABLE_LEN: usize = 1 << 26;

fn f_f64(d: usize) -> f64 {
    let t = 3.0 + 2.0 * d as f64;
    64.0 / 3.0 * t / ((t * t - 1.0) * (t * t - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    /// Weights `theta(c) x^c`.
    Tilted,
    /// Weights `theta(c) c x^(c-1)`.
    Derivative,
}

/// Inverse-CDF table for one offspring distribution.
#[derive(Clone, Debug)]
pub struct OffspringTable {
    cdf: Vec<f64>,
    label: String,
    /// Stream position and running sum after the stored table, for the
    /// untilted law whose tail is too heavy to store.
    continuation: Option<(ThetaF64Stream, f64)>,
}

impl OffspringTable {
    fn build(kind: Kind, x: f64, norm: f64, eps: f64, label: String) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) || !(norm > 0.0) {
            return Err(Error::Domain(format!("bad tilt x={x}")));
        }
        let mut stream = ThetaF64Stream::new();
        let mut cdf = Vec::new();
        // Neumaier-compensated running sum.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        let mut pw_prev = 0.0; // x^(c-1)
        let mut pw = 1.0; // x^c
        for c in 0.. {
            let th = stream.next().expect("infinite stream");
            let w = match kind {
                Kind::Tilted => th * pw,
                Kind::Derivative => th * c as f64 * pw_prev,
            };
            let t = sum + w;
            comp += if sum.abs() >= w.abs() { (sum - t) + w } else { (w - t) + sum };
            sum = t;
            cdf.push((sum + comp) / norm);
            pw_prev = pw;
            pw *= x;
            if x < 1.0 {
                // theta(k) and k theta(k) are nonincreasing for k >= 1, so the
                // geometric series bounds the omitted mass.
                let bound = match kind {
                    Kind::Tilted => th * pw / (1.0 - x),
                    Kind::Derivative => (c as f64 + 1.0) * th * pw_prev / (1.0 - x),
                };
                if x == 0.0 && (c >= 1 || kind == Kind::Tilted) {
                    // Nothing is omitted, so only rounding separates the sum from 1.
                    *cdf.last_mut().expect("non-empty") = 1.0;
                    break;
                }
                if c >= 1 && bound / norm < eps {
                    break;
                }
            } else if 1.0 - cdf[c] < eps || cdf.len() >= PLAIN_TABLE_LEN {
                let total = sum + comp;
                return Ok(OffspringTable { cdf, label, continuation: Some((stream, total)) });
            }
            if cdf.len() >= MAX_TABLE_LEN {
                return Err(Error::Invalid(format!("{label}: table limit reached")));
            }
        }
        Ok(OffspringTable { cdf, label, continuation: None })
    }

    /// Law `theta(c) x^c / g(x)`.
    pub fn tilted(x: f64) -> Result<Self> {
        Self::tilted_eps(x, DEFAULT_TAIL_EPS)
    }

    pub fn tilted_eps(x: f64, eps: f64) -> Result<Self> {
        let norm = if x >= 1.0 { 1.0 } else { g_theta_iter(1, x)? };
        Self::build(Kind::Tilted, x, norm, eps, format!("tilted offspring x={x}"))
    }

    /// Offspring of a vertex whose subtree must die within `d` generations.
    pub fn extinct(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("extinct table needs depth >= 1".into()));
        }
        Self::build(Kind::Tilted, pi_f64(d - 1), pi_f64(d), DEFAULT_TAIL_EPS, format!("extinct offspring d={d}"))
    }

    /// Offspring of a spine vertex `d` generations above the unique survivor.
    pub fn spine(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("spine table needs depth >= 1".into()));
        }
        let norm = f_f64(d) / f_f64(d - 1);
        Self::build(Kind::Derivative, pi_f64(d - 1), norm, DEFAULT_TAIL_EPS, format!("spine offspring d={d}"))
    }

    /// Table from explicit masses (used for perimeter laws).
    pub fn from_masses(masses: &[f64], label: impl Into<String>) -> Self {
        let mut acc = 0.0;
        let cdf = masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        OffspringTable { cdf, label: label.into(), continuation: None }
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn sample_with(&self, u: f64) -> Result<usize> {
        let last = *self.cdf.last().expect("non-empty table");
        if u < last {
            return Ok(self.cdf.partition_point(|&c| c <= u));
        }
        if let Some((stream, total)) = &self.continuation {
            let mut s = stream.clone();
            let mut acc = *total;
            let mut c = self.cdf.len();
            while c < PLAIN_STREAM_CAP {
                acc += s.next().expect("infinite stream");
                if u < acc {
                    return Ok(c);
                }
                c += 1;
            }
        }
        Err(Error::CutoffExceeded { table: self.label.clone(), cutoff: self.cdf.len() - 1 })
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<usize> {
        self.sample_with(rng.uniform())
    }
}

/// Draws from `theta(c) x^c / g(x)`. Builds a fresh table; reuse
/// [`OffspringTable::tilted`] for repeated draws.
pub fn sample_offspring_tilted(x: f64, rng: &mut RngStream) -> Result<usize> {
    OffspringTable::tilted(x)?.sample(rng)
}

/// Whether the hull skeleton is rooted (`mu°`, survivor in the first tree) or
/// uniformly rotated (`mu`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullVariant {
    Rotated,
    Rooted,
}

/// Cache of offspring and perimeter tables shared by repeated draws.
#[derive(Default, Debug, Clone)]
pub struct SkeletonSampler {
    extinct: Vec<Option<OffspringTable>>,
    spine: Vec<Option<OffspringTable>>,
    hull: HashMap<usize, OffspringTable>,
}

impl SkeletonSampler {
    pub fn new() -> Self {
        Self::default()
    }

    fn extinct_table(&mut self, d: usize) -> Result<&OffspringTable> {
        if self.extinct.len() <= d {
            self.extinct.resize(d + 1, None);
        }
        if self.extinct[d].is_none() {
            self.extinct[d] = Some(OffspringTable::extinct(d)?);
        }
        Ok(self.extinct[d].as_ref().expect("just built"))
    }

    fn spine_table(&mut self, d: usize) -> Result<&OffspringTable> {
        if self.spine.len() <= d {
            self.spine.resize(d + 1, None);
        }
        if self.spine[d].is_none() {
            self.spine[d] = Some(OffspringTable::spine(d)?);
        }
        Ok(self.spine[d].as_ref().expect("just built"))
    }

    /// Prepares every table a radius-`r` hull draw needs.
    pub fn warm(&mut self, r: usize) -> Result<()> {
        for d in 1..=r {
            self.extinct_table(d)?;
            self.spine_table(d)?;
        }
        self.hull_table(r)?;
        Ok(())
    }

    pub fn hull_table(&mut self, r: usize) -> Result<&OffspringTable> {
        if !self.hull.contains_key(&r) {
            let masses = hull_masses_f64(r, DEFAULT_TAIL_EPS, MAX_TABLE_LEN);
            self.hull.insert(r, OffspringTable::from_masses(&masses, format!("hull perimeter r={r}")));
        }
        Ok(&self.hull[&r])
    }

    /// GW tree conditioned to have no vertex at generation `m`.
    pub fn extinct_tree(&mut self, m: usize, rng: &mut RngStream) -> Result<PlaneTree> {
        let mut counts = Vec::new();
        self.push_extinct(m, rng, &mut counts)?;
        Ok(PlaneTree::from_child_counts_unchecked(counts))
    }

    fn push_extinct(&mut self, m: usize, rng: &mut RngStream, out: &mut Vec<u32>) -> Result<()> {
        if m == 0 {
            return Err(Error::Invalid("extinction depth must be positive".into()));
        }
        let mut stack = vec![m];
        while let Some(d) = stack.pop() {
            let c = self.extinct_table(d)?.sample(rng)?;
            out.push(c as u32);
            stack.extend(std::iter::repeat(d - 1).take(c));
        }
        Ok(())
    }

    /// GW tree conditioned to have exactly one vertex at generation `m`;
    /// also returns that vertex's depth-first index.
    pub fn spine_tree_marked(&mut self, m: usize, rng: &mut RngStream) -> Result<(PlaneTree, usize)> {
        if m == 0 {
            return Err(Error::Invalid("spine depth must be positive".into()));
        }
        let mut counts = Vec::new();
        let mut marked = 0;
        // (remaining depth, on spine)
        let mut stack = vec![(m, true)];
        while let Some((d, on_spine)) = stack.pop() {
            if !on_spine {
                let c = self.extinct_table(d)?.sample(rng)?;
                counts.push(c as u32);
                stack.extend(std::iter::repeat((d - 1, false)).take(c));
                continue;
            }
            if d == 0 {
                marked = counts.len();
                counts.push(0);
                continue;
            }
            let c = self.spine_table(d)?.sample(rng)?;
            let j = rng.below(c as u64) as usize;
            counts.push(c as u32);
            // Push in reverse so the first child is explored first.
            for i in (0..c).rev() {
                stack.push((d - 1, i == j));
            }
        }
        Ok((PlaneTree::from_child_counts_unchecked(counts), marked))
    }

    pub fn spine_tree(&mut self, m: usize, rng: &mut RngStream) -> Result<PlaneTree> {
        Ok(self.spine_tree_marked(m, rng)?.0)
    }

    /// Skeleton of the radius-`r` truncated hull.
    pub fn hull_skeleton(&mut self, r: usize, variant: HullVariant, rng: &mut RngStream) -> Result<PlaneForest> {
        if r == 0 {
            return Err(Error::Invalid("radius must be positive".into()));
        }
        let q = self.hull_table(r)?.sample(rng)?;
        let position = match variant {
            HullVariant::Rooted => 0,
            HullVariant::Rotated => rng.below(q as u64) as usize,
        };
        let mut trees = Vec::with_capacity(q);
        let mut distinguished = None;
        for i in 0..q {
            if i == position {
                let (t, v) = self.spine_tree_marked(r, rng)?;
                if variant == HullVariant::Rooted {
                    distinguished = Some((0, v));
                }
                trees.push(t);
            } else {
                trees.push(self.extinct_tree(r, rng)?);
            }
        }
        Ok(PlaneForest { height_cap: r, trees, distinguished })
    }

    /// Skeleton of the annulus between radii `u` and `w`: a rotated hull
    /// skeleton of radius `w` truncated at generation `w - u`.
    pub fn annulus_skeleton(&mut self, u: usize, w: usize, rng: &mut RngStream) -> Result<PlaneForest> {
        if u >= w {
            return Err(Error::Invalid(format!("need u < w, got u={u}, w={w}")));
        }
        let f = self.hull_skeleton(w, HullVariant::Rotated, rng)?;
        f.truncate(w - u)
    }
}

pub fn sample_extinct_tree(m: usize, rng: &mut RngStream) -> Result<PlaneTree> {
    SkeletonSampler::new().extinct_tree(m, rng)
}

pub fn sample_spine_tree(m: usize, rng: &mut RngStream) -> Result<PlaneTree> {
    SkeletonSampler::new().spine_tree(m, rng)
}

/// Hull skeleton under the rotated law `mu_{r,1}`.
pub fn sample_hull_skeleton(r: usize, rng: &mut RngStream) -> Result<PlaneForest> {
    SkeletonSampler::new().hull_skeleton(r, HullVariant::Rotated, rng)
}

/// Hull skeleton under the rooted law `mu°_{r,1}`.
pub fn sample_rooted_hull_skeleton(r: usize, rng: &mut RngStream) -> Result<PlaneForest> {
    SkeletonSampler::new().hull_skeleton(r, HullVariant::Rooted, rng)
}

pub fn sample_annulus_skeleton(u: usize, w: usize, rng: &mut RngStream) -> Result<PlaneForest> {
    SkeletonSampler::new().annulus_skeleton(u, w, rng)
}

/// Exact pmfs of the samplers, for oracle comparisons.
pub mod exact {
    use super::*;

    pub fn extinct_pmf(d: usize, c: usize, theta: &[ExactRational]) -> ExactRational {
        theta[c].clone() * num_traits::pow(pi(d - 1), c) / pi(d)
    }

    pub fn spine_pmf(d: usize, c: usize, theta: &[ExactRational]) -> ExactRational {
        if c == 0 {
            return ExactRational::zero();
        }
        let norm = f_const(d) / f_const(d - 1);
        theta[c].clone() * ExactRational::from_integer(c.into()) * num_traits::pow(pi(d - 1), c - 1) / norm
    }

    /// Probability that [`sample_hull_skeleton`] returns `f`, computed from
    /// the exact laws the tables approximate. `f` must have `p = 1`.
    pub fn rotated_hull_probability(f: &PlaneForest) -> Result<ExactRational> {
        let r = f.height_cap;
        let max_c = f.trees.iter().flat_map(|t| t.child_counts().iter().copied()).max().unwrap_or(0) as usize;
        let theta = theta_law(max_c.max(1))?.masses().to_vec();
        let hull = hull_perimeter_law(r, 1e-6)?;
        let q = f.q();
        let mut hull_mass = hull.mass(q);
        if q >= hull.masses().len() {
            let mut s = crate::exactlaws::laws::HullStream::new(r)?;
            while s.advance() < q {}
            hull_mass = s.mass();
        }
        let mut prob = hull_mass / ExactRational::from_integer(q.into());
        for t in &f.trees {
            let depths = t.depths();
            let children = t.children();
            // Mark ancestors of the generation-r vertex, if any.
            let mut on_spine = vec![false; t.len()];
            let mut parent = vec![usize::MAX; t.len()];
            for (v, ch) in children.iter().enumerate() {
                for &c in ch {
                    parent[c] = v;
                }
            }
            if let Some(leaf) = depths.iter().position(|&d| d == r) {
                let mut v = leaf;
                while v != usize::MAX {
                    on_spine[v] = true;
                    v = parent[v];
                }
            }
            for v in 0..t.len() {
                if depths[v] >= r {
                    continue;
                }
                let d = r - depths[v];
                let c = t.child_counts()[v] as usize;
                prob *= if on_spine[v] {
                    spine_pmf(d, c, &theta) / ExactRational::from_integer(c.into())
                } else {
                    extinct_pmf(d, c, &theta)
                };
            }
        }
        Ok(prob)
    }

    /// `mu_{r,p}` weight `(h(q)/h(p)) prod theta(c_v)` over vertices below the cap.
    pub fn mu_weight(f: &PlaneForest) -> Result<ExactRational> {
        let q = f.q();
        let p = f.p();
        let h = crate::exactlaws::laws::h_ratios(q.max(p))?;
        let max_c = f.trees.iter().flat_map(|t| t.child_counts().iter().copied()).max().unwrap_or(0) as usize;
        let theta = theta_law(max_c.max(1))?.masses().to_vec();
        let mut w = &h[q - 1] / &h[p - 1];
        for t in &f.trees {
            for (d, &c) in t.depths().iter().zip(t.child_counts()) {
                if *d < f.height_cap {
                    w *= &theta[c as usize];
                }
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaws::series::{rat, to_f64};
    use crate::skeleton::count_max_height_trees;

    fn within_3sigma(hits: usize, n: usize, p: f64) -> bool {
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        (hits as f64 - mean).abs() <= 3.0 * sd
    }

    /// All plane trees with exactly `n` vertices.
    fn trees_of_size(n: usize) -> Vec<Vec<u32>> {
        fn rec(open: i64, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if left == 0 {
                if open == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            if open <= 0 {
                return;
            }
            for c in 0..left as u32 {
                cur.push(c);
                rec(open + c as i64 - 1, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(1, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn theta_monotone_tail() {
        let t: Vec<f64> = ThetaF64Stream::new().take(20_000).collect();
        for k in 1..t.len() - 1 {
            assert!(t[k + 1] <= t[k]);
            assert!((k + 1) as f64 * t[k + 1] <= k as f64 * t[k]);
        }
    }

    #[test]
    fn tilted_tables() {
        let t = OffspringTable::tilted(2.0 / 3.0).unwrap();
        assert!((t.cdf()[0] - 0.8).abs() < 1e-14);
        let zero = OffspringTable::tilted(0.0).unwrap();
        assert_eq!(zero.cdf(), &[1.0]);
        let mut rng = RngStream::new(3);
        for _ in 0..100 {
            assert_eq!(zero.sample(&mut rng).unwrap(), 0);
        }
        let spine1 = OffspringTable::spine(1).unwrap();
        assert!((spine1.cdf()[1] - 1.0).abs() < 1e-14);
        assert_eq!(spine1.cdf()[0], 0.0);
    }

    #[test]
    fn plain_table_streams_past_the_stored_part() {
        let t = OffspringTable::tilted(1.0).unwrap();
        let last = *t.cdf().last().unwrap();
        let c = t.sample_with(last + (1.0 - last) / 2.0).unwrap();
        assert!(c >= t.len());
    }

    #[test]
    fn extinct_and_spine_frequencies() {
        let mut s = SkeletonSampler::new();
        let mut rng = RngStream::new(11);
        let n = 100_000;
        let single = (0..n).filter(|_| s.extinct_tree(2, &mut rng).unwrap().len() == 1).count();
        assert!(within_3sigma(single, n, 0.8), "{single}");
        let one_child = (0..n).filter(|_| s.spine_tree(2, &mut rng).unwrap().child_counts()[0] == 1).count();
        assert!(within_3sigma(one_child, n, 100.0 / 189.0), "{one_child}");
        for _ in 0..10_000 {
            let t = s.spine_tree(5, &mut rng).unwrap();
            assert_eq!(t.population(5), 1);
            assert!(t.height() == 5);
        }
        assert_eq!(s.extinct_tree(1, &mut rng).unwrap(), PlaneTree::leaf());
        assert_eq!(s.spine_tree(1, &mut rng).unwrap().child_counts(), &[1, 0]);
    }

    #[test]
    fn hull_skeleton_shape() {
        let mut s = SkeletonSampler::new();
        let mut rng = RngStream::new(5);
        let n = 100_000;
        let mut q1 = 0;
        for _ in 0..n {
            let f = s.hull_skeleton(1, HullVariant::Rotated, &mut rng).unwrap();
            q1 += (f.q() == 1) as usize;
        }
        assert!(within_3sigma(q1, n, 5.0 / 27.0), "{q1}");
        for _ in 0..200 {
            let f = s.hull_skeleton(4, HullVariant::Rooted, &mut rng).unwrap();
            f.validate().unwrap();
            assert_eq!(f.p(), 1);
            assert!(f.distinguished.is_some());
            let g = s.hull_skeleton(4, HullVariant::Rotated, &mut rng).unwrap();
            g.validate().unwrap();
            assert_eq!(count_max_height_trees(&g), 1);
        }
    }

    #[test]
    fn determinism_and_truncation() {
        let a = sample_annulus_skeleton(0, 6, &mut RngStream::new(9)).unwrap();
        let b = sample_hull_skeleton(6, &mut RngStream::new(9)).unwrap();
        assert_eq!(a, b);
        let mut s = SkeletonSampler::new();
        let mut rng = RngStream::new(10);
        for _ in 0..100 {
            let f = s.hull_skeleton(7, HullVariant::Rotated, &mut rng).unwrap();
            let once = f.truncate(3).unwrap();
            let twice = f.truncate(5).unwrap().truncate(3).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn sampler_law_equals_mu_weight_exactly() {
        use super::super::tree::PlaneForest;
        for r in 1..=2usize {
            let mut checked = 0;
            let mut pieces: Vec<Vec<u32>> = Vec::new();
            for n in 1..=6 {
                pieces.extend(trees_of_size(n));
            }
            let candidates: Vec<PlaneTree> = pieces
                .into_iter()
                .map(|c| PlaneTree::from_child_counts(c).unwrap())
                .filter(|t| t.height() <= r && t.depths().iter().zip(t.child_counts()).all(|(d, &c)| *d < r || c == 0))
                .collect();
            // Forests of up to 3 trees, total size <= 6, exactly one vertex at the cap.
            let mut stack: Vec<Vec<usize>> = (0..candidates.len()).map(|i| vec![i]).collect();
            while let Some(ix) = stack.pop() {
                let size: usize = ix.iter().map(|&i| candidates[i].len()).sum();
                let trees: Vec<_> = ix.iter().map(|&i| candidates[i].clone()).collect();
                let f = PlaneForest { height_cap: r, trees, distinguished: None };
                if f.p() == 1 {
                    let sampler = exact::rotated_hull_probability(&f).unwrap();
                    let mu = exact::mu_weight(&f).unwrap();
                    assert_eq!(sampler, mu, "{:?}", f.trees);
                    checked += 1;
                }
                if ix.len() < 3 {
                    for j in 0..candidates.len() {
                        if size + candidates[j].len() <= 6 {
                            let mut next = ix.clone();
                            next.push(j);
                            stack.push(next);
                        }
                    }
                }
            }
            assert!(checked >= 3, "r={r}: {checked}");
        }
        // Spot value: the single-edge forest at r = 1 has weight theta(1) = 5/27.
        let f = PlaneForest::new(1, vec![PlaneTree::from_child_counts(vec![1, 0]).unwrap()], None).unwrap();
        assert_eq!(exact::mu_weight(&f).unwrap(), rat(5, 27));
        assert!((to_f64(&exact::rotated_hull_probability(&f).unwrap()) - 5.0 / 27.0).abs() < 1e-15);
    }
}
