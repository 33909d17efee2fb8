//! Downward geodesics and the separating cycle built from them.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::assemble::ForestLayers;
use super::cylinder::CylinderMap;
use crate::error::{Error, Result};
use crate::exactlaws::laws::{approx, n_trees_law};
use crate::exactlaws::series::{int, rat};
use crate::exactlaws::{pi, ExactRational};
use crate::rng::RngStream;
use crate::skeleton::{count_max_height_trees, PlaneForest};

/// A vertex of the layered cylinder: `(level, index)`, where index `i` on
/// level `k` is the left endpoint of the i-th clockwise edge of that layer.
pub type LayerVertex = (usize, usize);

/// Closed walk made of left and right downward geodesics, `2h` edges per
/// tree reaching the height cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingCycle {
    /// Consecutive vertices; the walk closes from the last back to the first.
    pub vertices: Vec<LayerVertex>,
    pub n: usize,
    pub h: usize,
}

impl SeparatingCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex ids on an assembled map carrying layer bookkeeping.
    pub fn map_vertices(&self, c: &CylinderMap) -> Result<Vec<usize>> {
        if c.layers.len() != self.h + 1 {
            return Err(Error::Invalid("map lacks layer bookkeeping for this height".into()));
        }
        Ok(self.vertices.iter().map(|&(k, i)| c.layers[k].vertices[i]).collect())
    }

    /// Whether consecutive vertices are adjacent in the map.
    pub fn is_edge_path(&self, c: &CylinderMap) -> Result<bool> {
        let vs = self.map_vertices(c)?;
        let edges = edge_set(c);
        Ok((0..vs.len()).all(|j| edges.contains(&(vs[j], vs[(j + 1) % vs.len()]))))
    }

    /// Whether removing the cycle's vertices leaves no path from the bottom
    /// cycle to the top cycle.
    pub fn separates(&self, c: &CylinderMap) -> Result<bool> {
        let blocked: HashSet<usize> = self.map_vertices(c)?.into_iter().collect();
        Ok(!connects_boundaries(c, &blocked))
    }
}

fn edge_set(c: &CylinderMap) -> HashSet<(usize, usize)> {
    let (vertex, _) = c.map.vertices();
    (0..c.map.num_darts()).map(|d| (vertex[d], vertex[c.map.twin[d]])).collect()
}

/// Breadth-first search from the bottom vertices avoiding `blocked`.
pub fn connects_boundaries(c: &CylinderMap, blocked: &HashSet<usize>) -> bool {
    let (vertex, nv) = c.map.vertices();
    let mut adj = vec![Vec::new(); nv];
    for d in 0..c.map.num_darts() {
        adj[vertex[d]].push(vertex[c.map.twin[d]]);
    }
    let top: HashSet<usize> = c.top_cycle.iter().map(|&d| vertex[d]).collect();
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::new();
    for &d in &c.bottom_cycle {
        let v = vertex[d];
        if !blocked.contains(&v) && !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if top.contains(&v) {
            return true;
        }
        for &w in &adj[v] {
            if !seen[w] && !blocked.contains(&w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Follows left downward edges from `(k, i)` to the bottom.
fn descend_left(lay: &ForestLayers, h: usize, mut k: usize, mut i: usize, path: &mut Vec<LayerVertex>) {
    while k > 0 {
        let g = h - k;
        i = lay.child_start[g][i] % lay.gens[g + 1].len();
        k -= 1;
        path.push((k, i));
    }
}

/// Left and right downward geodesics from the first vertex of the root edge
/// of tree `tree_index`, each listed from the top layer down to the bottom.
///
/// When a layer has a single edge, or a slot is empty, the left and right
/// downward edges are read as the two sides of a double edge.
pub fn downward_geodesics(f: &PlaneForest, tree_index: usize) -> Result<(Vec<LayerVertex>, Vec<LayerVertex>)> {
    let t = f.trees.get(tree_index).ok_or_else(|| Error::Invalid(format!("no tree {tree_index}")))?;
    let h = f.height_cap;
    if t.population(h) == 0 {
        return Err(Error::TreeNotMaximal(tree_index));
    }
    let lay = ForestLayers::new(f);
    let mut left = vec![(h, tree_index)];
    descend_left(&lay, h, h, tree_index, &mut left);
    let first = lay.child_start[0][tree_index + 1] % lay.gens[1].len();
    let mut right = vec![(h, tree_index), (h - 1, first)];
    descend_left(&lay, h, h - 1, first, &mut right);
    Ok((left, right))
}

/// Concatenates the geodesic pairs of all trees reaching the height cap.
pub fn krikun_cycle(f: &PlaneForest) -> Result<SeparatingCycle> {
    let h = f.height_cap;
    let mut vertices = Vec::new();
    let mut n = 0;
    let mut last_bottom = None;
    for ti in 0..f.q() {
        if f.trees[ti].population(h) == 0 {
            continue;
        }
        n += 1;
        let (left, right) = downward_geodesics(f, ti)?;
        // Trees in between have no descendants at the bottom, so each right
        // geodesic lands where the next left one starts.
        debug_assert!(last_bottom.is_none_or(|b| b == left[h]));
        vertices.extend(left.iter().rev());
        vertices.extend(&right[1..h]);
        last_bottom = Some(right[h]);
    }
    debug_assert_eq!(last_bottom, vertices.first().copied());
    debug_assert_eq!(n, count_max_height_trees(f));
    Ok(SeparatingCycle { vertices, n, h })
}

/// Empirical tail of `2N`, with `N` the number of ancestors at distance `R`
/// of the boundary at distance `2R`.
#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    #[serde(rename = "R")]
    pub r: usize,
    pub trials: usize,
    pub mean: f64,
    pub p50: f64,
    pub p95: f64,
    pub max: f64,
    pub seed: u64,
    /// Fraction of draws with `N = 1`.
    #[serde(skip)]
    pub p_one: f64,
    /// Exact `P(N = 1)`.
    #[serde(skip)]
    pub p_one_exact: f64,
    /// `(a, fraction of draws with 2N >= a)`.
    #[serde(skip)]
    pub tail: Vec<(usize, f64)>,
    /// `(pi_{2R} - pi_R) / (1 - pi_R)`.
    #[serde(skip)]
    pub ratio: ExactRational,
    #[serde(skip)]
    pub ratio_ok: bool,
}

/// Draws `N_{R,2R}` from its exact law and summarises `2N`.
pub fn cycle_length_tail(r: usize, trials: usize, rng: &mut RngStream) -> Result<TailReport> {
    if r == 0 || trials == 0 {
        return Err(Error::Invalid("need R >= 1 and at least one trial".into()));
    }
    let seed = rng.seed();
    let (_, _, table) = n_trees_law(r, 2 * r)?;
    let cdf = table.cdf_f64();
    let mut draws: Vec<usize> = Vec::with_capacity(trials);
    for _ in 0..trials {
        let u = rng.uniform();
        let k = cdf.partition_point(|&c| c <= u);
        if k >= cdf.len() {
            return Err(Error::CutoffExceeded { table: table.description().to_string(), cutoff: table.cutoff() });
        }
        draws.push(2 * k);
    }
    draws.sort_unstable();
    let quantile = |q: f64| draws[((q * trials as f64).ceil() as usize).clamp(1, trials) - 1] as f64;
    let tail = [2usize, 4, 8, 16, 32]
        .iter()
        .map(|&a| (a, draws.iter().filter(|&&x| x >= a).count() as f64 / trials as f64))
        .collect();
    let ratio = cycle_ratio(r);
    let ratio_ok = ratio <= rat(3, 4);
    Ok(TailReport {
        r,
        trials,
        mean: draws.iter().sum::<usize>() as f64 / trials as f64,
        p50: quantile(0.5),
        p95: quantile(0.95),
        max: *draws.last().unwrap() as f64,
        seed,
        p_one: draws.iter().filter(|&&x| x == 2).count() as f64 / trials as f64,
        p_one_exact: approx(&table.mass(1)),
        tail,
        ratio,
        ratio_ok,
    })
}

/// Exact `(pi_{2R} - pi_R) / (1 - pi_R)`.
pub fn cycle_ratio(r: usize) -> ExactRational {
    let pr = pi(r);
    (pi(2 * r) - &pr) / (int(1) - pr)
}

/// Exact `P(2N_{R,2R} >= a)` up to the table's tail bound.
pub fn cycle_tail_exact(r: usize, a: usize) -> Result<f64> {
    let (_, _, table) = n_trees_law(r, 2 * r)?;
    let below: ExactRational = table.masses().iter().take(a.div_ceil(2)).sum();
    Ok(approx(&(int(1) - below)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{assemble, FillLibrary};
    use crate::skeleton::{PlaneTree, SkeletonSampler};

    fn forest(h: usize, trees: &[&[u32]]) -> PlaneForest {
        let trees = trees.iter().map(|c| PlaneTree::from_child_counts(c.to_vec()).unwrap()).collect();
        PlaneForest::new(h, trees, None).unwrap()
    }

    #[test]
    fn height_one_paths_are_single_edges() {
        let f = forest(1, &[&[2, 0, 0], &[0], &[1, 0]]);
        let (l, r) = downward_geodesics(&f, 0).unwrap();
        assert_eq!(l, vec![(1, 0), (0, 0)]);
        assert_eq!(r, vec![(1, 0), (0, 2)]);
        assert!(matches!(downward_geodesics(&f, 1), Err(Error::TreeNotMaximal(1))));
    }

    #[test]
    fn lengths_follow_formula() {
        let f = forest(4, &[&[1, 1, 1, 1, 0]]);
        assert_eq!(krikun_cycle(&f).unwrap().len(), 8);
        let f = forest(2, &[&[1, 1, 0], &[0], &[2, 1, 0, 0], &[1, 1, 0]]);
        assert_eq!(krikun_cycle(&f).unwrap().len(), 12);
    }

    #[test]
    fn cycles_separate_assembled_maps() {
        let lib = FillLibrary::new().unwrap();
        let mut sampler = SkeletonSampler::new();
        let mut rng = RngStream::new(5);
        let mut tested = 0;
        while tested < 100 {
            let r = 2 + rng.below(4) as usize;
            let f = sampler.annulus_skeleton(1, r, &mut rng).unwrap();
            if f.inner_size() + f.p() > 40 {
                continue;
            }
            tested += 1;
            let c = assemble(&f, &lib.fills_for(&f, &mut rng)).unwrap();
            let cyc = krikun_cycle(&f).unwrap();
            assert_eq!(cyc.len(), 2 * cyc.n * cyc.h);
            assert!(cyc.is_edge_path(&c).unwrap());
            assert!(cyc.separates(&c).unwrap());
            let lay = ForestLayers::new(&f);
            let p = f.p();
            for ti in 0..f.q() {
                let Ok((l, rt)) = downward_geodesics(&f, ti) else { continue };
                let (a, b) = (l[f.height_cap].1, rt[f.height_cap].1);
                let span = (b + p - a) % p;
                let pop = f.trees[ti].population(f.height_cap);
                assert_eq!(if span == 0 { p } else { span }, pop);
                assert_eq!(lay.gens[f.height_cap][a].0, ti);
            }
        }
    }

    #[test]
    fn ratio_values() {
        assert_eq!(cycle_ratio(1), rat(1, 2));
        for r in [2, 5, 20, 100] {
            assert!(cycle_ratio(r) <= rat(3, 4));
        }
    }

    #[test]
    fn tail_report_is_consistent() {
        let mut rng = RngStream::new(1);
        let rep = cycle_length_tail(5, 2000, &mut rng).unwrap();
        assert!(rep.ratio_ok);
        assert!(rep.p50 <= rep.p95 && rep.p95 <= rep.max);
        let exact = cycle_tail_exact(5, 8).unwrap();
        let emp = rep.tail.iter().find(|t| t.0 == 8).unwrap().1;
        assert!((exact - emp).abs() < 0.05, "{exact} vs {emp}");
    }
}
