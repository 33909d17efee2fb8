//! Recovering the forest and slot fillings from a cylinder.

use std::collections::VecDeque;

use super::assemble::{Fills, SlotFill};
use super::cylinder::CylinderMap;
use super::map::{Map, MapBuilder};
use super::truncated::TruncatedQuad;
use crate::error::{Error, Result};
use crate::skeleton::{PlaneForest, PlaneTree};

/// The outermost cycle of `r`-diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalCycle {
    pub level: usize,
    /// Faces carrying the diagonals, sorted.
    pub faces: Vec<usize>,
    /// Vertices of the cycle, sorted.
    pub vertices: Vec<usize>,
    /// For each face, the dart leaving the first label-`r` corner towards
    /// label `r + 1`, and the dart leaving the other label-`r` corner.
    pub corners: Vec<(usize, usize)>,
}

/// Corner darts `(a, c)` of an `r`-simple face, whose tail labels read
/// `r, r+1, r, r-1` from `a`.
fn simple_corners(m: &Map, vertex: &[usize], labels: &[usize], d: usize, r: usize) -> Option<(usize, usize)> {
    let f = m.face_darts(d);
    if f.len() != 4 || r == 0 {
        return None;
    }
    let l: Vec<usize> = f.iter().map(|&x| labels[vertex[x]]).collect();
    (0..4)
        .find(|&s| l[s] == r && l[(s + 1) % 4] == r + 1 && l[(s + 2) % 4] == r && l[(s + 3) % 4] == r - 1)
        .map(|s| (f[s], f[(s + 2) % 4]))
}

/// Finds the unique simple cycle of `r`-diagonals whose outer side, the
/// side of the face containing `outer`, holds no `r`-diagonal.
pub fn extract_maximal_cycle(m: &Map, labels: &[usize], outer: usize, r: usize) -> Result<MaximalCycle> {
    let (vertex, _) = m.vertices();
    let (face, nf) = m.faces();
    if labels.iter().all(|&l| l <= r) {
        return Err(Error::NoCycle(r));
    }
    // Node of a dart: its face, or the lower half of a split face.
    let mut corners = vec![None; nf];
    let mut node = face.clone();
    for d in 0..m.num_darts() {
        if corners[face[d]].is_none() {
            if let Some((a, c)) = simple_corners(m, &vertex, labels, d, r) {
                corners[face[d]] = Some((a, c));
                for x in [c, m.phi[c]] {
                    node[x] = nf + face[d];
                }
            }
        }
    }
    let mut reached = vec![false; 2 * nf];
    let mut queue = VecDeque::from([node[outer]]);
    reached[node[outer]] = true;
    let mut darts_of: Vec<Vec<usize>> = vec![Vec::new(); 2 * nf];
    for d in 0..m.num_darts() {
        darts_of[node[d]].push(d);
    }
    while let Some(n) = queue.pop_front() {
        for &d in &darts_of[n] {
            let t = node[m.twin[d]];
            if !reached[t] {
                reached[t] = true;
                queue.push_back(t);
            }
        }
    }
    let mut out = MaximalCycle { level: r, faces: Vec::new(), vertices: Vec::new(), corners: Vec::new() };
    for f in 0..nf {
        if let Some((a, c)) = corners[f] {
            if reached[f] && !reached[nf + f] {
                out.faces.push(f);
                out.corners.push((a, c));
                out.vertices.extend([vertex[a], vertex[c]]);
            }
        }
    }
    out.vertices.sort_unstable();
    out.vertices.dedup();
    if out.faces.is_empty() {
        return Err(Error::NoCycle(r));
    }
    if out.vertices.len() != out.faces.len() {
        return Err(Error::InvariantViolation(format!("cycle of {r}-diagonals is not simple")));
    }
    Ok(out)
}

impl CylinderMap {
    /// Maximal cycle of `r`-diagonals seen from the top face.
    pub fn maximal_cycle(&self, r: usize) -> Result<MaximalCycle> {
        extract_maximal_cycle(&self.map, &self.labels(), self.top_cycle[0], r)
    }
}

/// Inverse of [`super::assemble`]: reads off the forest of downward
/// triangles and the content of each slot.
pub fn decompose(c: &CylinderMap) -> Result<(PlaneForest, Fills)> {
    let bad = |m: &str| Error::InvariantViolation(m.to_string());
    c.validate()?;
    let h = c.height;
    let mut m = c.map.clone();
    let nd0 = m.num_darts();

    // Draw the diagonals of every layer strictly inside.
    let mut is_top = vec![false; nd0];
    for k in 1..h {
        let cyc = c.maximal_cycle(k)?;
        for &(a, cc) in &cyc.corners {
            let (n1, _) = m.split_face(a, cc);
            is_top.resize(m.num_darts(), false);
            is_top[n1] = true;
        }
    }
    is_top.resize(m.num_darts(), false);
    let top_tris: Vec<usize> = c.top_cycle.iter().map(|&d| m.twin[d]).collect();
    for &d in &top_tris {
        is_top[d] = true;
    }
    let nd = m.num_darts();
    let mut wall = vec![false; nd];
    let mut is_bottom = vec![false; nd];
    for &d in &c.bottom_cycle {
        is_bottom[d] = true;
        wall[d] = true;
        wall[m.twin[d]] = true;
    }
    for d in 0..nd {
        if is_top[d] {
            if m.face_degree(d) != 3 {
                return Err(bad("downward face is not a triangle"));
            }
            for x in m.face_darts(d) {
                wall[x] = true;
                wall[m.twin[x]] = true;
            }
        }
    }
    let (face, nf) = m.faces();
    let mut covered = vec![false; nf];
    covered[face[c.top_cycle[0]]] = true;
    covered[face[m.twin[c.bottom_cycle[0]]]] = true;

    // Generation g holds the tops of layer h - g, clockwise.
    let mut gens: Vec<Vec<usize>> = vec![top_tris];
    let mut child_counts: Vec<Vec<usize>> = Vec::new();
    let mut fills: Vec<Vec<TruncatedQuad>> = Vec::new();
    let mut bottom_order = Vec::new();
    for k in (1..=h).rev() {
        let deltas = gens.last().unwrap().clone();
        let n = deltas.len();
        let mut next_gen = Vec::new();
        let mut counts = Vec::with_capacity(n);
        let mut level_fills = Vec::with_capacity(n);
        for i in 0..n {
            covered[face[deltas[i]]] = true;
            let prev_right = m.phi[m.phi[deltas[(i + n - 1) % n]]];
            let cur_left = m.phi[deltas[i]];
            let s = m.twin[prev_right];
            if s == cur_left {
                counts.push(0);
                level_fills.push(TruncatedQuad::unit());
                continue;
            }
            let z = m.twin[cur_left];
            let mut hs = Vec::new();
            let mut x = m.phi[s];
            let mut steps = 0;
            loop {
                while !wall[x] {
                    x = m.phi[m.twin[x]];
                    steps += 1;
                    if steps > 2 * nd {
                        return Err(bad("slot walk does not close"));
                    }
                }
                if x == z {
                    break;
                }
                let below = m.twin[x];
                if k > 1 && is_top[below] && below < nd && !is_bottom[x] {
                    next_gen.push(below);
                } else if k == 1 && is_bottom[x] {
                    bottom_order.push(x);
                } else {
                    return Err(bad("slot boundary leaves the layer structure"));
                }
                hs.push(x);
                x = m.phi[x];
            }
            counts.push(hs.len());
            level_fills.push(extract_fill(&m, &wall, &face, &mut covered, s, &hs, z)?);
        }
        child_counts.push(counts);
        fills.push(level_fills);
        if k > 1 {
            gens.push(next_gen);
        }
    }
    if covered.iter().any(|&x| !x) {
        return Err(bad("faces outside the downward triangles and slots"));
    }
    if bottom_order.len() != c.p() {
        return Err(bad("bottom edges not all reached"));
    }
    if gens.iter().enumerate().skip(1).any(|(g, v)| v.len() != child_counts[g - 1].iter().sum::<usize>()) {
        return Err(bad("layer sizes disagree"));
    }

    // Turn the generation lists into depth-first plane trees.
    let mut starts: Vec<Vec<usize>> = child_counts
        .iter()
        .map(|cs| {
            let mut acc = vec![0];
            for &x in cs {
                acc.push(acc.last().unwrap() + x);
            }
            acc
        })
        .collect();
    starts.push(Vec::new());
    let mut trees = Vec::new();
    let mut out_fills = Fills::new();
    let mut bottom_key = vec![(0, 0); c.p()];
    for root in 0..gens[0].len() {
        let mut cc = Vec::new();
        let mut stack = vec![(0usize, root)];
        while let Some((g, i)) = stack.pop() {
            let idx = cc.len();
            if g == h {
                cc.push(0);
                bottom_key[i] = (root, idx);
                continue;
            }
            cc.push(child_counts[g][i] as u32);
            out_fills.insert((root, idx), SlotFill::Explicit(fills[g][i].clone()));
            for j in (starts[g][i]..starts[g][i + 1]).rev() {
                stack.push((g + 1, j));
            }
        }
        trees.push(PlaneTree::from_child_counts(cc)?);
    }
    let pos = bottom_order.iter().position(|&d| d == c.root).ok_or_else(|| bad("root is not a bottom edge"))?;
    let distinguished = if c.distinguished_root {
        if bottom_key[pos].0 != 0 {
            return Err(bad("distinguished root outside the first tree"));
        }
        Some(bottom_key[pos])
    } else {
        if pos != 0 {
            return Err(bad("root is not the first bottom edge of the first tree"));
        }
        None
    };
    Ok((PlaneForest::new(h, trees, distinguished)?, out_fills))
}

/// Rebuilds the truncated quadrangulation of one slot.
fn extract_fill(
    m: &Map,
    wall: &[bool],
    face: &[usize],
    covered: &mut [bool],
    s: usize,
    hs: &[usize],
    z: usize,
) -> Result<TruncatedQuad> {
    let nd = m.num_darts();
    let mut in_region = vec![false; nd];
    let mut region = Vec::new();
    let mut queue = VecDeque::new();
    for &d in std::iter::once(&s).chain(hs).chain(std::iter::once(&z)) {
        if !covered[face[d]] {
            covered[face[d]] = true;
            queue.push_back(d);
        }
    }
    while let Some(d0) = queue.pop_front() {
        for d in m.face_darts(d0) {
            in_region[d] = true;
            region.push(d);
            if !wall[d] && !covered[face[m.twin[d]]] {
                covered[face[m.twin[d]]] = true;
                queue.push_back(m.twin[d]);
            }
        }
    }
    let boundary = 2 + hs.len();
    if region.iter().filter(|&&d| wall[d]).count() != boundary {
        return Err(Error::InvariantViolation("slot touches an unexpected wall".into()));
    }
    let mut b = MapBuilder::new();
    let c = hs.len();
    let outer = b.polygon(c + 1);
    let t0 = b.polygon(3);
    let base = b.phi.len();
    let mut id = vec![usize::MAX; nd];
    for (i, &d) in region.iter().enumerate() {
        id[d] = base + i;
    }
    for &d in &region {
        b.phi.push(id[m.phi[d]]);
        b.twin.push(if wall[d] { None } else { Some(id[m.twin[d]]) });
    }
    b.glue(outer[0], t0[0])?;
    b.glue(t0[1], id[s])?;
    b.glue(t0[2], id[z])?;
    for (j, &hd) in hs.iter().enumerate() {
        b.glue(outer[c - j], id[hd])?;
    }
    TruncatedQuad::new(b.finish()?, outer[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{assemble, FillLibrary};
    use crate::rng::RngStream;
    use crate::skeleton::{HullVariant, SkeletonSampler};

    fn instances(count: usize, seed: u64) -> Vec<(PlaneForest, Fills)> {
        let lib = FillLibrary::new().unwrap();
        let mut sampler = SkeletonSampler::new();
        let mut rng = RngStream::new(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let r = 1 + rng.below(4) as usize;
            let variant = if rng.below(2) == 0 { HullVariant::Rooted } else { HullVariant::Rotated };
            let f = sampler.hull_skeleton(r, variant, &mut rng).unwrap();
            if f.inner_size() + f.p() > 30 {
                continue;
            }
            let fills = lib.fills_for(&f, &mut rng);
            out.push((f, fills));
        }
        out
    }

    #[test]
    fn round_trip_random_instances() {
        for (f, fills) in instances(200, 7) {
            let c = assemble(&f, &fills).unwrap();
            c.validate().unwrap();
            let (f2, fills2) = decompose(&c).unwrap();
            assert_eq!(f2, f);
            assert_eq!(fills2, fills);
        }
    }

    #[test]
    fn cycles_match_layers() {
        for (f, fills) in instances(50, 11) {
            let c = assemble(&f, &fills).unwrap();
            for k in 1..f.height_cap {
                let cyc = c.maximal_cycle(k).unwrap();
                let mut faces = c.layers[k].faces.clone();
                faces.sort_unstable();
                assert_eq!(cyc.faces, faces);
                let mut vs = c.layers[k].vertices.clone();
                vs.sort_unstable();
                assert_eq!(cyc.vertices, vs);
            }
        }
    }

    #[test]
    fn no_cycle_above_labels() {
        let (f, fills) = instances(1, 3).pop().unwrap();
        let c = assemble(&f, &fills).unwrap();
        assert!(matches!(c.maximal_cycle(f.height_cap), Err(Error::NoCycle(_))));
    }
}
