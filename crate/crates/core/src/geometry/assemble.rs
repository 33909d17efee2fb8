//! Gluing a forest and its slot fillings into a cylinder.

use std::collections::BTreeMap;

use super::cylinder::{CylinderMap, Layer};
use super::map::MapBuilder;
use super::truncated::TruncatedQuad;
use crate::error::{Error, Result};
use crate::skeleton::PlaneForest;

/// Content of the slot below a forest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotFill {
    /// Only the number of inner faces is tracked.
    Volume(usize),
    Explicit(TruncatedQuad),
}

impl SlotFill {
    pub fn inner_faces(&self) -> usize {
        match self {
            SlotFill::Volume(n) => *n,
            SlotFill::Explicit(t) => t.inner_faces(),
        }
    }
}

/// Fills keyed by `(tree index, vertex index in depth-first order)`.
pub type Fills = BTreeMap<(usize, usize), SlotFill>;

/// The forest read generation by generation in clockwise order.
#[derive(Clone, Debug)]
pub(crate) struct ForestLayers {
    /// `gens[g]` lists `(tree, dfs index)` of generation `g`.
    pub gens: Vec<Vec<(usize, usize)>>,
    /// `child_start[g][i]` is the position in `gens[g + 1]` of the first child
    /// of `gens[g][i]`; one extra entry closes the range.
    pub child_start: Vec<Vec<usize>>,
}

impl ForestLayers {
    pub fn new(f: &PlaneForest) -> Self {
        let h = f.height_cap;
        let mut gens = vec![Vec::new(); h + 1];
        let mut counts = vec![Vec::new(); h + 1];
        for (ti, t) in f.trees.iter().enumerate() {
            let children = t.children();
            let mut level = vec![0usize];
            for gen in gens.iter_mut().zip(counts.iter_mut()) {
                let (gen, cnt) = gen;
                let mut next = Vec::new();
                for &v in &level {
                    gen.push((ti, v));
                    cnt.push(children[v].len());
                    next.extend_from_slice(&children[v]);
                }
                level = next;
            }
        }
        let child_start = counts[..h]
            .iter()
            .map(|c| {
                let mut acc = vec![0];
                for &x in c {
                    acc.push(acc.last().unwrap() + x);
                }
                acc
            })
            .collect();
        ForestLayers { gens, child_start }
    }

    pub fn children(&self, g: usize, i: usize) -> std::ops::Range<usize> {
        self.child_start[g][i]..self.child_start[g][i + 1]
    }

    /// Global index of a vertex: depth-first position across the forest.
    pub fn global_index(f: &PlaneForest, key: (usize, usize)) -> usize {
        f.trees[..key.0].iter().map(|t| t.len()).sum::<usize>() + key.1
    }
}

struct Ports {
    left: usize,
    right: usize,
    horizontals: Vec<usize>,
}

/// Copies a fill minus its outer face and root triangle. Returns `None` for
/// the empty slot, whose root triangle has its two other sides glued.
fn copy_fill(b: &mut MapBuilder, t: &TruncatedQuad) -> Option<Ports> {
    let m = &t.map;
    let outer = t.outer_darts();
    let t0 = m.twin[outer[0]];
    let t1 = m.phi[t0];
    let t2 = m.phi[t1];
    if m.twin[t1] == t2 {
        return None;
    }
    let mut removed = vec![false; m.num_darts()];
    for &d in outer.iter().chain(&[t0, t1, t2]) {
        removed[d] = true;
    }
    let base = b.phi.len();
    let mut id = vec![usize::MAX; m.num_darts()];
    let mut next = base;
    for d in 0..m.num_darts() {
        if !removed[d] {
            id[d] = next;
            next += 1;
        }
    }
    for d in 0..m.num_darts() {
        if removed[d] {
            continue;
        }
        b.phi.push(id[m.phi[d]]);
        let tw = m.twin[d];
        b.twin.push(if removed[tw] { None } else { Some(id[tw]) });
    }
    let c = outer.len() - 1;
    Some(Ports {
        left: id[m.twin[t1]],
        right: id[m.twin[t2]],
        horizontals: (1..=c).map(|j| id[m.twin[outer[c + 1 - j]]]).collect(),
    })
}

/// Glues the downward triangles of `f` with the given slot fillings.
pub fn assemble(f: &PlaneForest, fills: &Fills) -> Result<CylinderMap> {
    f.validate()?;
    let lay = ForestLayers::new(f);
    let h = f.height_cap;
    let mut expected = 0;
    for g in 0..h {
        for (i, &key) in lay.gens[g].iter().enumerate() {
            expected += 1;
            let vertex = ForestLayers::global_index(f, key);
            let c = lay.children(g, i).len();
            match fills.get(&key) {
                None => return Err(Error::MissingFill(vertex)),
                Some(SlotFill::Volume(_)) => {
                    return Err(Error::Invalid(format!("fill for vertex {vertex} is volume-only")));
                }
                Some(SlotFill::Explicit(t)) if t.boundary_size() != c + 1 => {
                    return Err(Error::BoundaryMismatch { vertex, expected: c + 1, found: t.boundary_size() });
                }
                Some(_) => {}
            }
        }
    }
    if fills.len() != expected {
        return Err(Error::Invalid("fills given for vertices at the height cap or outside the forest".into()));
    }

    let mut b = MapBuilder::new();
    let tris: Vec<Vec<[usize; 3]>> = (0..h)
        .map(|g| {
            (0..lay.gens[g].len())
                .map(|_| {
                    let t = b.polygon(3);
                    [t[0], t[1], t[2]]
                })
                .collect()
        })
        .collect();
    let p = lay.gens[h].len();
    let q = lay.gens[0].len();
    let bottom_poly = b.polygon(p);
    let bottom_outer = |t: usize| bottom_poly[p - 1 - t];
    let top = b.polygon(q);
    for i in 0..q {
        b.glue(top[i], tris[0][i][0])?;
    }
    let mut bottom_inner = vec![usize::MAX; p];
    for g in 0..h {
        let n = lay.gens[g].len();
        for i in 0..n {
            let Some(SlotFill::Explicit(t)) = fills.get(&lay.gens[g][i]) else { unreachable!() };
            let prev = tris[g][(i + n - 1) % n];
            let cur = tris[g][i];
            match copy_fill(&mut b, t) {
                None => b.glue(prev[2], cur[1])?,
                Some(ports) => {
                    b.glue(prev[2], ports.left)?;
                    b.glue(ports.right, cur[1])?;
                    for (child, &hz) in lay.children(g, i).zip(&ports.horizontals) {
                        if g + 1 < h {
                            b.glue(hz, tris[g + 1][child][0])?;
                        } else {
                            b.glue(hz, bottom_outer(child))?;
                            bottom_inner[child] = hz;
                        }
                    }
                }
            }
        }
    }
    let mut map = b.finish()?;

    // Layer k sits at generation h - k.
    let mut vertex_darts: Vec<Vec<usize>> = vec![Vec::new(); h + 1];
    vertex_darts[0] = bottom_inner.clone();
    for g in 0..h {
        vertex_darts[h - g] = tris[g].iter().map(|t| t[1]).collect();
    }
    let root_pos = match f.distinguished {
        Some(key) => lay.gens[h].iter().position(|&x| x == key).expect("validated mark"),
        None => 0,
    };
    let diagonals: Vec<usize> = tris[1..].iter().flatten().map(|t| t[0]).collect();
    let remap = map.delete_edges(&diagonals)?;
    let live = |d: usize| remap[d].expect("surviving dart");
    let (vertex, _) = map.vertices();
    let (face, _) = map.faces();
    let layers = (0..=h)
        .map(|k| {
            let vs: Vec<usize> = vertex_darts[k].iter().map(|&d| vertex[live(d)]).collect();
            let faces = if k == 0 || k == h {
                Vec::new()
            } else {
                vertex_darts[k].iter().map(|&d| face[live(d)]).collect()
            };
            Layer { vertices: vs, faces }
        })
        .collect();
    Ok(CylinderMap {
        root: live(bottom_inner[root_pos]),
        bottom_cycle: bottom_inner.iter().map(|&d| live(d)).collect(),
        top_cycle: top.iter().map(|&d| live(d)).collect(),
        map,
        height: h,
        distinguished_root: f.distinguished.is_some(),
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::PlaneTree;

    fn forest(h: usize, trees: &[&[u32]]) -> PlaneForest {
        let trees = trees.iter().map(|c| PlaneTree::from_child_counts(c.to_vec()).unwrap()).collect();
        PlaneForest::new(h, trees, None).unwrap()
    }

    fn star_fills(f: &PlaneForest) -> Fills {
        let lay = ForestLayers::new(f);
        let mut fills = Fills::new();
        for g in 0..f.height_cap {
            for (i, &key) in lay.gens[g].iter().enumerate() {
                fills.insert(key, SlotFill::Explicit(TruncatedQuad::star(lay.children(g, i).len() + 1)));
            }
        }
        fills
    }

    #[test]
    fn hand_instance_height_one() {
        let f = forest(1, &[&[1, 0]]);
        let c = assemble(&f, &star_fills(&f)).unwrap();
        c.validate().unwrap();
        assert_eq!((c.p(), c.q()), (1, 1));
        // Two boundary triangles.
        assert_eq!(c.inner_faces(), 2);
    }

    #[test]
    fn empty_slot_glues_two_triangles() {
        // Second tree is a bare root at the top level with an empty slot.
        let f = forest(1, &[&[1, 0], &[0]]);
        let c = assemble(&f, &star_fills(&f)).unwrap();
        c.validate().unwrap();
        assert_eq!(c.q(), 2);
        assert_eq!(c.inner_faces(), 1 + (2 - 1) + (1 - 0));
    }

    #[test]
    fn errors() {
        let f = forest(1, &[&[2, 0, 0]]);
        let mut fills = star_fills(&f);
        fills.insert((0, 0), SlotFill::Explicit(TruncatedQuad::star(2)));
        assert!(matches!(assemble(&f, &fills), Err(Error::BoundaryMismatch { .. })));
        fills.clear();
        assert!(matches!(assemble(&f, &fills), Err(Error::MissingFill(0))));
    }

    #[test]
    fn deeper_forest_is_valid() {
        let f = forest(3, &[&[2, 1, 1, 0, 1, 0], &[0], &[1, 1, 2, 0, 0]]);
        let c = assemble(&f, &star_fills(&f)).unwrap();
        c.validate().unwrap();
        let labels = c.labels();
        for (k, layer) in c.layers.iter().enumerate() {
            assert!(layer.vertices.iter().all(|&v| labels[v] == k));
        }
    }
}
