//! Triangulated-boundary quadrangulations of the cylinder.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::map::Map;
use crate::error::{Error, Result};

/// Vertices of one layer cycle, and the faces carrying its diagonals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    /// `vertices[i]` is the left endpoint of the i-th layer edge, clockwise.
    pub vertices: Vec<usize>,
    /// Quadrangles split by the layer's diagonals (empty for the two
    /// boundary layers, whose edges are real edges).
    pub faces: Vec<usize>,
}

/// A quadrangulation of the cylinder of height `height`.
///
/// `bottom_cycle` holds the inner-side darts of the bottom edges, oriented
/// clockwise, and `top_cycle` the top-face darts `x_i -> x_{i+1}`, also
/// clockwise. `root` is one of the bottom darts. When `distinguished_root` is
/// false the root is the first bottom edge descending from the tree rooted
/// at `top_cycle[0]`; otherwise it marks a point of that tree.
#[derive(Clone, Debug)]
pub struct CylinderMap {
    pub map: Map,
    pub root: usize,
    pub bottom_cycle: Vec<usize>,
    pub top_cycle: Vec<usize>,
    pub height: usize,
    pub distinguished_root: bool,
    /// Layer bookkeeping indexed by level; empty when not known.
    pub layers: Vec<Layer>,
}

#[derive(Serialize, Deserialize)]
struct CylinderJson {
    next: Vec<usize>,
    twin: Vec<usize>,
    root: usize,
    bottom_cycle: Vec<usize>,
    top_cycle: Vec<usize>,
    labels: Vec<usize>,
    height: usize,
    distinguished_root: bool,
}

impl CylinderMap {
    pub fn p(&self) -> usize {
        self.bottom_cycle.len()
    }

    pub fn q(&self) -> usize {
        self.top_cycle.len()
    }

    pub fn bottom_face(&self) -> usize {
        self.map.faces().0[self.map.twin[self.bottom_cycle[0]]]
    }

    pub fn top_face(&self) -> usize {
        self.map.faces().0[self.top_cycle[0]]
    }

    /// Faces other than the two distinguished ones.
    pub fn inner_faces(&self) -> usize {
        self.map.faces().1 - 2
    }

    /// Distance of every vertex from the bottom cycle.
    pub fn labels(&self) -> Vec<usize> {
        let (vertex, nv) = self.map.vertices();
        let sources: Vec<usize> = self.bottom_cycle.iter().map(|&d| vertex[d]).collect();
        self.map.distances(&vertex, nv, &sources)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvariantViolation(m.to_string()));
        let m = &self.map;
        let nd = m.num_darts();
        if self.bottom_cycle.is_empty() || self.top_cycle.is_empty() || self.height == 0 {
            return bad("empty boundary or zero height");
        }
        if self.bottom_cycle.iter().chain(&self.top_cycle).any(|&d| d >= nd) || !self.bottom_cycle.contains(&self.root)
        {
            return bad("boundary darts out of range or root off the bottom cycle");
        }
        m.check_planar()?;
        let (vertex, nv) = m.vertices();
        let (face, _) = m.faces();
        let bottom_face = face[m.twin[self.bottom_cycle[0]]];
        let top_face = face[self.top_cycle[0]];
        if bottom_face == top_face {
            return bad("bottom and top faces coincide");
        }
        // The bottom face is read right to left, hence the reversed check.
        let p = self.p();
        for t in 0..p {
            let b = m.twin[self.bottom_cycle[t]];
            if face[b] != bottom_face || m.phi[b] != m.twin[self.bottom_cycle[(t + p - 1) % p]] {
                return bad("bottom cycle is not the bottom face in order");
            }
        }
        let q = self.q();
        for i in 0..q {
            if m.phi[self.top_cycle[i]] != self.top_cycle[(i + 1) % q] {
                return bad("top cycle is not the top face in order");
            }
        }
        let mut on_bottom = vec![false; nv];
        let mut on_top = vec![false; nv];
        for &d in &self.bottom_cycle {
            if std::mem::replace(&mut on_bottom[vertex[d]], true) {
                return bad("bottom cycle is not simple");
            }
        }
        for &d in &self.top_cycle {
            if std::mem::replace(&mut on_top[vertex[d]], true) {
                return bad("top cycle is not simple");
            }
        }
        let mut triangles = HashSet::new();
        for &d in self.bottom_cycle.iter().chain(self.top_cycle.iter().map(|&d| &m.twin[d])) {
            if m.face_degree(d) != 3 || !triangles.insert(face[d]) {
                return bad("boundary edge without its own triangle");
            }
        }
        for d in 0..nd {
            let f = face[d];
            if f != bottom_face && f != top_face && !triangles.contains(&f) && m.face_degree(d) != 4 {
                return bad("inner face that is not a quadrangle");
            }
        }
        let labels = self.labels();
        let h = self.height;
        for &d in &self.top_cycle {
            if labels[vertex[d]] != h {
                return bad("top vertex not at distance h");
            }
            let tri = m.face_darts(m.twin[d]);
            if !tri.iter().any(|&x| labels[vertex[x]] + 1 == h) {
                return bad("top triangle without a vertex at distance h - 1");
            }
        }
        for d in 0..nd {
            let (u, w) = (vertex[d], vertex[m.twin[d]]);
            let inner = |v: usize| !on_bottom[v] && !on_top[v];
            if inner(u) && inner(w) && labels[u].abs_diff(labels[w]) != 1 {
                return bad("adjacent inner vertices with labels not differing by one");
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let j = CylinderJson {
            next: self.map.rotation(),
            twin: self.map.twin.clone(),
            root: self.root,
            bottom_cycle: self.bottom_cycle.clone(),
            top_cycle: self.top_cycle.clone(),
            labels: self.labels(),
            height: self.height,
            distinguished_root: self.distinguished_root,
        };
        Ok(serde_json::to_string(&j)?)
    }

    /// Parses and validates; the labels must match recomputed distances.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: CylinderJson = serde_json::from_str(s)?;
        let c = CylinderMap {
            map: Map::from_rotation(&j.next, &j.twin)?,
            root: j.root,
            bottom_cycle: j.bottom_cycle,
            top_cycle: j.top_cycle,
            height: j.height,
            distinguished_root: j.distinguished_root,
            layers: Vec::new(),
        };
        c.validate()?;
        if c.labels() != j.labels {
            return Err(Error::InvariantViolation("stored labels disagree with distances".into()));
        }
        Ok(c)
    }
}
