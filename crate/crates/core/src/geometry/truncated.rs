//! Truncated quadrangulations of a polygon and their exhaustive enumeration.

use std::collections::HashSet;

use super::map::{Map, MapBuilder};
use crate::error::{Error, Result};

/// Hard cap on the inner-face count accepted by [`enumerate_truncated`].
pub const ENUMERATION_CAP: usize = 5;

/// A truncated quadrangulation rooted on its boundary.
///
/// `root` lies in the outer face and runs clockwise along the boundary.
/// The outer face reads `root, phi(root), ...`; every boundary dart has a
/// distinct triangle on its inner side.
#[derive(Clone, Debug)]
pub struct TruncatedQuad {
    pub map: Map,
    pub root: usize,
}

impl PartialEq for TruncatedQuad {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}
impl Eq for TruncatedQuad {}

impl TruncatedQuad {
    /// Builds and validates.
    pub fn new(map: Map, root: usize) -> Result<Self> {
        let t = Self { map, root };
        t.validate()?;
        Ok(t)
    }

    /// The unique object with one boundary edge and no quadrangle: a loop
    /// enclosing a triangle whose two other sides are glued together.
    pub fn unit() -> Self {
        Self::star(1)
    }

    /// `p` triangles around a single inner vertex, no quadrangle.
    pub fn star(p: usize) -> Self {
        assert!(p >= 1);
        let mut b = MapBuilder::new();
        let outer = b.polygon(p);
        let tris: Vec<Vec<usize>> = (0..p).map(|_| b.polygon(3)).collect();
        for j in 0..p {
            b.glue(outer[j], tris[j][0]).unwrap();
        }
        for j in 0..p {
            b.glue(tris[j][2], tris[(j + 1) % p][1]).unwrap();
        }
        Self { map: b.finish().unwrap(), root: outer[0] }
    }

    pub fn boundary_size(&self) -> usize {
        self.map.face_degree(self.root)
    }

    /// Outer face darts starting at the root.
    pub fn outer_darts(&self) -> Vec<usize> {
        self.map.face_darts(self.root)
    }

    /// Number of inner faces, triangles included.
    pub fn inner_faces(&self) -> usize {
        self.map.faces().1 - 1
    }

    pub fn num_quadrangles(&self) -> usize {
        self.inner_faces() - self.boundary_size()
    }

    pub fn canonical(&self) -> (Vec<usize>, Vec<usize>) {
        self.map.canonical_form(self.root)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.map;
        if self.root >= m.num_darts() {
            return Err(Error::InvariantViolation("root out of range".into()));
        }
        m.check_planar()?;
        let (vertex, nv) = m.vertices();
        let (face, _) = m.faces();
        let outer = self.outer_darts();
        let mut on_boundary = vec![false; nv];
        for &o in &outer {
            if std::mem::replace(&mut on_boundary[vertex[o]], true) {
                return Err(Error::InvariantViolation("boundary is not simple".into()));
            }
        }
        let outer_face = face[self.root];
        let mut tri_faces = HashSet::new();
        for &o in &outer {
            let t = m.twin[o];
            if face[t] == outer_face || m.face_degree(t) != 3 || !tri_faces.insert(face[t]) {
                return Err(Error::InvariantViolation("boundary edge without its own triangle".into()));
            }
        }
        for d in 0..m.num_darts() {
            let f = face[d];
            if f != outer_face && !tri_faces.contains(&f) && m.face_degree(d) != 4 {
                return Err(Error::InvariantViolation(format!("inner face of degree {}", m.face_degree(d))));
            }
        }
        if on_boundary.iter().all(|&b| b) {
            return Err(Error::InvariantViolation("no inner vertex".into()));
        }
        Ok(())
    }
}

/// Every rooted truncated quadrangulation with `n` inner faces and boundary
/// size `p`, each isomorphism class once.
pub fn enumerate_truncated(n: usize, p: usize) -> Result<Vec<TruncatedQuad>> {
    if n == 0 || p == 0 {
        return Err(Error::Domain("n and p must be positive".into()));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded { n, cap: ENUMERATION_CAP });
    }
    if n < p {
        return Ok(Vec::new());
    }
    let mut b = MapBuilder::new();
    let outer = b.polygon(p);
    for &o in &outer {
        let t = b.polygon(3);
        b.glue(o, t[0])?;
    }
    let mut search = Search { seen: HashSet::new(), out: Vec::new(), root: outer[0] };
    search.run(b, n - p);
    Ok(search.out)
}

struct Search {
    seen: HashSet<(Vec<usize>, Vec<usize>)>,
    out: Vec<TruncatedQuad>,
    root: usize,
}

/// Next open dart along the hole to the right of open dart `d`.
fn hole_successor(b: &MapBuilder, d: usize) -> usize {
    let mut x = b.phi[d];
    while let Some(t) = b.twin[x] {
        x = b.phi[t];
    }
    x
}

impl Search {
    fn run(&mut self, b: MapBuilder, quads_left: usize) {
        let Some(d) = (0..b.twin.len()).find(|&x| b.is_open(x)) else {
            if quads_left == 0 {
                self.accept(b);
            }
            return;
        };
        let mut hole = vec![d];
        let mut x = hole_successor(&b, d);
        while x != d {
            hole.push(x);
            x = hole_successor(&b, x);
        }
        if hole.len() % 2 == 1 {
            return;
        }
        // Each open dart needs a partner, and new quadrangles only add more.
        if quads_left > 0 {
            let mut next = b.clone();
            let q = next.polygon(4);
            next.glue(d, q[0]).expect("open darts");
            self.run(next, quads_left - 1);
        }
        for i in (1..hole.len()).step_by(2) {
            let mut next = b.clone();
            next.glue(d, hole[i]).expect("open darts");
            self.run(next, quads_left);
        }
    }

    fn accept(&mut self, b: MapBuilder) {
        let Ok(map) = b.finish() else { return };
        let tq = TruncatedQuad { map, root: self.root };
        if tq.validate().is_err() {
            return;
        }
        if self.seen.insert(tq.canonical()) {
            self.out.push(tq);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaws::qtr_counts;

    #[test]
    fn unit_and_star_are_valid() {
        TruncatedQuad::unit().validate().unwrap();
        for p in 1..8 {
            let s = TruncatedQuad::star(p);
            s.validate().unwrap();
            assert_eq!(s.inner_faces(), p);
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_truncated(1, 1).unwrap().len(), 1);
        assert_eq!(enumerate_truncated(2, 1).unwrap().len(), 2);
        assert!(enumerate_truncated(2, 3).unwrap().is_empty());
        assert!(matches!(enumerate_truncated(6, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn matches_counting_recursion() {
        let counts = qtr_counts(ENUMERATION_CAP, ENUMERATION_CAP).unwrap();
        for n in 1..=ENUMERATION_CAP {
            for p in 1..=n {
                let list = enumerate_truncated(n, p).unwrap();
                assert_eq!(num_bigint::BigUint::from(list.len()), counts[n][p], "n={n} p={p}");
                assert!(list.iter().all(|t| t.inner_faces() == n && t.boundary_size() == p));
            }
        }
    }
}
