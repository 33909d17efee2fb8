//! Oriented planar maps as a face permutation `phi` and an edge involution
//! `twin` on darts.
//!
//! Every face is traversed with the face on its left, so inner faces read
//! counterclockwise and the unbounded face reads clockwise. The rotation
//! around the tail of a dart is `next(d) = phi(twin(d))`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Map {
    pub phi: Vec<usize>,
    pub twin: Vec<usize>,
}

/// Partially glued collection of polygons.
#[derive(Clone, Debug, Default)]
pub struct MapBuilder {
    pub phi: Vec<usize>,
    pub twin: Vec<Option<usize>>,
}

impl MapBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a polygon with `len` darts and returns them in face order.
    pub fn polygon(&mut self, len: usize) -> Vec<usize> {
        let start = self.phi.len();
        for i in 0..len {
            self.phi.push(start + (i + 1) % len);
            self.twin.push(None);
        }
        (start..start + len).collect()
    }

    pub fn glue(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || self.twin[a].is_some() || self.twin[b].is_some() {
            return Err(Error::InvariantViolation(format!("cannot glue darts {a} and {b}")));
        }
        self.twin[a] = Some(b);
        self.twin[b] = Some(a);
        Ok(())
    }

    pub fn is_open(&self, d: usize) -> bool {
        self.twin[d].is_none()
    }

    pub fn finish(self) -> Result<Map> {
        let twin = self
            .twin
            .iter()
            .enumerate()
            .map(|(d, t)| t.ok_or_else(|| Error::InvariantViolation(format!("dart {d} left unglued"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Map { phi: self.phi, twin })
    }
}

/// Labels each element by the index of its cycle under `perm`, numbering
/// cycles by their smallest element.
fn cycles_of(perm: impl Fn(usize) -> usize, n: usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while id[d] == usize::MAX {
            id[d] = count;
            d = perm(d);
        }
        count += 1;
    }
    (id, count)
}

impl Map {
    pub fn num_darts(&self) -> usize {
        self.phi.len()
    }

    pub fn num_edges(&self) -> usize {
        self.phi.len() / 2
    }

    pub fn next(&self, d: usize) -> usize {
        self.phi[self.twin[d]]
    }

    /// Rotation array, as exported.
    pub fn rotation(&self) -> Vec<usize> {
        (0..self.num_darts()).map(|d| self.next(d)).collect()
    }

    pub fn from_rotation(next: &[usize], twin: &[usize]) -> Result<Self> {
        if next.len() != twin.len() {
            return Err(Error::Invalid("rotation and involution lengths differ".into()));
        }
        let n = next.len();
        for d in 0..n {
            if twin[d] >= n || twin[twin[d]] != d || twin[d] == d || next[d] >= n {
                return Err(Error::Invalid(format!("dart {d} breaks the involution")));
            }
        }
        let phi: Vec<usize> = (0..n).map(|d| next[twin[d]]).collect();
        let mut seen = vec![false; n];
        for &x in &phi {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Invalid("rotation is not a permutation".into()));
            }
        }
        Ok(Map { phi, twin: twin.to_vec() })
    }

    /// `vertex[d]` is the tail vertex of `d`.
    pub fn vertices(&self) -> (Vec<usize>, usize) {
        cycles_of(|d| self.next(d), self.num_darts())
    }

    /// `face[d]` is the face on the left of `d`.
    pub fn faces(&self) -> (Vec<usize>, usize) {
        cycles_of(|d| self.phi[d], self.num_darts())
    }

    /// Darts of the face containing `d`, starting at `d`.
    pub fn face_darts(&self, d: usize) -> Vec<usize> {
        let mut out = vec![d];
        let mut x = self.phi[d];
        while x != d {
            out.push(x);
            x = self.phi[x];
        }
        out
    }

    pub fn face_degree(&self, d: usize) -> usize {
        self.face_darts(d).len()
    }

    pub fn pred(&self, d: usize) -> usize {
        let mut x = d;
        loop {
            let y = self.phi[x];
            if y == d {
                return x;
            }
            x = y;
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_darts();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = queue.pop_front() {
            for x in [self.phi[d], self.twin[d]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    queue.push_back(x);
                }
            }
        }
        count == n
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices().1 as i64 - self.num_edges() as i64 + self.faces().1 as i64
    }

    pub fn check_planar(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::InvariantViolation("map is disconnected".into()));
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(Error::InvariantViolation(format!("Euler characteristic {chi}, expected 2")));
        }
        Ok(())
    }

    /// Relabels darts in breadth-first order from `root`; two rooted
    /// connected maps are isomorphic exactly when these forms agree.
    pub fn canonical_form(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.num_darts();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        label[root] = 0;
        order.push(root);
        while let Some(d) = queue.pop_front() {
            for x in [self.phi[d], self.twin[d]] {
                if label[x] == usize::MAX {
                    label[x] = order.len();
                    order.push(x);
                    queue.push_back(x);
                }
            }
        }
        let phi = order.iter().map(|&d| label[self.phi[d]]).collect();
        let twin = order.iter().map(|&d| label[self.twin[d]]).collect();
        (phi, twin)
    }

    /// Inserts an edge across the face shared by `d1` and `d2`, from the tail
    /// of `d1` to the tail of `d2`. Returns `(n1, n2)` where `n1` runs from
    /// tail(d1) to tail(d2) and lies in the face starting at `d2`, and `n2` is
    /// its twin, lying in the face starting at `d1`.
    pub fn split_face(&mut self, d1: usize, d2: usize) -> (usize, usize) {
        let x = self.pred(d2);
        let y = self.pred(d1);
        let n1 = self.phi.len();
        let n2 = n1 + 1;
        self.phi.push(d2);
        self.phi.push(d1);
        self.twin.push(n2);
        self.twin.push(n1);
        self.phi[x] = n2;
        self.phi[y] = n1;
        (n1, n2)
    }

    /// Deletes the edges of the given darts (each edge separating two distinct
    /// faces, which merge). Returns the old-to-new dart map.
    pub fn delete_edges(&mut self, darts: &[usize]) -> Result<Vec<Option<usize>>> {
        let n = self.num_darts();
        let mut dead = vec![false; n];
        for &d in darts {
            let e = self.twin[d];
            if dead[d] {
                continue;
            }
            let p = self.pred(d);
            let q = self.pred(e);
            if p == e || q == d {
                return Err(Error::InvariantViolation("cannot delete an edge with a degree-1 end".into()));
            }
            // Faces on both sides must differ for the merge to stay planar.
            if self.face_darts(d).contains(&e) {
                return Err(Error::InvariantViolation("edge borders the same face twice".into()));
            }
            self.phi[p] = self.phi[e];
            self.phi[q] = self.phi[d];
            dead[d] = true;
            dead[e] = true;
        }
        let mut remap = vec![None; n];
        let mut next_id = 0;
        for d in 0..n {
            if !dead[d] {
                remap[d] = Some(next_id);
                next_id += 1;
            }
        }
        let mut phi = vec![0; next_id];
        let mut twin = vec![0; next_id];
        for d in 0..n {
            if let Some(nd) = remap[d] {
                phi[nd] = remap[self.phi[d]].expect("live successor");
                twin[nd] = remap[self.twin[d]].expect("live twin");
            }
        }
        self.phi = phi;
        self.twin = twin;
        Ok(remap)
    }

    /// Breadth-first distances from `sources` (vertex ids) over edges.
    pub fn distances(&self, vertex: &[usize], nv: usize, sources: &[usize]) -> Vec<usize> {
        let mut out_darts: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for d in 0..self.num_darts() {
            out_darts[vertex[d]].push(d);
        }
        let mut dist = vec![usize::MAX; nv];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &d in &out_darts[v] {
                let w = vertex[self.twin[d]];
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A single quadrangle: two faces of degree 4 glued along all edges.
    fn square() -> Map {
        let mut b = MapBuilder::new();
        let inner = b.polygon(4);
        let outer = b.polygon(4);
        // Outer face reads the boundary in reverse.
        for i in 0..4 {
            b.glue(inner[i], outer[(4 - i) % 4]).unwrap();
        }
        b.finish().unwrap()
    }

    #[test]
    fn square_is_planar() {
        let m = square();
        assert_eq!(m.vertices().1, 4);
        assert_eq!(m.faces().1, 2);
        m.check_planar().unwrap();
    }

    #[test]
    fn rotation_round_trip() {
        let m = square();
        let back = Map::from_rotation(&m.rotation(), &m.twin).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn split_then_delete_restores() {
        let mut m = square();
        let before = m.canonical_form(0);
        let (n1, _) = m.split_face(0, 2);
        assert_eq!(m.faces().1, 3);
        m.check_planar().unwrap();
        assert_eq!(m.face_degree(n1), 3);
        m.delete_edges(&[n1]).unwrap();
        assert_eq!(m.canonical_form(0), before);
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let m = square();
        // Relabel darts by reversing indices.
        let n = m.num_darts();
        let r = |d: usize| n - 1 - d;
        let mut phi = vec![0; n];
        let mut twin = vec![0; n];
        for d in 0..n {
            phi[r(d)] = r(m.phi[d]);
            twin[r(d)] = r(m.twin[d]);
        }
        let m2 = Map { phi, twin };
        assert_eq!(m.canonical_form(3), m2.canonical_form(r(3)));
    }
}
