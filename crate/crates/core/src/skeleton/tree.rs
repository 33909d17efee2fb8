use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlaws::ExactRational;

/// Rooted plane tree stored as its depth-first sequence of child counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaneTree {
    child_counts: Vec<u32>,
}

impl PlaneTree {
    /// Validates the Lukasiewicz condition.
    pub fn from_child_counts(child_counts: Vec<u32>) -> Result<Self> {
        let mut open: i64 = 1;
        for (i, &c) in child_counts.iter().enumerate() {
            if open == 0 {
                return Err(Error::Invalid(format!("child counts end a tree at index {i}")));
            }
            open += c as i64 - 1;
        }
        if open != 0 {
            return Err(Error::Invalid("child counts do not close the tree".into()));
        }
        Ok(PlaneTree { child_counts })
    }

    pub(crate) fn from_child_counts_unchecked(child_counts: Vec<u32>) -> Self {
        PlaneTree { child_counts }
    }

    pub fn leaf() -> Self {
        PlaneTree { child_counts: vec![0] }
    }

    pub fn child_counts(&self) -> &[u32] {
        &self.child_counts
    }

    pub fn len(&self) -> usize {
        self.child_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.child_counts.is_empty()
    }

    /// Generation of every vertex, in depth-first order.
    pub fn depths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        // Vertices that still expect children: (generation, remaining).
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for &c in &self.child_counts {
            let d = match stack.last_mut() {
                Some(top) => {
                    top.1 -= 1;
                    let d = top.0 + 1;
                    if top.1 == 0 {
                        stack.pop();
                    }
                    d
                }
                None => 0,
            };
            out.push(d);
            if c > 0 {
                stack.push((d, c));
            }
        }
        out
    }

    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Number of vertices at each generation `0..=height`.
    pub fn generation_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for d in self.depths() {
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    pub fn population(&self, generation: usize) -> usize {
        self.depths().into_iter().filter(|&d| d == generation).count()
    }

    /// Removes every vertex below generation `m`.
    pub fn truncate(&self, m: usize) -> PlaneTree {
        let counts = self
            .depths()
            .into_iter()
            .zip(&self.child_counts)
            .filter(|(d, _)| *d <= m)
            .map(|(d, &c)| if d == m { 0 } else { c })
            .collect();
        PlaneTree { child_counts: counts }
    }

    /// For each vertex, the depth-first indices of its children.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = vec![Vec::new(); n];
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for i in 0..n {
            if let Some(top) = stack.last_mut() {
                out[top.0].push(i);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if self.child_counts[i] > 0 {
                stack.push((i, self.child_counts[i]));
            }
        }
        out
    }
}

/// Ordered forest with a height cap, optionally with a distinguished vertex at
/// generation `height_cap` (always in tree 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneForest {
    pub height_cap: usize,
    pub trees: Vec<PlaneTree>,
    pub distinguished: Option<(usize, usize)>,
}

impl PlaneForest {
    pub fn new(height_cap: usize, trees: Vec<PlaneTree>, distinguished: Option<(usize, usize)>) -> Result<Self> {
        let f = PlaneForest { height_cap, trees, distinguished };
        f.validate()?;
        Ok(f)
    }

    /// Number of trees.
    pub fn q(&self) -> usize {
        self.trees.len()
    }

    /// Number of vertices at generation `height_cap`.
    pub fn p(&self) -> usize {
        self.trees.iter().map(|t| t.population(self.height_cap)).sum()
    }

    /// Vertices strictly above the cap, i.e. with a recorded child count.
    pub fn inner_size(&self) -> usize {
        self.trees
            .iter()
            .map(|t| t.depths().into_iter().filter(|&d| d < self.height_cap).count())
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.trees.is_empty() {
            return Err(Error::InvariantViolation("forest has no trees".into()));
        }
        let mut attained = false;
        for (i, t) in self.trees.iter().enumerate() {
            PlaneTree::from_child_counts(t.child_counts.clone())?;
            let depths = t.depths();
            for (d, &c) in depths.iter().zip(&t.child_counts) {
                if *d > self.height_cap || (*d == self.height_cap && c != 0) {
                    return Err(Error::InvariantViolation(format!("tree {i} exceeds the height cap")));
                }
            }
            attained |= depths.contains(&self.height_cap);
        }
        if !attained {
            return Err(Error::InvariantViolation("no tree attains the height cap".into()));
        }
        if let Some((ti, v)) = self.distinguished {
            if ti != 0 {
                return Err(Error::InvariantViolation("distinguished vertex must be in the first tree".into()));
            }
            if self.trees[0].depths().get(v) != Some(&self.height_cap) {
                return Err(Error::InvariantViolation("distinguished vertex is not at the cap".into()));
            }
        }
        Ok(())
    }

    /// Truncates every tree at generation `m <= height_cap`; drops the mark.
    pub fn truncate(&self, m: usize) -> Result<PlaneForest> {
        if m > self.height_cap || m == 0 {
            return Err(Error::Invalid(format!("cannot truncate height {} at {m}", self.height_cap)));
        }
        if m == self.height_cap {
            return Ok(self.clone());
        }
        PlaneForest::new(m, self.trees.iter().map(|t| t.truncate(m)).collect(), None)
    }

    /// Cyclic rotation bringing tree `k` to the front.
    pub fn rotate(&self, k: usize) -> PlaneForest {
        let mut trees = self.trees.clone();
        let n = trees.len();
        trees.rotate_left(k % n);
        PlaneForest { height_cap: self.height_cap, trees, distinguished: None }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ForestJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ForestJson = serde_json::from_str(s)?;
        let trees = j.trees.into_iter().map(PlaneTree::from_child_counts).collect::<Result<Vec<_>>>()?;
        PlaneForest::new(j.height_cap, trees, j.distinguished.map(|[a, b]| (a, b)))
    }
}

#[derive(Serialize, Deserialize)]
struct ForestJson {
    height_cap: usize,
    trees: Vec<Vec<u32>>,
    distinguished: Option<[usize; 2]>,
}

impl From<&PlaneForest> for ForestJson {
    fn from(f: &PlaneForest) -> Self {
        ForestJson {
            height_cap: f.height_cap,
            trees: f.trees.iter().map(|t| t.child_counts.clone()).collect(),
            distinguished: f.distinguished.map(|(a, b)| [a, b]),
        }
    }
}

/// Number of trees of `f` that reach the height cap.
pub fn count_max_height_trees(f: &PlaneForest) -> usize {
    f.trees.iter().filter(|t| t.population(f.height_cap) > 0).count()
}

/// Number of trees with at least `c0 r^2` vertices at generation `2r-1`
/// that have a child at generation `2r`.
pub fn count_property_p(f: &PlaneForest, c0: &ExactRational, r: usize) -> Result<usize> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    if f.height_cap != 2 * r {
        return Err(Error::CapMismatch { expected: 2 * r, found: f.height_cap });
    }
    let threshold = c0 * ExactRational::from_integer((r * r).into());
    Ok(f.trees
        .iter()
        .filter(|t| {
            let n = t
                .depths()
                .into_iter()
                .zip(t.child_counts())
                .filter(|(d, &c)| *d == 2 * r - 1 && c > 0)
                .count();
            ExactRational::from_integer(n.into()) >= threshold
        })
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaws::series::rat;

    fn tree(c: &[u32]) -> PlaneTree {
        PlaneTree::from_child_counts(c.to_vec()).unwrap()
    }

    #[test]
    fn lukasiewicz_validation() {
        assert!(PlaneTree::from_child_counts(vec![2, 0, 0]).is_ok());
        assert!(PlaneTree::from_child_counts(vec![2, 0]).is_err());
        assert!(PlaneTree::from_child_counts(vec![0, 0]).is_err());
        assert!(PlaneTree::from_child_counts(vec![]).is_err());
    }

    #[test]
    fn depths_and_children() {
        let t = tree(&[2, 1, 0, 1, 1, 0]);
        assert_eq!(t.depths(), vec![0, 1, 2, 1, 2, 3]);
        assert_eq!(t.height(), 3);
        assert_eq!(t.generation_counts(), vec![1, 2, 2, 1]);
        assert_eq!(t.children(), vec![vec![1, 3], vec![2], vec![], vec![4], vec![5], vec![]]);
        assert_eq!(t.truncate(2).child_counts(), &[2, 1, 0, 1, 0]);
    }

    #[test]
    fn forest_counts() {
        let f = PlaneForest::new(1, vec![tree(&[1, 0]), tree(&[0]), tree(&[2, 0, 0])], None).unwrap();
        assert_eq!(f.p(), 3);
        assert_eq!(f.q(), 3);
        assert_eq!(count_max_height_trees(&f), 2);
        let g = PlaneForest::new(1, vec![tree(&[1, 0]); 3], None).unwrap();
        assert_eq!(count_max_height_trees(&g), 3);
        assert!(PlaneForest::new(2, vec![tree(&[1, 0])], None).is_err());
        assert!(PlaneForest::new(1, vec![tree(&[1, 1, 0])], None).is_err());
    }

    #[test]
    fn property_p() {
        let f = PlaneForest::new(2, vec![tree(&[1, 1, 0]), tree(&[0])], None).unwrap();
        assert_eq!(count_property_p(&f, &rat(1, 1), 1).unwrap(), 1);
        assert_eq!(count_property_p(&f, &rat(2, 1), 1).unwrap(), 0);
        assert!(matches!(count_property_p(&f, &rat(1, 1), 2), Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn json_round_trip() {
        let f = PlaneForest::new(2, vec![tree(&[1, 1, 0]), tree(&[0])], Some((0, 2))).unwrap();
        let s = f.to_json().unwrap();
        assert_eq!(s, r#"{"height_cap":2,"trees":[[1,1,0],[0]],"distinguished":[0,2]}"#);
        assert_eq!(PlaneForest::from_json(&s).unwrap(), f);
    }
}
