//! Small explicit slot fillings for building test cylinders.

use super::assemble::{ForestLayers, Fills, SlotFill};
use super::truncated::{enumerate_truncated, TruncatedQuad, ENUMERATION_CAP};
use crate::error::Result;
use crate::rng::RngStream;
use crate::skeleton::PlaneForest;

/// Every truncated quadrangulation with at most `ENUMERATION_CAP` inner
/// faces, grouped by boundary size. Larger boundaries fall back to stars.
pub struct FillLibrary {
    by_boundary: Vec<Vec<TruncatedQuad>>,
}

impl FillLibrary {
    pub fn new() -> Result<Self> {
        let mut by_boundary = vec![Vec::new(); ENUMERATION_CAP + 1];
        for n in 1..=ENUMERATION_CAP {
            for (p, list) in by_boundary.iter_mut().enumerate().skip(1).take(n) {
                list.extend(enumerate_truncated(n, p)?);
            }
        }
        Ok(Self { by_boundary })
    }

    /// Uniform over the stored objects with boundary `p`.
    pub fn sample(&self, p: usize, rng: &mut RngStream) -> TruncatedQuad {
        match self.by_boundary.get(p) {
            Some(list) if !list.is_empty() => list[rng.below(list.len() as u64) as usize].clone(),
            _ => TruncatedQuad::star(p),
        }
    }

    /// One explicit fill per vertex below the height cap.
    pub fn fills_for(&self, f: &PlaneForest, rng: &mut RngStream) -> Fills {
        let lay = ForestLayers::new(f);
        let mut fills = Fills::new();
        for g in 0..f.height_cap {
            for (i, &key) in lay.gens[g].iter().enumerate() {
                let p = lay.children(g, i).len() + 1;
                fills.insert(key, SlotFill::Explicit(self.sample(p, rng)));
            }
        }
        fills
    }
}
