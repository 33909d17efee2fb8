//! Volume laws of slots and hulls.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::assemble::ForestLayers;
use crate::error::{Error, Result};
use crate::exactlaws::series::int;
use crate::exactlaws::{qtr_counts, slot_mean_volumes, slot_mean_volumes_f64, z_values, ExactRational, LawTable};
use crate::rng::run_shards;
use crate::skeleton::{HullVariant, PlaneForest, SkeletonSampler};

/// Boltzmann law of the inner-face count of a slot with boundary `p`,
/// `12^-n #Q^tr_{n,p} / Z(p)`, tabulated for `n <= nmax`.
pub fn slot_volume_law(p: usize, nmax: usize) -> Result<LawTable> {
    if p == 0 || nmax == 0 {
        return Err(Error::Invalid("p and nmax must be positive".into()));
    }
    let counts = qtr_counts(nmax, p).map_err(|e| match e {
        Error::Infeasible(msg) => Error::CountsUnavailable(msg),
        other => other,
    })?;
    let z = z_values(p).pop().expect("non-empty");
    let mut power = BigUint::from(1u32);
    let mut masses = Vec::with_capacity(nmax + 1);
    for (n, row) in counts.iter().enumerate().take(nmax + 1) {
        if n > 0 {
            power *= 12u32;
        }
        let w = ExactRational::new(BigInt::from(row[p].clone()), BigInt::from(power.clone()));
        masses.push(w / &z);
    }
    LawTable::from_masses(masses, format!("slot volume p={p}"))
}

/// `E[inner faces | skeleton = f]` with every slot filled independently:
/// `p + sum over v below the cap of (E[Inn(M_{c_v+1})] - c_v)`.
pub fn hull_volume_conditional_mean(f: &PlaneForest) -> Result<ExactRational> {
    f.validate()?;
    let lay = ForestLayers::new(f);
    let h = f.height_cap;
    let mut sizes = Vec::new();
    for g in 0..h {
        for i in 0..lay.gens[g].len() {
            sizes.push(lay.children(g, i).len());
        }
    }
    let cmax = sizes.iter().copied().max().unwrap_or(0);
    let means = slot_mean_volumes(cmax + 1);
    let mut total = int(f.p() as i64);
    for c in sizes {
        total += &means[c + 1] - int(c as i64);
    }
    Ok(total)
}

/// Child-count profile of a forest: `p` and `(c, how many vertices below
/// the cap have c children)`.
fn child_profile(f: &PlaneForest) -> (usize, Vec<(usize, u64)>) {
    let mut hist: HashMap<usize, u64> = HashMap::new();
    for t in &f.trees {
        for (d, &c) in t.depths().iter().zip(t.child_counts()) {
            if *d < f.height_cap {
                *hist.entry(c as usize).or_default() += 1;
            }
        }
    }
    let mut v: Vec<(usize, u64)> = hist.into_iter().collect();
    v.sort_unstable();
    (f.p(), v)
}

/// Monte Carlo mean of the hull volume conditional mean at radius `r`.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeEstimate {
    pub r: usize,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `mean / r^4`.
    pub scaled: f64,
    pub seed: u64,
}

/// Averages `hull_volume_conditional_mean` over `trials` rotated hull
/// skeletons of radius `r`.
pub fn hull_volume_mc(r: usize, trials: u64, seed: u64) -> Result<VolumeEstimate> {
    if r == 0 || trials == 0 {
        return Err(Error::Invalid("need r >= 1 and trials >= 1".into()));
    }
    let profiles: Vec<_> = run_shards(seed, trials, |rng, n| {
        let mut sampler = SkeletonSampler::new();
        (0..n).map(|_| Ok(child_profile(&sampler.hull_skeleton(r, HullVariant::Rotated, rng)?))).collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    let cmax = profiles.iter().flat_map(|(_, h)| h.iter().map(|&(c, _)| c)).max().unwrap_or(0);
    let means = slot_mean_volumes_f64(cmax + 1);
    let values: Vec<f64> = profiles
        .iter()
        .map(|(p, hist)| *p as f64 + hist.iter().map(|&(c, k)| k as f64 * (means[c + 1] - c as f64)).sum::<f64>())
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(VolumeEstimate { r, trials, mean, stderr: (var / n).sqrt(), scaled: mean / (r as f64).powi(4), seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaws::series::rat;
    use crate::geometry::{assemble, enumerate_truncated, Fills, SlotFill};
    use crate::skeleton::PlaneTree;

    #[test]
    fn first_masses_for_p1() {
        let t = slot_volume_law(1, 5).unwrap();
        assert_eq!(t.mass(1), rat(3, 4));
        assert_eq!(t.mass(2), rat(1, 8));
    }

    #[test]
    fn masses_match_enumeration() {
        let t = slot_volume_law(1, 5).unwrap();
        let z = z_values(1).pop().unwrap();
        let mut w = int(1);
        for n in 1..=5 {
            w /= int(12);
            let count = enumerate_truncated(n, 1).unwrap().len() as i64;
            assert_eq!(t.mass(n), &w * int(count) / &z);
        }
    }

    #[test]
    fn mean_envelope_brackets_two() {
        let t = slot_volume_law(1, 200).unwrap();
        let partial = t.partial_mean();
        // The tail beyond the cutoff carries mean at least (nmax+1) times its mass.
        assert!(&partial + int(201) * t.tail_bound() <= int(2));
        let t2 = slot_volume_law(1, 100).unwrap();
        assert!(int(2) - &partial < int(2) - t2.partial_mean());
    }

    #[test]
    fn unavailable_counts() {
        assert!(matches!(slot_volume_law(1, 10_000), Err(Error::CountsUnavailable(_))));
    }

    fn forest(h: usize, trees: &[&[u32]]) -> PlaneForest {
        let trees = trees.iter().map(|c| PlaneTree::from_child_counts(c.to_vec()).unwrap()).collect();
        PlaneForest::new(h, trees, None).unwrap()
    }

    #[test]
    fn childless_vertex_contributes_slot_mean() {
        let base = hull_volume_conditional_mean(&forest(1, &[&[1, 0]])).unwrap();
        let more = hull_volume_conditional_mean(&forest(1, &[&[1, 0], &[0]])).unwrap();
        assert_eq!(more - base, int(2));
    }

    #[test]
    fn additive_over_trees() {
        let trees: [&[u32]; 3] = [&[2, 1, 0, 0], &[0], &[1, 1, 0]];
        let f = forest(2, &trees);
        let whole = hull_volume_conditional_mean(&f).unwrap();
        let means = slot_mean_volumes(4);
        let mut parts = int(f.p() as i64);
        for t in &trees {
            let t = PlaneTree::from_child_counts(t.to_vec()).unwrap();
            for (d, &c) in t.depths().iter().zip(t.child_counts()) {
                if *d < 2 {
                    parts += &means[c as usize + 1] - int(c as i64);
                }
            }
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn float_profile_matches_exact_mean() {
        let f = forest(2, &[&[2, 1, 0, 0], &[0], &[1, 1, 0]]);
        let exact = crate::exactlaws::approx(&hull_volume_conditional_mean(&f).unwrap());
        let (p, hist) = child_profile(&f);
        let means = slot_mean_volumes_f64(4);
        let float = p as f64 + hist.iter().map(|&(c, k)| k as f64 * (means[c + 1] - c as f64)).sum::<f64>();
        assert!((exact - float).abs() < 1e-12 * exact);
    }

    #[test]
    fn inner_face_identity_on_assembled_maps() {
        let f = forest(2, &[&[2, 1, 0, 0], &[0], &[1, 1, 0]]);
        let lay = ForestLayers::new(&f);
        let mut fills = Fills::new();
        let mut expected = f.p();
        for g in 0..2 {
            for (i, &key) in lay.gens[g].iter().enumerate() {
                let c = lay.children(g, i).len();
                let t = enumerate_truncated(c + 2, c + 1).unwrap().pop().unwrap();
                expected += t.inner_faces() - c;
                fills.insert(key, SlotFill::Explicit(t));
            }
        }
        assert_eq!(assemble(&f, &fills).unwrap().inner_faces(), expected);
    }
}
