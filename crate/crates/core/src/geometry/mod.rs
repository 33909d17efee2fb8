//! Planar maps, truncated quadrangulations and the skeleton bijection.

pub mod map;

pub use map::{Map, MapBuilder};
pub mod truncated;

pub use truncated::{enumerate_truncated, TruncatedQuad, ENUMERATION_CAP};
pub mod assemble;
pub mod cylinder;

pub use assemble::{assemble, Fills, SlotFill};
pub use cylinder::{CylinderMap, Layer};
pub mod decompose;

pub use decompose::{decompose, extract_maximal_cycle, MaximalCycle};
pub mod fills;

pub use fills::FillLibrary;
pub mod cycles;

pub use cycles::{cycle_length_tail, downward_geodesics, krikun_cycle, SeparatingCycle, TailReport};
pub mod volume;

pub use volume::{hull_volume_conditional_mean, hull_volume_mc, slot_volume_law, VolumeEstimate};
