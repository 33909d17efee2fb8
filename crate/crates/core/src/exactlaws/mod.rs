//! Exact series, offspring law, perimeter law and their relatives.

pub mod counts;
pub mod float;
pub mod holonomic;
pub mod laws;
pub mod series;
pub mod table;

pub use counts::qtr_counts;
pub use laws::*;
pub use series::{ExactRational, TruncatedSeries};
pub use table::{LawTable, LawTableJson};
