use std::io::Write;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::series::{rat_to_string, to_f64, ExactRational};
use crate::error::{Error, Result};

/// Probability mass function on `0..=cutoff` with exact masses.
#[derive(Clone, Debug, PartialEq)]
pub struct LawTable {
    masses: Vec<ExactRational>,
    cumulative: Vec<ExactRational>,
    tail_bound: ExactRational,
    description: String,
}

impl LawTable {
    /// Builds the table from masses; the tail bound is `1 - sum`.
    pub fn from_masses(masses: Vec<ExactRational>, description: impl Into<String>) -> Result<Self> {
        let mut cumulative = Vec::with_capacity(masses.len());
        let mut acc = BigRational::zero();
        for m in &masses {
            if m.is_negative() {
                return Err(Error::InvariantViolation("negative mass".into()));
            }
            acc += m;
            cumulative.push(acc.clone());
        }
        Self::from_parts(masses, cumulative, description)
    }

    /// Builds from precomputed prefix sums (already in lowest terms).
    pub(crate) fn from_parts(
        masses: Vec<ExactRational>,
        cumulative: Vec<ExactRational>,
        description: impl Into<String>,
    ) -> Result<Self> {
        let total = cumulative.last().cloned().unwrap_or_else(BigRational::zero);
        let tail_bound = BigRational::one() - total;
        if tail_bound.is_negative() {
            return Err(Error::InvariantViolation("masses sum above one".into()));
        }
        Ok(LawTable { masses, cumulative, tail_bound, description: description.into() })
    }

    pub fn masses(&self) -> &[ExactRational] {
        &self.masses
    }

    pub fn cumulative(&self) -> &[ExactRational] {
        &self.cumulative
    }

    pub fn tail_bound(&self) -> &ExactRational {
        &self.tail_bound
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Largest value with a stored mass.
    pub fn cutoff(&self) -> usize {
        self.masses.len().saturating_sub(1)
    }

    pub fn mass(&self, k: usize) -> ExactRational {
        self.masses.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `sum_k k * mass(k)` over the stored support.
    pub fn partial_mean(&self) -> ExactRational {
        self.masses
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, m)| m * BigRational::from_integer(k.into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `sum_k mass(k) a^k` in floating point.
    pub fn pgf(&self, a: f64) -> f64 {
        self.masses.iter().rev().fold(0.0, |acc, m| acc * a + to_f64(m))
    }

    /// Floating-point cumulative table for inverse-CDF sampling.
    pub fn cdf_f64(&self) -> Vec<f64> {
        self.cumulative.iter().map(to_f64).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["value", "mass_num", "mass_den", "mass_float", "cumulative_float"])?;
        for (k, (m, c)) in self.masses.iter().zip(&self.cumulative).enumerate() {
            out.write_record([
                k.to_string(),
                m.numer().to_string(),
                m.denom().to_string(),
                format!("{:e}", to_f64(m)),
                format!("{:e}", to_f64(c)),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> LawTableJson {
        LawTableJson {
            description: self.description.clone(),
            cutoff: self.cutoff(),
            tail_bound: rat_to_string(&self.tail_bound),
            masses: self.masses.iter().map(rat_to_string).collect(),
        }
    }

    pub fn from_json(j: &LawTableJson) -> Result<Self> {
        let masses = j
            .masses
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| Error::Invalid(format!("bad rational {s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masses(masses, j.description.clone())
    }
}

/// Serialized form: exact masses as `"num/den"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LawTableJson {
    pub description: String,
    pub cutoff: usize,
    pub tail_bound: String,
    pub masses: Vec<String>,
}
