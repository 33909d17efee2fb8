//! Exact rationals and truncated power series over them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational, robust to huge numerators and denominators.
pub fn to_f64(x: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = x.to_f64() {
        if v.is_finite() && (v != 0.0 || x.is_zero()) {
            return v;
        }
    }
    // Shift both parts down to 64 significant bits before dividing.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (x.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &ExactRational) -> Option<ExactRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Formats as `"num/den"` (or `"num"` for integers).
pub fn rat_to_string(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Power series truncated after `y^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coefficients: Vec<ExactRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coefficients: vec![BigRational::zero(); order + 1] }
    }

    /// Series from polynomial coefficients, truncated or zero-padded to `order`.
    pub fn from_coefficients(coeffs: &[ExactRational], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.iter().enumerate().take(order + 1) {
            s.coefficients[i] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, i: usize) -> &ExactRational {
        &self.coefficients[i]
    }

    pub fn coefficients(&self) -> &[ExactRational] {
        &self.coefficients
    }

    fn check_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        TruncatedSeries {
            coefficients: (0..=n).map(|i| &self.coefficients[i] + &other.coefficients[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        TruncatedSeries {
            coefficients: (0..=n).map(|i| &self.coefficients[i] - &other.coefficients[i]).collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        TruncatedSeries { coefficients: self.coefficients.iter().map(|a| a * c).collect() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coefficients(&self.coefficients, order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.check_order(other);
        let mut out = Self::zero(n);
        for (i, a) in self.coefficients.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coefficients[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Multiplicative inverse by Newton iteration `g <- g (2 - f g)`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coefficients[0];
        if c0.is_zero() {
            return Err(Error::Domain("reciprocal of a series with zero constant term".into()));
        }
        let n = self.order();
        let mut g = Self::from_coefficients(&[c0.recip()], 0);
        let mut prec = 0;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let g_ext = g.truncate(prec);
            let fg = self.truncate(prec).mul(&g_ext);
            let two_minus = Self::from_coefficients(&[int(2)], prec).sub(&fg);
            g = g_ext.mul(&two_minus);
        }
        Ok(g)
    }

    /// Square root with the positive constant term, by Newton iteration
    /// `s <- (s + f / s) / 2`.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = rational_sqrt(&self.coefficients[0]).ok_or_else(|| {
            Error::Domain("square root needs a perfect-square constant term".into())
        })?;
        if c0.is_zero() {
            return Err(Error::Domain("square root of a series with zero constant term".into()));
        }
        let n = self.order();
        let mut s = Self::from_coefficients(&[c0], 0);
        let mut prec = 0;
        let half = rat(1, 2);
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let s_ext = s.truncate(prec);
            let q = self.truncate(prec).mul(&s_ext.reciprocal()?);
            s = s_ext.add(&q).scale(&half);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coefficients(&c.iter().map(|&x| int(x)).collect::<Vec<_>>(), order)
    }

    #[test]
    fn reciprocal_of_one_minus_y_is_geometric() {
        let g = poly(&[1, -1], 10).reciprocal().unwrap();
        assert!(g.coefficients().iter().all(|c| c == &int(1)));
    }

    #[test]
    fn sqrt_squares_back() {
        let f = poly(&[144, -240, 100, -40, 5], 12);
        let s = f.sqrt().unwrap();
        assert_eq!(s.mul(&s), f);
        assert_eq!(s.coefficient(0), &int(12));
    }

    #[test]
    fn sqrt_rejects_non_square_constant() {
        assert!(poly(&[2, 1], 4).sqrt().is_err());
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(rational_sqrt(&rat(25, 49)), Some(rat(5, 7)));
        assert_eq!(rational_sqrt(&rat(2, 9)), None);
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = BigInt::from(3).pow(2000u32);
        let x = BigRational::new(&big * BigInt::from(2), big.clone() * BigInt::from(3));
        assert!((to_f64(&x) - 2.0 / 3.0).abs() < 1e-15);
    }
}
