//! Exact counts `#Q^tr_{n,p}` of truncated quadrangulations with `n` inner
//! faces and boundary length `p`.
//!
//! Through the Schaeffer correspondence these are labeled plane trees with `n`
//! edges and positive labels, rooted at a label-1 leaf, in which label-1
//! vertices are leaves hanging off label-2 vertices and `p` counts them. With
//! `R_l` the generating function of planted subtrees whose root has label `l`
//! (`x` marks edges, `y` marks label-1 leaves):
//!
//! ```text
//! R_2 = 1 / (1 - x (y + R_2 + R_3))
//! R_l = 1 / (1 - x (R_{l-1} + R_l + R_{l+1}))   for l >= 3
//! U   = x y R_2
//! ```
//!
//! The coefficients are computed order by order in `x` with exact integers.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Largest `nmax` the tree recursion is run for.
pub const QTR_NMAX_LIMIT: usize = 400;

/// Bivariate polynomial `coeffs[k][j] = [x^k y^j]`.
type Bivariate = Vec<Vec<BigUint>>;

/// `counts[n][p] = #Q^tr_{n,p}` for `0 <= n <= nmax`, `0 <= p <= pmax`.
pub fn qtr_counts(nmax: usize, pmax: usize) -> Result<Vec<Vec<BigUint>>> {
    if nmax == 0 || pmax == 0 {
        return Err(Error::Invalid("nmax and pmax must be at least 1".into()));
    }
    if nmax > QTR_NMAX_LIMIT {
        return Err(Error::Infeasible(format!("#Q^tr for n up to {nmax} (limit {QTR_NMAX_LIMIT})")));
    }
    // R_2 is needed to order nmax-1 in x and pmax-1 in y. Labels beyond
    // 2 + nmax cannot influence those orders.
    let order = nmax - 1;
    let ydeg = pmax - 1;
    let levels = nmax + 2;
    let zero_row = || vec![BigUint::zero(); ydeg + 1];
    // r[l][k][j] for l = 2..=levels+1 stored at index l-2; the last level stays 1.
    let mut r: Vec<Bivariate> = (0..levels).map(|_| vec![zero_row(); order + 1]).collect();
    for lvl in r.iter_mut() {
        lvl[0][0] = BigUint::from(1u32);
    }
    for k in 1..=order {
        // Coefficient x^k of R_l = sum_{i+j=k-1} [x^i] S_l [x^j] R_l.
        let mut new_rows = Vec::with_capacity(levels - 1);
        for l in 0..levels - 1 {
            let mut row = zero_row();
            for i in 0..k {
                let j = k - 1 - i;
                // [x^i] S_l, with S_2 = y + R_2 + R_3 and S_l = R_{l-1} + R_l + R_{l+1}.
                let mut s = r[l][i].clone();
                for (a, b) in s.iter_mut().zip(&r[l + 1][i]) {
                    *a += b;
                }
                if l == 0 {
                    if i == 0 && ydeg >= 1 {
                        s[1] += 1u32;
                    }
                } else {
                    for (a, b) in s.iter_mut().zip(&r[l - 1][i]) {
                        *a += b;
                    }
                }
                let rj = &r[l][j];
                for (d1, c1) in s.iter().enumerate() {
                    if c1.is_zero() {
                        continue;
                    }
                    for (d2, c2) in rj.iter().enumerate().take(ydeg + 1 - d1) {
                        if !c2.is_zero() {
                            row[d1 + d2] += c1 * c2;
                        }
                    }
                }
            }
            new_rows.push(row);
        }
        for (l, row) in new_rows.into_iter().enumerate() {
            r[l][k] = row;
        }
    }
    let mut out = vec![vec![BigUint::zero(); pmax + 1]; nmax + 1];
    for n in 1..=nmax {
        for p in 1..=pmax {
            out[n][p] = r[0][n - 1][p - 1].clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn rooted_quadrangulations(n: u64) -> BigUint {
        // 2 * 3^n (2n)! / (n! (n+2)!)
        let fact = |m: u64| (1..=m).fold(BigUint::from(1u32), |a, b| a * b);
        BigUint::from(2u32) * BigUint::from(3u32).pow(n as u32) * fact(2 * n) / (fact(n) * fact(n + 2))
    }

    #[test]
    fn small_values() {
        let c = qtr_counts(6, 4).unwrap();
        assert_eq!(c[1][1], BigUint::from(1u32));
        assert_eq!(c[2][1], BigUint::from(2u32));
        for n in 1..=4 {
            for p in n + 1..=4 {
                assert!(c[n][p].is_zero(), "n={n} p={p}");
            }
        }
        // The star case: n = p inner faces all touching the boundary.
        for p in 1..=4 {
            assert_eq!(c[p][p], BigUint::from(1u32));
        }
    }

    #[test]
    fn column_one_is_rooted_quadrangulations() {
        let c = qtr_counts(12, 1).unwrap();
        for n in 1..=12u64 {
            assert_eq!(c[n as usize][1], rooted_quadrangulations(n - 1), "n={n}");
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(qtr_counts(QTR_NMAX_LIMIT + 1, 1), Err(Error::Infeasible(_))));
    }
}
