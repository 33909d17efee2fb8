//! Integer recurrences for the coefficients of `1/sqrt((18-y)(2-y))` and the
//! quantities derived from it.
//!
//! Write `r_n = A_n / (6 * 72^n)` for the coefficients of `1/S` where
//! `S = sqrt((18-y)(2-y))`. The integers `A_n` obey
//! `(n+1) A_{n+1} = (40n+20) A_n - 144 n A_{n-1}`, `A_0 = 1`, `A_1 = 20`.
//! Since `S = (36 - 20y + y^2) / S`, every coefficient of `S`, of `U(1/12, y)`,
//! of the kappa series and of the first-moment series is a short integer
//! combination of consecutive `A_n` over a power of 72. Only the primes 2 and
//! 3 ever appear in these denominators, which makes reduction cheap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::ExactRational;

/// Lowest-terms rational from a numerator and a denominator whose prime
/// factors all lie in `primes`. Avoids a full big-integer gcd.
pub fn smooth_ratio(mut num: BigInt, mut den: BigInt, primes: &[u64]) -> ExactRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    if den < BigInt::zero() {
        num = -num;
        den = -den;
    }
    for &p in primes {
        if p == 2 {
            let k = num.trailing_zeros().unwrap_or(0).min(den.trailing_zeros().unwrap_or(0));
            if k > 0 {
                num >>= k as usize;
                den >>= k as usize;
            }
            continue;
        }
        let pb = BigInt::from(p);
        loop {
            let (qd, rd) = den.div_rem(&pb);
            if !rd.is_zero() {
                break;
            }
            let (qn, rn) = num.div_rem(&pb);
            if !rn.is_zero() {
                break;
            }
            num = qn;
            den = qd;
        }
    }
    debug_assert!(num.gcd(&den).is_one(), "denominator had a prime outside the given set");
    BigRational::new_raw(num, den)
}

/// Distinct prime factors of a small positive integer.
pub fn small_primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Streams `A_0, A_1, ...`.
#[derive(Clone, Debug)]
pub struct ReciprocalStream {
    n: u64,
    prev: BigInt,
    cur: BigInt,
}

impl Default for ReciprocalStream {
    fn default() -> Self {
        Self::new()
    }
}

impl ReciprocalStream {
    pub fn new() -> Self {
        ReciprocalStream { n: 0, prev: BigInt::zero(), cur: BigInt::one() }
    }
}

impl Iterator for ReciprocalStream {
    type Item = BigInt;
    fn next(&mut self) -> Option<BigInt> {
        let out = self.cur.clone();
        let n = self.n;
        let next = (&self.cur * (40 * n + 20) - &self.prev * (144 * n)) / (n + 1);
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        Some(out)
    }
}

/// `A_0..=A_n`.
pub fn reciprocal_numerators(n: usize) -> Vec<BigInt> {
    ReciprocalStream::new().take(n + 1).collect()
}

fn pow72(n: usize) -> BigInt {
    num_traits::pow(BigInt::from(72), n)
}

fn a_at(a: &[BigInt], i: isize) -> BigInt {
    if i < 0 {
        BigInt::zero()
    } else {
        a[i as usize].clone()
    }
}

/// Numerator `S_n` with `[y^n] sqrt((18-y)(2-y)) = S_n / (6 * 72^n)`.
fn s_numerator(a: &[BigInt], n: usize) -> BigInt {
    let n = n as isize;
    a_at(a, n) * 36 - a_at(a, n - 1) * 1440 + a_at(a, n - 2) * 5184
}

/// `num / den` as `f64` from the leading bits of each, without reducing.
pub fn big_ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (num >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (den >> ds as usize).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// `m_p / Z(p)` in `f64` for `p = from..=pmax` with `from >= 3`, streaming the
/// numerators so memory stays constant.
pub fn slot_mean_ratios_f64(from: usize, pmax: usize) -> Vec<f64> {
    assert!(from >= 3);
    let mut window: Vec<BigInt> = Vec::with_capacity(4);
    let mut out = Vec::with_capacity(pmax.saturating_sub(from) + 1);
    for (n, a) in ReciprocalStream::new().take(pmax + 1).enumerate() {
        if window.len() == 4 {
            window.remove(0);
        }
        window.push(a);
        if n < from {
            continue;
        }
        let [a3, a2, a1, a0] = [&window[0], &window[1], &window[2], &window[3]];
        let s_p: BigInt = a0 * 36 - a1 * 1440 + a2 * 5184;
        let s_q: BigInt = a1 * 36 - a2 * 1440 + a3 * 5184;
        let combo: BigInt = a3 * 5184 - a2 * 720 - a1 * 32;
        out.push(big_ratio_f64(&(-combo * 72), &(s_p * 2 - s_q * 72)));
    }
    out
}

/// `Z(p) = [y^p] U(1/12, y)` for `p = 0..=pmax`.
pub fn z_values(pmax: usize) -> Vec<ExactRational> {
    let a = reciprocal_numerators(pmax);
    (0..=pmax)
        .map(|p| {
            if p == 0 {
                return BigRational::zero();
            }
            // U = ((2-y) S)/24 - 1/2 + y/2 - y^2/24.
            let num = s_numerator(&a, p) * 2 - s_numerator(&a, p - 1) * 72;
            let mut z = smooth_ratio(num, pow72(p) * 144, &[2, 3]);
            if p == 1 {
                z += BigRational::new(1.into(), 2.into());
            } else if p == 2 {
                z -= BigRational::new(1.into(), 24.into());
            }
            z
        })
        .collect()
}

/// `theta(k)` numerators over the common denominator `24 * 72^(k+1)`.
///
/// For `k >= 2`, `theta(k) = 6 * 2^k * Z(k+1)` has no polynomial correction.
pub fn theta_numerators(kmax: usize) -> Vec<BigInt> {
    let a = reciprocal_numerators(kmax + 1);
    (0..=kmax)
        .map(|k| match k {
            0 => BigInt::from(1152),  // (2/3) * 24 * 72
            1 => BigInt::from(23040), // (5/27) * 24 * 72^2
            _ => (s_numerator(&a, k + 1) * 2 - s_numerator(&a, k) * 72) << k,
        })
        .collect()
}

pub fn theta_denominator(k: usize) -> BigInt {
    pow72(k + 1) * 24
}

/// `kappa_p / kappa_1` for `p = 1..=pmax`.
///
/// With `B_n = 72 B_{n-1} + 2^n A_n`, the ratio is `2 B_{p-1} / (2^p 72^(p-1))`.
pub fn kappa_ratios(pmax: usize) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(pmax);
    let mut b = BigInt::zero();
    for (n, a) in ReciprocalStream::new().take(pmax).enumerate() {
        b = b * 72 + (a << n);
        let den = pow72(n) << (n + 1);
        out.push(smooth_ratio(&b * 2, den, &[2, 3]));
    }
    out
}

/// First-moment coefficient `sum_n n 12^-n #Q^tr_{n,p}` for `p = 1..=pmax`
/// (index 0 unused and zero).
///
/// This is `(1/12) [y^p] dU/dx(1/12, y)`; the leading 1/12 is the chain rule
/// factor that makes `E[Inn(M_1)] = 2`.
pub fn first_moments(pmax: usize) -> Vec<ExactRational> {
    let a = reciprocal_numerators(pmax);
    let mut out = vec![BigRational::zero()];
    for p in 1..=pmax {
        let p_i = p as isize;
        // Over 6 * 72^(p-1): r_{p-3} - 10 r_{p-2} - 32 r_{p-1}.
        let combo: BigInt = a_at(&a, p_i - 3) * 5184 - a_at(&a, p_i - 2) * 720 - a_at(&a, p_i - 1) * 32;
        // m_p = (1/12) (-delta_{p2}/2 - combo / 2).
        let mut m = smooth_ratio(-combo, pow72(p - 1) * 144, &[2, 3]);
        if p == 2 {
            m -= BigRational::new(1.into(), 24.into());
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaws::series::rat;

    #[test]
    fn reciprocal_start() {
        let a = reciprocal_numerators(3);
        assert_eq!(a[0], BigInt::from(1));
        assert_eq!(a[1], BigInt::from(20));
        // 2 A_2 = 60 * 20 - 144 = 1056
        assert_eq!(a[2], BigInt::from(528));
    }

    #[test]
    fn z_golden() {
        let z = z_values(2);
        assert_eq!(z[0], rat(0, 1));
        assert_eq!(z[1], rat(1, 9));
        assert_eq!(z[2], rat(5, 324));
    }

    #[test]
    fn kappa_golden() {
        let k = kappa_ratios(2);
        assert_eq!(k[0], rat(1, 1));
        assert_eq!(k[1], rat(7, 9));
    }

    #[test]
    fn theta_numerators_match_z() {
        let z = z_values(12);
        let t = theta_numerators(10);
        for k in 0..=10 {
            let theta = BigRational::new(t[k].clone(), theta_denominator(k));
            let expect = &z[k + 1] * BigRational::from_integer(BigInt::from(6) << k);
            assert_eq!(theta, expect, "k = {k}");
        }
    }

    #[test]
    fn first_moment_p1() {
        assert_eq!(first_moments(1)[1], rat(2, 9));
    }

    #[test]
    fn smooth_ratio_reduces() {
        let r = smooth_ratio(BigInt::from(36), BigInt::from(48), &[2, 3]);
        assert_eq!(r, rat(3, 4));
        assert_eq!(small_primes_of(60), vec![2, 3, 5]);
    }
}
