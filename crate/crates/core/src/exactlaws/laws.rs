//! Closed-form laws of the skeleton branching process.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::holonomic::{self, smooth_ratio, small_primes_of, ReciprocalStream};
use super::series::{int, rat, rational_sqrt, to_f64, ExactRational, TruncatedSeries};
use super::table::LawTable;
use crate::error::{Error, Result};

/// Default remaining-mass threshold for table cutoffs.
pub const DEFAULT_TAIL_EPS: f64 = 1e-12;

/// Hard limit on table length, to keep runaway cutoffs from exhausting memory.
pub const MAX_TABLE_LEN: usize = 2_000_000;

/// `kappa_1 = 32 / sqrt(3 pi)`; kept out of every exact computation.
pub fn kappa_1() -> f64 {
    32.0 / (3.0 * std::f64::consts::PI).sqrt()
}

/// A value that is exact when the closed form allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(ExactRational),
    Real(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => to_f64(x),
            Value::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&ExactRational> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Real(_) => None,
        }
    }
}

/// `U(1/12, y) = sqrt((18-y)(2-y)^3)/24 - 1/2 + y/2 - y^2/24` to order `order`,
/// computed with the Newton series engine.
pub fn series_u(order: usize) -> Result<TruncatedSeries> {
    if order == 0 {
        return Err(Error::Invalid("order must be at least 1".into()));
    }
    // (18-y)(2-y)^3 = 144 - 224y + 120y^2 - 24y^3 + y^4
    let poly: Vec<_> = [144, -224, 120, -24, 1].iter().map(|&c| int(c)).collect();
    let root = TruncatedSeries::from_coefficients(&poly, order).sqrt()?;
    let correction = TruncatedSeries::from_coefficients(&[rat(-1, 2), rat(1, 2), rat(-1, 24)], order);
    Ok(root.scale(&rat(1, 24)).add(&correction))
}

/// `kappa_p / kappa_1` for `p = 1..=pmax`.
pub fn kappa_ratios(pmax: usize) -> Result<Vec<ExactRational>> {
    if pmax == 0 {
        return Err(Error::Invalid("pmax must be at least 1".into()));
    }
    Ok(holonomic::kappa_ratios(pmax))
}

/// `h(p)/h(1) = 2^(p-1) (kappa_p/kappa_1) / p`.
pub fn h_ratios(pmax: usize) -> Result<Vec<ExactRational>> {
    Ok(kappa_ratios(pmax)?
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            let p = i + 1;
            k * BigRational::new(BigInt::one() << i, BigInt::from(p))
        })
        .collect())
}

/// Offspring law `theta(0..=kmax)`.
pub fn theta_law(kmax: usize) -> Result<LawTable> {
    if kmax == 0 {
        return Err(Error::Invalid("kmax must be at least 1".into()));
    }
    let nums = holonomic::theta_numerators(kmax);
    let mut masses = Vec::with_capacity(kmax + 1);
    let mut cumulative = Vec::with_capacity(kmax + 1);
    let mut den = BigInt::from(24 * 72);
    let mut acc = BigInt::zero();
    for (k, num) in nums.into_iter().enumerate() {
        if k > 0 {
            den *= 72;
        }
        acc = acc * 72 + &num;
        masses.push(smooth_ratio(num, den.clone(), &[2, 3]));
        cumulative.push(smooth_ratio(acc.clone(), den.clone(), &[2, 3]));
    }
    LawTable::from_parts(masses, cumulative, "theta offspring law")
}

/// Exact `theta(k)` for a single `k`.
pub fn theta(k: usize) -> ExactRational {
    let nums = holonomic::theta_numerators(k);
    smooth_ratio(nums[k].clone(), holonomic::theta_denominator(k), &[2, 3])
}

fn sqrt_ratio_value(y: &ExactRational) -> Value {
    let q = (int(9) - y) / (int(1) - y);
    match rational_sqrt(&q) {
        Some(s) => Value::Exact(s),
        None => Value::Real(to_f64(&q).sqrt()),
    }
}

fn check_unit(y: &ExactRational) -> Result<()> {
    if y.is_negative() || *y >= int(1) {
        return Err(Error::Domain(format!("argument {y} outside [0, 1)")));
    }
    Ok(())
}

/// `g^(r)(y) = 1 - 8/((sqrt((9-y)/(1-y)) + 2r)^2 - 1)`, exact when possible.
pub fn g_theta_iter_exact(r: usize, y: &ExactRational) -> Result<Value> {
    check_unit(y)?;
    let shift = int(2 * r as i64);
    Ok(match sqrt_ratio_value(y) {
        Value::Exact(s) => {
            let t = s + shift;
            Value::Exact(int(1) - int(8) / (&t * &t - int(1)))
        }
        Value::Real(s) => {
            let t = s + 2.0 * r as f64;
            Value::Real(1.0 - 8.0 / (t * t - 1.0))
        }
    })
}

/// The offspring generating function.
pub fn g_theta(y: &ExactRational) -> Result<Value> {
    g_theta_iter_exact(1, y)
}

/// Floating-point iterate `g^(r)(y)` for `y` in `[0, 1)`; `r = 0` is the identity.
pub fn g_theta_iter(r: usize, y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Domain(format!("argument {y} outside [0, 1)")));
    }
    if r == 0 {
        return Ok(y);
    }
    let t = ((8.0 + (1.0 - y)) / (1.0 - y)).sqrt() + 2.0 * r as f64;
    Ok(1.0 - 8.0 / (t * t - 1.0))
}

/// Extinction probability `pi_r = r(r+3)/((r+1)(r+2))`.
pub fn pi(r: usize) -> ExactRational {
    let r = BigInt::from(r);
    BigRational::new(&r * (&r + 3), (&r + 1) * (&r + 2))
}

pub fn pi_f64(r: usize) -> f64 {
    let r = r as f64;
    1.0 - 2.0 / ((r + 1.0) * (r + 2.0))
}

/// `f(u) = (64/3)(3+2u)/((3+2u)^2-1)^2`, so that `phi_u(p) = p pi_u^(p-1) f(u)`
/// and `g'(pi_(u-1)) = f(u)/f(u-1)`.
pub fn f_const(u: usize) -> ExactRational {
    let t = BigInt::from(3 + 2 * u as i64);
    let d = &t * &t - 1;
    BigRational::new(BigInt::from(64) * t, BigInt::from(3) * &d * &d)
}

/// `phi_u(p) = P_p(Y_u = 1)`.
pub fn phi(u: usize, p: usize) -> Result<ExactRational> {
    if p == 0 {
        return Err(Error::Invalid("p must be positive".into()));
    }
    if u == 0 {
        return Ok(if p == 1 { int(1) } else { int(0) });
    }
    Ok(num_traits::pow(pi(u), p - 1) * f_const(u) * int(p as i64))
}

/// Streaming exact partial sums of the hull perimeter law.
///
/// With `pi_r = a/b`, `a = r(r+3)`, `b = (r+1)(r+2)`, the mass at `P` is
/// `C u_P / (72^(P-1) b^P)` where `u_P = B_(P-1) a^P` and `C = 4(2r+3)/(3r(r+1)(r+2)(r+3))`.
/// Everything advances with small-integer multiplications.
pub struct HullStream {
    a: u64,
    b: u64,
    p: usize,
    n: u64,
    a2_prev: BigInt,
    a2_cur: BigInt,
    u: BigInt,
    acc: BigInt,
    den: BigInt,
    c_num: BigInt,
    c_den: BigInt,
    primes: Vec<u64>,
}

impl HullStream {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("radius must be at least 1".into()));
        }
        let r64 = r as u64;
        let a = r64 * (r64 + 3);
        let b = (r64 + 1) * (r64 + 2);
        let mut primes = vec![2, 3];
        for x in [r64, r64 + 1, r64 + 2, r64 + 3] {
            for q in small_primes_of(x) {
                if !primes.contains(&q) {
                    primes.push(q);
                }
            }
        }
        let c_num = BigInt::from(4 * (2 * r64 + 3));
        let c_den = BigInt::from(3u64) * BigInt::from(r64) * BigInt::from(b) * BigInt::from(r64 + 3);
        Ok(HullStream {
            a,
            b,
            p: 0,
            n: 0,
            a2_prev: BigInt::zero(),
            a2_cur: BigInt::one(),
            u: BigInt::zero(),
            acc: BigInt::zero(),
            den: BigInt::one(),
            c_num,
            c_den,
            primes,
        })
    }

    /// Advances to the next perimeter `P` and returns it.
    pub fn advance(&mut self) -> usize {
        if self.p == 0 {
            self.u = BigInt::from(self.a);
            self.den = BigInt::from(self.b);
        } else {
            // u_{P+1} = 72 a u_P + a A''_P
            self.u = &self.u * (72 * self.a) + &self.a2_cur * self.a;
            self.den *= 72 * self.b;
        }
        self.acc = &self.acc * (72 * self.b) + &self.u;
        // Keep a2_cur = A''_P = A_P (2a)^P for the perimeter just reached.
        let two_a = BigInt::from(2 * self.a);
        let n = self.n;
        let next = (&self.a2_cur * (40 * n + 20) * &two_a
            - &self.a2_prev * (144 * n) * &two_a * &two_a)
            / (n + 1);
        self.a2_prev = std::mem::replace(&mut self.a2_cur, next);
        self.n += 1;
        self.p += 1;
        self.p
    }

    pub fn perimeter(&self) -> usize {
        self.p
    }

    pub fn mass(&self) -> ExactRational {
        smooth_ratio(&self.c_num * &self.u, &self.c_den * &self.den, &self.primes)
    }

    pub fn cumulative(&self) -> ExactRational {
        smooth_ratio(&self.c_num * &self.acc, &self.c_den * &self.den, &self.primes)
    }

    /// `1 - cumulative` in floating point, computed from the exact remainder.
    pub fn remaining_f64(&self) -> f64 {
        let d = &self.c_den * &self.den;
        let rest = &d - &self.c_num * &self.acc;
        to_f64(&BigRational::new_raw(rest, d))
    }
}

/// Law of the truncated-hull perimeter `H_r`, cut where the remaining mass is below `tail_eps`.
pub fn hull_perimeter_law(r: usize, tail_eps: f64) -> Result<LawTable> {
    if !(tail_eps > 0.0) {
        return Err(Error::Invalid("tail_eps must be positive".into()));
    }
    let mut s = HullStream::new(r)?;
    let mut masses = vec![int(0)];
    let mut cumulative = vec![int(0)];
    loop {
        s.advance();
        masses.push(s.mass());
        cumulative.push(s.cumulative());
        if s.remaining_f64() < tail_eps {
            break;
        }
        if masses.len() >= MAX_TABLE_LEN {
            return Err(Error::Invalid(format!("hull law for r = {r} exceeds table limit")));
        }
    }
    LawTable::from_parts(masses, cumulative, format!("hull perimeter law r={r}"))
}

/// Exact tails `(P(H_r >= a r^2), P(H_r <= a r^2))`.
pub fn perimeter_tail_check(r: usize, a: f64) -> Result<(ExactRational, ExactRational)> {
    if !(a > 0.0) {
        return Err(Error::Invalid("a must be positive".into()));
    }
    let x = a * (r * r) as f64;
    let lower_end = x.floor() as usize;
    let upper_start = x.ceil().max(1.0) as usize;
    let mut s = HullStream::new(r)?;
    let mut lower = int(0);
    let mut below_upper = int(0);
    let last = lower_end.max(upper_start - 1);
    while s.perimeter() < last {
        s.advance();
        if s.perimeter() == lower_end {
            lower = s.cumulative();
        }
        if s.perimeter() == upper_start - 1 {
            below_upper = s.cumulative();
        }
    }
    Ok((int(1) - below_upper, lower))
}

/// Negative binomial law with pgf `((1-q)/(1-q a))^shape`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegBinomialParams {
    pub shape: ExactRational,
    pub success: ExactRational,
}

impl NegBinomialParams {
    pub fn pgf(&self, a: f64) -> f64 {
        let q = to_f64(&self.success);
        ((1.0 - q) / (1.0 - q * a)).powf(to_f64(&self.shape))
    }

    pub fn mean(&self) -> ExactRational {
        &self.shape * &self.success / (int(1) - &self.success)
    }
}

/// Law of `N_{u,w} = 1 + U + V`, the number of generation-(w-u) ancestors of
/// the generation-w population under the hull skeleton of radius `w`.
pub fn n_trees_law(u: usize, w: usize) -> Result<(NegBinomialParams, NegBinomialParams, LawTable)> {
    n_trees_law_eps(u, w, DEFAULT_TAIL_EPS)
}

pub fn n_trees_law_eps(
    u: usize,
    w: usize,
    tail_eps: f64,
) -> Result<(NegBinomialParams, NegBinomialParams, LawTable)> {
    if u == 0 || u >= w {
        return Err(Error::Invalid(format!("need 1 <= u < w, got u={u}, w={w}")));
    }
    let m = w - u;
    let pm = pi(m);
    let diff = pi(w) - &pm;
    let q1 = &diff / (int(9) - &pm);
    let q2 = &diff / (int(1) - &pm);
    let nb1 = NegBinomialParams { shape: rat(1, 2), success: q1.clone() };
    let nb2 = NegBinomialParams { shape: rat(3, 2), success: q2.clone() };

    // Coefficients g_k of (1-a q1)^(-1/2) (1-a q2)^(-3/2) from the first-order ODE
    // (k+1) g_{k+1} = ((q1+q2) k + q1/2 + 3 q2/2) g_k - q1 q2 (k+1) g_{k-1}.
    let lead = f_const(w) / f_const(m);
    let s = &q1 + &q2;
    let c = &q1 * rat(1, 2) + &q2 * rat(3, 2);
    let prod = &q1 * &q2;
    let mut masses = vec![int(0)];
    let mut cumulative = vec![int(0)];
    let mut acc = int(0);
    let (mut g_prev, mut g_cur) = (int(0), int(1));
    let mut k = 0i64;
    loop {
        let mass = &lead * &g_cur;
        acc += &mass;
        masses.push(mass);
        cumulative.push(acc.clone());
        if to_f64(&(int(1) - &acc)) < tail_eps {
            break;
        }
        if masses.len() >= MAX_TABLE_LEN {
            return Err(Error::Invalid("N law exceeds table limit".into()));
        }
        let next = ((&s * int(k) + &c) * &g_cur - &prod * int(k + 1) * &g_prev) / int(k + 1);
        g_prev = std::mem::replace(&mut g_cur, next);
        k += 1;
    }
    let table = LawTable::from_parts(masses, cumulative, format!("N law u={u} w={w}"))?;
    Ok((nb1, nb2, table))
}

/// Exact `E[N_{u,w}] = 1 + E[U] + E[V]`.
pub fn n_trees_mean(u: usize, w: usize) -> Result<ExactRational> {
    let (a, b, _) = n_trees_law_eps(u, w, 1.0)?;
    Ok(int(1) + a.mean() + b.mean())
}

/// `E[a^N] = a * NB1(a) * NB2(a)`.
pub fn n_trees_pgf(nb1: &NegBinomialParams, nb2: &NegBinomialParams, a: f64) -> f64 {
    a * nb1.pgf(a) * nb2.pgf(a)
}

/// `(P_1(Y_r != 0), (r^2/2) E_1[exp(-lambda Y_r / r^2) 1{Y_r != 0}])`.
pub fn survival_scaling(r: usize, lambda: f64) -> Result<(ExactRational, f64)> {
    if r == 0 || !(lambda > 0.0) {
        return Err(Error::Invalid("need r >= 1 and lambda > 0".into()));
    }
    let rb = BigInt::from(r);
    let survival = BigRational::new(BigInt::from(2), (&rb + 1) * (&rb + 2));
    let rf = r as f64;
    let one_minus_s = -(-lambda / (rf * rf)).exp_m1();
    let c = ((8.0 + one_minus_s) / one_minus_s).sqrt();
    let t0 = 3.0 + 2.0 * rf;
    let t = c + 2.0 * rf;
    // g^(r)(s) - g^(r)(0), written without cancellation.
    let diff = 8.0 / (t0 * t0 - 1.0) - 8.0 / (t * t - 1.0);
    Ok((survival, rf * rf / 2.0 * diff))
}

/// Stationary measure `Pi(x) = (48/sqrt(3 pi)) (sqrt((9-x)/(1-x)) - 3)`.
pub fn stationary_pi(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("argument {x} outside [0, 1)")));
    }
    let scale = 48.0 / (3.0 * std::f64::consts::PI).sqrt();
    Ok(scale * (((9.0 - x) / (1.0 - x)).sqrt() - 3.0))
}

/// `E[Inn(M_p)]` for `p = 1..=pmax` (index 0 unused).
pub fn slot_mean_volumes(pmax: usize) -> Vec<ExactRational> {
    let z = holonomic::z_values(pmax);
    let m = holonomic::first_moments(pmax);
    let mut out = vec![int(0)];
    for p in 1..=pmax {
        out.push(&m[p] / &z[p]);
    }
    out
}

/// `E[Inn(M_p)]` in `f64` for `p = 1..=pmax` (index 0 unused). Small `p`
/// come from the exact values; larger ones are streamed.
pub fn slot_mean_volumes_f64(pmax: usize) -> Vec<f64> {
    const EXACT_UPTO: usize = 8;
    let mut out: Vec<f64> = slot_mean_volumes(pmax.min(EXACT_UPTO)).iter().map(approx).collect();
    out[0] = 0.0;
    if pmax > EXACT_UPTO {
        out.extend(holonomic::slot_mean_ratios_f64(EXACT_UPTO + 1, pmax));
    }
    out
}

pub fn slot_mean_volume(p: usize) -> Result<ExactRational> {
    if p == 0 {
        return Err(Error::Invalid("p must be positive".into()));
    }
    Ok(slot_mean_volumes(p).pop().expect("non-empty"))
}

/// `Z(p)` for `p = 0..=pmax`.
pub fn z_values(pmax: usize) -> Vec<ExactRational> {
    holonomic::z_values(pmax)
}

/// Floating-point view of a nonnegative exact value, for display.
pub fn approx(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or_else(|| to_f64(x))
}

/// Stream of `A_n`, re-exported for oracles that need the raw recurrence.
pub fn reciprocal_stream() -> ReciprocalStream {
    ReciprocalStream::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_series_agrees_with_recurrence() {
        let u = series_u(50).unwrap();
        let z = z_values(50);
        assert_eq!(u.coefficient(0), &int(0));
        for p in 1..=50 {
            assert_eq!(u.coefficient(p), &z[p], "p={p}");
            assert!(z[p].is_positive());
        }
        assert_eq!(z[1], rat(1, 9));
        assert_eq!(z[2], rat(5, 324));
    }

    #[test]
    fn theta_golden_and_normalized() {
        let t = theta_law(40).unwrap();
        assert_eq!(t.mass(0), rat(2, 3));
        assert_eq!(t.mass(1), rat(5, 27));
        assert_eq!(theta(7), t.mass(7));
        let total: ExactRational = t.masses().iter().sum::<ExactRational>() + t.tail_bound();
        assert_eq!(total, int(1));
        assert!(t.tail_bound().is_positive());
    }

    #[test]
    fn g_theta_values() {
        assert_eq!(g_theta(&int(0)).unwrap(), Value::Exact(rat(2, 3)));
        assert_eq!(g_theta(&rat(2, 3)).unwrap(), Value::Exact(rat(5, 6)));
        assert!(matches!(g_theta(&rat(1, 2)).unwrap(), Value::Real(_)));
        assert!(g_theta(&int(1)).is_err());
        let mut last = 0.0;
        for k in 2..=6 {
            let v = g_theta_iter(1, 1.0 - 10f64.powi(-k)).unwrap();
            assert!(v > last && v < 1.0);
            last = v;
        }
    }

    #[test]
    fn pi_forms_and_iterates() {
        assert_eq!(pi(0), int(0));
        assert_eq!(pi(1), rat(2, 3));
        assert_eq!(pi(2), rat(5, 6));
        assert_eq!(pi(3), rat(9, 10));
        for r in 0..20usize {
            let t = int(3 + 2 * r as i64);
            assert_eq!(pi(r), int(1) - int(8) / (&t * &t - int(1)));
            if r > 0 {
                assert_eq!(g_theta_iter_exact(r, &int(0)).unwrap(), Value::Exact(pi(r)));
            }
        }
    }

    #[test]
    fn iterate_semigroup() {
        for i in 0..20 {
            let y = i as f64 / 20.0;
            let mut comp = y;
            for r in 1..=5 {
                comp = g_theta_iter(1, comp).unwrap();
                assert!((comp - g_theta_iter(r, y).unwrap()).abs() < 1e-12);
            }
            for r in 1..=5 {
                for s in 1..=5 {
                    let lhs = g_theta_iter(r + s, y).unwrap();
                    let rhs = g_theta_iter(r, g_theta_iter(s, y).unwrap()).unwrap();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn phi_golden() {
        assert_eq!(phi(1, 1).unwrap(), rat(5, 27));
        assert_eq!(phi(2, 1).unwrap(), rat(7, 108));
        assert_eq!(phi(0, 1).unwrap(), int(1));
        assert_eq!(phi(0, 3).unwrap(), int(0));
        // Chain rule: (g o g)'(0) = g'(pi_1) g'(0) with g'(pi_1) = 7/20.
        assert_eq!(phi(2, 1).unwrap(), rat(7, 20) * rat(5, 27));
    }

    #[test]
    fn hull_golden_and_normalized() {
        let t = hull_perimeter_law(1, 1e-12).unwrap();
        assert_eq!(t.mass(0), int(0));
        assert_eq!(t.mass(1), rat(5, 27));
        assert_eq!(t.mass(2), rat(140, 729));
        for r in [1, 2, 5] {
            let t = hull_perimeter_law(r, 1e-12).unwrap();
            assert!(to_f64(t.tail_bound()) < 1e-9);
            assert!(!t.tail_bound().is_negative());
        }
    }

    #[test]
    fn hull_law_is_h_times_phi() {
        let h = h_ratios(50).unwrap();
        for r in 1..=10 {
            let t = hull_perimeter_law(r, 1e-3).unwrap();
            let mut s = HullStream::new(r).unwrap();
            for p in 1..=50 {
                s.advance();
                let expect = &h[p - 1] * phi(r, p).unwrap();
                assert_eq!(s.mass(), expect, "r={r} p={p}");
                if p < t.masses().len() {
                    assert_eq!(t.mass(p), expect);
                }
            }
        }
    }

    #[test]
    fn tail_check_small_a() {
        let (upper, lower) = perimeter_tail_check(3, 0.1).unwrap();
        assert_eq!(lower, int(0));
        assert_eq!(upper, int(1));
        let (upper, lower) = perimeter_tail_check(1, 2.0).unwrap();
        assert_eq!(lower, rat(5, 27) + rat(140, 729));
        assert_eq!(upper, int(1) - rat(5, 27));
    }

    #[test]
    fn n_law_golden() {
        let (nb1, nb2, t) = n_trees_law(1, 2).unwrap();
        assert_eq!(nb1.success, rat(1, 50));
        assert_eq!(nb2.success, rat(1, 2));
        assert_eq!(t.mass(1), rat(7, 20));
        assert_eq!(n_trees_mean(1, 2).unwrap(), rat(5, 2) + rat(1, 98));
        assert!((n_trees_pgf(&nb1, &nb2, 1.0) - 1.0).abs() < 1e-15);
        for i in 1..10 {
            let a = i as f64 / 10.0;
            assert!((t.pgf(a) - n_trees_pgf(&nb1, &nb2, a)).abs() < 1e-10);
        }
        assert!(n_trees_law(2, 2).is_err());
    }

    #[test]
    fn survival_values() {
        let (s, _) = survival_scaling(1, 1.0).unwrap();
        assert_eq!(s, rat(1, 3));
        assert_eq!(s, int(1) - pi(1));
        let (s, lap) = survival_scaling(1000, 2.0).unwrap();
        assert!((lap - 0.75).abs() / 0.75 < 0.02);
        assert!((1e6 * to_f64(&s) / 2.0 - 1.0).abs() < 0.003);
    }

    #[test]
    fn stationary_measure() {
        assert_eq!(stationary_pi(0.0).unwrap(), 0.0);
        let p1 = stationary_pi(2.0 / 3.0).unwrap();
        for i in 1..10 {
            let y = i as f64 / 10.0;
            let lhs = stationary_pi(g_theta_iter(1, y).unwrap()).unwrap() - p1;
            assert!((lhs - stationary_pi(y).unwrap()).abs() < 1e-12);
        }
        assert!(stationary_pi(1.0).is_err());
    }

    #[test]
    fn slot_mean_p1_is_two() {
        assert_eq!(slot_mean_volume(1).unwrap(), int(2));
        let v = slot_mean_volumes(50);
        for p in 2..=50 {
            assert!(v[p] > v[p - 1]);
        }
    }

    #[test]
    fn streamed_slot_means_match_exact() {
        let exact = slot_mean_volumes(80);
        let float = slot_mean_volumes_f64(80);
        for p in 1..=80 {
            let e = approx(&exact[p]);
            assert!((float[p] - e).abs() <= 1e-12 * e, "p={p}: {} vs {e}", float[p]);
        }
    }
}
