//! Forward-stable floating-point streams for the same coefficients, used by
//! samplers and large-scale criticality checks. Tests compare them with the
//! exact values.

/// Streams `theta(0), theta(1), ...` in `f64`.
///
/// With `w_n = [y^n] sqrt((9-y)(1-y))`, `theta(k) = (w_{k+1} - w_k)/2` for `k >= 2`.
/// The recurrence `18(n+1) w_{n+1} = (20n-10) w_n - (2n-4) w_{n-1}` has
/// characteristic roots 1 and 1/9, so the wanted solution is dominant.
#[derive(Clone, Debug)]
pub struct ThetaF64Stream {
    k: usize,
    n: f64,
    w_prev: f64,
    w_cur: f64,
}

impl Default for ThetaF64Stream {
    fn default() -> Self {
        Self::new()
    }
}

impl ThetaF64Stream {
    pub fn new() -> Self {
        // Positioned so that w_prev = w_2, w_cur = w_3 when k reaches 2.
        let w0 = 3.0;
        let w1 = -5.0 / 3.0;
        let w2 = (10.0 * w1 + 2.0 * w0) / 36.0;
        let w3 = 30.0 * w2 / 54.0;
        ThetaF64Stream { k: 0, n: 3.0, w_prev: w2, w_cur: w3 }
    }

    /// Index of the next value to be produced.
    pub fn position(&self) -> usize {
        self.k
    }
}

impl Iterator for ThetaF64Stream {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let k = self.k;
        self.k += 1;
        Some(match k {
            0 => 2.0 / 3.0,
            1 => 5.0 / 27.0,
            _ => {
                let out = (self.w_cur - self.w_prev) / 2.0;
                let n = self.n;
                let next = ((20.0 * n - 10.0) * self.w_cur - (2.0 * n - 4.0) * self.w_prev) / (18.0 * (n + 1.0));
                self.w_prev = self.w_cur;
                self.w_cur = next;
                self.n += 1.0;
                out
            }
        })
    }
}

/// Streams `kappa_p / kappa_1` scaled by `2^(p-1)`, for `p = 1, 2, ...`.
///
/// With `alpha_n = A_n / 36^n`, `(kappa_p/kappa_1) 2^(p-1) = sum_{j<p} alpha_j`.
#[derive(Clone, Debug)]
pub struct ScaledKappaStream {
    n: f64,
    a_prev: f64,
    a_cur: f64,
    sum: f64,
}

impl Default for ScaledKappaStream {
    fn default() -> Self {
        Self::new()
    }
}

impl ScaledKappaStream {
    pub fn new() -> Self {
        ScaledKappaStream { n: 0.0, a_prev: 0.0, a_cur: 1.0, sum: 0.0 }
    }
}

impl Iterator for ScaledKappaStream {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        self.sum += self.a_cur;
        let n = self.n;
        let next = ((10.0 * n + 5.0) / 9.0 * self.a_cur - n / 9.0 * self.a_prev) / (n + 1.0);
        self.a_prev = self.a_cur;
        self.a_cur = next;
        self.n += 1.0;
        Some(self.sum)
    }
}

/// `P(H_r = p)` for `p = 0..` in `f64`, until the remaining mass is below
/// `tail_eps` or `cap` entries are produced.
pub fn hull_masses_f64(r: usize, tail_eps: f64, cap: usize) -> Vec<f64> {
    let rf = r as f64;
    let k = 2.0 / 3.0 * (2.0 * rf + 3.0) / (rf * (rf + 1.0) * (rf + 2.0) * (rf + 3.0));
    let pi = 1.0 - 2.0 / ((rf + 1.0) * (rf + 2.0));
    let mut out = vec![0.0];
    let mut total = 0.0;
    let mut pw = 1.0;
    // P(H_r = p) = K 2^p (kappa_p/kappa_1) pi^p = 2K (scaled kappa) pi^p.
    for s in ScaledKappaStream::new() {
        pw *= pi;
        let m = 2.0 * k * s * pw;
        total += m;
        out.push(m);
        if 1.0 - total < tail_eps || out.len() >= cap {
            break;
        }
    }
    out
}
