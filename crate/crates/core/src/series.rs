//! Bessel-Struve kernel coefficients and evaluation.
//!
//! The kernel is the entire function
//!
//! ```text
//! S_nu(z) = sum_{n >= 0} c_n(nu) z^n,
//! c_n(nu) = Gamma(nu + 1) Gamma((n + 1)/2) / (sqrt(pi) n! Gamma(n/2 + nu + 1)),
//! ```
//!
//! defined for `nu > -1`. Coefficients are computed from log-Gamma differences,
//! one exponential per coefficient. Truncation uses a geometric majorant: once
//! the ratio `q = c_{N+1}/c_N` is below one and decreasing, every later
//! coefficient satisfies `c_{N+j} <= c_N q^j`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute truncation tolerance on the closed unit disk.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest |z| accepted by the evaluation routines.
pub const MAX_EVAL_RADIUS: f64 = 16.0;

const MAX_TERMS: usize = 10_000;

// ln(sqrt(pi))
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_087_071_713_675_677;

/// The real order `nu` of the kernel family, restricted to `nu > -1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KernelOrder(f64);

impl KernelOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > -1.0 {
            Ok(KernelOrder(nu))
        } else {
            Err(Error::Domain(nu))
        }
    }

    /// Order accepted by the operators and membership conditions (`nu > -1/2`).
    pub fn operator(nu: f64) -> Result<Self> {
        let order = Self::new(nu)?;
        if order.operator_valid() {
            Ok(order)
        } else {
            Err(Error::OperatorDomain(nu))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True iff `nu > -1/2`, the range on which the Bessel-Struve operator is defined.
    #[inline]
    pub fn operator_valid(self) -> bool {
        self.0 > -0.5
    }
}

impl std::fmt::Display for KernelOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln c_n(nu)`. Finite for every `n`, including those where `c_n` underflows.
pub fn ln_kernel_coefficient(nu: KernelOrder, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nu = nu.value();
    let n = n as f64;
    lgamma(nu + 1.0) + lgamma(0.5 * (n + 1.0)) - LN_SQRT_PI - lgamma(n + 1.0) - lgamma(0.5 * n + nu + 1.0)
}

/// `c_n(nu)`; exactly 1 for `n = 0`. Underflows to zero past `n` of roughly 170.
pub fn kernel_coefficient(nu: KernelOrder, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        ln_kernel_coefficient(nu, n).exp()
    }
}

/// `ln c_0 .. ln c_{n_max}` from the two-step recurrence
/// `c_n = c_{n-2} / (n (n + 2 nu))`, seeded with `c_0 = 1` and the
/// Gamma-ratio value of `c_1`. Cross-check path only.
pub fn ln_coefficients_by_recurrence(nu: KernelOrder, n_max: usize) -> Vec<f64> {
    let v = nu.value();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(0.0);
    if n_max >= 1 {
        out.push(lgamma(v + 1.0) - lgamma(v + 1.5) - LN_SQRT_PI);
    }
    for n in 2..=n_max {
        let nf = n as f64;
        let prev = out[n - 2];
        out.push(prev - nf.ln() - (nf + 2.0 * v).ln());
    }
    out
}

/// Upper bound for `sum_{j >= 1} (offset + j)^degree x^j` with `offset >= 0`.
///
/// Terms are summed until the consecutive-term ratio drops below one; the
/// ratio is decreasing in `j`, so the remainder is bounded by a geometric series.
pub(crate) fn weighted_geometric_tail(offset: f64, degree: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 || !x.is_finite() {
        return f64::INFINITY;
    }
    let d = degree as i32;
    let mut term = (offset + 1.0).powi(d) * x;
    let mut sum = 0.0;
    let mut j = 1.0;
    for _ in 0..10_000_000 {
        sum += term;
        let ratio = ((offset + j + 1.0) / (offset + j)).powi(d) * x;
        if ratio < 1.0 {
            let rest = term * ratio / (1.0 - ratio);
            if rest <= 1e-6 * sum {
                return sum + rest;
            }
        }
        term *= ratio;
        j += 1.0;
    }
    f64::INFINITY
}

/// Truncated kernel coefficients `c_0 .. c_N` with a geometric tail majorant.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    nu: KernelOrder,
    values: Vec<f64>,
    /// `q` with `c_{N+j} <= c_N q^j`; infinite when no majorant was established.
    tail_ratio: f64,
}

impl CoefficientSequence {
    /// Adaptive truncation with `sum_{n > N} c_n <= tol`.
    pub fn new(nu: KernelOrder, tol: f64) -> Result<Self> {
        Self::with_weighted_tail(nu, tol, 0, 1.0)
    }

    /// Adaptive truncation with `sum_{n > N} (n + 1)^degree c_n radius^n <= tol`.
    ///
    /// `(n + 1)^3` dominates every weight used by the moment sums and the
    /// third-derivative series.
    pub fn with_weighted_tail(nu: KernelOrder, tol: f64, degree: u32, radius: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::param(format!("tolerance {tol} must lie in (0, 1)")));
        }
        if !(0.0..=MAX_EVAL_RADIUS).contains(&radius) {
            return Err(Error::param(format!(
                "evaluation radius {radius} outside [0, {MAX_EVAL_RADIUS}]"
            )));
        }
        let mut values = vec![1.0, kernel_coefficient(nu, 1)];
        let mut prev_ratio = f64::INFINITY;
        for n in 1..MAX_TERMS {
            let next = kernel_coefficient(nu, n + 1);
            let ratio = next / values[n];
            if ratio < 1.0 && ratio <= prev_ratio {
                let seq = CoefficientSequence {
                    nu,
                    values: values.clone(),
                    tail_ratio: ratio,
                };
                if seq.weighted_tail(degree, radius) <= tol {
                    return Ok(seq);
                }
            }
            // Past underflow every later coefficient is zero in double precision.
            if next == 0.0 {
                return Ok(CoefficientSequence {
                    nu,
                    values,
                    tail_ratio: 0.0,
                });
            }
            prev_ratio = ratio;
            values.push(next);
        }
        unreachable!("kernel coefficients failed to decay within {MAX_TERMS} terms for nu = {nu}")
    }

    /// Fixed truncation `c_0 .. c_n`. The tail majorant is infinite when the
    /// ratio at `n` is not yet below one and decreasing.
    pub fn with_len(nu: KernelOrder, n: usize) -> Self {
        let values: Vec<f64> = (0..=n).map(|k| kernel_coefficient(nu, k)).collect();
        let next = kernel_coefficient(nu, n + 1);
        let tail_ratio = if n == 0 {
            f64::INFINITY
        } else if values[n] == 0.0 {
            0.0
        } else {
            let ratio = next / values[n];
            let prev = values[n] / values[n - 1];
            if ratio < 1.0 && (n == 1 || ratio <= prev) {
                ratio
            } else {
                f64::INFINITY
            }
        };
        CoefficientSequence { nu, values, tail_ratio }
    }

    pub fn nu(&self) -> KernelOrder {
        self.nu
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Truncation index `N`.
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    /// Bound on `sum_{n > N} c_n`, i.e. the truncation error anywhere on `|z| <= 1`.
    pub fn tail_bound(&self) -> f64 {
        self.weighted_tail(0, 1.0)
    }

    /// Bound on `sum_{n > N} (n + 1)^degree c_n radius^n`.
    pub fn weighted_tail(&self, degree: u32, radius: f64) -> f64 {
        let n = self.truncation();
        let last = self.values[n];
        if last == 0.0 || self.tail_ratio == 0.0 || radius == 0.0 {
            return 0.0;
        }
        let scale = last * radius.powi(n as i32);
        scale * weighted_geometric_tail(n as f64 + 1.0, degree, self.tail_ratio * radius)
    }

    /// `S, S', S'', S'''` of the truncated series at `z`.
    pub fn derivatives(&self, z: Complex64) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in (k..self.values.len()).rev() {
                acc = acc * z + self.values[n] * falling(n, k);
            }
            *slot = acc;
        }
        out
    }

    /// Truncated `S_nu(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.values
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// `n (n - 1) ... (n - k + 1)`.
pub(crate) fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// `c_0 .. c_N` truncated so the tail on `|z| <= 1` is at most `tol`.
pub fn coefficient_sequence(nu: KernelOrder, tol: f64) -> Result<CoefficientSequence> {
    CoefficientSequence::new(nu, tol)
}

fn sequence_for(nu: KernelOrder, z: Complex64, tol: f64) -> Result<CoefficientSequence> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::param(format!("non-finite argument z = {z}")));
    }
    CoefficientSequence::with_weighted_tail(nu, tol, 0, z.norm())
}

/// `S_nu(z)` to absolute accuracy `tol`.
pub fn eval_kernel(nu: KernelOrder, z: Complex64, tol: f64) -> Result<Complex64> {
    Ok(sequence_for(nu, z, tol)?.eval(z))
}

/// `z S_nu(z) = z + sum_{n >= 2} c_{n-1} z^n`.
pub fn eval_normalized(nu: KernelOrder, z: Complex64, tol: f64) -> Result<Complex64> {
    let seq = sequence_for(nu, z, tol / z.norm().max(1.0))?;
    Ok(z * seq.eval(z))
}

/// `Phi(z) = z (2 - S_nu(z)) = z - sum_{n >= 2} c_{n-1} z^n`.
pub fn eval_phi(nu: KernelOrder, z: Complex64, tol: f64) -> Result<Complex64> {
    let seq = sequence_for(nu, z, tol / z.norm().max(1.0))?;
    Ok(z * (2.0 - seq.eval(z)))
}

/// Moment sums `m_k = sum_{n >= 2} n^k c_{n-1}` and kernel derivatives
/// `s_k = S_nu^{(k)}(1)`, both computed termwise from the coefficients.
///
/// Evaluating `(z d/dz)^k (z S_nu)` at `z = 1` ties them together:
///
/// ```text
/// m0 = s0 - 1
/// m1 = s1 + s0 - 1
/// m2 = s2 + 3 s1 + s0 - 1
/// m3 = s3 + 6 s2 + 7 s1 + s0 - 1
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub tol: f64,
}

impl MomentSet {
    pub fn m(&self) -> [f64; 4] {
        [self.m0, self.m1, self.m2, self.m3]
    }

    pub fn s(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }

    /// `m_k` minus its expression in terms of `s_0 .. s_3`, for `k = 0..3`.
    pub fn identity_residuals(&self) -> [f64; 4] {
        [
            self.m0 - (self.s0 - 1.0),
            self.m1 - (self.s1 + self.s0 - 1.0),
            self.m2 - (self.s2 + 3.0 * self.s1 + self.s0 - 1.0),
            self.m3 - (self.s3 + 6.0 * self.s2 + 7.0 * self.s1 + self.s0 - 1.0),
        ]
    }
}

pub fn moments(nu: KernelOrder, tol: f64) -> Result<MomentSet> {
    let seq = CoefficientSequence::with_weighted_tail(nu, tol, 3, 1.0)?;
    let c = seq.values();
    // Smallest terms first.
    let moment = |k: i32| -> f64 { (1..c.len()).rev().map(|j| ((j + 1) as f64).powi(k) * c[j]).sum() };
    let derivative = |k: usize| -> f64 { (k..c.len()).rev().map(|n| falling(n, k) * c[n]).sum() };
    Ok(MomentSet {
        m0: moment(0),
        m1: moment(1),
        m2: moment(2),
        m3: moment(3),
        s0: derivative(0),
        s1: derivative(1),
        s2: derivative(2),
        s3: derivative(3),
        tol,
    })
}
