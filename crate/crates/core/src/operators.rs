//! Normalized power series `f(z) = z + sum_{n >= 2} a_n z^n` and the operators
//! built on them: Hadamard convolution, `J_nu f = z S_nu * f`, the integral
//! operator `Q_nu`, and the coefficient sums that decide membership in
//! `T_lambda(alpha)` and `L_lambda(alpha)`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::criteria::{ClassParams, DixitPalParams};
use crate::error::{Error, Result};
use crate::series::{weighted_geometric_tail, CoefficientSequence, KernelOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// Stored values are the signed coefficients `a_n`.
    General,
    /// Stored values are magnitudes `b_n >= 0` of `f(z) = z - sum b_n z^n`.
    NegativeCoefficients,
}

/// Geometric bound on the discarded coefficients: `|a_n| <= base * ratio^(n - N)` for `n > N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMajorant {
    pub base: f64,
    pub ratio: f64,
}

impl TailMajorant {
    pub const EXACT: TailMajorant = TailMajorant { base: 0.0, ratio: 0.0 };

    pub fn is_exact(&self) -> bool {
        self.base == 0.0
    }

    /// Bound on `sum_{n > N} n^degree |a_n|`.
    pub fn weighted(&self, truncation: usize, degree: u32) -> f64 {
        if self.is_exact() {
            return 0.0;
        }
        self.base * weighted_geometric_tail(truncation as f64, degree, self.ratio)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSeries {
    /// Values for `n = 2 ..= N`; see [`SignConvention`] for their meaning.
    coeffs: Vec<f64>,
    sign_convention: SignConvention,
    tail: TailMajorant,
}

impl NormalizedSeries {
    pub fn new(coeffs: Vec<f64>, sign_convention: SignConvention, tail: TailMajorant) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("series coefficients must be finite"));
        }
        if sign_convention == SignConvention::NegativeCoefficients && coeffs.iter().any(|&b| b < 0.0) {
            return Err(Error::param("negative-coefficient series stores magnitudes b_n >= 0"));
        }
        if !(tail.base >= 0.0 && tail.ratio >= 0.0) || tail.base.is_nan() || tail.ratio.is_nan() {
            return Err(Error::param("tail majorant must be nonnegative"));
        }
        Ok(NormalizedSeries {
            coeffs,
            sign_convention,
            tail,
        })
    }

    /// Finite polynomial `z + sum a_n z^n`.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(coeffs, SignConvention::General, TailMajorant::EXACT)
    }

    /// The function `f(z) = z`.
    pub fn identity() -> Self {
        NormalizedSeries {
            coeffs: Vec::new(),
            sign_convention: SignConvention::General,
            tail: TailMajorant::EXACT,
        }
    }

    /// `z / (1 - z)` truncated at degree `n`; the unit of the Hadamard product.
    pub fn convolution_unit(n: usize) -> Self {
        NormalizedSeries {
            coeffs: vec![1.0; n.saturating_sub(1)],
            sign_convention: SignConvention::General,
            tail: TailMajorant { base: 1.0, ratio: 1.0 },
        }
    }

    /// `z S_nu(z) = z + sum c_{n-1} z^n` with coefficient tail at most `tol`.
    pub fn normalized_kernel(nu: KernelOrder, tol: f64) -> Result<Self> {
        let seq = CoefficientSequence::new(nu, tol)?;
        Ok(Self::from_kernel(&seq, SignConvention::General))
    }

    /// `Phi(z) = z (2 - S_nu(z)) = z - sum c_{n-1} z^n`.
    pub fn phi(nu: KernelOrder, tol: f64) -> Result<Self> {
        let seq = CoefficientSequence::new(nu, tol)?;
        Ok(Self::from_kernel(&seq, SignConvention::NegativeCoefficients))
    }

    fn from_kernel(seq: &CoefficientSequence, sign_convention: SignConvention) -> Self {
        let c = seq.values();
        let last = c[c.len() - 1];
        NormalizedSeries {
            coeffs: c[1..].to_vec(),
            sign_convention,
            tail: TailMajorant {
                base: last,
                ratio: seq.tail_ratio(),
            },
        }
    }

    pub fn sign_convention(&self) -> SignConvention {
        self.sign_convention
    }

    pub fn tail(&self) -> TailMajorant {
        self.tail
    }

    /// Truncation index `N` (the highest stored power).
    pub fn truncation(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// Stored values for `n = 2 ..= N`.
    pub fn stored(&self) -> &[f64] {
        &self.coeffs
    }

    /// Signed coefficient `a_n` for `n >= 1` (zero past the truncation).
    pub fn coeff(&self, n: usize) -> f64 {
        match n {
            0 => 0.0,
            1 => 1.0,
            _ => match self.coeffs.get(n - 2) {
                None => 0.0,
                Some(&v) => match self.sign_convention {
                    SignConvention::General => v,
                    SignConvention::NegativeCoefficients => -v,
                },
            },
        }
    }

    /// Bound on `sum_{n > N} |a_n|`, the truncation error on `|z| <= 1`.
    pub fn tail_bound(&self) -> f64 {
        self.tail.weighted(self.truncation(), 0)
    }

    /// Signed coefficients `a_0 ..= a_N` (with `a_0 = 0`, `a_1 = 1`).
    pub fn signed_coeffs(&self) -> Vec<f64> {
        (0..=self.truncation()).map(|n| self.coeff(n)).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.derivatives(z, 0)[0]
    }

    /// `f, f', ..., f^(order)` of the truncated series at `z`, for `order <= 3`.
    pub fn derivatives(&self, z: Complex64, order: usize) -> [Complex64; 4] {
        let a = self.signed_coeffs();
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (k, slot) in out.iter_mut().enumerate().take(order.min(3) + 1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in (k..a.len()).rev() {
                acc = acc * z + a[n] * crate::series::falling(n, k);
            }
            *slot = acc;
        }
        out
    }

    /// Plain-text coefficient list, one `n value` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let convention = match self.sign_convention {
            SignConvention::General => "general",
            SignConvention::NegativeCoefficients => "negative",
        };
        let _ = writeln!(out, "# normalized series: f(z) = z + sum a_n z^n");
        let _ = writeln!(out, "# convention = {convention}");
        let _ = writeln!(out, "# tail_base = {:.16e}", self.tail.base);
        let _ = writeln!(out, "# tail_ratio = {:.16e}", self.tail.ratio);
        for (i, v) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{} {:.16e}", i + 2, v);
        }
        out
    }

    /// Parses the format written by [`NormalizedSeries::to_text`].
    ///
    /// Lines are `n value` with `n` running consecutively from 2. Comment
    /// lines start with `#`; the `convention`, `tail_base` and `tail_ratio`
    /// directives are optional and default to an exact general polynomial.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut convention = SignConvention::General;
        let mut tail = TailMajorant::EXACT;
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Format { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    let value = value.trim();
                    match key.trim() {
                        "convention" => {
                            convention = match value {
                                "general" => SignConvention::General,
                                "negative" => SignConvention::NegativeCoefficients,
                                other => return Err(err(format!("unknown convention `{other}`"))),
                            }
                        }
                        "tail_base" => tail.base = value.parse().map_err(|e| err(format!("tail_base: {e}")))?,
                        "tail_ratio" => tail.ratio = value.parse().map_err(|e| err(format!("tail_ratio: {e}")))?,
                        _ => {}
                    }
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err("expected `index value`".into()));
            };
            let index: usize = index.parse().map_err(|e| err(format!("index: {e}")))?;
            let value: f64 = value.parse().map_err(|e| err(format!("value: {e}")))?;
            if index != coeffs.len() + 2 {
                return Err(err(format!("expected index {}, found {index}", coeffs.len() + 2)));
            }
            coeffs.push(value);
        }
        Self::new(coeffs, convention, tail).map_err(|e| Error::Format {
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Coefficient-wise product `z + sum a_n b_n z^n`, truncated at the shorter input.
pub fn hadamard(f: &NormalizedSeries, g: &NormalizedSeries) -> NormalizedSeries {
    let n = f.truncation().min(g.truncation());
    let products: Vec<f64> = (2..=n).map(|k| f.coeff(k) * g.coeff(k)).collect();

    let (short, long) = if f.truncation() <= g.truncation() {
        (f, g)
    } else {
        (g, f)
    };
    let tail = if short.tail.is_exact() {
        TailMajorant::EXACT
    } else if f.truncation() == g.truncation() {
        TailMajorant {
            base: f.tail.base * g.tail.base,
            ratio: f.tail.ratio * g.tail.ratio,
        }
    } else {
        // Past N the longer factor is bounded by its stored values and, beyond
        // those, by its own majorant (which never grows when ratio <= 1).
        let stored_max = (n + 1..=long.truncation())
            .map(|k| long.coeff(k).abs())
            .fold(0.0, f64::max);
        let long_max = if long.tail.is_exact() {
            stored_max
        } else if long.tail.ratio <= 1.0 {
            stored_max.max(long.tail.base)
        } else {
            f64::INFINITY
        };
        if long_max == 0.0 {
            TailMajorant::EXACT
        } else {
            TailMajorant {
                base: short.tail.base * long_max,
                ratio: short.tail.ratio,
            }
        }
    };

    let negative = |s: &NormalizedSeries| s.sign_convention == SignConvention::NegativeCoefficients;
    let sign_convention = match (negative(f), negative(g)) {
        (true, false) | (false, true) if products.iter().all(|&p| p <= 0.0) => SignConvention::NegativeCoefficients,
        _ => SignConvention::General,
    };
    let coeffs = match sign_convention {
        SignConvention::General => products,
        SignConvention::NegativeCoefficients => products.into_iter().map(|p| -p).collect(),
    };
    NormalizedSeries {
        coeffs,
        sign_convention,
        tail,
    }
}

/// `J_nu f = z S_nu * f = z + sum c_{n-1} a_n z^n`.
pub fn bessel_struve_transform(nu: KernelOrder, f: &NormalizedSeries) -> Result<NormalizedSeries> {
    if !nu.operator_valid() {
        return Err(Error::OperatorDomain(nu.value()));
    }
    let n = f.truncation().max(2);
    let kernel = NormalizedSeries::from_kernel(&CoefficientSequence::with_len(nu, n - 1), SignConvention::General);
    Ok(hadamard(&kernel, f))
}

/// `Q_nu(z) = int_0^z (2 - S_nu(t)) dt = z - sum c_{n-1} z^n / n`, truncated at degree `n`.
pub fn q_operator(nu: KernelOrder, n: usize) -> Result<NormalizedSeries> {
    if !nu.operator_valid() {
        return Err(Error::OperatorDomain(nu.value()));
    }
    if n < 2 {
        return Err(Error::param("q_operator needs truncation degree >= 2"));
    }
    let seq = CoefficientSequence::with_len(nu, n - 1);
    let c = seq.values();
    let coeffs: Vec<f64> = (2..=n).map(|k| c[k - 1] / k as f64).collect();
    // b_k = c_{k-1}/k <= c_{n-1} q^(k-n) / (n + 1) for k > n.
    let tail = TailMajorant {
        base: c[n - 1] / (n + 1) as f64,
        ratio: seq.tail_ratio(),
    };
    NormalizedSeries::new(coeffs, SignConvention::NegativeCoefficients, tail)
}

/// The extremal coefficient envelope `a_n = (A - B)|tau| / n` of `R^tau(A, B)`, `2 <= n <= N`.
pub fn rtab_extremal_sequence(d: DixitPalParams, n: usize) -> NormalizedSeries {
    let scale = d.scale();
    NormalizedSeries {
        coeffs: (2..=n.max(1)).map(|k| scale / k as f64).collect(),
        sign_convention: SignConvention::General,
        tail: TailMajorant {
            base: scale / (n.max(1) + 1) as f64,
            ratio: 1.0,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

/// A coefficient sum over the stored terms together with a bound on the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSum {
    /// Sum over `2 <= n <= N`. Weights are positive, so this is a lower bound.
    pub partial: f64,
    /// Upper bound on the contribution of `n > N`.
    pub tail: f64,
    pub threshold: f64,
    /// True when `partial <= threshold < partial + tail`.
    pub tail_may_flip: bool,
}

impl CoefficientSum {
    fn new(partial: f64, tail: f64, threshold: f64) -> Self {
        CoefficientSum {
            partial,
            tail,
            threshold,
            tail_may_flip: partial <= threshold && partial + tail > threshold,
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.partial > self.threshold {
            Outcome::Fails
        } else if self.tail_may_flip {
            Outcome::Inconclusive
        } else {
            Outcome::Holds
        }
    }

    /// `Ok(true)` if the sum is at most the threshold, `Ok(false)` if it exceeds
    /// it, and an inconclusive error when the tail straddles the threshold.
    pub fn decide(&self) -> Result<bool> {
        match self.outcome() {
            Outcome::Holds => Ok(true),
            Outcome::Fails => Ok(false),
            Outcome::Inconclusive => Err(Error::Inconclusive {
                partial: self.partial,
                tail: self.tail,
                threshold: self.threshold,
            }),
        }
    }
}

fn weighted_sum(f: &NormalizedSeries, extra_degree: u32, p: ClassParams) -> CoefficientSum {
    let (l, a) = (p.lambda(), p.alpha());
    let weight = |n: f64| n.powi(extra_degree as i32) * (n * l - l + 1.0) * (n - a);
    let partial: f64 = (2..=f.truncation())
        .rev()
        .map(|n| weight(n as f64) * f.coeff(n).abs())
        .sum();
    // (n l - l + 1)(n - a) <= n^2 for n >= 1.
    let tail = f.tail.weighted(f.truncation(), 2 + extra_degree);
    CoefficientSum::new(partial, tail, 1.0 - a)
}

/// `sum (n l - l + 1)(n - a) |a_n|` compared against `1 - a`.
///
/// At most `1 - a` is sufficient for `T_lambda(alpha)`, and necessary too for
/// negative-coefficient series.
pub fn coefficient_sum_t(f: &NormalizedSeries, p: ClassParams) -> CoefficientSum {
    weighted_sum(f, 0, p)
}

/// `sum n (n l - l + 1)(n - a) |a_n|` compared against `1 - a`; the `L_lambda(alpha)` analogue.
pub fn coefficient_sum_l(f: &NormalizedSeries, p: ClassParams) -> CoefficientSum {
    weighted_sum(f, 1, p)
}
