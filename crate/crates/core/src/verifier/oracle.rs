//! Naive high-precision summation.
//!
//! Every coefficient is evaluated straight from the Gamma-function definition
//! in MPFR arithmetic and every sum is accumulated term by term. None of the
//! double-precision machinery (log-Gamma, truncation majorants, closed-form
//! condition coefficients) is used here.
//!
//! Remainder bound: all weights `w(n)` satisfy `0 <= w(n) <= K n^3` with
//! `K = max(1, (A - B)|tau|)`. For `n >= 10` and `nu > -1`,
//! `(n + 2)^3 c_{n+1} / (n^3 c_{n-1}) = ((n + 2)/n)^3 / ((n + 1)(n + 1 + 2 nu)) < 1/2`,
//! so the tail after index `N >= 10` is below `2 K (t_{N+1} + t_{N+2})` with
//! `t_n = n^3 c_{n-1}`.

use rug::ops::Pow;
use rug::Float;

use crate::criteria::{ClassParams, Condition, ConditionForm};

/// Working precision in bits (about 77 decimal digits).
pub const PRECISION: u32 = 256;

/// Summation stops once the remainder bound is below this value.
pub const REMAINDER_TARGET: f64 = 1e-40;

const MAX_INDEX: usize = 5_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleQuantity {
    /// `c_n(nu)`.
    Coefficient(usize),
    /// `m_k = sum_{n >= 2} n^k c_{n-1}`, `k <= 3`.
    Moment(u32),
    /// `s_k = S_nu^{(k)}(1)`, `k <= 3`.
    Derivative(u32),
    /// Left-hand side of a membership condition.
    Lhs(Condition, ClassParams),
}

#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: Float,
    /// Bound on the discarded remainder (zero for single coefficients).
    pub remainder_bound: f64,
}

impl OracleValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn float(x: f64) -> Float {
    Float::with_val(PRECISION, x)
}

/// `c_n(nu) = Gamma(nu + 1) Gamma((n + 1)/2) / (sqrt(pi) n! Gamma(n/2 + nu + 1))`.
pub fn coefficient(nu: f64, n: usize) -> Float {
    let nu = float(nu);
    let half_n = Float::with_val(PRECISION, n) / 2u32;
    let g_nu = Float::with_val(PRECISION, &nu + 1u32).gamma();
    let g_half = Float::with_val(PRECISION, &half_n + 0.5f64).gamma();
    let sqrt_pi = Float::with_val(PRECISION, rug::float::Constant::Pi).sqrt();
    let fact = Float::with_val(PRECISION, Float::factorial(n as u32));
    let g_den = (Float::with_val(PRECISION, &half_n + &nu) + 1u32).gamma();
    g_nu * g_half / (sqrt_pi * fact * g_den)
}

/// `sum_{n >= 2} w(n) c_{n-1}(nu)` with a certified remainder below [`REMAINDER_TARGET`].
/// `weight_bound` is the constant `K` with `0 <= w(n) <= K n^3`.
pub fn weighted_sum(nu: f64, weight: impl Fn(usize) -> Float, weight_bound: f64) -> OracleValue {
    let mut sum = Float::with_val(PRECISION, 0);
    let envelope = |n: usize, c: &Float| -> f64 { (Float::with_val(PRECISION, n).pow(3u32) * c).to_f64() };
    let mut coeffs: Vec<Float> = Vec::new();
    let c = |k: usize, coeffs: &mut Vec<Float>| -> Float {
        while coeffs.len() <= k {
            coeffs.push(coefficient(nu, coeffs.len()));
        }
        coeffs[k].clone()
    };
    let k = weight_bound.max(1.0);
    for n in 2..MAX_INDEX {
        let cn = c(n - 1, &mut coeffs);
        sum += weight(n) * &cn;
        if n >= 10 {
            let next1 = c(n, &mut coeffs);
            let next2 = c(n + 1, &mut coeffs);
            let remainder = 2.0 * k * (envelope(n + 1, &next1) + envelope(n + 2, &next2));
            if remainder < REMAINDER_TARGET {
                return OracleValue {
                    value: sum,
                    remainder_bound: remainder,
                };
            }
        }
    }
    unreachable!("oracle sum did not converge for nu = {nu}")
}

fn class_weight(lambda: f64, alpha: f64, extra_power: u32) -> impl Fn(usize) -> Float {
    move |n| {
        let nf = Float::with_val(PRECISION, n);
        let l = float(lambda);
        let a = float(alpha);
        let first = Float::with_val(PRECISION, &nf * &l) - &l + 1u32;
        let second = Float::with_val(PRECISION, &nf - &a);
        Float::with_val(PRECISION, nf.clone().pow(extra_power)) * first * second
    }
}

/// Evaluates `quantity` at order `nu` by direct summation.
pub fn highprec_sum_oracle(quantity: OracleQuantity, nu: f64) -> OracleValue {
    match quantity {
        OracleQuantity::Coefficient(n) => OracleValue {
            value: coefficient(nu, n),
            remainder_bound: 0.0,
        },
        OracleQuantity::Moment(k) => {
            assert!(k <= 3, "moment order {k} > 3");
            weighted_sum(nu, |n| Float::with_val(PRECISION, n).pow(k), 1.0)
        }
        OracleQuantity::Derivative(k) => {
            assert!(k <= 3, "derivative order {k} > 3");
            // S^{(k)}(1) = sum_{m >= k} m!/(m-k)! c_m; index shift m = n - 1.
            let mut out = weighted_sum(
                nu,
                |n| {
                    let m = n - 1;
                    let mut w = Float::with_val(PRECISION, 1);
                    for i in 0..k as usize {
                        w *= m.saturating_sub(i) as u32;
                    }
                    w
                },
                1.0,
            );
            // The m = 0 term c_0 = 1 only contributes to S(1).
            if k == 0 {
                out.value += 1u32;
            }
            out
        }
        OracleQuantity::Lhs(condition, p) => lhs(condition, p, nu),
    }
}

fn lhs(condition: Condition, p: ClassParams, nu: f64) -> OracleValue {
    let (l, a) = (p.lambda(), p.alpha());
    let one_minus_a = Float::with_val(PRECISION, 1u32) - float(a);
    let shifted = |sum: OracleValue| OracleValue {
        value: sum.value + &one_minus_a,
        remainder_bound: sum.remainder_bound,
    };
    match condition {
        Condition::T(form) => {
            let proof = shifted(weighted_sum(nu, class_weight(l, a, 0), 1.0));
            match form {
                ConditionForm::ProofForm => proof,
                ConditionForm::StatedForm => {
                    let s1 = highprec_sum_oracle(OracleQuantity::Derivative(1), nu);
                    OracleValue {
                        value: proof.value - Float::with_val(PRECISION, 2.0 * l) * s1.value,
                        remainder_bound: proof.remainder_bound + 2.0 * l * s1.remainder_bound,
                    }
                }
            }
        }
        Condition::Starlike => shifted(weighted_sum(nu, class_weight(0.0, a, 0), 1.0)),
        Condition::L => shifted(weighted_sum(nu, class_weight(l, a, 1), 1.0)),
        Condition::Convex => shifted(weighted_sum(nu, class_weight(0.0, a, 1), 1.0)),
        Condition::Jnu(d) => {
            // J_nu of the extremal envelope: n (n l - l + 1)(n - a) c_{n-1} (A - B)|tau| / n.
            let scale = float(d.a()) - float(d.b());
            let scale = scale * float(d.tau_abs());
            let inner = class_weight(l, a, 1);
            weighted_sum(
                nu,
                move |n| inner(n) * &scale / Float::with_val(PRECISION, n),
                d.scale(),
            )
        }
        Condition::Qnu => {
            // n (n l - l + 1)(n - a) times b_n = c_{n-1} / n.
            let inner = class_weight(l, a, 1);
            shifted(weighted_sum(nu, move |n| inner(n) / Float::with_val(PRECISION, n), 1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Float {
        Float::with_val(PRECISION, 1u32).exp()
    }

    #[test]
    fn zeroth_coefficient_exact() {
        for nu in [-0.9, 0.0, 2.5] {
            let c = coefficient(nu, 0);
            let diff = (c - 1u32).abs();
            assert!(diff < 1e-70, "nu = {nu}");
        }
    }

    #[test]
    fn first_moment_at_minus_half() {
        let m1 = highprec_sum_oracle(OracleQuantity::Moment(1), -0.5);
        let want = e() * 2u32 - 1u32;
        let diff = (m1.value - want).abs();
        assert!(diff < 1e-30);
        assert!(m1.remainder_bound < 1e-30);
    }

    #[test]
    fn derivatives_at_minus_half_equal_e() {
        for k in 0..=3 {
            let s = highprec_sum_oracle(OracleQuantity::Derivative(k), -0.5);
            let diff = (s.value - e()).abs();
            assert!(diff < 1e-30, "k = {k}");
        }
    }
}
