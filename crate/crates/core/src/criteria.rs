//! Closed-form class-membership conditions in terms of the kernel values at `z = 1`.
//!
//! Every condition has the shape `lhs <= rhs`; the reported margin is `rhs - lhs`.
//! With `s_k = S_nu^{(k)}(1)`:
//!
//! | condition | lhs | rhs |
//! |-----------|-----|-----|
//! | `T` (proof form) | `l s2 + (1 + 2l - l a) s1 + (1 - a) s0` | `2(1 - a)` |
//! | `T` (stated form) | `l s2 + (1 - l a) s1 + (1 - a) s0` | `2(1 - a)` |
//! | `L` | `l s3 + (5l + 1 - l a) s2 + (4l - 2l a - a + 3) s1 + (1 - a) s0` | `2(1 - a)` |
//! | `J_nu` | `(A - B)|tau| (l s2 + (1 + 2l - l a) s1 + (1 - a)(s0 - 1))` | `1 - a` |
//! | `Q_nu` | `l s2 + (2l - l a + 1) s1 + (1 - a) s0` | `2(1 - a)` |
//!
//! The stated form of the `T` condition drops the `2l s1` contribution that the
//! termwise reduction of `sum (n l - l + 1)(n - a) c_{n-1}` produces. It is kept
//! for comparison only; the proof form is the default everywhere.
//!
//! In the `L` reduction the intermediate expansion of `sum n^3 c_{n-1}` is
//! `S''' + 6 S'' + 7 S' + S - 1`; the closed form above already accounts for it.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::{moments, KernelOrder, MomentSet};

/// Moment tolerance used by the convenience entry points.
pub const MOMENT_TOL: f64 = 1e-12;
/// Default `|margin|` tolerance for [`critical_nu`].
pub const MARGIN_TOL: f64 = 1e-10;
/// Default bracket-width tolerance for [`critical_nu`].
pub const NU_TOL: f64 = 1e-10;

/// `(lambda, alpha)`, both in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassParams {
    lambda: f64,
    alpha: f64,
}

impl ClassParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::param(format!("lambda = {lambda} must lie in [0, 1)")));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::param(format!("alpha = {alpha} must lie in [0, 1)")));
        }
        Ok(ClassParams { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Parameters of the class `R^tau(A, B)`. Only `|tau|` enters any bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DixitPalParams {
    a: f64,
    b: f64,
    tau_abs: f64,
}

impl DixitPalParams {
    pub fn new(a: f64, b: f64, tau_abs: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && -1.0 <= b && b < a && a <= 1.0) {
            return Err(Error::param(format!(
                "(A, B) = ({a}, {b}) must satisfy -1 <= B < A <= 1"
            )));
        }
        if !(tau_abs.is_finite() && tau_abs > 0.0) {
            return Err(Error::param(format!("|tau| = {tau_abs} must be positive")));
        }
        Ok(DixitPalParams { a, b, tau_abs })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tau_abs(&self) -> f64 {
        self.tau_abs
    }

    /// `(A - B)|tau|`, the envelope constant of the coefficient bound `|a_n| <= (A - B)|tau| / n`.
    pub fn scale(&self) -> f64 {
        (self.a - self.b) * self.tau_abs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionForm {
    /// Coefficients as derived termwise (canonical).
    ProofForm,
    /// Variant whose `s1` coefficient is `1 - lambda alpha` (smaller by `2 lambda s1`).
    StatedForm,
}

impl fmt::Display for ConditionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionForm::ProofForm => "proof",
            ConditionForm::StatedForm => "stated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipVerdict {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub holds: bool,
    pub condition_form: ConditionForm,
}

impl MembershipVerdict {
    fn new(lhs: f64, rhs: f64, form: ConditionForm) -> Self {
        let margin = rhs - lhs;
        MembershipVerdict {
            lhs,
            rhs,
            margin,
            holds: margin >= 0.0,
            condition_form: form,
        }
    }
}

/// Selects one of the implemented conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    T(ConditionForm),
    L,
    Starlike,
    Convex,
    Jnu(DixitPalParams),
    Qnu,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::T(_) => "t",
            Condition::L => "l",
            Condition::Starlike => "starlike",
            Condition::Convex => "convex",
            Condition::Jnu(_) => "jnu",
            Condition::Qnu => "qnu",
        }
    }

    pub fn form(&self) -> ConditionForm {
        match self {
            Condition::T(form) => *form,
            _ => ConditionForm::ProofForm,
        }
    }

    /// Evaluates the condition on precomputed kernel values.
    pub fn evaluate(&self, m: &MomentSet, p: ClassParams) -> MembershipVerdict {
        match *self {
            Condition::T(form) => t_from_moments(m, p, form),
            Condition::L => l_from_moments(m, p),
            Condition::Starlike => t_from_moments(m, ClassParams { lambda: 0.0, ..p }, ConditionForm::ProofForm),
            Condition::Convex => l_from_moments(m, ClassParams { lambda: 0.0, ..p }),
            Condition::Jnu(d) => jnu_from_moments(m, p, d),
            Condition::Qnu => qnu_from_moments(m, p),
        }
    }

    /// Evaluates the condition at order `nu`, which must satisfy `nu > -1/2`.
    pub fn verdict(&self, nu: KernelOrder, p: ClassParams) -> Result<MembershipVerdict> {
        let m = condition_moments(nu)?;
        Ok(self.evaluate(&m, p))
    }
}

fn condition_moments(nu: KernelOrder) -> Result<MomentSet> {
    if !nu.operator_valid() {
        return Err(Error::OperatorDomain(nu.value()));
    }
    moments(nu, MOMENT_TOL)
}

pub fn t_from_moments(m: &MomentSet, p: ClassParams, form: ConditionForm) -> MembershipVerdict {
    let (l, a) = (p.lambda, p.alpha);
    let s1_coeff = match form {
        ConditionForm::ProofForm => 1.0 + 2.0 * l - l * a,
        ConditionForm::StatedForm => 1.0 - l * a,
    };
    let lhs = l * m.s2 + s1_coeff * m.s1 + (1.0 - a) * m.s0;
    MembershipVerdict::new(lhs, 2.0 * (1.0 - a), form)
}

pub fn l_from_moments(m: &MomentSet, p: ClassParams) -> MembershipVerdict {
    let (l, a) = (p.lambda, p.alpha);
    let lhs = l * m.s3 + (5.0 * l + 1.0 - l * a) * m.s2 + (4.0 * l - 2.0 * l * a - a + 3.0) * m.s1 + (1.0 - a) * m.s0;
    MembershipVerdict::new(lhs, 2.0 * (1.0 - a), ConditionForm::ProofForm)
}

pub fn jnu_from_moments(m: &MomentSet, p: ClassParams, d: DixitPalParams) -> MembershipVerdict {
    let (l, a) = (p.lambda, p.alpha);
    let inner = l * m.s2 + (1.0 + 2.0 * l - l * a) * m.s1 + (1.0 - a) * (m.s0 - 1.0);
    MembershipVerdict::new(d.scale() * inner, 1.0 - a, ConditionForm::ProofForm)
}

pub fn qnu_from_moments(m: &MomentSet, p: ClassParams) -> MembershipVerdict {
    let (l, a) = (p.lambda, p.alpha);
    let lhs = l * m.s2 + (2.0 * l - l * a + 1.0) * m.s1 + (1.0 - a) * m.s0;
    MembershipVerdict::new(lhs, 2.0 * (1.0 - a), ConditionForm::ProofForm)
}

/// Sufficient condition for `z S_nu` to lie in `T_lambda(alpha)`.
pub fn t_condition(nu: KernelOrder, p: ClassParams, form: ConditionForm) -> Result<MembershipVerdict> {
    Condition::T(form).verdict(nu, p)
}

/// Sufficient condition for `z S_nu` to lie in `L_lambda(alpha)`.
pub fn l_condition(nu: KernelOrder, p: ClassParams) -> Result<MembershipVerdict> {
    Condition::L.verdict(nu, p)
}

/// Starlikeness of order `alpha`: `S'(1) + (1 - alpha) S(1) <= 2(1 - alpha)`.
pub fn starlike_condition(nu: KernelOrder, alpha: f64) -> Result<MembershipVerdict> {
    Condition::Starlike.verdict(nu, ClassParams::new(0.0, alpha)?)
}

/// Convexity of order `alpha`: `S''(1) + (3 - alpha) S'(1) + (1 - alpha) S(1) <= 2(1 - alpha)`.
pub fn convex_condition(nu: KernelOrder, alpha: f64) -> Result<MembershipVerdict> {
    Condition::Convex.verdict(nu, ClassParams::new(0.0, alpha)?)
}

/// Sufficient condition for `J_nu(f)` to lie in `L_lambda(alpha)` for all `f` in `R^tau(A, B)`.
pub fn jnu_condition(nu: KernelOrder, p: ClassParams, d: DixitPalParams) -> Result<MembershipVerdict> {
    Condition::Jnu(d).verdict(nu, p)
}

/// Necessary and sufficient condition for `Q_nu` to lie in `L*_lambda(alpha)`.
pub fn qnu_condition(nu: KernelOrder, p: ClassParams) -> Result<MembershipVerdict> {
    Condition::Qnu.verdict(nu, p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub nu: f64,
    pub margin: f64,
    pub iterations: usize,
}

/// Locates the order at which `condition`'s margin crosses zero.
///
/// Requires `margin(lo) < 0 < margin(hi)`. Stops once `|margin| <= margin_tol`
/// or the bracket is narrower than `nu_tol`. A midpoint margin outside the
/// current endpoint margins is reported as a monotonicity violation.
pub fn critical_nu(
    condition: Condition,
    p: ClassParams,
    bracket: (f64, f64),
    margin_tol: f64,
    nu_tol: f64,
) -> Result<Bisection> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::param(format!("bracket [{lo}, {hi}] is not an interval")));
    }
    if !(margin_tol > 0.0 && nu_tol > 0.0) {
        return Err(Error::param("bisection tolerances must be positive"));
    }
    let margin = |nu: f64| -> Result<f64> { Ok(condition.verdict(KernelOrder::operator(nu)?, p)?.margin) };
    let mut m_lo = margin(lo)?;
    let mut m_hi = margin(hi)?;
    if !(m_lo < 0.0 && m_hi > 0.0) {
        return Err(Error::Bracket {
            lo,
            hi,
            margin_lo: m_lo,
            margin_hi: m_hi,
        });
    }
    let max_iter = ((hi - lo) / nu_tol).log2().ceil().max(1.0) as usize;
    let mut best = if -m_lo < m_hi { (lo, m_lo) } else { (hi, m_hi) };
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let m_mid = margin(mid)?;
        if !(m_lo <= m_mid && m_mid <= m_hi) {
            return Err(Error::Monotonicity {
                nu: mid,
                margin: m_mid,
                margin_lo: m_lo,
                margin_hi: m_hi,
            });
        }
        if m_mid.abs() < best.1.abs() {
            best = (mid, m_mid);
        }
        if m_mid.abs() <= margin_tol {
            break;
        }
        if m_mid < 0.0 {
            lo = mid;
            m_lo = m_mid;
        } else {
            hi = mid;
            m_hi = m_mid;
        }
        if hi - lo <= nu_tol {
            break;
        }
    }
    Ok(Bisection {
        nu: best.0,
        margin: best.1,
        iterations,
    })
}
