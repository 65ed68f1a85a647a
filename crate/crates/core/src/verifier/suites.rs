//! Seeded consistency suites run by `bsk verify`.

use std::f64::consts::E;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{highprec_sum_oracle, OracleQuantity};
use super::{min_real_part_l, min_real_part_t, necessity_probe, ode_residual, ClassRatio, DiskSampling};
use crate::criteria::{
    critical_nu, ClassParams, Condition, ConditionForm, DixitPalParams, MARGIN_TOL, MOMENT_TOL, NU_TOL,
};
use crate::error::Result;
use crate::operators::{
    bessel_struve_transform, coefficient_sum_l, coefficient_sum_t, q_operator, rtab_extremal_sequence,
    NormalizedSeries, Outcome,
};
use crate::series::{eval_kernel, moments, KernelOrder};

/// Critical order of the starlikeness condition at `alpha = 0`, from 50-digit bisection.
pub const STARLIKE_CRITICAL_NU_ALPHA0: f64 = 2.038_180_705_161_871_8;

/// Orders used by the grid checks.
pub const NU_GRID: [f64; 7] = [-0.49, -0.25, 0.0, 0.5, 1.0, 2.0, 10.0];

const SUFFICIENCY_GATE: f64 = 0.05;
const NECESSITY_EXCESS: f64 = 1.05;
const OPERATOR_TRUNCATION: usize = 60;
const MAX_DRAWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    ClosedForm,
    Moments,
    Ode,
    Oracle,
    Sufficiency,
    Necessity,
    Bisection,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::ClosedForm,
        Suite::Moments,
        Suite::Ode,
        Suite::Oracle,
        Suite::Sufficiency,
        Suite::Necessity,
        Suite::Bisection,
    ];

    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "all" => Suite::All,
            "closed-form" => Suite::ClosedForm,
            "moments" => Suite::Moments,
            "ode" => Suite::Ode,
            "oracle" => Suite::Oracle,
            "sufficiency" => Suite::Sufficiency,
            "necessity" => Suite::Necessity,
            "bisection" => Suite::Bisection,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub radius: f64,
    pub num_points: usize,
    /// Series tolerance for the grid checks.
    pub tol: f64,
    pub oracle_tuples: usize,
    pub sufficiency_tuples: usize,
    pub necessity_tuples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            radius: 0.99,
            num_points: 512,
            tol: 1e-12,
            oracle_tuples: 20,
            sufficiency_tuples: 30,
            necessity_tuples: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Vec<CheckResult> {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::ALL.to_vec(),
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in suites {
        match s {
            Suite::ClosedForm => out.push(CheckResult::from_result("closed-form", closed_form(cfg))),
            Suite::Moments => out.push(CheckResult::from_result("moment-identities", moment_identities(cfg))),
            Suite::Ode => out.push(CheckResult::from_result("ode-residual", ode_grid(cfg))),
            Suite::Oracle => out.push(CheckResult::from_result("oracle-agreement", oracle_agreement(cfg))),
            Suite::Sufficiency => out.extend(sufficiency(cfg)),
            Suite::Necessity => out.push(CheckResult::from_result(
                "necessity-negative-coefficients",
                necessity(cfg),
            )),
            Suite::Bisection => out.push(CheckResult::from_result("bisection-starlike", bisection())),
            Suite::All => unreachable!(),
        }
    }
    out
}

/// 100 points: ten radii in (0, 1] times ten angles.
pub fn disk_grid() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(100);
    for i in 1..=10 {
        let r = i as f64 / 10.0;
        for k in 0..10 {
            pts.push(Complex64::from_polar(
                r,
                std::f64::consts::TAU * (k as f64 + 0.25) / 10.0,
            ));
        }
    }
    pts
}

/// Max errors against `e^z` (order -1/2) and `(e^z - 1)/z` (order 1/2).
pub fn closed_form_errors(tol: f64) -> Result<(f64, f64)> {
    let minus_half = KernelOrder::new(-0.5)?;
    let half = KernelOrder::new(0.5)?;
    let mut err_exp = 0.0f64;
    let mut err_quot = 0.0f64;
    for z in disk_grid() {
        err_exp = err_exp.max((eval_kernel(minus_half, z, tol)? - z.exp()).norm());
        err_quot = err_quot.max((eval_kernel(half, z, tol)? - (z.exp() - 1.0) / z).norm());
    }
    let at_zero = eval_kernel(half, Complex64::new(0.0, 0.0), tol)?;
    err_quot = err_quot.max((at_zero - 1.0).norm());
    Ok((err_exp, err_quot))
}

fn closed_form(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let (a, b) = closed_form_errors(cfg.tol.min(1e-13))?;
    Ok((
        a <= 1e-12 && b <= 1e-12,
        format!("max |S - e^z| = {a:.3e}, max |S - (e^z-1)/z| = {b:.3e}"),
    ))
}

fn moment_identities(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for nu in NU_GRID {
        let m = moments(KernelOrder::new(nu)?, cfg.tol)?;
        for r in m.identity_residuals() {
            worst = worst.max(r.abs());
        }
    }
    let m = moments(KernelOrder::new(-0.5)?, cfg.tol)?;
    let expect = [E - 1.0, 2.0 * E - 1.0, 5.0 * E - 1.0, 15.0 * E - 1.0];
    let fixture = m.m().iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((
        worst <= 1e-12 && fixture <= 1e-12,
        format!("max identity residual = {worst:.3e}, max |m_k - fixture| at nu = -1/2 = {fixture:.3e}"),
    ))
}

/// Max ODE residual over the order grid (plus the `-1/2` fixture) and the disk grid.
pub fn max_ode_residual(tol: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut orders = vec![-0.5];
    orders.extend(NU_GRID);
    for nu in orders {
        let nu = KernelOrder::new(nu)?;
        for z in disk_grid().into_iter().chain([Complex64::new(0.0, 0.0)]) {
            worst = worst.max(ode_residual(nu, z, tol)?);
        }
    }
    Ok(worst)
}

fn ode_grid(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let worst = max_ode_residual(cfg.tol)?;
    Ok((worst <= 1e-10, format!("max residual = {worst:.3e}")))
}

/// Uniform draws for the randomized checks.
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        ParamSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `nu` uniform on `(-0.49, 30)`.
    pub fn nu(&mut self) -> KernelOrder {
        KernelOrder::new(self.rng.gen_range(-0.49..30.0)).expect("sampled order in domain")
    }

    pub fn params(&mut self) -> ClassParams {
        ClassParams::new(self.rng.gen_range(0.0..1.0), self.rng.gen_range(0.0..1.0)).expect("sampled params in range")
    }

    pub fn dixit_pal(&mut self) -> DixitPalParams {
        let b: f64 = self.rng.gen_range(-1.0..0.99);
        let a: f64 = self.rng.gen_range(b + 0.01..=1.0);
        let tau = self.rng.gen_range(0.05..2.0);
        DixitPalParams::new(a, b, tau).expect("sampled class parameters in range")
    }
}

/// Every condition's lhs against the high-precision oracle. Returns
/// `(max |lhs - oracle|, max |Q lhs - T proof lhs|)`.
pub fn oracle_discrepancy(seed: u64, tuples: usize) -> Result<(f64, f64)> {
    let mut sampler = ParamSampler::new(seed);
    let mut worst = 0.0f64;
    let mut q_vs_t = 0.0f64;
    for _ in 0..tuples {
        let nu = sampler.nu();
        let p = sampler.params();
        let d = sampler.dixit_pal();
        let m = moments(nu, MOMENT_TOL)?;
        let conditions = [
            Condition::T(ConditionForm::ProofForm),
            Condition::T(ConditionForm::StatedForm),
            Condition::L,
            Condition::Starlike,
            Condition::Convex,
            Condition::Jnu(d),
            Condition::Qnu,
        ];
        for c in conditions {
            let fast = c.evaluate(&m, p).lhs;
            let slow = highprec_sum_oracle(OracleQuantity::Lhs(c, p), nu.value()).to_f64();
            worst = worst.max((fast - slow).abs());
        }
        let q = Condition::Qnu.evaluate(&m, p).lhs;
        let t = Condition::T(ConditionForm::ProofForm).evaluate(&m, p).lhs;
        q_vs_t = q_vs_t.max((q - t).abs());
    }
    Ok((worst, q_vs_t))
}

fn oracle_agreement(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let (worst, q_vs_t) = oracle_discrepancy(cfg.seed, cfg.oracle_tuples)?;
    Ok((
        worst <= 1e-10 && q_vs_t <= 1e-12,
        format!(
            "{} tuples: max |lhs - oracle| = {worst:.3e}, max |Q lhs - T lhs| = {q_vs_t:.3e}",
            cfg.oracle_tuples
        ),
    ))
}

/// Draws tuples until `count` of them satisfy `accept`.
fn gated<T>(
    sampler: &mut ParamSampler,
    count: usize,
    mut draw: impl FnMut(&mut ParamSampler) -> Result<Option<T>>,
) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..MAX_DRAWS {
        if out.len() == count {
            break;
        }
        if let Some(t) = draw(sampler)? {
            out.push(t);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct SufficiencySummary {
    pub tuples: usize,
    pub failures: usize,
    /// Smallest `value - alpha` (disk checks) or `(1 - alpha) - sum` (coefficient checks).
    pub worst_slack: f64,
}

impl SufficiencySummary {
    pub fn passed(&self, wanted: usize) -> bool {
        self.tuples == wanted && self.failures == 0
    }
}

fn summarize(slacks: &[f64]) -> SufficiencySummary {
    SufficiencySummary {
        tuples: slacks.len(),
        failures: slacks.iter().filter(|&&s| !(s > 0.0)).count(),
        worst_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// Disk-sampling minimum for `z S_nu` on tuples whose T (or L) margin is at least 0.05.
pub fn disk_sufficiency(ratio: ClassRatio, cfg: &SuiteConfig) -> Result<SufficiencySummary> {
    let sampling = DiskSampling::with_defaults(cfg.radius, cfg.num_points)?;
    let mut sampler = ParamSampler::new(cfg.seed ^ 0x5eed_0001);
    let condition = match ratio {
        ClassRatio::T => Condition::T(ConditionForm::ProofForm),
        ClassRatio::L => Condition::L,
    };
    let tuples = gated(&mut sampler, cfg.sufficiency_tuples, |s| {
        let nu = s.nu();
        let p = s.params();
        let v = condition.verdict(nu, p)?;
        Ok((v.margin >= SUFFICIENCY_GATE).then_some((nu, p)))
    })?;
    let mut slacks = Vec::with_capacity(tuples.len());
    for (nu, p) in tuples {
        let f = NormalizedSeries::normalized_kernel(nu, 1e-15)?;
        let min = match ratio {
            ClassRatio::T => min_real_part_t(&f, p.lambda(), &sampling)?,
            ClassRatio::L => min_real_part_l(&f, p.lambda(), &sampling)?,
        };
        slacks.push(min - p.alpha());
    }
    Ok(summarize(&slacks))
}

/// `sum_L(J_nu(extremal envelope)) <= 1 - alpha` on tuples with J margin at least 0.05.
pub fn jnu_sufficiency(cfg: &SuiteConfig) -> Result<SufficiencySummary> {
    let mut sampler = ParamSampler::new(cfg.seed ^ 0x5eed_0003);
    let tuples = gated(&mut sampler, cfg.sufficiency_tuples, |s| {
        let nu = s.nu();
        let p = s.params();
        let d = s.dixit_pal();
        let v = Condition::Jnu(d).verdict(nu, p)?;
        Ok((v.margin >= SUFFICIENCY_GATE).then_some((nu, p, d)))
    })?;
    let mut slacks = Vec::with_capacity(tuples.len());
    for (nu, p, d) in tuples {
        let g = bessel_struve_transform(nu, &rtab_extremal_sequence(d, OPERATOR_TRUNCATION))?;
        let sum = coefficient_sum_l(&g, p);
        slacks.push(if sum.outcome() == Outcome::Holds {
            sum.threshold - (sum.partial + sum.tail)
        } else {
            -1.0
        });
    }
    Ok(summarize(&slacks))
}

/// `sum_L(Q_nu) <= 1 - alpha` on tuples with Q margin at least 0.05.
pub fn qnu_sufficiency(cfg: &SuiteConfig) -> Result<SufficiencySummary> {
    let mut sampler = ParamSampler::new(cfg.seed ^ 0x5eed_0004);
    let tuples = gated(&mut sampler, cfg.sufficiency_tuples, |s| {
        let nu = s.nu();
        let p = s.params();
        let v = Condition::Qnu.verdict(nu, p)?;
        Ok((v.margin >= SUFFICIENCY_GATE).then_some((nu, p)))
    })?;
    let mut slacks = Vec::with_capacity(tuples.len());
    for (nu, p) in tuples {
        let q = q_operator(nu, OPERATOR_TRUNCATION)?;
        let sum = coefficient_sum_l(&q, p);
        slacks.push(if sum.outcome() == Outcome::Holds {
            sum.threshold - (sum.partial + sum.tail)
        } else {
            -1.0
        });
    }
    Ok(summarize(&slacks))
}

fn sufficiency(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let n = cfg.sufficiency_tuples;
    let report = |name: &str, r: Result<SufficiencySummary>| {
        CheckResult::from_result(
            name,
            r.map(|s| {
                (
                    s.passed(n),
                    format!(
                        "{}/{n} tuples, {} failures, worst slack = {:.4e}",
                        s.tuples, s.failures, s.worst_slack
                    ),
                )
            }),
        )
    };
    vec![
        report("sufficiency-t-disk", disk_sufficiency(ClassRatio::T, cfg)),
        report("sufficiency-l-disk", disk_sufficiency(ClassRatio::L, cfg)),
        report("sufficiency-jnu-extremal", jnu_sufficiency(cfg)),
        report("sufficiency-qnu", qnu_sufficiency(cfg)),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct NecessitySummary {
    pub tuples: usize,
    /// Tuples whose real-axis minimum stayed at or above alpha.
    pub failures: usize,
    /// Largest `real_axis_min - alpha` over the tuples (negative when all pass).
    pub worst_excess: f64,
}

/// Tuples where `sum_T(Phi_nu)` exceeds `1 - alpha` by at least 5% and the T
/// denominator of `Phi_nu` stays positive on `[0, 1]`; the real-axis minimum
/// of the T ratio must fall below alpha.
pub fn negative_coefficient_necessity(cfg: &SuiteConfig) -> Result<NecessitySummary> {
    let mut sampler = ParamSampler::new(cfg.seed ^ 0x5eed_0005);
    let tuples = gated(&mut sampler, cfg.necessity_tuples, |s| {
        let nu = s.nu();
        let p = s.params();
        let phi = NormalizedSeries::phi(nu, 1e-15)?;
        let sum = coefficient_sum_t(&phi, p);
        let l = p.lambda();
        // (1 - l) Phi(x) + l x Phi'(x) = x (1 - sum (n l - l + 1) b_n x^{n-1}), decreasing on [0, 1].
        let den_at_one = 1.0
            - (2..=phi.truncation())
                .map(|n| (n as f64 * l - l + 1.0) * phi.coeff(n).abs())
                .sum::<f64>()
            - phi.tail().weighted(phi.truncation(), 1);
        let excess = sum.partial >= NECESSITY_EXCESS * sum.threshold;
        Ok((excess && den_at_one > 0.0).then_some((phi, p)))
    })?;
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for (phi, p) in &tuples {
        let probe = necessity_probe(phi, ClassRatio::T, p.lambda(), cfg.num_points.max(64))?;
        let excess = probe.real_axis_min - p.alpha();
        if !(excess < 0.0) || probe.circle_min > probe.real_axis_min {
            failures += 1;
        }
        worst = worst.max(excess);
    }
    Ok(NecessitySummary {
        tuples: tuples.len(),
        failures,
        worst_excess: worst,
    })
}

fn necessity(cfg: &SuiteConfig) -> Result<(bool, String)> {
    let s = negative_coefficient_necessity(cfg)?;
    Ok((
        s.tuples == cfg.necessity_tuples && s.failures == 0,
        format!(
            "{}/{} tuples, {} failures, max (real-axis min - alpha) = {:.4e}",
            s.tuples, cfg.necessity_tuples, s.failures, s.worst_excess
        ),
    ))
}

fn bisection() -> Result<(bool, String)> {
    let b = critical_nu(
        Condition::Starlike,
        ClassParams::new(0.0, 0.0)?,
        (0.6, 20.0),
        MARGIN_TOL,
        NU_TOL,
    )?;
    let diff = (b.nu - STARLIKE_CRITICAL_NU_ALPHA0).abs();
    Ok((
        b.margin.abs() <= MARGIN_TOL && diff <= 1e-8,
        format!(
            "nu* = {:.16e}, margin = {:.3e}, |nu* - fixture| = {diff:.3e}",
            b.nu, b.margin
        ),
    ))
}
