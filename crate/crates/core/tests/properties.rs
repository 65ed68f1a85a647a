use bessel_struve::criteria::{
    critical_nu, starlike_condition, t_condition, ClassParams, Condition, ConditionForm, DixitPalParams, MARGIN_TOL,
    MOMENT_TOL, NU_TOL,
};
use bessel_struve::operators::{
    bessel_struve_transform, coefficient_sum_l, coefficient_sum_t, hadamard, q_operator, rtab_extremal_sequence,
    NormalizedSeries, SignConvention, TailMajorant,
};
use bessel_struve::series::{
    kernel_coefficient, ln_coefficients_by_recurrence, ln_kernel_coefficient, moments, CoefficientSequence, KernelOrder,
};
use bessel_struve::verifier::oracle::{coefficient, highprec_sum_oracle, OracleQuantity};
use bessel_struve::verifier::suites::{ParamSampler, NU_GRID, STARLIKE_CRITICAL_NU_ALPHA0};
use proptest::prelude::*;

fn order(nu: f64) -> KernelOrder {
    KernelOrder::new(nu).unwrap()
}

#[test]
fn log_gamma_matches_recurrence() {
    for nu in NU_GRID {
        let nu = order(nu);
        let rec = ln_coefficients_by_recurrence(nu, 200);
        for (n, r) in rec.iter().enumerate() {
            let direct = ln_kernel_coefficient(nu, n);
            assert!(
                (direct - r).abs() <= 1e-12 * direct.abs().max(1.0),
                "nu = {}, n = {n}",
                nu.value()
            );
        }
    }
}

#[test]
fn coefficients_positive_in_log_space() {
    for nu in NU_GRID {
        for n in 0..=500 {
            let l = ln_kernel_coefficient(order(nu), n);
            assert!(l.is_finite(), "nu = {nu}, n = {n}");
        }
    }
}

#[test]
fn coefficients_match_mpfr() {
    for nu in [-0.9, -0.49, 0.0, 0.5, 3.7, 10.0, 29.5] {
        for n in 0..60 {
            let fast = kernel_coefficient(order(nu), n);
            let slow = coefficient(nu, n).to_f64();
            assert!(
                (fast - slow).abs() <= 1e-13 * slow,
                "nu = {nu}, n = {n}: {fast} vs {slow}"
            );
        }
    }
}

#[test]
fn stored_sequence_obeys_one_step_ratio() {
    // c_{n+1}/c_n = Gamma(n/2 + 1) Gamma(n/2 + nu + 1) / ((n + 1) Gamma((n + 1)/2) Gamma((n + 1)/2 + nu + 1))
    for nu in NU_GRID {
        let seq = CoefficientSequence::new(order(nu), 1e-12).unwrap();
        let c = seq.values();
        for n in 0..c.len() - 1 {
            let x = n as f64;
            let ln_ratio = libm::lgamma(x / 2.0 + 1.0) + libm::lgamma(x / 2.0 + nu + 1.0)
                - (x + 1.0).ln()
                - libm::lgamma((x + 1.0) / 2.0)
                - libm::lgamma((x + 1.0) / 2.0 + nu + 1.0);
            let ratio = c[n + 1] / c[n];
            assert!((ratio / ln_ratio.exp() - 1.0).abs() <= 1e-12, "nu = {nu}, n = {n}");
        }
    }
}

#[test]
fn ratio_decreasing_from_start() {
    for nu in NU_GRID {
        let c = CoefficientSequence::with_len(order(nu), 300);
        let c = c.values();
        let ratios: Vec<f64> = (0..150).map(|n| c[n + 1] / c[n]).collect();
        for w in ratios.windows(2) {
            assert!(w[1] < w[0], "nu = {nu}");
        }
    }
}

#[test]
fn tail_bound_is_sound() {
    let z = num_complex::Complex64::new(0.93, 0.2);
    for nu in NU_GRID {
        let short = CoefficientSequence::new(order(nu), 1e-6).unwrap();
        let long = CoefficientSequence::with_len(order(nu), 2 * short.truncation() + 10);
        let diff = (short.eval(z) - long.eval(z)).norm();
        assert!(
            diff <= short.tail_bound() * (1.0 + 1e-12) + 1e-15,
            "nu = {nu}: {diff} > {}",
            short.tail_bound()
        );
    }
}

#[test]
fn t_sum_of_kernel_matches_moments() {
    let mut sampler = ParamSampler::new(11);
    for _ in 0..30 {
        let nu = sampler.nu();
        let p = sampler.params();
        let (l, a) = (p.lambda(), p.alpha());
        let m = moments(nu, MOMENT_TOL).unwrap();
        let want = l * m.s2 + (1.0 + 2.0 * l - l * a) * m.s1 + (1.0 - a) * (m.s0 - 1.0);
        let f = NormalizedSeries::normalized_kernel(nu, 1e-16).unwrap();
        let got = coefficient_sum_t(&f, p).partial;
        assert!((got - want).abs() <= 1e-10, "nu = {}: {got} vs {want}", nu.value());
    }
}

#[test]
fn q_operator_l_sum_equals_kernel_t_sum() {
    let mut sampler = ParamSampler::new(12);
    for _ in 0..30 {
        let nu = sampler.nu();
        let p = sampler.params();
        let q = q_operator(nu, 120).unwrap();
        let phi = NormalizedSeries::phi(nu, 1e-16).unwrap();
        let l = coefficient_sum_l(&q, p).partial;
        let t = coefficient_sum_t(&phi, p).partial;
        assert!((l - t).abs() <= 1e-12 * t.max(1.0), "nu = {}: {l} vs {t}", nu.value());
    }
}

#[test]
fn extremal_l_sum_matches_jnu_lhs() {
    let mut sampler = ParamSampler::new(13);
    for _ in 0..30 {
        let nu = sampler.nu();
        let p = sampler.params();
        let d = sampler.dixit_pal();
        let j = bessel_struve_transform(nu, &rtab_extremal_sequence(d, 150)).unwrap();
        let got = coefficient_sum_l(&j, p).partial;
        let want = Condition::Jnu(d).verdict(nu, p).unwrap().lhs;
        assert!((got - want).abs() <= 1e-10, "nu = {}: {got} vs {want}", nu.value());
    }
}

#[test]
fn stated_form_never_exceeds_proof_form() {
    let mut sampler = ParamSampler::new(14);
    for _ in 0..50 {
        let nu = sampler.nu();
        let p = sampler.params();
        let proof = t_condition(nu, p, ConditionForm::ProofForm).unwrap().lhs;
        let stated = t_condition(nu, p, ConditionForm::StatedForm).unwrap().lhs;
        assert!(stated < proof, "lambda = {}", p.lambda());
    }
}

#[test]
fn starlike_is_t_at_lambda_zero() {
    let mut sampler = ParamSampler::new(15);
    for _ in 0..50 {
        let nu = sampler.nu();
        let p = ClassParams::new(0.0, sampler.params().alpha()).unwrap();
        let s = starlike_condition(nu, p.alpha()).unwrap();
        for form in [ConditionForm::ProofForm, ConditionForm::StatedForm] {
            let t = t_condition(nu, p, form).unwrap();
            assert_eq!(s.lhs, t.lhs);
            assert_eq!(s.holds, t.holds);
        }
    }
}

#[test]
fn margins_increase_with_order() {
    let mut sampler = ParamSampler::new(16);
    let grid: Vec<f64> = (0..200).map(|i| -0.49 + 30.49 * i as f64 / 199.0).collect();
    for _ in 0..20 {
        let p = sampler.params();
        let d = sampler.dixit_pal();
        let conditions = [
            Condition::T(ConditionForm::ProofForm),
            Condition::T(ConditionForm::StatedForm),
            Condition::L,
            Condition::Jnu(d),
            Condition::Qnu,
        ];
        for c in conditions {
            let margins: Vec<f64> = grid.iter().map(|&nu| c.verdict(order(nu), p).unwrap().margin).collect();
            for w in margins.windows(2) {
                assert!(w[1] >= w[0] - 1e-13, "{} not monotone", c.name());
            }
        }
    }
}

#[test]
fn coefficients_decrease_with_order() {
    for n in 1..40 {
        let mut prev = f64::INFINITY;
        for nu in NU_GRID {
            let c = kernel_coefficient(order(nu), n);
            assert!(c < prev, "n = {n}, nu = {nu}");
            prev = c;
        }
    }
}

#[test]
fn oracle_bisection_reproduces_fixture() {
    let p = ClassParams::new(0.0, 0.0).unwrap();
    let margin = |nu: f64| {
        let lhs = highprec_sum_oracle(OracleQuantity::Lhs(Condition::Starlike, p), nu).to_f64();
        2.0 - lhs
    };
    let (mut lo, mut hi) = (0.6, 20.0);
    while hi - lo > 1e-11 {
        let mid = 0.5 * (lo + hi);
        if margin(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((0.5 * (lo + hi) - STARLIKE_CRITICAL_NU_ALPHA0).abs() <= 1e-9);
    let fast = critical_nu(Condition::Starlike, p, (0.6, 20.0), MARGIN_TOL, NU_TOL).unwrap();
    assert!((fast.nu - STARLIKE_CRITICAL_NU_ALPHA0).abs() <= 1e-8);
}

#[test]
fn transform_preserves_normalization_and_sign() {
    let f = NormalizedSeries::convolution_unit(30);
    for nu in [-0.25, 0.0, 2.0] {
        let j = bessel_struve_transform(order(nu), &f).unwrap();
        assert_eq!(j.coeff(0), 0.0);
        assert_eq!(j.coeff(1), 1.0);
        assert!(j.stored().iter().all(|&a| a > 0.0));
        // z/(1-z) is the unit: J_nu of it is z S_nu itself.
        for n in 2..=30 {
            let want = kernel_coefficient(order(nu), n - 1);
            assert!((j.coeff(n) - want).abs() <= 1e-15 * want);
        }
    }
}

fn series_strategy() -> impl Strategy<Value = NormalizedSeries> {
    (prop::collection::vec(-2.0f64..2.0, 0..12), 0.0f64..1.0, 0.0f64..0.9).prop_map(|(c, base, ratio)| {
        NormalizedSeries::new(c, SignConvention::General, TailMajorant { base, ratio }).unwrap()
    })
}

proptest! {
    #[test]
    fn hadamard_commutes(f in series_strategy(), g in series_strategy()) {
        prop_assert_eq!(hadamard(&f, &g).signed_coeffs(), hadamard(&g, &f).signed_coeffs());
    }

    #[test]
    fn hadamard_associates(f in series_strategy(), g in series_strategy(), h in series_strategy()) {
        let left = hadamard(&hadamard(&f, &g), &h).signed_coeffs();
        let right = hadamard(&f, &hadamard(&g, &h)).signed_coeffs();
        prop_assert_eq!(left.len(), right.len());
        for (a, b) in left.iter().zip(&right) {
            prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }

    #[test]
    fn unit_is_hadamard_identity(f in series_strategy()) {
        let u = NormalizedSeries::convolution_unit(f.truncation());
        prop_assert_eq!(hadamard(&u, &f).signed_coeffs(), f.signed_coeffs());
    }

    #[test]
    fn text_format_round_trips(f in series_strategy()) {
        let back = NormalizedSeries::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn transform_keeps_positivity(nu in -0.49f64..30.0, c in prop::collection::vec(0.0f64..5.0, 1..20)) {
        let f = NormalizedSeries::polynomial(c).unwrap();
        let j = bessel_struve_transform(order(nu), &f).unwrap();
        prop_assert_eq!(j.coeff(1), 1.0);
        prop_assert!(j.stored().iter().all(|&a| a >= 0.0));
    }

    #[test]
    fn stated_below_proof(nu in -0.49f64..30.0, l in 0.0f64..1.0, a in 0.0f64..1.0) {
        let p = ClassParams::new(l, a).unwrap();
        let proof = t_condition(order(nu), p, ConditionForm::ProofForm).unwrap().lhs;
        let stated = t_condition(order(nu), p, ConditionForm::StatedForm).unwrap().lhs;
        prop_assert!(stated <= proof);
        if l > 0.0 {
            prop_assert!(stated < proof);
        }
    }

    #[test]
    fn dixit_pal_scale(a in -0.5f64..1.0, gap in 0.01f64..0.5, tau in 0.01f64..2.0) {
        let d = DixitPalParams::new(a, a - gap, tau).unwrap();
        prop_assert!((d.scale() - gap * tau).abs() <= 1e-15);
    }
}
