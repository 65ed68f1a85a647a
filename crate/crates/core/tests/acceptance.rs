//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on any failure.

use std::collections::HashMap;
use std::f64::consts::E;
use std::process::Command;

use bessel_struve::criteria::{
    critical_nu, starlike_condition, t_condition, ClassParams, Condition, ConditionForm, MARGIN_TOL, NU_TOL,
};
use bessel_struve::series::{moments, KernelOrder};
use bessel_struve::verifier::suites::{
    closed_form_errors, disk_sufficiency, jnu_sufficiency, max_ode_residual, negative_coefficient_necessity,
    oracle_discrepancy, qnu_sufficiency, SuiteConfig, NU_GRID, STARLIKE_CRITICAL_NU_ALPHA0,
};
use bessel_struve::verifier::ClassRatio;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

const BSK: &str = env!("CARGO_BIN_EXE_bsk");

fn order(nu: f64) -> KernelOrder {
    KernelOrder::new(nu).unwrap()
}

fn ac1() -> Outcome {
    let (exp, quot) = closed_form_errors(1e-13).map_err(|e| e.to_string())?;
    Ok((
        exp <= 1e-12 && quot <= 1e-12,
        format!("max |S_{{-1/2}} - e^z| = {exp:.3e}, max |S_{{1/2}} - (e^z - 1)/z| = {quot:.3e} over 100 disk points"),
    ))
}

fn ac2() -> Outcome {
    let mut worst = 0.0f64;
    for nu in NU_GRID {
        let m = moments(order(nu), 1e-12).map_err(|e| e.to_string())?;
        worst = m.identity_residuals().iter().fold(worst, |w, r| w.max(r.abs()));
    }
    let m = moments(order(-0.5), 1e-12).map_err(|e| e.to_string())?;
    let want = [E - 1.0, 2.0 * E - 1.0, 5.0 * E - 1.0, 15.0 * E - 1.0];
    let fixture = m.m().iter().zip(want).fold(0.0f64, |w, (a, b)| w.max((a - b).abs()));
    Ok((
        worst <= 1e-12 && fixture <= 1e-12,
        format!("max identity residual = {worst:.3e}, max |m_k - fixture| at -1/2 = {fixture:.3e}"),
    ))
}

fn ac3() -> Outcome {
    let (worst, q_vs_t) = oracle_discrepancy(2024, 100).map_err(|e| e.to_string())?;
    Ok((
        worst <= 1e-10 && q_vs_t <= 1e-12,
        format!("100 tuples: max |lhs - oracle| = {worst:.3e}, max |Q lhs - T lhs| = {q_vs_t:.3e}"),
    ))
}

fn ac4() -> Outcome {
    let mut ok = true;
    let mut min_gap = f64::INFINITY;
    let mut zero_gap = 0.0f64;
    let mut points = 0;
    for nu in [0.0, 2.0, 7.5, 20.0] {
        for lambda in [0.0, 0.25, 0.5, 0.75, 0.99] {
            points += 1;
            let p = ClassParams::new(lambda, 0.3).map_err(|e| e.to_string())?;
            let proof = t_condition(order(nu), p, ConditionForm::ProofForm).map_err(|e| e.to_string())?;
            let stated = t_condition(order(nu), p, ConditionForm::StatedForm).map_err(|e| e.to_string())?;
            let gap = proof.lhs - stated.lhs;
            if lambda > 0.0 {
                ok &= gap > 0.0;
                min_gap = min_gap.min(gap);
            } else {
                let star = starlike_condition(order(nu), 0.3).map_err(|e| e.to_string())?;
                ok &= proof.lhs == stated.lhs && proof.lhs == star.lhs && proof.holds == star.holds;
                zero_gap = zero_gap.max(gap.abs()).max((proof.lhs - star.lhs).abs());
            }
        }
    }
    Ok((
        ok && points == 20,
        format!(
            "{points} points: min proof - stated at lambda > 0 = {min_gap:.3e}, max gap at lambda = 0 = {zero_gap:.1e}"
        ),
    ))
}

fn ac5() -> Outcome {
    let cfg = SuiteConfig::default();
    let n = cfg.sufficiency_tuples;
    let runs = [
        ("T disk", disk_sufficiency(ClassRatio::T, &cfg)),
        ("L disk", disk_sufficiency(ClassRatio::L, &cfg)),
        ("J extremal", jnu_sufficiency(&cfg)),
        ("Q", qnu_sufficiency(&cfg)),
    ];
    let mut ok = cfg.radius == 0.99 && cfg.num_points == 512 && n == 30;
    let mut parts = Vec::new();
    for (name, r) in runs {
        let s = r.map_err(|e| e.to_string())?;
        ok &= s.passed(n);
        parts.push(format!(
            "{name} {}/{n} worst slack {:.3e}",
            s.tuples - s.failures,
            s.worst_slack
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn ac6() -> Outcome {
    let cfg = SuiteConfig::default();
    let s = negative_coefficient_necessity(&cfg).map_err(|e| e.to_string())?;
    Ok((
        s.tuples == 10 && s.failures == 0,
        format!(
            "{}/10 tuples drop below alpha, max (real-axis min - alpha) = {:.3e}",
            s.tuples - s.failures,
            s.worst_excess
        ),
    ))
}

fn ac7() -> Outcome {
    let worst = max_ode_residual(1e-12).map_err(|e| e.to_string())?;
    Ok((worst <= 1e-10, format!("max |L S - S| = {worst:.3e}")))
}

fn bsk(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(BSK).args(args).output().map_err(|e| e.to_string())
}

fn read_csv(path: &std::path::Path) -> Result<Vec<csv::StringRecord>, String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    r.records().collect::<Result<_, _>>().map_err(|e| e.to_string())
}

fn ac8() -> Outcome {
    let p = ClassParams::new(0.0, 0.0).map_err(|e| e.to_string())?;
    let b = critical_nu(Condition::Starlike, p, (0.6, 20.0), MARGIN_TOL, NU_TOL).map_err(|e| e.to_string())?;
    let diff = (b.nu - STARLIKE_CRITICAL_NU_ALPHA0).abs();

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("starlike.csv");
    let out = bsk(&["scan", "starlike", "--nu", "0.6,20,200", "-o", path.to_str().unwrap()])?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let holds: Vec<bool> = read_csv(&path)?.iter().map(|r| &r[8] == "true").collect();
    let flips = holds.windows(2).filter(|w| w[0] != w[1]).count();
    Ok((
        b.margin.abs() <= 1e-10 && diff <= 1e-8 && flips == 1,
        format!(
            "nu* = {:.16}, |margin| = {:.3e}, |nu* - fixture| = {diff:.3e}, scan flips = {flips}",
            b.nu,
            b.margin.abs()
        ),
    ))
}

/// `key = value` pairs printed by `bsk check`.
fn check_fields(stdout: &[u8]) -> HashMap<String, String> {
    String::from_utf8_lossy(stdout)
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn ac9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scans: [(&str, &[&str]); 3] = [
        (
            "t",
            &["t", "--nu", "-0.4,12,6", "--lambda", "0,0.9,4", "--alpha", "0,0.8,3"],
        ),
        (
            "stated",
            &[
                "t", "--form", "stated", "--nu", "0,8,4", "--lambda", "0.5", "--alpha", "0,0.5,3",
            ],
        ),
        ("l", &["l", "--nu", "1,25,5", "--lambda", "0.3", "--alpha", "0.1,0.6,3"]),
    ];
    let mut rows_checked = 0;
    let mut identical = true;
    let mut mismatches = Vec::new();
    for (name, args) in scans {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{name}-{run}.csv"));
            let mut full = vec!["scan"];
            full.extend_from_slice(args);
            full.extend(["-o", path.to_str().unwrap()]);
            let out = bsk(&full)?;
            if !out.status.success() {
                return Err(String::from_utf8_lossy(&out.stderr).into_owned());
            }
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        identical &= outputs[0] == outputs[1];
        for row in read_csv(&dir.path().join(format!("{name}-0.csv")))? {
            let out = bsk(&[
                "check", &row[0], "--form", &row[1], "--nu", &row[2], "--lambda", &row[3], "--alpha", &row[4],
            ])?;
            let f = check_fields(&out.stdout);
            let expect_code = if &row[8] == "true" { 0 } else { 1 };
            let same = out.status.code() == Some(expect_code)
                && [
                    "condition",
                    "form",
                    "nu",
                    "lambda",
                    "alpha",
                    "lhs",
                    "rhs",
                    "margin",
                    "holds",
                ]
                .iter()
                .enumerate()
                .all(|(i, k)| f.get(*k).map(String::as_str) == Some(&row[i]));
            if !same {
                mismatches.push(format!("{name} nu={} lambda={} alpha={}", &row[2], &row[3], &row[4]));
            }
            rows_checked += 1;
        }
    }
    Ok((
        identical && mismatches.is_empty(),
        format!(
            "reruns byte-identical = {identical}, {rows_checked} rows replayed through check, {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed-form specializations", ac1),
        ("moment identities", ac2),
        ("condition cross-check against high-precision oracle", ac3),
        ("stated vs proof form", ac4),
        ("sufficiency", ac5),
        ("necessity on negative coefficients", ac6),
        ("ODE residual", ac7),
        ("bisection", ac8),
        ("CLI determinism", ac9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        println!("[{}] AC{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
